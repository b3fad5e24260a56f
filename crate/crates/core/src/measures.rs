//! Concurrence and measurement-induced nonlocality (MIN).
//!
//! Every measure has a closed form for real X-states with `rho22 = rho33`
//! and an independent route that works on the full matrix: Wootters'
//! spectrum for concurrence and a search over measurement axes on qubit `a`
//! for the three MIN variants.
//!
//! MIN maximizes over the von Neumann measurements that leave the reduced
//! state of qubit `a` unchanged. When that reduced state is not maximally
//! mixed the only such measurement is along its Bloch vector, and the search
//! collapses to one evaluation. When it is maximally mixed every axis is
//! admissible and the sphere is searched.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::matcore::{c, kron, pauli, re, CMat};
use crate::spinmodel::DensityMatrix;

/// Tolerance on entries outside the X pattern and on imaginary coherences.
pub const X_FORM_TOL: f64 = 1e-10;
/// Closed-form MIN expressions require `|rho22 - rho33|` below this.
pub const MIDDLE_EQUAL_TOL: f64 = 1e-10;
/// Reduced Bloch vectors shorter than this count as maximally mixed.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// The six real entries of an X-state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XElements {
    pub r11: f64,
    pub r22: f64,
    pub r33: f64,
    pub r44: f64,
    pub r14: f64,
    pub r23: f64,
}

impl XElements {
    pub const TOL: f64 = 1e-12;

    pub fn new(r11: f64, r22: f64, r33: f64, r44: f64, r14: f64, r23: f64) -> Result<Self> {
        let x = XElements {
            r11,
            r22,
            r33,
            r44,
            r14,
            r23,
        };
        x.validate()?;
        Ok(x)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.diagonal();
        if d.iter()
            .chain([self.r14, self.r23].iter())
            .any(|v| !v.is_finite())
        {
            return Err(invalid("X-state entries must be finite"));
        }
        if d.iter().any(|&v| v < -Self::TOL) {
            return Err(invalid(format!("negative population in {d:?}")));
        }
        let tr: f64 = d.iter().sum();
        if (tr - 1.0).abs() > Self::TOL {
            return Err(invalid(format!("X-state trace {tr}")));
        }
        if self.r11 * self.r44 < self.r14 * self.r14 - Self::TOL
            || self.r22 * self.r33 < self.r23 * self.r23 - Self::TOL
        {
            return Err(invalid("X-state coherences violate positivity"));
        }
        Ok(())
    }

    pub fn diagonal(&self) -> [f64; 4] {
        [self.r11, self.r22, self.r33, self.r44]
    }

    pub fn to_mat(&self) -> CMat {
        let mut m = CMat::diag(&self.diagonal()).expect("4x4");
        m.set(0, 3, re(self.r14));
        m.set(3, 0, re(self.r14));
        m.set(1, 2, re(self.r23));
        m.set(2, 1, re(self.r23));
        m
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.to_mat())
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, o: &XElements) -> f64 {
        [
            self.r11 - o.r11,
            self.r22 - o.r22,
            self.r33 - o.r33,
            self.r44 - o.r44,
            self.r14 - o.r14,
            self.r23 - o.r23,
        ]
        .iter()
        .fold(0.0, |m, v| m.max(v.abs()))
    }

    fn require_equal_middle(&self, what: &str) -> Result<()> {
        if (self.r22 - self.r33).abs() > MIDDLE_EQUAL_TOL {
            return Err(Error::Domain(format!(
                "{what} closed form needs rho22 = rho33 (got {} vs {}); use min_oracle",
                self.r22, self.r33
            )));
        }
        Ok(())
    }
}

const X_PATTERN: [(usize, usize); 8] = [
    (0, 0),
    (1, 1),
    (2, 2),
    (3, 3),
    (0, 3),
    (3, 0),
    (1, 2),
    (2, 1),
];

/// Reads the X-state entries of `rho`.
///
/// Fails with [`Error::Shape`] if anything outside the X pattern exceeds
/// [`X_FORM_TOL`], and with [`Error::UnsupportedState`] for complex coherences.
pub fn extract_x(rho: &DensityMatrix) -> Result<XElements> {
    let m = rho.mat();
    for i in 0..4 {
        for j in 0..4 {
            if !X_PATTERN.contains(&(i, j)) && m.get(i, j).norm() > X_FORM_TOL {
                return Err(Error::Shape(format!(
                    "entry ({}, {}) = {}",
                    i + 1,
                    j + 1,
                    m.get(i, j)
                )));
            }
        }
    }
    for (i, j) in [(0, 3), (1, 2)] {
        if m.get(i, j).im.abs() > X_FORM_TOL {
            return Err(Error::UnsupportedState(format!(
                "complex coherence rho{}{} = {}",
                i + 1,
                j + 1,
                m.get(i, j)
            )));
        }
    }
    XElements::new(
        m.get(0, 0).re,
        m.get(1, 1).re,
        m.get(2, 2).re,
        m.get(3, 3).re,
        m.get(0, 3).re,
        m.get(1, 2).re,
    )
}

/// Largest magnitude found outside the X pattern.
pub fn off_x_magnitude(m: &CMat) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if !X_PATTERN.contains(&(i, j)) {
                worst = worst.max(m.get(i, j).norm());
            }
        }
    }
    worst
}

/// Wootters concurrence of an arbitrary two-qubit state.
///
/// The square roots of the eigenvalues of `rho rho~` are taken from the
/// Hermitian matrix `sqrt(rho) rho~ sqrt(rho)`, which has the same spectrum.
pub fn concurrence_general(rho: &DensityMatrix) -> Result<f64> {
    let yy = kron(&pauli::y(), &pauli::y())?;
    let flipped = yy.conjugate(&rho.mat().conj())?;
    let s = rho.mat().sqrt_psd()?;
    let r = s.matmul(&flipped)?.matmul(&s)?;
    // r is Hermitian up to rounding
    let r = r.add(&r.adjoint())?.scale_real(0.5);
    let eig = r.herm_eigen()?;
    let mut roots: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0).sqrt()).collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// `2 max{0, |rho14| - sqrt(rho22 rho33), |rho23| - sqrt(rho11 rho44)}`
pub fn concurrence_x(x: &XElements) -> f64 {
    let a = x.r14.abs() - (x.r22 * x.r33).max(0.0).sqrt();
    let b = x.r23.abs() - (x.r11 * x.r44).max(0.0).sqrt();
    2.0 * a.max(b).max(0.0)
}

/// Hilbert-Schmidt MIN, `2 (rho14^2 + rho23^2)`.
pub fn min_hs_x(x: &XElements) -> Result<f64> {
    x.require_equal_middle("HS-MIN")?;
    Ok(2.0 * (x.r14 * x.r14 + x.r23 * x.r23))
}

/// Trace MIN, `|rho14| + |rho23|`.
///
/// This is half the trace norm maximized by [`min_oracle`]; the halved
/// normalization keeps all three MINs in `[0, 0.5]`.
pub fn min_trace_x(x: &XElements) -> Result<f64> {
    x.require_equal_middle("trace-MIN")?;
    Ok(x.r14.abs() + x.r23.abs())
}

/// Fidelity MIN.
pub fn min_fid_x(x: &XElements) -> Result<f64> {
    x.require_equal_middle("fidelity-MIN")?;
    let coh = 2.0 * (x.r14 * x.r14 + x.r23 * x.r23);
    let pop: f64 = x.diagonal().iter().map(|v| v * v).sum();
    Ok(coh / (coh + pop))
}

/// `(tr rho sigma)^2 / (tr rho^2 tr sigma^2)`.
///
/// This is the overlap functional used throughout, not Uhlmann's fidelity.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    fidelity_mat(rho.mat(), sigma.mat())
}

fn fidelity_mat(a: &CMat, b: &CMat) -> f64 {
    let ab = a.mul_unchecked(b).trace().re;
    let aa = a.mul_unchecked(a).trace().re;
    let bb = b.mul_unchecked(b).trace().re;
    (ab * ab / (aa * bb)).clamp(0.0, 1.0)
}

/// Unit vector on qubit `a` in Bloch angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementAxis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementAxis {
    pub const Z: MeasurementAxis = MeasurementAxis {
        theta: 0.0,
        phi: 0.0,
    };

    /// Normalizes into `theta in [0, pi]`, `phi in [0, 2 pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(invalid("axis angles must be finite"));
        }
        let mut t = theta.rem_euclid(2.0 * PI);
        let mut p = phi;
        if t > PI {
            t = 2.0 * PI - t;
            p += PI;
        }
        Ok(MeasurementAxis {
            theta: t,
            phi: p.rem_euclid(2.0 * PI),
        })
    }

    pub fn from_vector(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(invalid("axis vector must be non-zero"));
        }
        Self::new((v[2] / n).clamp(-1.0, 1.0).acos(), v[1].atan2(v[0]))
    }

    pub fn vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// `(Pi+ ⊗ I, Pi- ⊗ I)` with `Pi± = (I ± n.sigma)/2`.
    pub fn projectors(&self) -> (CMat, CMat) {
        let [x, y, z] = self.vector();
        let ns = CMat::from_rows(2, &[re(z), c(x, -y), c(x, y), re(-z)]).expect("2x2");
        let id = pauli::id();
        let plus = id.add(&ns).expect("2x2").scale_real(0.5);
        let minus = id.sub(&ns).expect("2x2").scale_real(0.5);
        (
            kron(&plus, &id).expect("2x2"),
            kron(&minus, &id).expect("2x2"),
        )
    }
}

fn project(m: &CMat, ax: &MeasurementAxis) -> CMat {
    let (p, q) = ax.projectors();
    let a = p.mul_unchecked(m).mul_unchecked(&p);
    let b = q.mul_unchecked(m).mul_unchecked(&q);
    a.add(&b).expect("4x4")
}

/// Unread projective measurement of qubit `a` along `ax`.
pub fn local_projective(rho: &DensityMatrix, ax: &MeasurementAxis) -> Result<DensityMatrix> {
    DensityMatrix::new(project(rho.mat(), ax))
}

/// Bloch vector of the reduced state of qubit `a`.
pub fn reduced_bloch_a(rho: &DensityMatrix) -> [f64; 3] {
    let m = rho.mat();
    // rho_a[i][j] = sum_k rho[(i,k),(j,k)]
    let r00 = m.get(0, 0) + m.get(1, 1);
    let r11 = m.get(2, 2) + m.get(3, 3);
    let r01: Complex64 = m.get(0, 2) + m.get(1, 3);
    [2.0 * r01.re, -2.0 * r01.im, (r00 - r11).re]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MinKind {
    HilbertSchmidt,
    Trace,
    Fidelity,
}

impl MinKind {
    pub const ALL: [MinKind; 3] = [MinKind::HilbertSchmidt, MinKind::Trace, MinKind::Fidelity];
}

/// Which measurements compete in the maximization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisSet {
    /// Measurements that leave the reduced state of qubit `a` unchanged.
    LocalStatePreserving,
    /// Every axis on the sphere.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub axes: AxisSet,
    /// Coarse grid spacing in both angles.
    pub step: f64,
    /// Shift of the grid origin `(theta, phi)`.
    pub offset: (f64, f64),
    /// Refinement stops once the step falls below this.
    pub resolution: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            axes: AxisSet::LocalStatePreserving,
            step: PI / 180.0,
            offset: (0.0, 0.0),
            resolution: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub axis: MeasurementAxis,
    /// Number of objective evaluations.
    pub evaluations: usize,
}

/// Disturbance caused by measuring along `ax`, oriented so larger is more
/// nonlocal for every kind.
pub fn disturbance(rho: &DensityMatrix, kind: MinKind, ax: &MeasurementAxis) -> Result<f64> {
    let m = rho.mat();
    let post = project(m, ax);
    Ok(match kind {
        MinKind::HilbertSchmidt => {
            let d = m.sub(&post)?.hs_norm();
            d * d
        }
        MinKind::Trace => m.sub(&post)?.trace_norm()?,
        MinKind::Fidelity => 1.0 - fidelity_mat(m, &post),
    })
}

/// Brute-force MIN by direct maximization over measurement axes, with the
/// default configuration.
pub fn min_oracle(rho: &DensityMatrix, kind: MinKind) -> Result<f64> {
    Ok(min_oracle_with(rho, kind, &OracleConfig::default())?.value)
}

pub fn min_oracle_with(
    rho: &DensityMatrix,
    kind: MinKind,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    if !(cfg.step > 0.0 && cfg.resolution > 0.0) {
        return Err(invalid("oracle step and resolution must be positive"));
    }
    if cfg.axes == AxisSet::LocalStatePreserving {
        let r = reduced_bloch_a(rho);
        let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if len > DEGENERACY_TOL {
            let axis = MeasurementAxis::from_vector(r)?;
            let value = disturbance(rho, kind, &axis)?;
            return Ok(OracleResult {
                value,
                axis,
                evaluations: 1,
            });
        }
    }
    sphere_search(rho, kind, cfg)
}

fn sphere_search(rho: &DensityMatrix, kind: MinKind, cfg: &OracleConfig) -> Result<OracleResult> {
    let score = |theta: f64, phi: f64| -> Result<f64> {
        disturbance(rho, kind, &MeasurementAxis::new(theta, phi)?)
    };
    let n_theta = (PI / cfg.step).floor() as usize + 1;
    let n_phi = (2.0 * PI / cfg.step).round() as usize;
    let (t0, p0) = cfg.offset;
    let points: Vec<(f64, f64)> = (0..n_theta)
        .flat_map(|i| {
            let theta = (t0 + i as f64 * cfg.step).min(PI);
            (0..n_phi).map(move |j| (theta, p0 + j as f64 * cfg.step))
        })
        .collect();
    let scores: Vec<f64> = points
        .par_iter()
        .map(|&(t, p)| score(t, p))
        .collect::<Result<_>>()?;

    // sequential argmax keeps the starting point independent of scheduling
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for (i, &s) in scores.iter().enumerate() {
        if s > best {
            best = s;
            best_i = i;
        }
    }
    let (mut theta, mut phi) = points[best_i];
    let mut evaluations = scores.len();

    let mut step = cfg.step;
    while step >= cfg.resolution {
        let mut moved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let (t, p) = ((theta + dt).clamp(0.0, PI), phi + dp);
            let s = score(t, p)?;
            evaluations += 1;
            if s > best {
                best = s;
                theta = t;
                phi = p;
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    Ok(OracleResult {
        value: best,
        axis: MeasurementAxis::new(theta, phi)?,
        evaluations,
    })
}

/// Correlation measures of one evolved state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    /// Full Wootters concurrence (not halved).
    pub concurrence: f64,
    pub n2: f64,
    pub n1: f64,
    pub nf: f64,
    pub fidelity_to_initial: f64,
}

impl CorrelationReport {
    pub const RANGE_TOL: f64 = 1e-12;

    /// Closed-form measures of `evolved`, plus its overlap with `initial`.
    pub fn from_x(evolved: &XElements, initial: &XElements) -> Result<Self> {
        let rep = CorrelationReport {
            concurrence: concurrence_x(evolved),
            n2: min_hs_x(evolved)?,
            n1: min_trace_x(evolved)?,
            nf: min_fid_x(evolved)?,
            fidelity_to_initial: fidelity_mat(&initial.to_mat(), &evolved.to_mat()),
        };
        rep.validate()?;
        Ok(rep)
    }

    pub fn validate(&self) -> Result<()> {
        let t = Self::RANGE_TOL;
        for (name, v) in [("N2", self.n2), ("N1", self.n1), ("NF", self.nf)] {
            if !(-t..=0.5 + t).contains(&v) {
                return Err(Error::Consistency(format!("{name} = {v} outside [0, 0.5]")));
            }
        }
        if !(-t..=1.0 + t).contains(&self.concurrence) {
            return Err(Error::Consistency(format!(
                "concurrence {}",
                self.concurrence
            )));
        }
        Ok(())
    }

    /// Concurrence with the factor two dropped, for side-by-side plots with the MINs.
    pub fn concurrence_half(&self) -> f64 {
        0.5 * self.concurrence
    }
}
