//! The two-spin Heisenberg XYZ model in a uniform field and its thermal state.
//!
//! Energies are in units of `k_B T`, so the thermal state is `e^{-H} / Z`.
//! It is an X-state whose six entries have closed forms; those are returned
//! unnormalized in [`ThermalElements`] and checked against the eigensolver
//! route in [`thermal_state_numeric`].

use crate::error::{invalid, Error, Result};
use crate::matcore::{kron, pauli, re, CMat, HERMITIAN_TOL, PSD_TOL};

/// Below this, `sinh(eta)/eta` is evaluated from its series.
pub const ETA_SERIES_THRESHOLD: f64 = 1e-8;
/// Largest exponent the closed-form Boltzmann weights accept.
pub const MAX_EXPONENT: f64 = 700.0;

/// Couplings and field of the XYZ Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// XY coupling.
    pub j: f64,
    /// XY anisotropy `(Jx - Jy)/(Jx + Jy)`.
    pub gamma: f64,
    pub jz: f64,
    /// Field strength along z.
    pub b: f64,
}

impl ModelParams {
    pub fn new(j: f64, gamma: f64, jz: f64, b: f64) -> Result<Self> {
        let p = ModelParams { j, gamma, jz, b };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("J", self.j),
            ("gamma", self.gamma),
            ("Jz", self.jz),
            ("B", self.b),
        ] {
            if !v.is_finite() {
                return Err(invalid(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }

    /// `eta = sqrt(B^2 + (gamma J)^2)`
    pub fn eta(&self) -> f64 {
        self.b.hypot(self.gamma * self.j)
    }
}

/// Unnormalized Boltzmann weights of the thermal X-state plus the partition
/// function.
///
/// ```text
///          | mu_-  0    0    kappa |
/// rho = 1/Z|  0    nu   eps   0    |
///          |  0    eps  nu    0    |
///          | kappa 0    0    mu_+  |
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalElements {
    pub mu_plus: f64,
    pub mu_minus: f64,
    pub kappa: f64,
    pub nu: f64,
    pub epsilon: f64,
    pub z_part: f64,
    pub eta: f64,
}

impl ThermalElements {
    /// Normalized diagonal `(rho11, rho22, rho33, rho44)`.
    pub fn diagonal(&self) -> [f64; 4] {
        let z = self.z_part;
        [
            self.mu_minus / z,
            self.nu / z,
            self.nu / z,
            self.mu_plus / z,
        ]
    }

    /// Normalized coherences `(rho14, rho23)`.
    pub fn coherences(&self) -> (f64, f64) {
        (self.kappa / self.z_part, self.epsilon / self.z_part)
    }
}

/// A two-qubit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
}

impl DensityMatrix {
    pub const HERMITIAN_TOL: f64 = 1e-12;
    pub const TRACE_TOL: f64 = 1e-12;

    pub fn new(mat: CMat) -> Result<Self> {
        if mat.dim() != 4 {
            return Err(invalid("density matrix must be 4x4"));
        }
        let defect = mat.hermitian_defect();
        if defect > Self::HERMITIAN_TOL {
            return Err(Error::Consistency(format!(
                "density matrix not Hermitian (defect {defect:e})"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > Self::TRACE_TOL || tr.im.abs() > Self::TRACE_TOL {
            return Err(Error::Consistency(format!("density matrix trace {tr}")));
        }
        let lo = mat.herm_eigen()?.values[0];
        if lo < -PSD_TOL {
            return Err(Error::Consistency(format!(
                "density matrix has eigenvalue {lo:e}"
            )));
        }
        Ok(DensityMatrix { mat })
    }

    /// Diagonal state with the given populations; they must sum to one.
    pub fn diagonal(p: [f64; 4]) -> Result<Self> {
        Self::new(CMat::diag(&p)?)
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            mat: CMat::identity(4).expect("4x4").scale_real(0.25),
        }
    }

    /// `|Phi+><Phi+|` with `|Phi+> = (|00> + |11>)/sqrt 2`.
    pub fn bell_phi_plus() -> Self {
        let mut m = CMat::zeros(4).expect("4x4");
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            m.set(i, j, re(0.5));
        }
        DensityMatrix { mat: m }
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }

    /// `tr(rho^2)`
    pub fn purity(&self) -> f64 {
        self.mat.mul_unchecked(&self.mat).trace().re
    }
}

/// `H = J/2 [(1+g) XX + (1-g) YY] + 1/2 [Jz ZZ + B (ZI + IZ)]`
pub fn hamiltonian(p: &ModelParams) -> Result<CMat> {
    p.validate()?;
    let (x, y, z, id) = (pauli::x(), pauli::y(), pauli::z(), pauli::id());
    let xx = kron(&x, &x)?;
    let yy = kron(&y, &y)?;
    let zz = kron(&z, &z)?;
    let field = kron(&z, &id)?.add(&kron(&id, &z)?)?;
    let xy = xx
        .scale_real(1.0 + p.gamma)
        .add(&yy.scale_real(1.0 - p.gamma))?
        .scale_real(p.j / 2.0);
    let zpart = zz
        .scale_real(p.jz)
        .add(&field.scale_real(p.b))?
        .scale_real(0.5);
    xy.add(&zpart)
}

/// `sinh(eta)/eta`, continuous through `eta = 0`.
fn sinhc(eta: f64) -> f64 {
    if eta < ETA_SERIES_THRESHOLD {
        1.0 + eta * eta / 6.0
    } else {
        eta.sinh() / eta
    }
}

/// Closed-form thermal weights.
///
/// Fails with [`Error::Range`] once any exponent magnitude passes
/// [`MAX_EXPONENT`].
pub fn thermal_elements(p: &ModelParams) -> Result<ThermalElements> {
    p.validate()?;
    let eta = p.eta();
    let half = p.jz / 2.0;
    let worst = (half.abs() + eta).max(half.abs() + p.j.abs());
    if worst > MAX_EXPONENT {
        return Err(Error::Range(format!(
            "Boltzmann exponent {worst} exceeds {MAX_EXPONENT}"
        )));
    }
    let lo = (-half).exp();
    let hi = half.exp();
    let sc = sinhc(eta);
    let ch = eta.cosh();
    let mu_plus = lo * (ch + p.b * sc);
    let mu_minus = lo * (ch - p.b * sc);
    let kappa = -p.gamma * p.j * lo * sc;
    let nu = hi * p.j.cosh();
    let epsilon = -hi * p.j.sinh();
    let z_part = 2.0 * (lo * ch + hi * p.j.cosh());
    Ok(ThermalElements {
        mu_plus,
        mu_minus,
        kappa,
        nu,
        epsilon,
        z_part,
        eta,
    })
}

/// The normalized thermal X-state built from its closed-form elements.
pub fn assemble_x(t: &ThermalElements) -> Result<DensityMatrix> {
    let [r11, r22, r33, r44] = t.diagonal();
    let (r14, r23) = t.coherences();
    let mut m = CMat::diag(&[r11, r22, r33, r44])?;
    m.set(0, 3, re(r14));
    m.set(3, 0, re(r14));
    m.set(1, 2, re(r23));
    m.set(2, 1, re(r23));
    DensityMatrix::new(m)
}

/// `e^{-H} / tr e^{-H}` through the eigendecomposition of `H`.
///
/// The spectrum is shifted by its minimum before exponentiating, which
/// cancels in the normalization and keeps every weight at most one.
pub fn thermal_state_numeric(p: &ModelParams) -> Result<DensityMatrix> {
    let h = hamiltonian(p)?;
    debug_assert!(h.is_hermitian(HERMITIAN_TOL));
    let eig = h.herm_eigen()?;
    let e0 = eig.values[0];
    let w: Vec<f64> = eig.values.iter().map(|&e| (-(e - e0)).exp()).collect();
    let z: f64 = w.iter().sum();
    let w: Vec<f64> = w.iter().map(|x| x / z).collect();
    let mut m = eig.compose(&w);
    // force exact Hermiticity, the composition leaves ~1e-17 residue
    for i in 0..4 {
        m.set(i, i, re(m.get(i, i).re));
        for j in (i + 1)..4 {
            let v = 0.5 * (m.get(i, j) + m.get(j, i).conj());
            m.set(i, j, v);
            m.set(j, i, v.conj());
        }
    }
    DensityMatrix::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> ModelParams {
        ModelParams::new(2.0, 0.1, 2.0, 0.0).unwrap()
    }

    #[test]
    fn hamiltonian_limits() {
        let h = hamiltonian(&ModelParams::new(0.0, 0.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!(h, CMat::zeros(4).unwrap());
        let h = hamiltonian(&ModelParams::new(0.0, 0.0, 0.0, 1.0).unwrap()).unwrap();
        assert_eq!(h, CMat::diag(&[1.0, 0.0, 0.0, -1.0]).unwrap());
    }

    #[test]
    fn hamiltonian_full_anisotropy() {
        // gamma = 1 switches the YY term off; XX alone fills both anti-diagonal
        // blocks with J(1+gamma)/2 = 1.
        let h = hamiltonian(&ModelParams::new(1.0, 1.0, 0.0, 0.0).unwrap()).unwrap();
        let mut want = CMat::zeros(4).unwrap();
        for (i, j) in [(0, 3), (3, 0), (1, 2), (2, 1)] {
            want.set(i, j, re(1.0));
        }
        assert_eq!(h, want);
    }

    #[test]
    fn hamiltonian_trace_matches_spectrum() {
        let h = hamiltonian(&fig1()).unwrap();
        let e = h.herm_eigen().unwrap();
        let s: f64 = e.values.iter().sum();
        assert!((s - h.trace().re).abs() < 1e-12);
        assert!(h.trace().re.abs() < 1e-15);
    }

    #[test]
    fn fig1_elements() {
        let t = thermal_elements(&fig1()).unwrap();
        let em1 = (-1.0f64).exp();
        assert!((t.kappa - (-em1 * 0.2f64.sinh())).abs() < 1e-15);
        assert!((t.epsilon - (-(1.0f64.exp()) * 2.0f64.sinh())).abs() < 1e-13);
        assert!((t.mu_plus - em1 * 0.2f64.cosh()).abs() < 1e-15);
        assert_eq!(t.mu_plus, t.mu_minus);
    }

    #[test]
    fn zero_hamiltonian_gives_maximally_mixed() {
        let p = ModelParams::new(0.0, 0.0, 0.0, 0.0).unwrap();
        let t = thermal_elements(&p).unwrap();
        assert_eq!(
            (t.mu_plus, t.mu_minus, t.kappa, t.nu, t.epsilon, t.z_part),
            (1.0, 1.0, 0.0, 1.0, 0.0, 4.0)
        );
        assert_eq!(assemble_x(&t).unwrap(), DensityMatrix::maximally_mixed());
        let n = thermal_state_numeric(&p).unwrap();
        assert!(
            n.mat()
                .max_abs_diff(DensityMatrix::maximally_mixed().mat())
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn isotropic_xy_has_no_corner_coherence() {
        let t = thermal_elements(&ModelParams::new(2.0, 0.0, 2.0, 0.0).unwrap()).unwrap();
        assert_eq!(t.kappa, 0.0);
    }

    #[test]
    fn fig1_assembled_signs() {
        let t = thermal_elements(&fig1()).unwrap();
        let rho = assemble_x(&t).unwrap();
        let m = rho.mat();
        assert!(m.get(0, 3).re < 0.0 && m.get(1, 2).re < 0.0);
        assert_eq!(m.get(1, 1), m.get(2, 2));
        assert!((m.trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_eigensolver_at_fig1() {
        let closed = assemble_x(&thermal_elements(&fig1()).unwrap()).unwrap();
        let numeric = thermal_state_numeric(&fig1()).unwrap();
        assert!(closed.mat().max_abs_diff(numeric.mat()).unwrap() < 1e-10);
    }

    #[test]
    fn strong_field_favours_the_down_down_state() {
        let p = ModelParams::new(2.0, 0.1, 2.0, 8.0).unwrap();
        let n = thermal_state_numeric(&p).unwrap();
        let d: Vec<f64> = (0..4).map(|i| n.mat().get(i, i).re).collect();
        // H has +B on |00> and -B on |11>, so |11> (rho44, weight mu_+) dominates
        assert!(d[3] > 0.95, "{d:?}");
        assert!(d[3] > d[0] && d[3] > d[1]);
        let t = thermal_elements(&p).unwrap();
        assert!(t.mu_plus > t.mu_minus && t.mu_plus > t.nu);
    }

    #[test]
    fn series_branch_is_continuous() {
        // eta = |B| here; straddle the threshold from both sides
        let at = |b: f64| thermal_elements(&ModelParams::new(0.7, 0.0, 0.3, b).unwrap()).unwrap();
        let zero = at(0.0);
        for b in [1e-9, 1e-7] {
            let t = at(b);
            assert!((t.mu_plus - zero.mu_plus).abs() < 2.0 * b);
            let exact = (-0.15f64).exp() * (b.cosh() + b.sinh());
            assert!((t.mu_plus - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn overflow_is_a_range_error() {
        let p = ModelParams::new(1.0, 0.0, 1500.0, 0.0).unwrap();
        assert!(matches!(thermal_elements(&p), Err(Error::Range(_))));
        // the shifted eigensolver route still works
        assert!(thermal_state_numeric(&p).is_ok());
    }

    #[test]
    fn non_finite_params_rejected() {
        assert!(ModelParams::new(f64::NAN, 0.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new(0.0, 0.0, f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::diagonal([0.5, 0.5, 0.0, 0.0]).is_ok());
        assert!(DensityMatrix::diagonal([0.5, 0.6, 0.0, 0.0]).is_err());
        assert!(DensityMatrix::diagonal([1.5, -0.5, 0.0, 0.0]).is_err());
        let mut m = CMat::diag(&[0.5, 0.5, 0.0, 0.0]).unwrap();
        m.set(0, 1, re(0.1));
        assert!(DensityMatrix::new(m).is_err());
    }
}
