//! Closed-form channel evolution of the thermal state, sudden-death search
//! and the parameter sweep engine.

pub mod presets;

use rayon::prelude::*;

use crate::channels::{GadParams, HybridParams};
use crate::error::{invalid, Error, Result};
use crate::measures::{concurrence_x, fidelity, CorrelationReport, XElements};
use crate::spinmodel::{assemble_x, thermal_elements, ModelParams, ThermalElements};

/// GAD acts on populations of one qubit through the column-stochastic map
/// `[[a, b], [c, d]]` and shrinks its coherence by `sqrt(1 - lambda)`;
/// `s = 1 - lambda` is the resulting two-qubit coherence factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GadClosedForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub s: f64,
}

impl GadClosedForm {
    pub fn new(g: GadParams) -> Result<Self> {
        g.validate()?;
        let GadParams { p, lambda } = g;
        let c = (1.0 - p) * lambda;
        let b = p * lambda;
        Ok(GadClosedForm {
            a: 1.0 - c,
            b,
            c,
            d: 1.0 - b,
            s: 1.0 - lambda,
        })
    }

    /// Two-qubit populations: the Kronecker square of the single-qubit map
    /// applied to `(rho11, rho22, rho33, rho44)`.
    pub fn populations(&self, v: [f64; 4]) -> [f64; 4] {
        let m = [[self.a, self.b], [self.c, self.d]];
        let mut out = [0.0; 4];
        for (row, o) in out.iter_mut().enumerate() {
            let (i1, i2) = (row >> 1, row & 1);
            *o = (0..4)
                .map(|col| m[i1][col >> 1] * m[i2][col & 1] * v[col])
                .sum();
        }
        out
    }
}

/// The thermal state after two-qubit GAD, in closed form.
pub fn gad_evolve_closed(t: &ThermalElements, g: GadParams) -> Result<XElements> {
    let f = GadClosedForm::new(g)?;
    let [r11, r22, r33, r44] = f.populations(t.diagonal());
    let (r14, r23) = t.coherences();
    XElements::new(r11, r22, r33, r44, r14 * f.s, r23 * f.s)
}

/// Helper coefficients of the hybrid closed form.
///
/// `p` is the flip-probability argument of the coefficients and `alpha`,
/// `beta`, `delta` the weights they are built with. In this parameterization
/// each flip acts on a qubit with probability `p/2`, `alpha` weights the bit
/// flip, `beta` the bit-phase flip and `delta` the phase flip.
/// [`hybrid_evolve_closed`] does the translation from [`HybridParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridClosedForm {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub m: f64,
    pub n: f64,
    pub l: f64,
    pub chi: f64,
    pub psi: f64,
}

impl HybridClosedForm {
    pub fn new(p: f64, alpha: f64, beta: f64, delta: f64) -> Self {
        let m = p - 2.0;
        let n = p - 1.0;
        let l = 2.0 - 2.0 * p + p * p;
        HybridClosedForm {
            p,
            alpha,
            beta,
            delta,
            m,
            n,
            l,
            chi: (alpha + beta) * m * m + 4.0 * delta,
            psi: (alpha + beta) * l + 2.0 * n * n * delta,
        }
    }

    /// Evolved (unnormalized) entries `(rho11, rho22, rho44, rho14, rho23)`
    /// of the thermal X-state; `rho33 = rho22`.
    pub fn elements(&self, t: &ThermalElements) -> [f64; 5] {
        let HybridClosedForm { p, m, chi, psi, .. } = *self;
        let sum = self.alpha + self.beta;
        let diff = self.alpha - self.beta;
        let (mu_p, mu_m, nu, kappa, eps) = (t.mu_plus, t.mu_minus, t.nu, t.kappa, t.epsilon);
        let r14 = 0.5 * (-eps * m * p * diff + kappa * psi);
        let r23 = 0.5 * (-kappa * m * p * diff + eps * psi);
        let r11 = 0.25 * (p * sum * (mu_p * p - 2.0 * nu * m) + mu_m * chi);
        let r22 = 0.25 * (p * sum * (nu * p - (mu_p + mu_m) * m) + nu * chi);
        let r44 = 0.25 * (p * sum * (mu_m * p - 2.0 * nu * m) + mu_p * chi);
        [r11, r22, r44, r14, r23]
    }
}

/// The thermal state after the hybrid flip channel, in closed form.
///
/// Flips with probability `p` per qubit correspond to the helper argument
/// `2p`, and the phase and bit-phase weights trade places.
pub fn hybrid_evolve_closed(t: &ThermalElements, h: &HybridParams) -> Result<XElements> {
    h.validate()?;
    let f = HybridClosedForm::new(2.0 * h.p, h.alpha, h.delta, h.beta);
    let [r11, r22, r44, r14, r23] = f.elements(t);
    let z = t.z_part;
    XElements::new(r11 / z, r22 / z, r22 / z, r44 / z, r14 / z, r23 / z)
}

/// Channel applied to the thermal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSpec {
    Gad(GadParams),
    Hybrid(HybridParams),
}

impl ChannelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ChannelSpec::Gad(g) => g.validate(),
            ChannelSpec::Hybrid(h) => h.validate(),
        }
    }

    pub fn p(&self) -> f64 {
        match self {
            ChannelSpec::Gad(g) => g.p,
            ChannelSpec::Hybrid(h) => h.p,
        }
    }

    pub fn evolve(&self, t: &ThermalElements) -> Result<XElements> {
        match self {
            ChannelSpec::Gad(g) => gad_evolve_closed(t, *g),
            ChannelSpec::Hybrid(h) => hybrid_evolve_closed(t, h),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    Lambda,
    P,
    B,
    Jz,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Lambda => "lambda",
            SweepAxis::P => "p",
            SweepAxis::B => "B",
            SweepAxis::Jz => "Jz",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "lambda" => Some(SweepAxis::Lambda),
            "p" => Some(SweepAxis::P),
            "B" | "b" => Some(SweepAxis::B),
            "Jz" | "jz" => Some(SweepAxis::Jz),
            _ => None,
        }
    }

    /// Interval swept when no explicit grid is given.
    pub fn default_range(self) -> (f64, f64) {
        match self {
            SweepAxis::Lambda | SweepAxis::P => (0.0, 1.0),
            SweepAxis::B => (0.0, 6.0),
            SweepAxis::Jz => (-6.0, 6.0),
        }
    }

    /// Copies of `model` and `channel` with this axis set to `v`.
    pub fn apply(
        self,
        model: &ModelParams,
        channel: &ChannelSpec,
        v: f64,
    ) -> Result<(ModelParams, ChannelSpec)> {
        let mut m = *model;
        let mut ch = *channel;
        match (self, &mut ch) {
            (SweepAxis::B, _) => m.b = v,
            (SweepAxis::Jz, _) => m.jz = v,
            (SweepAxis::P, ChannelSpec::Gad(g)) => g.p = v,
            (SweepAxis::P, ChannelSpec::Hybrid(h)) => h.p = v,
            (SweepAxis::Lambda, ChannelSpec::Gad(g)) => g.lambda = v,
            (SweepAxis::Lambda, ChannelSpec::Hybrid(_)) => {
                return Err(invalid("the hybrid channel has no lambda to sweep"))
            }
        }
        m.validate()?;
        ch.validate()?;
        Ok((m, ch))
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || !(lo.is_finite() && hi.is_finite()) {
        return Err(invalid("grid needs at least one point and finite bounds"));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    if hi <= lo {
        return Err(invalid(format!(
            "grid bounds must increase, got [{lo}, {hi}]"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i + 1 == n { hi } else { lo + i as f64 * step })
        .collect())
}

pub const DEFAULT_POINTS: usize = 201;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub model: ModelParams,
    pub channel: ChannelSpec,
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(invalid("sweep grid is empty"));
        }
        if self
            .grid
            .windows(2)
            .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(invalid("sweep grid must be strictly increasing"));
        }
        self.model.validate()?;
        self.channel.validate()
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub model: ModelParams,
    pub channel: ChannelSpec,
    pub report: CorrelationReport,
}

/// Measures at one parameter point, from the closed-form evolution.
pub fn evaluate_point(model: &ModelParams, channel: &ChannelSpec) -> Result<CorrelationReport> {
    let t = thermal_elements(model)?;
    let initial = XElements::new(
        t.mu_minus / t.z_part,
        t.nu / t.z_part,
        t.nu / t.z_part,
        t.mu_plus / t.z_part,
        t.kappa / t.z_part,
        t.epsilon / t.z_part,
    )?;
    let evolved = channel.evolve(&t)?;
    CorrelationReport::from_x(&evolved, &initial)
}

/// Evaluates every grid point. Points run in parallel on the current rayon
/// pool; rows come back in grid order.
pub fn sweep(s: &SweepSpec) -> Result<Vec<SweepRow>> {
    s.validate()?;
    s.grid
        .par_iter()
        .map(|&v| {
            let at = |e: Error| Error::AtGridPoint {
                axis: s.axis.name(),
                value: v,
                source: Box::new(e),
            };
            let (model, channel) = s.axis.apply(&s.model, &s.channel, v).map_err(at)?;
            let report = evaluate_point(&model, &channel).map_err(at)?;
            Ok(SweepRow {
                axis: s.axis,
                value: v,
                model,
                channel,
                report,
            })
        })
        .collect()
}

/// Overlap between the thermal state and its GAD image along `grid`.
pub fn channel_fidelity_curve(mp: &ModelParams, p: f64, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let t = thermal_elements(mp)?;
    let initial = assemble_x(&t)?;
    grid.iter()
        .map(|&lambda| {
            let x = gad_evolve_closed(&t, GadParams::new(p, lambda)?)?;
            Ok((lambda, fidelity(&initial, &x.to_density()?)))
        })
        .collect()
}

pub const SUDDEN_DEATH_SCAN: usize = 512;
pub const SUDDEN_DEATH_TOL: f64 = 1e-8;

/// Critical decoherence `lambda_c` past which GAD leaves the thermal state
/// unentangled.
///
/// `None` if the state starts separable or stays entangled up to
/// `lambda = 1 - 1e-8`.
pub fn sudden_death_lambda(mp: &ModelParams, p: f64) -> Result<Option<f64>> {
    let t = thermal_elements(mp)?;
    let conc = |lambda: f64| -> Result<f64> {
        Ok(concurrence_x(&gad_evolve_closed(
            &t,
            GadParams::new(p, lambda)?,
        )?))
    };
    if conc(0.0)? == 0.0 || conc(1.0 - SUDDEN_DEATH_TOL)? > 0.0 {
        return Ok(None);
    }
    let grid = uniform_grid(0.0, 1.0, SUDDEN_DEATH_SCAN)?;
    let values = grid.iter().map(|&l| conc(l)).collect::<Result<Vec<_>>>()?;
    let last = match values.iter().rposition(|&c| c > 0.0) {
        Some(i) => i,
        None => return Ok(None),
    };
    let (mut lo, mut hi) = (grid[last], grid[(last + 1).min(grid.len() - 1)]);
    while hi - lo >= SUDDEN_DEATH_TOL {
        let mid = 0.5 * (lo + hi);
        if conc(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{apply, gad_kraus, hybrid_apply, lift};
    use crate::measures::extract_x;

    fn caption(b: f64) -> ModelParams {
        ModelParams::new(2.0, 0.1, 2.0, b).unwrap()
    }

    fn thermal_x(t: &ThermalElements) -> XElements {
        extract_x(&assemble_x(t).unwrap()).unwrap()
    }

    #[test]
    fn gad_map_invariants() {
        for (p, l) in [(0.0, 0.0), (0.3, 0.7), (1.0, 1.0), (0.5, 0.25)] {
            let f = GadClosedForm::new(GadParams::new(p, l).unwrap()).unwrap();
            assert_eq!(f.a + f.c, 1.0);
            assert_eq!(f.b + f.d, 1.0);
            for v in [f.a, f.b, f.c, f.d, f.s] {
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn gad_closed_identity_and_asymptote() {
        let t = thermal_elements(&caption(0.0)).unwrap();
        let x = gad_evolve_closed(&t, GadParams::new(0.4, 0.0).unwrap()).unwrap();
        assert!(x.max_abs_diff(&thermal_x(&t)) < 1e-16);
        for p in [0.0, 0.2, 0.5, 1.0] {
            let x = gad_evolve_closed(&t, GadParams::new(p, 1.0).unwrap()).unwrap();
            let q = 1.0 - p;
            let want = XElements::new(p * p, p * q, p * q, q * q, 0.0, 0.0).unwrap();
            assert!(x.max_abs_diff(&want) < 1e-15);
        }
    }

    #[test]
    fn gad_closed_matches_operator_sum_at_fig1() {
        let t = thermal_elements(&caption(0.0)).unwrap();
        let g = GadParams::new(0.5, 0.5).unwrap();
        let closed = gad_evolve_closed(&t, g).unwrap();
        let rho = apply(
            &lift(&gad_kraus(g).unwrap()).unwrap(),
            &assemble_x(&t).unwrap(),
        )
        .unwrap();
        assert!(closed.max_abs_diff(&extract_x(&rho).unwrap()) < 1e-12);
    }

    /// Element formulas of the GAD-evolved thermal state as commonly quoted,
    /// with `q = p - 1` and `r` the coherence factor.
    fn quoted_gad(t: &ThermalElements, p: f64, l: f64, r: f64) -> [f64; 3] {
        let q = p - 1.0;
        let (mm, mp, nu) = (t.mu_minus, t.mu_plus, t.nu);
        let r11 = mm * (1.0 + q * l).powi(2) + p * l * (2.0 * nu * r + (2.0 * nu + mp) * p * l);
        let r22 = nu * (r - p * q * l)
            - l * (mm * q * (1.0 + q * l) + p * (nu * q * l + mp * (p * l - 1.0)));
        let r44 = mp * (p * l - 1.0).powi(2) + q * l * (mm * q * l + 2.0 * nu * (p * l - 1.0));
        [r11 / t.z_part, r22 / t.z_part, r44 / t.z_part]
    }

    #[test]
    fn quoted_gad_populations_need_r_equal_one_minus_lambda() {
        let t = thermal_elements(&caption(1.3)).unwrap();
        let (p, l) = (0.3, 0.6);
        let x = gad_evolve_closed(&t, GadParams::new(p, l).unwrap()).unwrap();
        let [r11, r22, r44] = quoted_gad(&t, p, l, 1.0 - l);
        assert!((r11 - x.r11).abs() < 1e-14);
        assert!((r44 - x.r44).abs() < 1e-14);
        // the quoted middle population does not conserve trace
        assert!((r22 - x.r22).abs() > 1e-3, "{r22} vs {}", x.r22);
    }

    #[test]
    fn gad_coherences_independent_of_p() {
        let t = thermal_elements(&caption(0.7)).unwrap();
        let base = gad_evolve_closed(&t, GadParams::new(0.0, 0.4).unwrap()).unwrap();
        for p in [0.1, 0.5, 0.9, 1.0] {
            let x = gad_evolve_closed(&t, GadParams::new(p, 0.4).unwrap()).unwrap();
            assert!((x.r14 - base.r14).abs() < 1e-14 && (x.r23 - base.r23).abs() < 1e-14);
        }
    }

    #[test]
    fn hybrid_helper_identity_consistency() {
        let h = HybridClosedForm::new(0.0, 0.3, 0.2, 0.5);
        assert_eq!((h.m, h.n, h.l), (-2.0, -1.0, 2.0));
        assert!((h.chi - 4.0).abs() < 1e-15 && (h.psi - 2.0).abs() < 1e-15);
    }

    #[test]
    fn hybrid_closed_trivial_cases() {
        let t = thermal_elements(&caption(4.0)).unwrap();
        let h = HybridParams::new(0.3, 0.2, 0.5, 0.0).unwrap();
        assert!(
            hybrid_evolve_closed(&t, &h)
                .unwrap()
                .max_abs_diff(&thermal_x(&t))
                < 1e-15
        );
    }

    #[test]
    fn hybrid_closed_matches_operator_sum_at_fig6() {
        let t = thermal_elements(&caption(0.0)).unwrap();
        let rho = assemble_x(&t).unwrap();
        for p in [0.4, 0.5] {
            let h = HybridParams::new(0.3, 0.2, 0.5, p).unwrap();
            let closed = hybrid_evolve_closed(&t, &h).unwrap();
            let oracle = extract_x(&hybrid_apply(&h, &rho).unwrap()).unwrap();
            assert!(closed.max_abs_diff(&oracle) < 1e-12);
        }
    }

    #[test]
    fn helper_algebra_taken_literally_is_a_different_channel() {
        // Same weights and p fed straight into the helper coefficients: this is
        // not the Table-style flip channel at probability p.
        let t = thermal_elements(&caption(4.0)).unwrap();
        let h = HybridParams::new(0.3, 0.2, 0.5, 0.4).unwrap();
        let lit = HybridClosedForm::new(h.p, h.alpha, h.beta, h.delta).elements(&t);
        let oracle = extract_x(&hybrid_apply(&h, &assemble_x(&t).unwrap()).unwrap()).unwrap();
        assert!((lit[3] / t.z_part - oracle.r14).abs() > 1e-4);
        // ...but it is exactly the channel at p/2 with the phase and
        // bit-phase weights exchanged
        let swapped = HybridParams::new(0.3, 0.5, 0.2, 0.2).unwrap();
        let oracle = extract_x(&hybrid_apply(&swapped, &assemble_x(&t).unwrap()).unwrap()).unwrap();
        let z = t.z_part;
        let lit = XElements::new(
            lit[0] / z,
            lit[1] / z,
            lit[1] / z,
            lit[2] / z,
            lit[3] / z,
            lit[4] / z,
        )
        .unwrap();
        assert!(lit.max_abs_diff(&oracle) < 1e-12);
    }

    #[test]
    fn equal_bf_and_bpf_weights_remove_cross_terms() {
        let t = thermal_elements(&caption(1.0)).unwrap();
        let h = HybridParams::new(0.25, 0.5, 0.25, 0.3).unwrap();
        let x = hybrid_evolve_closed(&t, &h).unwrap();
        // alpha = delta: coherences only rescale
        let s = x.r14 / (t.kappa / t.z_part);
        assert!((x.r23 / (t.epsilon / t.z_part) - s).abs() < 1e-13);
    }

    #[test]
    fn grid_construction() {
        let g = uniform_grid(0.0, 1.0, 5).unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(uniform_grid(2.0, 2.0, 1).unwrap(), vec![2.0]);
        assert!(uniform_grid(0.0, 1.0, 0).is_err());
        assert!(uniform_grid(1.0, 0.0, 3).is_err());
    }

    #[test]
    fn sweep_validation_and_error_context() {
        let model = caption(0.0);
        let ch = ChannelSpec::Gad(GadParams::new(0.5, 0.0).unwrap());
        let bad = SweepSpec {
            model,
            channel: ch,
            axis: SweepAxis::Lambda,
            grid: vec![0.5, 0.2],
        };
        assert!(bad.validate().is_err());
        let out = SweepSpec {
            model,
            channel: ch,
            axis: SweepAxis::Lambda,
            grid: vec![0.5, 1.5],
        };
        match sweep(&out).unwrap_err() {
            Error::AtGridPoint { axis, value, .. } => {
                assert_eq!(axis, "lambda");
                assert_eq!(value, 1.5);
            }
            e => panic!("unexpected {e:?}"),
        }
        let h = ChannelSpec::Hybrid(HybridParams::new(1.0, 0.0, 0.0, 0.1).unwrap());
        let s = SweepSpec {
            model,
            channel: h,
            axis: SweepAxis::Lambda,
            grid: vec![0.1],
        };
        assert!(sweep(&s).unwrap_err().is_argument_error());
    }

    #[test]
    fn sudden_death_absent_without_coherence() {
        let mp = ModelParams::new(0.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(sudden_death_lambda(&mp, 0.5).unwrap(), None);
    }

    #[test]
    fn sudden_death_at_fig1() {
        let lc = sudden_death_lambda(&caption(0.0), 0.5)
            .unwrap()
            .expect("finite lambda_c");
        assert!(lc > 0.0 && lc < 1.0);
        let t = thermal_elements(&caption(0.0)).unwrap();
        let at = |l: f64| {
            concurrence_x(&gad_evolve_closed(&t, GadParams::new(0.5, l).unwrap()).unwrap())
        };
        assert!(at(lc - 2e-8) > 0.0);
        assert_eq!(at(lc), 0.0);
        assert_eq!(at((lc + 1.0) / 2.0), 0.0);
    }

    #[test]
    fn fidelity_curve_starts_at_one() {
        let curve = channel_fidelity_curve(&caption(4.0), 0.3, &[0.0, 0.5, 1.0]).unwrap();
        assert!((curve[0].1 - 1.0).abs() < 1e-14);
        assert!(curve.iter().all(|&(_, f)| (0.0..=1.0).contains(&f)));
    }
}
