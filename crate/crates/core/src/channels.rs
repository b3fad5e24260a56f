//! Kraus-form noise channels: generalized amplitude damping (GAD) and the
//! bit, phase and bit-phase flips, each lifted to two qubits as `A_i ⊗ A_j`.

use crate::error::{invalid, Error, Result};
use crate::matcore::{kron, pauli, re, CMat};
use crate::spinmodel::DensityMatrix;

/// Completeness residual allowed on construction.
pub const COMPLETENESS_TOL: f64 = 1e-12;
/// Completeness residual `lift` accepts on its input.
pub const LIFT_INPUT_TOL: f64 = 1e-10;
/// Trace drift after `apply` that is reported as an error.
pub const APPLY_TRACE_TOL: f64 = 1e-10;

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in [0, 1], got {v}")))
    }
}

/// `lambda = 1 - exp(-rate * t)`
pub fn lambda_from(rate: f64, t: f64) -> f64 {
    -(-rate * t).exp_m1()
}

/// Emission probability `p` and decoherence parameter `lambda` of a GAD channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GadParams {
    pub p: f64,
    pub lambda: f64,
}

impl GadParams {
    pub fn new(p: f64, lambda: f64) -> Result<Self> {
        let g = GadParams { p, lambda };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        check_unit("p", self.p)?;
        check_unit("lambda", self.lambda)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlipKind {
    BitFlip,
    PhaseFlip,
    BitPhaseFlip,
}

impl FlipKind {
    pub const ALL: [FlipKind; 3] = [
        FlipKind::BitFlip,
        FlipKind::PhaseFlip,
        FlipKind::BitPhaseFlip,
    ];

    pub fn pauli(self) -> CMat {
        match self {
            FlipKind::BitFlip => pauli::x(),
            FlipKind::PhaseFlip => pauli::z(),
            FlipKind::BitPhaseFlip => pauli::y(),
        }
    }
}

/// Weighted mixture of the three lifted flip channels sharing one flip
/// probability `p`: `alpha BF + beta PF + delta BPF`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HybridParams {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub p: f64,
}

impl HybridParams {
    pub const WEIGHT_SUM_TOL: f64 = 1e-12;

    pub fn new(alpha: f64, beta: f64, delta: f64, p: f64) -> Result<Self> {
        let h = HybridParams {
            alpha,
            beta,
            delta,
            p,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, w) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("delta", self.delta),
        ] {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(invalid(format!(
                    "weight {name} must be non-negative, got {w}"
                )));
            }
        }
        let sum = self.alpha + self.beta + self.delta;
        if (sum - 1.0).abs() > Self::WEIGHT_SUM_TOL {
            return Err(invalid(format!("alpha + beta + delta = {sum}, expected 1")));
        }
        check_unit("p", self.p)
    }

    pub fn weight(&self, kind: FlipKind) -> f64 {
        match kind {
            FlipKind::BitFlip => self.alpha,
            FlipKind::PhaseFlip => self.beta,
            FlipKind::BitPhaseFlip => self.delta,
        }
    }
}

/// Kraus operators of one channel, all of the same dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    ops: Vec<CMat>,
}

impl KrausSet {
    /// Checks `sum A† A = I` to [`COMPLETENESS_TOL`].
    pub fn new(ops: Vec<CMat>) -> Result<Self> {
        let set = Self::unchecked(ops)?;
        let r = set.completeness_residual();
        if r > COMPLETENESS_TOL {
            return Err(invalid(format!("Kraus set incomplete, residual {r:e}")));
        }
        Ok(set)
    }

    fn unchecked(ops: Vec<CMat>) -> Result<Self> {
        let dim = ops
            .first()
            .ok_or_else(|| invalid("Kraus set is empty"))?
            .dim();
        if ops.iter().any(|a| a.dim() != dim) {
            return Err(invalid("Kraus operators have mixed dimensions"));
        }
        Ok(KrausSet { ops })
    }

    pub fn ops(&self) -> &[CMat] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    /// HS norm of `sum A† A - I`.
    pub fn completeness_residual(&self) -> f64 {
        let dim = self.dim();
        let sum = self
            .ops
            .iter()
            .map(|a| a.adjoint().mul_unchecked(a))
            .fold(CMat::zeros(dim).expect("dim"), |acc, m| {
                acc.add(&m).expect("dim")
            });
        sum.sub(&CMat::identity(dim).expect("dim"))
            .expect("dim")
            .hs_norm()
    }

    /// `sum A m A†` on a raw matrix of matching dimension.
    pub fn apply_mat(&self, m: &CMat) -> Result<CMat> {
        let mut out = CMat::zeros(self.dim())?;
        for a in &self.ops {
            out = out.add(&a.conjugate(m)?)?;
        }
        Ok(out)
    }
}

/// Single-qubit GAD Kraus operators `A0..A3`.
pub fn gad_kraus(g: GadParams) -> Result<KrausSet> {
    g.validate()?;
    let GadParams { p, lambda } = g;
    let sp = p.sqrt();
    let sq = (1.0 - p).sqrt();
    let keep = (1.0 - lambda).sqrt();
    let jump = lambda.sqrt();
    let a0 = CMat::from_real(2, &[sp, 0.0, 0.0, sp * keep])?;
    let a1 = CMat::from_real(2, &[0.0, sp * jump, 0.0, 0.0])?;
    let a2 = CMat::from_real(2, &[sq * keep, 0.0, 0.0, sq])?;
    let a3 = CMat::from_real(2, &[0.0, 0.0, sq * jump, 0.0])?;
    KrausSet::new(vec![a0, a1, a2, a3])
}

/// `{sqrt(1-p) I, sqrt(p) sigma}` with the Pauli matching `kind`.
pub fn flip_kraus(kind: FlipKind, p: f64) -> Result<KrausSet> {
    check_unit("p", p)?;
    KrausSet::new(vec![
        pauli::id().scale_real((1.0 - p).sqrt()),
        kind.pauli().scale_real(p.sqrt()),
    ])
}

/// Two-qubit channel with the same single-qubit noise on each qubit.
pub fn lift(s: &KrausSet) -> Result<KrausSet> {
    if s.dim() != 2 {
        return Err(invalid("lift expects a single-qubit Kraus set"));
    }
    let r = s.completeness_residual();
    if r > LIFT_INPUT_TOL {
        return Err(invalid(format!(
            "cannot lift an incomplete Kraus set (residual {r:e})"
        )));
    }
    let mut ops = Vec::with_capacity(s.len() * s.len());
    for a in s.ops() {
        for b in s.ops() {
            ops.push(kron(a, b)?);
        }
    }
    KrausSet::new(ops)
}

fn finish(out: CMat) -> Result<DensityMatrix> {
    let tr = out.trace();
    if (tr.re - 1.0).abs() > APPLY_TRACE_TOL {
        return Err(Error::Consistency(format!("channel output has trace {tr}")));
    }
    DensityMatrix::new(out)
}

/// Operator-sum evolution `sum A rho A†` of a two-qubit state.
pub fn apply(s: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if s.dim() != 4 {
        return Err(invalid("apply expects a two-qubit Kraus set"));
    }
    finish(s.apply_mat(rho.mat())?)
}

/// The hybrid flip channel as one Kraus set: each lifted flip set scaled by
/// the square root of its weight.
pub fn hybrid_kraus(h: &HybridParams) -> Result<KrausSet> {
    h.validate()?;
    let mut ops = Vec::with_capacity(12);
    for kind in FlipKind::ALL {
        let w = h.weight(kind);
        if w == 0.0 {
            continue;
        }
        let lifted = lift(&flip_kraus(kind, h.p)?)?;
        ops.extend(lifted.ops().iter().map(|a| a.scale_real(w.sqrt())));
    }
    KrausSet::new(ops)
}

/// `alpha E_BF(rho) + beta E_PF(rho) + delta E_BPF(rho)`.
pub fn hybrid_apply(h: &HybridParams, rho: &DensityMatrix) -> Result<DensityMatrix> {
    h.validate()?;
    let mut out = CMat::zeros(4)?;
    for kind in FlipKind::ALL {
        let w = h.weight(kind);
        let lifted = lift(&flip_kraus(kind, h.p)?)?;
        out = out.add(&lifted.apply_mat(rho.mat())?.scale_real(w))?;
    }
    finish(out)
}

/// `diag(p, 1-p)`, the fixed point of single-qubit GAD.
pub fn gad_single_steady_state(p: f64) -> Result<CMat> {
    check_unit("p", p)?;
    CMat::diag(&[p, 1.0 - p])
}

/// `sigma ⊗ sigma` with `sigma = diag(p, 1-p)`.
pub fn gad_steady_state(p: f64) -> Result<DensityMatrix> {
    let s = gad_single_steady_state(p)?;
    let mut m = kron(&s, &s)?;
    // exact zeros off the diagonal already; pin the diagonal to p-products
    let q = 1.0 - p;
    for (i, v) in [p * p, p * q, p * q, q * q].into_iter().enumerate() {
        m.set(i, i, re(v));
    }
    DensityMatrix::new(m)
}
