//! Dense complex matrices of fixed size 2x2 and 4x4.
//!
//! Everything in this crate lives on one or two qubits, so matrices are stored
//! inline in a 16-entry array and passed by value. Mixing dimensions is an
//! [`Error::InvalidArgument`].

use std::fmt;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

const MAX: usize = 4;

/// Hermiticity tolerance accepted by the eigensolver and the norms.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues above this (negative) bound are clamped to zero by `sqrt`.
pub const PSD_TOL: f64 = 1e-10;

const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// A 2x2 or 4x4 complex matrix, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct CMat {
    dim: usize,
    data: [Complex64; MAX * MAX],
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat{}x{} [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(invalid(format!(
            "matrix dimension must be 2 or 4, got {dim}"
        )))
    }
}

impl CMat {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(CMat {
            dim,
            data: [Complex64::default(); MAX * MAX],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, re(1.0));
        }
        Ok(m)
    }

    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        if entries.len() != dim * dim {
            return Err(invalid(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        m.data[..dim * dim].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        let v: Vec<Complex64> = entries.iter().map(|&x| re(x)).collect();
        Self::from_rows(dim, &v)
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(values.len())?;
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, re(v));
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        debug_assert!(i < self.dim && j < self.dim);
        self.data[i * self.dim + j] = z;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data[..self.dim * self.dim]
    }

    fn same_dim(&self, other: &CMat, op: &str) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(invalid(format!(
                "{op}: dimension mismatch ({} vs {})",
                self.dim, other.dim
            )))
        }
    }

    pub fn adjoint(&self) -> CMat {
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn conj(&self) -> CMat {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z = z.conj());
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Trace of a Hermitian matrix. Fails if the imaginary residue exceeds 1e-12.
    pub fn trace_real(&self) -> Result<f64> {
        let t = self.trace();
        if t.im.abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "trace has imaginary part {:e}",
                t.im
            )));
        }
        Ok(t.re)
    }

    pub fn matmul(&self, other: &CMat) -> Result<CMat> {
        self.same_dim(other, "matmul")?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &CMat) -> CMat {
        let n = self.dim;
        let mut out = CMat {
            dim: n,
            data: [Complex64::default(); MAX * MAX],
        };
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::default() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    /// `self * m * self†`
    pub fn conjugate(&self, m: &CMat) -> Result<CMat> {
        self.same_dim(m, "conjugate")?;
        Ok(self.mul_unchecked(m).mul_unchecked(&self.adjoint()))
    }

    pub fn add(&self, other: &CMat) -> Result<CMat> {
        self.same_dim(other, "add")?;
        let mut out = *self;
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &CMat) -> Result<CMat> {
        self.same_dim(other, "sub")?;
        let mut out = *self;
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= s);
        out
    }

    pub fn scale_real(&self, s: f64) -> CMat {
        self.scale(re(s))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMat) -> Result<f64> {
        self.same_dim(other, "max_abs_diff")?;
        Ok(self
            .entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest deviation from Hermiticity, `max |m_ij - conj(m_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    fn require_hermitian(&self, op: &str) -> Result<()> {
        let d = self.hermitian_defect();
        if d > HERMITIAN_TOL {
            Err(invalid(format!(
                "{op}: matrix is not Hermitian (defect {d:e})"
            )))
        } else {
            Ok(())
        }
    }

    /// Hilbert-Schmidt norm `sqrt(tr(m† m))`.
    pub fn hs_norm(&self) -> f64 {
        self.entries()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Trace norm of a Hermitian matrix: the sum of absolute eigenvalues.
    pub fn trace_norm(&self) -> Result<f64> {
        let eig = self.herm_eigen()?;
        Ok(eig.values.iter().map(|v| v.abs()).sum())
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.
    pub fn herm_eigen(&self) -> Result<HermEigen> {
        self.require_hermitian("herm_eigen")?;
        Ok(jacobi(self))
    }

    /// `V f(D) V†` for Hermitian `self = V D V†`.
    pub fn mat_func(&self, f: impl Fn(f64) -> f64) -> Result<CMat> {
        let eig = self.herm_eigen()?;
        let fv: Vec<f64> = eig.values.iter().map(|&v| f(v)).collect();
        Ok(eig.compose(&fv))
    }

    /// Principal square root of a positive-semidefinite Hermitian matrix.
    ///
    /// Eigenvalues in `[-PSD_TOL, 0)` are treated as zero.
    pub fn sqrt_psd(&self) -> Result<CMat> {
        let eig = self.herm_eigen()?;
        if let Some(&lo) = eig.values.first() {
            if lo < -PSD_TOL {
                return Err(Error::Domain(format!(
                    "sqrt of a matrix with eigenvalue {lo:e}"
                )));
            }
        }
        let fv: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0).sqrt()).collect();
        Ok(eig.compose(&fv))
    }

    pub fn expm_hermitian(&self) -> Result<CMat> {
        self.mat_func(f64::exp)
    }
}

/// Kronecker product of two single-qubit operators.
pub fn kron(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.dim != 2 || b.dim != 2 {
        return Err(invalid(format!(
            "kron expects two 2x2 operators, got {}x{} and {}x{}",
            a.dim, a.dim, b.dim, b.dim
        )));
    }
    let mut out = CMat::zeros(4)?;
    for i in 0..2 {
        for j in 0..2 {
            let aij = a.get(i, j);
            for k in 0..2 {
                for l in 0..2 {
                    out.set(2 * i + k, 2 * j + l, aij * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Pauli matrices and the 2x2 identity.
pub mod pauli {
    use super::{c, re, CMat, Complex64};

    fn m2(e: [Complex64; 4]) -> CMat {
        CMat::from_rows(2, &e).expect("2x2")
    }

    pub fn id() -> CMat {
        m2([re(1.0), re(0.0), re(0.0), re(1.0)])
    }

    pub fn x() -> CMat {
        m2([re(0.0), re(1.0), re(1.0), re(0.0)])
    }

    pub fn y() -> CMat {
        m2([re(0.0), c(0.0, -1.0), c(0.0, 1.0), re(0.0)])
    }

    pub fn z() -> CMat {
        m2([re(1.0), re(0.0), re(0.0), re(-1.0)])
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns of `vectors`).
#[derive(Debug, Clone, Copy)]
pub struct HermEigen {
    pub values: EigenValues,
    pub vectors: CMat,
}

/// Up to four real eigenvalues, ascending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenValues {
    len: usize,
    v: [f64; MAX],
}

impl std::ops::Deref for EigenValues {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.v[..self.len]
    }
}

impl HermEigen {
    /// `V diag(values) V†`
    pub fn compose(&self, values: &[f64]) -> CMat {
        let n = self.vectors.dim();
        let v = &self.vectors;
        let mut out = CMat::zeros(n).expect("valid dim");
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::default();
                for (k, &lam) in values.iter().enumerate() {
                    acc += v.get(i, k) * lam * v.get(j, k).conj();
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMat {
        self.compose(&self.values)
    }
}

fn jacobi(m: &CMat) -> HermEigen {
    let n = m.dim();
    let mut a = *m;
    // symmetrize so the rotation algebra sees an exactly Hermitian matrix
    for i in 0..n {
        a.set(i, i, re(a.get(i, i).re));
        for j in (i + 1)..n {
            let z = 0.5 * (a.get(i, j) + a.get(j, i).conj());
            a.set(i, j, z);
            a.set(j, i, z.conj());
        }
    }
    let mut v = CMat::identity(n).expect("valid dim");
    let scale = a.hs_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a.get(i, j).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut idx: [usize; MAX] = [0, 1, 2, 3];
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    idx[..n].sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));

    let mut values = EigenValues {
        len: n,
        v: [0.0; MAX],
    };
    let mut vectors = CMat::zeros(n).expect("valid dim");
    for (col, &k) in idx[..n].iter().enumerate() {
        values.v[col] = diag[k];
        for row in 0..n {
            vectors.set(row, col, v.get(row, k));
        }
    }
    HermEigen { values, vectors }
}

/// One unitary Jacobi rotation `A <- J† A J`, `V <- V J` zeroing `A[p][q]`.
fn rotate(a: &mut CMat, v: &mut CMat, p: usize, q: usize) {
    let apq = a.get(p, q);
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    // Negligible against both diagonals: skip, it cannot change them.
    if g < 1e-300 || (app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs()) {
        a.set(p, q, re(0.0));
        a.set(q, p, re(0.0));
        return;
    }
    let phase = apq / g; // e^{i phi}
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;

    // J = D R with D = diag(.., 1 @p, .., e^{-i phi} @q, ..)
    let jpp = re(cs);
    let jpq = re(sn);
    let jqp = -sn * phase.conj();
    let jqq = cs * phase.conj();

    let n = a.dim();
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * jpp + akq * jqp);
        a.set(k, q, akp * jpq + akq * jqq);
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * jpp + vkq * jqp);
        v.set(k, q, vkp * jpq + vkq * jqq);
    }
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, jpp.conj() * apk + jqp.conj() * aqk);
        a.set(q, k, jpq.conj() * apk + jqq.conj() * aqk);
    }
    a.set(p, q, re(0.0));
    a.set(q, p, re(0.0));
    a.set(p, p, re(a.get(p, p).re));
    a.set(q, q, re(a.get(q, q).re));
}
