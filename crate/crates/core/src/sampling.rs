//! Seeded random parameters and states for the verification suites.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channels::{GadParams, HybridParams};
use crate::matcore::{c, CMat};
use crate::measures::XElements;
use crate::spinmodel::{DensityMatrix, ModelParams};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `|J|, |Jz|, |B| <= 10`, `|gamma| <= 1`.
pub fn model<R: Rng>(rng: &mut R) -> ModelParams {
    ModelParams {
        j: rng.gen_range(-10.0..=10.0),
        gamma: rng.gen_range(-1.0..=1.0),
        jz: rng.gen_range(-10.0..=10.0),
        b: rng.gen_range(-10.0..=10.0),
    }
}

pub fn gad<R: Rng>(rng: &mut R) -> GadParams {
    GadParams {
        p: rng.gen_range(0.0..=1.0),
        lambda: rng.gen_range(0.0..=1.0),
    }
}

/// Weights drawn uniformly from the simplex.
pub fn hybrid<R: Rng>(rng: &mut R) -> HybridParams {
    let e: [f64; 3] = std::array::from_fn(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln());
    let s: f64 = e.iter().sum();
    let (alpha, beta) = (e[0] / s, e[1] / s);
    HybridParams {
        alpha,
        beta,
        delta: (1.0 - alpha - beta).max(0.0),
        p: rng.gen_range(0.0..=1.0),
    }
}

/// A real X-state. With `equal_middle` the two middle populations coincide.
pub fn x_state<R: Rng>(rng: &mut R, equal_middle: bool) -> XElements {
    let mut w: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.0..1.0f64));
    if equal_middle {
        w[2] = w[1];
    }
    let s: f64 = w.iter().sum();
    let [r11, r22, r33, r44] = w.map(|v| v / s);
    // stay a hair inside the positivity boundary
    let u = rng.gen_range(-1.0..=1.0) * (1.0 - 1e-9);
    let v = rng.gen_range(-1.0..=1.0) * (1.0 - 1e-9);
    XElements {
        r11,
        r22,
        r33,
        r44,
        r14: u * (r11 * r44).sqrt(),
        r23: v * (r22 * r33).sqrt(),
    }
}

/// `G G† / tr(G G†)` for a complex Gaussian-like `G` (entries uniform in the
/// unit square, which is enough to reach full-rank generic states).
pub fn density<R: Rng>(rng: &mut R) -> DensityMatrix {
    let entries: Vec<_> = (0..16)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let g = CMat::from_rows(4, &entries).expect("4x4");
    let m = g.mul_unchecked(&g.adjoint());
    let tr = m.trace().re;
    let mut m = m.scale_real(1.0 / tr);
    for i in 0..4 {
        m.set(i, i, c(m.get(i, i).re, 0.0));
        for j in (i + 1)..4 {
            let z = 0.5 * (m.get(i, j) + m.get(j, i).conj());
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    DensityMatrix::new(m).expect("Gram matrix is a state")
}

/// A random Hermitian matrix with entries in the unit box.
pub fn hermitian<R: Rng>(rng: &mut R, dim: usize) -> CMat {
    let mut m = CMat::zeros(dim).expect("dim");
    for i in 0..dim {
        m.set(i, i, c(rng.gen_range(-1.0..1.0), 0.0));
        for j in (i + 1)..dim {
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    m
}
