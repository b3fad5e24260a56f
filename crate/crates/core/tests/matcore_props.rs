use proptest::prelude::*;
use xyz_noise::matcore::{c, kron, pauli, CMat};
use xyz_noise::sampling;

fn herm(seed: u64, dim: usize) -> CMat {
    sampling::hermitian(&mut sampling::rng(seed), dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eigen_reconstructs(seed in any::<u64>(), dim in prop_oneof![Just(2usize), Just(4usize)]) {
        let a = herm(seed, dim);
        let eig = a.herm_eigen().unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&a).unwrap() < 1e-11);
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        let v = &eig.vectors;
        let gram = v.adjoint().matmul(v).unwrap();
        prop_assert!(gram.max_abs_diff(&CMat::identity(dim).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn trace_norm_dominates_hs(seed in any::<u64>(), dim in prop_oneof![Just(2usize), Just(4usize)]) {
        let a = herm(seed, dim);
        prop_assert!(a.trace_norm().unwrap() >= a.hs_norm() - 1e-12);
    }

    #[test]
    fn hs_norm_is_entrywise(seed in any::<u64>()) {
        let a = herm(seed, 4);
        let sum: f64 = a.entries().iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((a.hs_norm().powi(2) - sum).abs() < 1e-12);
    }

    #[test]
    fn exp_commutes_with_its_argument(seed in any::<u64>()) {
        let a = herm(seed, 4);
        let e = a.expm_hermitian().unwrap();
        let d = a.matmul(&e).unwrap().sub(&e.matmul(&a).unwrap()).unwrap();
        prop_assert!(d.hs_norm() < 1e-10);
        // det exp(A) = exp(tr A)
        let tr_log = e.herm_eigen().unwrap().values.iter().map(|v| v.ln()).sum::<f64>();
        prop_assert!((tr_log - a.trace_real().unwrap()).abs() < 1e-10);
    }

    #[test]
    fn sqrt_squares_back(seed in any::<u64>()) {
        let rho = sampling::density(&mut sampling::rng(seed));
        let s = rho.mat().sqrt_psd().unwrap();
        prop_assert!(s.matmul(&s).unwrap().max_abs_diff(rho.mat()).unwrap() < 1e-11);
    }
}

#[test]
fn kron_mixed_product() {
    let (x, y, z) = (pauli::x(), pauli::y(), pauli::z());
    let lhs = kron(&x, &y)
        .unwrap()
        .matmul(&kron(&z, &x).unwrap())
        .unwrap();
    let rhs = kron(&x.matmul(&z).unwrap(), &y.matmul(&x).unwrap()).unwrap();
    assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-15);
}

#[test]
fn degenerate_spectrum() {
    let a = CMat::identity(4).unwrap().scale(c(2.0, 0.0));
    let eig = a.herm_eigen().unwrap();
    assert!(eig.values.iter().all(|&v| (v - 2.0).abs() < 1e-15));
}
