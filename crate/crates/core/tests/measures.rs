use proptest::prelude::*;
use xyz_noise::channels::{apply, gad_kraus, hybrid_apply, lift};
use xyz_noise::measures::{
    concurrence_general, concurrence_x, extract_x, fidelity, local_projective, min_fid_x, min_hs_x,
    min_oracle, min_oracle_with, min_trace_x, off_x_magnitude, AxisSet, MeasurementAxis, MinKind,
    OracleConfig,
};
use xyz_noise::sampling;
use xyz_noise::spinmodel::{assemble_x, thermal_elements, ModelParams};

fn fig1_state() -> xyz_noise::DensityMatrix {
    assemble_x(&thermal_elements(&ModelParams::new(2.0, 0.1, 2.0, 0.0).unwrap()).unwrap()).unwrap()
}

#[test]
fn thermal_states_match_oracle() {
    let mut rng = sampling::rng(11);
    for _ in 0..200 {
        let rho = assemble_x(&thermal_elements(&sampling::model(&mut rng)).unwrap()).unwrap();
        let x = extract_x(&rho).unwrap();
        let hs = min_oracle(&rho, MinKind::HilbertSchmidt).unwrap();
        let fid = min_oracle(&rho, MinKind::Fidelity).unwrap();
        assert!((min_hs_x(&x).unwrap() - hs).abs() < 1e-4, "{x:?}");
        assert!((min_fid_x(&x).unwrap() - fid).abs() < 1e-4, "{x:?}");
    }
}

// At B = 0 the reduced state is maximally mixed and every axis competes.
#[test]
fn degenerate_reduced_state_values() {
    let rho = fig1_state();
    let x = extract_x(&rho).unwrap();
    let t = [
        2.0 * (x.r14 + x.r23),
        2.0 * (x.r23 - x.r14),
        x.r11 + x.r44 - x.r22 - x.r33,
    ];
    let mut sq: Vec<f64> = t.iter().map(|v| v * v).collect();
    sq.sort_by(f64::total_cmp);
    let two_largest = 0.25 * (sq[1] + sq[2]);

    let hs = min_oracle(&rho, MinKind::HilbertSchmidt).unwrap();
    assert!((hs - two_largest).abs() < 1e-10);
    assert!((hs - 0.435298833473).abs() < 1e-10);
    let fid = min_oracle(&rho, MinKind::Fidelity).unwrap();
    assert!((fid - 0.484611012552).abs() < 1e-10);
    let tr = min_oracle(&rho, MinKind::Trace).unwrap();
    assert!((tr / min_trace_x(&x).unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn oracle_insensitive_to_grid_offset() {
    let rho = fig1_state();
    let shifted = OracleConfig {
        offset: (0.0021, 0.0037),
        ..OracleConfig::default()
    };
    for kind in MinKind::ALL {
        let a = min_oracle(&rho, kind).unwrap();
        let b = min_oracle_with(&rho, kind, &shifted).unwrap().value;
        assert!((a - b).abs() < 1e-9, "{kind:?}");
    }
}

#[test]
fn unconstrained_search_dominates() {
    let mut rng = sampling::rng(5);
    let all = OracleConfig {
        axes: AxisSet::All,
        step: 0.05,
        ..OracleConfig::default()
    };
    for _ in 0..5 {
        let rho = sampling::x_state(&mut rng, false).to_density().unwrap();
        let constrained = min_oracle(&rho, MinKind::HilbertSchmidt).unwrap();
        let free = min_oracle_with(&rho, MinKind::HilbertSchmidt, &all)
            .unwrap()
            .value;
        assert!(free >= constrained - 1e-12);
    }
}

#[test]
fn channels_keep_x_form() {
    let mut rng = sampling::rng(21);
    for _ in 0..200 {
        let rho = sampling::x_state(&mut rng, false).to_density().unwrap();
        let g = apply(
            &lift(&gad_kraus(sampling::gad(&mut rng)).unwrap()).unwrap(),
            &rho,
        )
        .unwrap();
        let h = hybrid_apply(&sampling::hybrid(&mut rng), &rho).unwrap();
        assert!(off_x_magnitude(g.mat()) < 1e-13);
        assert!(off_x_magnitude(h.mat()) < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projective_measurement_is_idempotent(seed in any::<u64>(), theta in 0.0..std::f64::consts::PI, phi in 0.0..std::f64::consts::TAU) {
        let rho = sampling::density(&mut sampling::rng(seed));
        let ax = MeasurementAxis::new(theta, phi).unwrap();
        let once = local_projective(&rho, &ax).unwrap();
        let twice = local_projective(&once, &ax).unwrap();
        prop_assert!(once.mat().max_abs_diff(twice.mat()).unwrap() < 1e-13);
        prop_assert!(once.purity() <= rho.purity() + 1e-12);
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded(a in any::<u64>(), b in any::<u64>()) {
        let rho = sampling::density(&mut sampling::rng(a));
        let sigma = sampling::density(&mut sampling::rng(b));
        let f = fidelity(&rho, &sigma);
        prop_assert!((f - fidelity(&sigma, &rho)).abs() < 1e-14);
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((fidelity(&rho, &rho) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn x_concurrence_matches_general(seed in any::<u64>()) {
        let x = sampling::x_state(&mut sampling::rng(seed), false);
        let general = concurrence_general(&x.to_density().unwrap()).unwrap();
        prop_assert!((concurrence_x(&x) - general).abs() < 1e-7);
    }

    #[test]
    fn min_values_in_range(seed in any::<u64>()) {
        let x = sampling::x_state(&mut sampling::rng(seed), true);
        for v in [min_hs_x(&x).unwrap(), min_trace_x(&x).unwrap(), min_fid_x(&x).unwrap()] {
            prop_assert!((0.0..=0.5 + 1e-12).contains(&v));
        }
    }
}
