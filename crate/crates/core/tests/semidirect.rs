mod common;

use std::f64::consts::PI;

use coamen::semidirect::{
    bicrossed_amenability_test, bicrossed_nu_operator, bicrossed_operator, interval_criterion,
    nu_interval_operator, sigma_r_operator, window_witness, HalfLineGrid, PairClass,
    SymLatticePair,
};
use coamen::{spectral_radius, LanczosConfig};
use proptest::prelude::*;

#[test]
fn interval_radius_approaches_target() {
    let grid = HalfLineGrid::new(1.0 / 32.0, 32.0).unwrap();
    let iv = nu_interval_operator(&grid, 0.0, 1.0).unwrap();
    let rep = spectral_radius(&iv.op, &LanczosConfig::default()).unwrap();
    assert!(rep.radius_lower_bound <= iv.target + 1e-12);
    assert!(iv.target - rep.radius_lower_bound < 1e-3);
}

#[test]
fn witness_residuals_shrink_with_window() {
    let grid = HalfLineGrid::new(1.0 / 32.0, 64.0).unwrap();
    let out = interval_criterion(
        &grid,
        0.0,
        1.0,
        &[1.0, 2.0, 4.0, 8.0, 16.0],
        0.05,
        &LanczosConfig::default(),
    )
    .unwrap();
    let r: Vec<f64> = out.witness_residuals.iter().map(|p| p.1).collect();
    assert!(r.windows(2).all(|w| w[1] < w[0]), "{r:?}");
    // once m exceeds the interval length, sharp window edges cost O(m^-1/2)
    for w in r[1..].windows(2) {
        assert!((w[0] / w[1] - 2f64.sqrt()).abs() < 0.05, "{r:?}");
    }
    assert!(out.verdict.certified);
    assert!((out.verdict.target - 1.0 / (2.0 * PI)).abs() < 1e-15);
}

#[test]
fn sigma_operator_matches_dense_oracle() {
    let grid = HalfLineGrid::new(0.25, 20.0).unwrap();
    for r in [0.25, 1.0, 3.3, 10.0] {
        let (op, shift) = sigma_r_operator(&grid, r).unwrap();
        assert!(shift.delta.abs() <= grid.step() / 2.0);
        let rep = spectral_radius(&op, &LanczosConfig::default()).unwrap();
        let dense = common::dense_radius(&op);
        assert!((rep.radius_estimate - dense).abs() < 1e-8);
        assert!(dense <= 2.0 + 1e-12);
    }
}

#[test]
fn window_witness_misses_grid_beyond_range() {
    let grid = HalfLineGrid::new(0.5, 8.0).unwrap();
    assert!(window_witness(&grid, 4.0).is_ok());
    assert!(window_witness(&grid, 4.5).is_err());
}

#[test]
fn bicrossed_single_class_is_contraction() {
    let pairs = SymLatticePair::new(8).unwrap();
    let op = bicrossed_operator(&pairs, (2, -1), 1.0).unwrap();
    assert!(!op.is_symmetric());
    let rep = spectral_radius(&op, &LanczosConfig::default()).unwrap();
    assert!(rep.radius_lower_bound <= 2.0 + 1e-9);
    assert!((rep.radius_estimate - common::dense_radius(&op)).abs() < 1e-8);
}

#[test]
fn bicrossed_sweep_reports_both_targets() {
    let omega = [PairClass::of(1, 0).unwrap(), PairClass::of(-1, 0).unwrap()];
    let out =
        bicrossed_amenability_test(&[8, 16, 32], &omega, 1.0, 0.05, &LanczosConfig::default())
            .unwrap();
    assert_eq!(out.target_dim, 4.0);
    assert_eq!(out.target_measure, 2.0);
    assert!(out.verdict.certified);
    let radii: Vec<f64> = out
        .points
        .iter()
        .map(|p| p.spectral.radius_estimate)
        .collect();
    assert!(radii.windows(2).all(|w| w[1] > w[0]) && radii[2] < 4.0);
    assert!(out
        .points
        .iter()
        .all(|p| p.measure_certificate.target == 2.0));
}

#[test]
fn bicrossed_nu_needs_closed_omega() {
    let pairs = SymLatticePair::new(4).unwrap();
    assert!(bicrossed_nu_operator(&pairs, &[PairClass::of(2, 0).unwrap()], 1.0).is_err());
    let closed = [PairClass::of(2, 0).unwrap(), PairClass::of(-2, 0).unwrap()];
    assert!(bicrossed_nu_operator(&pairs, &closed, 1.0)
        .unwrap()
        .is_symmetric());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn bicrossed_conjugate_shift_is_transpose(r in -4i64..4, r2 in -4i64..4, b in 2i64..7) {
        prop_assume!(r != r2);
        let pairs = SymLatticePair::new(b).unwrap();
        let a = bicrossed_operator(&pairs, (r, r2), 1.0).unwrap();
        let c = bicrossed_operator(&pairs, (-r, -r2), 1.0).unwrap();
        prop_assert_eq!(a.transpose().to_dense(), c.to_dense());
    }

    #[test]
    fn interval_rows_never_exceed_target(h in prop::sample::select(vec![0.05, 0.1, 0.125, 0.25]), a in 0.0f64..2.0, len in 0.2f64..2.0) {
        let grid = HalfLineGrid::new(h, 10.0).unwrap();
        let iv = nu_interval_operator(&grid, a, a + len).unwrap();
        for i in 0..grid.len() {
            prop_assert!(iv.op.row_sum(i) <= iv.target + 1e-12);
        }
    }
}
