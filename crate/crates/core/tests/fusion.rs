mod common;

use coamen::fusion::{
    coamenability_test, kappa_operator, nu_operator, FusionRing, RingDescriptor, TableDescriptor,
};
use coamen::{apply, spectral_radius, Error, LanczosConfig};
use proptest::prelude::*;

fn su2_type(n: f64, level: usize) -> FusionRing {
    FusionRing::load(&RingDescriptor::free_su2(n, level)).unwrap()
}

#[test]
fn rule_decomposition_matches_clebsch_gordan() {
    let ring = su2_type(2.0, 20);
    for k in 0..=10 {
        for a in 0..=10 {
            let got: Vec<usize> = ring
                .decompose(k, a)
                .into_iter()
                .map(|(b, m)| {
                    assert_eq!(m, 1);
                    b
                })
                .collect();
            assert_eq!(got, common::clebsch_gordan(k, a));
        }
    }
}

#[test]
fn entries_are_multiplicities() {
    let rings = [
        su2_type(2.0, 30),
        su2_type(4.0, 30),
        FusionRing::load(&common::fibonacci_ring()).unwrap(),
        FusionRing::load(&common::cyclic_ring(6)).unwrap(),
    ];
    for ring in &rings {
        let trunc = ring.len().min(25);
        for k in 0..ring.len().min(6) {
            let dense = kappa_operator(ring, ring.label(k), trunc)
                .unwrap()
                .to_dense();
            let mut want = vec![vec![0.0; trunc]; trunc];
            for a in 0..trunc {
                for (b, m) in ring.decompose(k, a) {
                    if b < trunc {
                        want[b][a] += f64::from(m);
                    }
                }
            }
            assert_eq!(dense, want);
        }
    }
}

#[test]
fn radius_is_monotone_in_truncation() {
    let ring = su2_type(2.0, 300);
    let cfg = LanczosConfig::default();
    let mut last = 0.0;
    for trunc in [10, 20, 50, 100, 200, 300] {
        let op = nu_operator(&ring, &["a1", "a2"], trunc).unwrap();
        let r = spectral_radius(&op, &cfg).unwrap().radius_estimate;
        assert!(r >= last - 1e-12, "{trunc}: {r} < {last}");
        last = r;
    }
}

#[test]
fn dims_follow_the_recurrence() {
    for n in [2u128, 3, 5] {
        let ring = su2_type(n as f64, 25);
        let want = common::free_su2_dims(n, 26);
        for (i, &d) in want.iter().enumerate() {
            assert_eq!(ring.int_dim(i), Some(d));
            assert_eq!(ring.dim(i), d as f64);
        }
    }
}

#[test]
fn kappa_operator_norm_bounded_by_dim() {
    let ring = su2_type(3.0, 60);
    for k in [0, 1, 2, 5, 9] {
        let op = kappa_operator(&ring, ring.label(k), 60).unwrap();
        let r = spectral_radius(&op, &LanczosConfig::default()).unwrap();
        assert!(r.radius_lower_bound <= ring.dim(k) + 1e-9);
        assert!((r.radius_estimate - common::dense_radius(&op)).abs() < 1e-8);
    }
}

#[test]
fn su2_and_o3_share_operators_but_not_targets() {
    let su2 = su2_type(2.0, 99);
    let o3 = su2_type(3.0, 99);
    let a = nu_operator(&su2, &["a1"], 100).unwrap();
    let b = nu_operator(&o3, &["a1"], 100).unwrap();
    assert_eq!(a.to_dense(), b.to_dense());
    let cfg = LanczosConfig::default();
    assert!(
        coamenability_test(&su2, &["a1"], 100, 1e-2, &cfg)
            .unwrap()
            .certified
    );
    let v = coamenability_test(&o3, &["a1"], 100, 1e-2, &cfg).unwrap();
    assert!(!v.certified);
    assert!(v.gap_hint.unwrap() > 0.9);
}

#[test]
fn unit_acts_as_identity() {
    let ring = FusionRing::load(&common::fibonacci_ring()).unwrap();
    let op = kappa_operator(&ring, "1", 2).unwrap();
    assert_eq!(op.to_dense(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    let tau = kappa_operator(&ring, "tau", 2).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    // (1, phi) is the Perron eigenvector of the tau operator
    let out = apply(&tau, &[1.0, phi]).unwrap();
    assert!((out[0] - phi).abs() < 1e-12 && (out[1] - phi * phi).abs() < 1e-12);
}

#[test]
fn cyclic_ring_conjugation() {
    let ring = FusionRing::load(&common::cyclic_ring(5)).unwrap();
    for k in 0..5 {
        let op = kappa_operator(&ring, ring.label(k), 5).unwrap();
        let conj = kappa_operator(&ring, ring.label(ring.conj(k)), 5).unwrap();
        assert_eq!(op.transpose().to_dense(), conj.to_dense());
        assert_eq!(op.is_symmetric(), k == 0);
    }
    // Omega = {1, 4} is conjugation-closed, so L_nu is symmetric and hits 2
    let v = coamenability_test(&ring, &["1", "4"], 5, 1e-6, &LanczosConfig::default());
    assert!(
        matches!(v, Err(Error::Input(_))),
        "truncation below 10 is refused"
    );
}

#[test]
fn noncommutative_free_product_rejected_when_inconsistent() {
    let bad = RingDescriptor::Table(TableDescriptor {
        labels: vec!["1".into(), "x".into()],
        dims: vec![1.0, 2.0],
        conj: vec!["1".into(), "x".into()],
        fusion: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]],
    });
    match FusionRing::load(&bad) {
        Err(Error::Validation { axiom, .. }) => assert_eq!(axiom, "dimension homomorphism"),
        other => panic!("expected validation failure, got {other:?}"),
    }
}

#[test]
fn descriptor_json_round_trip() {
    for d in [
        RingDescriptor::free_su2(3.0, 7),
        common::fibonacci_ring(),
        common::cyclic_ring(4),
    ] {
        assert_eq!(RingDescriptor::from_json(&d.to_json()).unwrap(), d);
    }
    assert!(matches!(
        RingDescriptor::from_json("{\"kind\":\"rule\"}"),
        Err(Error::Parse(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn truncated_rows_sum_to_at_most_dim(n in 2.0f64..6.0, k in 0usize..8, trunc in 8usize..40) {
        let ring = su2_type(n, 40);
        let op = kappa_operator(&ring, ring.label(k), trunc).unwrap();
        // column a of L_k holds the decomposition of a_k ⊗ a_a; the dimension
        // weighted sum never exceeds dim(a_k) dim(a_a)
        let dense = op.to_dense();
        for a in 0..trunc {
            let s: f64 = (0..trunc).map(|b| dense[b][a] * ring.dim(b)).sum();
            prop_assert!(s <= ring.dim(k) * ring.dim(a) * (1.0 + 1e-12));
        }
    }
}
