//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Exit status is 0 unless `COAMEN_ACCEPTANCE_STRICT=1` is set and a criterion
//! failed, so that `cargo test` still runs every other target.

mod common;

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::{Duration, Instant};

use coamen::fusion::{
    coamenability_test, dim_bookkeeping_check, kappa_operator, nu_operator, FusionRing,
    RingDescriptor,
};
use coamen::semidirect::{
    bicrossed_amenability_test, bicrossed_nu_operator, interval_criterion, nu_interval_operator,
    sigma_r_operator, window_witness, HalfLineGrid, PairClass, SymLatticePair,
};
use coamen::walk::{cayley_operator, kesten_test, BallTruncation, Element, GroupModel};
use coamen::{spectral_radius, LanczosConfig, LinOp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct BuiltKappa {
    name: String,
    ring: Arc<FusionRing>,
    kappa: usize,
    trunc: usize,
    op: LinOp,
}

/// Operators built while checking criteria, re-examined by the property
/// criteria 7 and 9.
#[derive(Default)]
struct Suite {
    kappa_ops: Vec<BuiltKappa>,
    small_symmetric: Vec<(String, LinOp)>,
}

impl Suite {
    fn record(&mut self, name: impl Into<String>, op: &LinOp) {
        if op.is_symmetric() && op.size() <= 200 {
            self.small_symmetric.push((name.into(), op.clone()));
        }
    }

    fn kappa(&mut self, name: &str, ring: &Arc<FusionRing>, kappa: usize, trunc: usize) -> LinOp {
        let op = kappa_operator(ring, ring.label(kappa), trunc).expect("kappa operator builds");
        self.record(format!("{name} L_{} trunc {trunc}", ring.label(kappa)), &op);
        self.kappa_ops.push(BuiltKappa {
            name: name.into(),
            ring: ring.clone(),
            kappa,
            trunc,
            op: op.clone(),
        });
        op
    }
}

fn cfg() -> LanczosConfig {
    LanczosConfig::default()
}

fn su2_type(n: f64, level: usize) -> Arc<FusionRing> {
    Arc::new(FusionRing::load(&RingDescriptor::free_su2(n, level)).expect("rule ring loads"))
}

fn fusion_case(suite: &mut Suite, n: f64) -> (coamen::AmenabilityVerdict, Duration) {
    let ring = su2_type(n, 1999);
    let start = Instant::now();
    let verdict = coamenability_test(&ring, &["a1"], 2000, 1e-2, &cfg()).expect("fusion test runs");
    let elapsed = start.elapsed();
    suite.kappa(&format!("free-su2 N={n}"), &ring, 1, 2000);
    (verdict, elapsed)
}

fn criterion_1(suite: &mut Suite) -> Outcome {
    let (v, t) = fusion_case(suite, 2.0);
    let ring = su2_type(2.0, 199);
    let small = suite.kappa("free-su2 N=2", &ring, 1, 200);
    let top = *common::dense_eigenvalues(&small).last().unwrap();
    let bound = 2.0 * (PI / 201.0).cos();
    let pass = v.certified
        && v.target == 2.0
        && v.best_residual <= 1e-2
        && t.as_secs_f64() < 5.0
        && top >= bound - 1e-12;
    outcome(
        pass,
        format!(
            "certified={} residual={:.3e} via {} in {:.2}s; dense top at 200 = {top:.12} vs 2cos(pi/201) = {bound:.12}",
            v.certified,
            v.best_residual,
            v.witness_id,
            t.as_secs_f64()
        ),
    )
}

fn criterion_2(suite: &mut Suite) -> Outcome {
    let (v, t) = fusion_case(suite, 3.0);
    let gap = v.gap_hint.unwrap_or(0.0);
    outcome(
        !v.certified && gap >= 0.9 && v.target == 3.0,
        format!(
            "certified={} target={} gap_hint={gap:.6} radius={:.9} in {:.2}s",
            v.certified,
            v.target,
            v.spectral.radius_estimate,
            t.as_secs_f64()
        ),
    )
}

fn walk_operator(suite: &mut Suite, g: &GroupModel, radius: usize) -> LinOp {
    let weights: Vec<(Element, f64)> = g.generators().into_iter().map(|s| (s, 1.0)).collect();
    let op = cayley_operator(g, &weights, &BallTruncation::new(g, radius))
        .expect("cayley operator builds");
    suite.record(format!("{} ball {radius}", g.name()), &op);
    op
}

fn criterion_3(suite: &mut Suite) -> Outcome {
    let g = GroupModel::lattice(2);
    let radii = [5, 10, 20, 30, 40];
    let start = Instant::now();
    let out = kesten_test(&g, &g.generators(), &radii, 0.05, &cfg()).expect("kesten test runs");
    let t = start.elapsed().as_secs_f64();
    let lows: Vec<f64> = out.trace.iter().map(|p| p.normalized_lower_bound).collect();
    let monotone = lows.windows(2).all(|w| w[1] > w[0]);
    let op = walk_operator(suite, &g, 10);
    let dense = common::dense_radius(&op) / 4.0;
    let at10 = out.trace[1].normalized_lower_bound;
    let oracle_ok = (dense - at10).abs() <= 1e-8;
    let last = *lows.last().unwrap();
    outcome(
        last >= 0.95 && monotone && t < 30.0 && oracle_ok,
        format!(
            "normalized lower bounds {lows:.5?} monotone={monotone} in {t:.2}s; radius 10 dense {dense:.10} vs {at10:.10}"
        ),
    )
}

fn criterion_4(suite: &mut Suite) -> Outcome {
    let g = GroupModel::free(2).unwrap();
    let radii: Vec<usize> = (1..=10).collect();
    let out = kesten_test(&g, &g.generators(), &radii, 0.05, &cfg()).expect("kesten test runs");
    for r in 1..=4 {
        walk_operator(suite, &g, r);
    }
    let limit = 3f64.sqrt() / 2.0;
    let est: Vec<f64> = out.trace.iter().map(|p| p.normalized_estimate).collect();
    let last = *est.last().unwrap();
    let below = est.iter().all(|&x| x <= 0.88);
    let near = (last - limit).abs() <= 0.01;
    // a ball of radius R holds every closed walk of length 2n <= 2R, so its
    // top eigenvalue dominates p_2n(e)^(1/2n)
    let roots = common::free_return_roots(2, 12);
    let consistent = out
        .trace
        .iter()
        .all(|p| (1..=p.radius.min(12)).all(|n| p.normalized_lower_bound >= roots[n - 1] - 1e-12));
    outcome(
        near && below && consistent,
        format!(
            "estimates {est:.5?}; |R=10 - sqrt3/2| = {:.5} (needs <= 0.01); max <= 0.88: {below}; path-count roots n=12: {:.5}, consistent: {consistent}",
            (last - limit).abs(),
            roots[11]
        ),
    )
}

/// `(L_nu f)(s) = h/4π Σ_k [f(s − kh) + f(s + kh) + f(kh − s)]` evaluated
/// pointwise, independent of the sparse builder.
fn interval_apply_oracle(
    grid: &HalfLineGrid,
    nodes: std::ops::RangeInclusive<usize>,
    f: &[f64],
) -> Vec<f64> {
    let h = grid.step();
    let w = h / (4.0 * PI);
    let value = |s: f64| -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let j = (s / h - 0.5).round();
        if j < 0.0 || j as usize >= f.len() {
            0.0
        } else {
            f[j as usize]
        }
    };
    (0..grid.len())
        .map(|i| {
            let s = grid.point(i);
            nodes
                .clone()
                .map(|k| {
                    let r = k as f64 * h;
                    value(s - r) + value(s + r) + value(r - s)
                })
                .sum::<f64>()
                * w
        })
        .collect()
}

fn criterion_5(suite: &mut Suite) -> Outcome {
    let grid = HalfLineGrid::new(1.0 / 64.0, 64.0).unwrap();
    let ms = [2.0, 4.0, 8.0];
    let start = Instant::now();
    let out =
        interval_criterion(&grid, 0.0, 1.0, &ms, 5e-2, &cfg()).expect("interval criterion runs");
    let t = start.elapsed().as_secs_f64();
    let target = 1.0 / (2.0 * PI);
    let res: Vec<f64> = out.witness_residuals.iter().map(|&(_, r)| r).collect();
    let decreasing = res.windows(2).all(|w| w[1] < w[0]);
    let mut oracle_gap: f64 = 0.0;
    for (&m, &r) in ms.iter().zip(&res) {
        let f = window_witness(&grid, m).unwrap();
        let lf = interval_apply_oracle(&grid, 1..=64, &f);
        let num: f64 = lf
            .iter()
            .zip(&f)
            .map(|(a, b)| (a - target * b).powi(2))
            .sum::<f64>()
            .sqrt();
        let den: f64 = f.iter().map(|x| x * x).sum::<f64>().sqrt();
        oracle_gap = oracle_gap.max((num / den - r).abs());
    }
    let small = HalfLineGrid::new(0.1, 12.0).unwrap();
    suite.record(
        "interval (0,1] on h=0.1",
        &nu_interval_operator(&small, 0.0, 1.0).unwrap().op,
    );
    let pass = decreasing
        && res[2] <= 5e-2
        && t < 10.0
        && oracle_gap <= 1e-12
        && (out.verdict.target - target).abs() < 1e-15;
    outcome(
        pass,
        format!(
            "residuals at m=2,4,8: {res:.5?}; certified={} at target {target:.10} in {t:.2}s; oracle deviation {oracle_gap:.1e}",
            out.verdict.certified
        ),
    )
}

fn criterion_6(suite: &mut Suite) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let rings: Vec<(String, Arc<FusionRing>)> = vec![
        ("free-su2 N=2".into(), su2_type(2.0, 80)),
        ("free-su2 N=3".into(), su2_type(3.0, 80)),
        ("free-su2 N=2.5".into(), su2_type(2.5, 80)),
        ("free-su2 N=7".into(), su2_type(7.0, 80)),
        (
            "Z/5".into(),
            Arc::new(FusionRing::load(&common::cyclic_ring(5)).unwrap()),
        ),
        (
            "Fibonacci".into(),
            Arc::new(FusionRing::load(&common::fibonacci_ring()).unwrap()),
        ),
    ];
    let mut worst = f64::NEG_INFINITY;
    let mut count = 0;
    for _ in 0..50 {
        let (name, ring) = &rings[rng.gen_range(0..rings.len())];
        let kappa = rng.gen_range(0..ring.len().min(12));
        let trunc = rng.gen_range(kappa.max(1)..=ring.len());
        let op = suite.kappa(name, ring, kappa, trunc);
        let rep = spectral_radius(&op, &cfg()).unwrap();
        worst = worst.max(rep.radius_lower_bound - ring.dim(kappa));
        count += 1;
    }
    for _ in 0..50 {
        let h = [0.05, 0.1, 0.125, 0.25][rng.gen_range(0..4)];
        let max_r = rng.gen_range(4.0..12.0);
        let grid = HalfLineGrid::new(h, max_r).unwrap();
        let r = rng.gen_range(h..max_r - h);
        let (op, _) = sigma_r_operator(&grid, r).unwrap();
        suite.record(format!("sigma_r r={r:.3} h={h}"), &op);
        let rep = spectral_radius(&op, &cfg()).unwrap();
        worst = worst.max(rep.radius_lower_bound - 2.0);
        count += 1;
    }
    outcome(
        worst <= 1e-9,
        format!("{count} instances; max(lower bound - dim) = {worst:.3e}"),
    )
}

fn criterion_7(suite: &mut Suite) -> Outcome {
    for n in [3, 4, 6] {
        let ring = Arc::new(FusionRing::load(&common::cyclic_ring(n)).unwrap());
        for k in 0..n {
            suite.kappa(&format!("Z/{n}"), &ring, k, n);
        }
    }
    let mut mismatches = Vec::new();
    for b in &suite.kappa_ops {
        let conj = kappa_operator(&b.ring, b.ring.label(b.ring.conj(b.kappa)), b.trunc).unwrap();
        if b.op.transpose().to_dense() != conj.to_dense() {
            mismatches.push(format!("{} {}", b.name, b.ring.label(b.kappa)));
        }
    }
    outcome(
        mismatches.is_empty(),
        format!(
            "{} fusion operators checked; mismatches: {mismatches:?}",
            suite.kappa_ops.len()
        ),
    )
}

fn criterion_8(_: &mut Suite) -> Outcome {
    const LEVEL: usize = 30;
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in [2u128, 3] {
        let ring = su2_type(n as f64, LEVEL);
        let dims = common::free_su2_dims(n, 2 * LEVEL + 1);
        for k in 0..=LEVEL {
            // Omega = {a_0, …, a_m} stays closed under a_k ⊗ · when k + m <= LEVEL
            for m in 0..=LEVEL - k {
                let omega: Vec<&str> = ring.labels()[..=m].iter().map(String::as_str).collect();
                let lhs = dims[k] * dims[..=m].iter().sum::<u128>();
                let rhs: u128 = (0..=m)
                    .flat_map(|a| common::clebsch_gordan(k, a))
                    .map(|b| dims[b])
                    .sum();
                let lib = dim_bookkeeping_check(&ring, ring.label(k), &omega).unwrap();
                if lhs != rhs || !lib {
                    failures.push((n, k, m));
                }
                checked += 1;
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{checked} (ring, kappa, Omega) triples at level {LEVEL}; failures {failures:?}"),
    )
}

fn criterion_9(suite: &mut Suite) -> Outcome {
    let ring = su2_type(3.0, 40);
    for trunc in [10, 40] {
        suite.record(
            format!("nu O3 {{a1,a2}} trunc {trunc}"),
            &nu_operator(&ring, &["a1", "a2"], trunc).unwrap(),
        );
    }
    let g = GroupModel::lattice(1);
    walk_operator(suite, &g, 60);
    let pairs = SymLatticePair::new(9).unwrap();
    let omega = [PairClass::of(1, 0).unwrap(), PairClass::of(-1, 0).unwrap()];
    suite.record(
        "bicrossed B=9",
        &bicrossed_nu_operator(&pairs, &omega, 1.0).unwrap(),
    );

    let mut worst: (f64, String) = (0.0, String::new());
    for (name, op) in &suite.small_symmetric {
        let lanczos = spectral_radius(op, &cfg()).unwrap().radius_estimate;
        let err = (lanczos - common::dense_radius(op)).abs();
        if err > worst.0 {
            worst = (err, name.clone());
        }
    }
    outcome(
        worst.0 <= 1e-8,
        format!(
            "{} symmetric operators of size <= 200; max |lanczos - dense| = {:.2e} ({})",
            suite.small_symmetric.len(),
            worst.0,
            if worst.1.is_empty() { "-" } else { &worst.1 }
        ),
    )
}

fn criterion_10(_: &mut Suite) -> Outcome {
    let omega = [PairClass::of(1, 0).unwrap(), PairClass::of(-1, 0).unwrap()];
    let start = Instant::now();
    let out = bicrossed_amenability_test(&[10, 20, 40], &omega, 1.0, 0.05, &cfg())
        .expect("bicrossed test runs");
    let t = start.elapsed().as_secs_f64();
    let per: Vec<String> = out
        .points
        .iter()
        .map(|p| format!("B={} {:.4}", p.bound, p.dim_certificate.best_residual))
        .collect();
    outcome(
        out.verdict.certified && t < 20.0,
        format!(
            "certified={} target {} residuals [{}] in {t:.2}s",
            out.verdict.certified,
            out.target_dim,
            per.join(", ")
        ),
    )
}

type Criterion = fn(&mut Suite) -> Outcome;

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("fusion amenable (SU(2)-type, truncation 2000)", criterion_1),
        ("fusion non-amenable (O3+-type)", criterion_2),
        ("Kesten amenable (Z^2 radius sweep to 40)", criterion_3),
        ("Kesten non-amenable (F2 radius sweep to 10)", criterion_4),
        ("R x| Z2 interval witnesses", criterion_5),
        ("operator-norm bound on 100 random instances", criterion_6),
        ("adjoint rule on every fusion operator", criterion_7),
        ("dimension bookkeeping on closed label sets", criterion_8),
        ("Lanczos vs dense eigensolver", criterion_9),
        ("bicrossed Z x Z with Z2 Folner sweep", criterion_10),
    ];
    let mut suite = Suite::default();
    let mut failed = Vec::new();
    for (i, (title, check)) in criteria.iter().enumerate() {
        let o = check(&mut suite);
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {title}: {}", i + 1, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed.len(),
        criteria.len()
    );
    if !failed.is_empty() && std::env::var("COAMEN_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
