//! Reference computations shared by the integration and acceptance tests.
//! Nothing here calls the iterative solvers under test.
#![allow(dead_code)]

use coamen::LinOp;
use nalgebra::{DMatrix, SymmetricEigen};

pub fn dense_matrix(op: &LinOp) -> DMatrix<f64> {
    let n = op.size();
    let mut m = DMatrix::zeros(n, n);
    for (i, j, v) in op.entries() {
        m[(i, j)] = v;
    }
    m
}

/// Eigenvalues of a symmetric operator, ascending, by dense QR iteration.
pub fn dense_eigenvalues(op: &LinOp) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(dense_matrix(op))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `max |λ|` for symmetric operators, the largest singular value otherwise.
pub fn dense_radius(op: &LinOp) -> f64 {
    if op.size() == 0 {
        return 0.0;
    }
    if op.is_symmetric() {
        dense_eigenvalues(op)
            .iter()
            .fold(0.0, |m, x| m.max(x.abs()))
    } else {
        dense_matrix(op).singular_values().max()
    }
}

/// Closed walks of length `2n` from the root of the `2k`-regular tree,
/// counted by distance from the root.
pub fn tree_closed_walks(k: usize, n_max: usize) -> Vec<u128> {
    let deg = 2 * k as u128;
    let steps = 2 * n_max;
    let mut by_dist = vec![0u128; steps + 2];
    by_dist[0] = 1;
    let mut out = vec![1u128];
    for step in 1..=steps {
        let mut next = vec![0u128; steps + 2];
        for (d, &c) in by_dist.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if d == 0 {
                next[1] += deg * c;
            } else {
                next[d - 1] += c;
                next[d + 1] += (deg - 1) * c;
            }
        }
        by_dist = next;
        if step % 2 == 0 {
            out.push(by_dist[0]);
        }
    }
    out
}

/// `p_{2n}(e)^{1/2n}` for the simple random walk on `F_k`, `n = 1..=n_max`.
pub fn free_return_roots(k: usize, n_max: usize) -> Vec<f64> {
    let deg = (2 * k) as f64;
    tree_closed_walks(k, n_max)
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, &w)| {
            let m = 2.0 * n as f64;
            (w as f64).powf(1.0 / m) / deg
        })
        .collect()
}

/// Dimensions `d_0 = 1, d_1 = n, d_{j+1} = n d_j − d_{j−1}` in exact integers.
pub fn free_su2_dims(n: u128, len: usize) -> Vec<u128> {
    let mut d = vec![1u128, n];
    while d.len() < len {
        let j = d.len();
        d.push(n * d[j - 1] - d[j - 2]);
    }
    d.truncate(len);
    d
}

/// Clebsch–Gordan range `a_k ⊗ a_a = ⊕ a_b`, `b = |k−a|, |k−a|+2, …, k+a`.
pub fn clebsch_gordan(k: usize, a: usize) -> Vec<usize> {
    (k.abs_diff(a)..=k + a).step_by(2).collect()
}

/// Group ring of `Z/n` as a descriptor.
pub fn cyclic_ring(n: usize) -> coamen::fusion::RingDescriptor {
    let fusion = (0..n)
        .map(|k| {
            (0..n)
                .map(|a| (0..n).map(|b| u32::from(b == (k + a) % n)).collect())
                .collect()
        })
        .collect();
    coamen::fusion::RingDescriptor::Table(coamen::fusion::TableDescriptor {
        labels: (0..n).map(|i| i.to_string()).collect(),
        dims: vec![1.0; n],
        conj: (0..n).map(|i| ((n - i) % n).to_string()).collect(),
        fusion,
    })
}

/// Fibonacci ring `τ ⊗ τ = 1 ⊕ τ`.
pub fn fibonacci_ring() -> coamen::fusion::RingDescriptor {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    coamen::fusion::RingDescriptor::Table(coamen::fusion::TableDescriptor {
        labels: vec!["1".into(), "tau".into()],
        dims: vec![1.0, phi],
        conj: vec!["1".into(), "tau".into()],
        fusion: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 1]]],
    })
}
