use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::domain::SpectrumDomain;
use crate::error::{Error, Result};

/// Row count above which matrix-vector products are split across threads.
const PARALLEL_ROWS: usize = 32_768;

/// How contributions that leave the truncated domain were treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryPolicy {
    /// Shifts landing outside the truncation are dropped (compression).
    ZeroPad,
}

/// A finitely truncated operator on functions over a [`SpectrumDomain`].
///
/// Entries are stored in CSR form in the function-value basis. All shipped
/// domains carry a uniform measure, so matrix symmetry and self-adjointness in
/// `L²(domain)` coincide.
#[derive(Debug, Clone)]
pub struct LinOp {
    domain: SpectrumDomain,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    symmetric: bool,
    asymmetry: f64,
    policy: BoundaryPolicy,
    clipped: usize,
}

impl LinOp {
    /// Assemble from `(row, col, value)` triplets. Duplicates are summed and
    /// exact zeros removed. When `symmetric` is asserted, the assembled matrix
    /// must satisfy `max |A_ij - A_ji| <= sym_tol`.
    pub fn from_triplets(
        domain: SpectrumDomain,
        mut triplets: Vec<(usize, usize, f64)>,
        symmetric: bool,
        sym_tol: f64,
        clipped: usize,
    ) -> Result<Self> {
        let n = domain.truncation_size();
        for &(r, c, v) in &triplets {
            if r >= n || c >= n {
                return Err(Error::input(format!(
                    "entry ({r}, {c}) outside domain of size {n}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::input(format!("non-finite entry {v} at ({r}, {c})")));
            }
        }
        triplets.sort_unstable_by_key(|a| (a.0, a.1));

        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                row_ptr[r + 1] += 1;
                cols.push(c);
                vals.push(v);
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let mut op = Self {
            domain,
            row_ptr,
            cols,
            vals,
            symmetric: false,
            asymmetry: 0.0,
            policy: BoundaryPolicy::ZeroPad,
            clipped,
        };
        op.drop_zeros();
        op.asymmetry = op.measure_asymmetry();
        if symmetric {
            if op.asymmetry > sym_tol {
                return Err(Error::input(format!(
                    "operator asserted symmetric but max |A_ij - A_ji| = {:e}",
                    op.asymmetry
                )));
            }
            op.symmetric = true;
        }
        Ok(op)
    }

    /// Identity operator on `domain`.
    pub fn identity(domain: SpectrumDomain) -> Self {
        let n = domain.truncation_size();
        let triplets = (0..n).map(|i| (i, i, 1.0)).collect();
        Self::from_triplets(domain, triplets, true, 0.0, 0).expect("identity is well formed")
    }

    pub fn zero(domain: SpectrumDomain) -> Self {
        Self::from_triplets(domain, Vec::new(), true, 0.0, 0).expect("zero is well formed")
    }

    fn drop_zeros(&mut self) {
        if !self.vals.contains(&0.0) {
            return;
        }
        let n = self.size();
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(self.cols.len());
        let mut vals = Vec::with_capacity(self.vals.len());
        for i in 0..n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.vals[k] != 0.0 {
                    cols.push(self.cols[k]);
                    vals.push(self.vals[k]);
                }
            }
            row_ptr[i + 1] = cols.len();
        }
        self.row_ptr = row_ptr;
        self.cols = cols;
        self.vals = vals;
    }

    fn measure_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.size() {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn domain(&self) -> &SpectrumDomain {
        &self.domain
    }

    pub fn size(&self) -> usize {
        self.domain.truncation_size()
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Measured `max |A_ij - A_ji|`, regardless of the asserted flag.
    pub fn asymmetry(&self) -> f64 {
        self.asymmetry
    }

    pub fn boundary_policy(&self) -> BoundaryPolicy {
        self.policy
    }

    /// Number of contributions dropped because they left the truncation.
    pub fn clipped(&self) -> usize {
        self.clipped
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()]
            .iter()
            .copied()
            .zip(self.vals[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[range.clone()].binary_search(&j) {
            Ok(k) => self.vals[range.start + k],
            Err(_) => 0.0,
        }
    }

    /// All stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.size()).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).map(|(_, v)| v).sum()
    }

    /// `y = A x` without length checks.
    pub(crate) fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let row = |i: usize| -> f64 {
            (self.row_ptr[i]..self.row_ptr[i + 1])
                .map(|k| self.vals[k] * x[self.cols[k]])
                .sum()
        };
        if self.size() >= PARALLEL_ROWS {
            y.par_iter_mut()
                .enumerate()
                .for_each(|(i, yi)| *yi = row(i));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = row(i);
            }
        }
    }

    /// `y = Aᵀ x` without length checks.
    pub(crate) fn apply_transpose_into(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (i, &xi) in x.iter().enumerate().take(self.size()) {
            if xi != 0.0 {
                for (j, v) in self.row(i) {
                    y[j] += v * xi;
                }
            }
        }
    }

    pub fn transpose(&self) -> LinOp {
        let triplets = self.entries().map(|(i, j, v)| (j, i, v)).collect();
        Self::from_triplets(
            self.domain.clone(),
            triplets,
            self.symmetric,
            0.0,
            self.clipped,
        )
        .expect("transpose of a valid operator is valid")
    }

    /// Entrywise sum of operators on the same domain.
    pub fn sum(ops: &[LinOp], symmetric: bool, sym_tol: f64) -> Result<LinOp> {
        let first = ops
            .first()
            .ok_or_else(|| Error::input("cannot sum an empty list of operators"))?;
        let mut triplets = Vec::new();
        let mut clipped = 0;
        for op in ops {
            if op.domain.points() != first.domain.points() {
                return Err(Error::input("summed operators must share a domain"));
            }
            triplets.extend(op.entries());
            clipped += op.clipped;
        }
        Self::from_triplets(first.domain.clone(), triplets, symmetric, sym_tol, clipped)
    }

    pub fn scaled(&self, factor: f64) -> LinOp {
        let mut out = self.clone();
        out.vals.iter_mut().for_each(|v| *v *= factor);
        out.drop_zeros();
        out.asymmetry *= factor.abs();
        out
    }

    /// Dense row-major copy, for small operators and test oracles.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.size();
        let mut m = vec![vec![0.0; n]; n];
        for (i, j, v) in self.entries() {
            m[i][j] = v;
        }
        m
    }
}

/// Apply `op` to a dense vector over its domain.
pub fn apply(op: &LinOp, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != op.size() {
        return Err(Error::input(format!(
            "vector length {} does not match truncation size {}",
            v.len(),
            op.size()
        )));
    }
    let mut out = vec![0.0; v.len()];
    op.apply_into(v, &mut out);
    Ok(out)
}
