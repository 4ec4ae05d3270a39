use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::linop::LinOp;
use super::tridiag::tridiag_eigen;
use crate::error::{Error, Result};

/// Upper bound on stored Krylov basis entries (`krylov_dim * n`).
const BASIS_BUDGET: usize = 24_000_000;

/// Eigen-iteration settings shared by every spectral routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanczosConfig {
    /// Absolute accuracy target for the extreme Ritz value.
    pub tol: f64,
    /// Budget of matrix-vector products.
    pub max_iter: usize,
    /// Krylov subspace dimension before an explicit restart.
    pub krylov_dim: usize,
    /// Seed for the start vector.
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 20_000,
            krylov_dim: 400,
            seed: 0x5EED_CAFE,
        }
    }
}

impl LanczosConfig {
    pub(crate) fn basis_dim(&self, n: usize) -> usize {
        let cap = (BASIS_BUDGET / n.max(1)).max(48);
        self.krylov_dim.max(2).min(cap).min(n)
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub radius_estimate: f64,
    /// Largest `|<v, A v>|` over the unit vectors tried. For a symmetric
    /// operator this never exceeds the true spectral radius.
    pub radius_lower_bound: f64,
    /// Largest Ritz values, descending.
    pub top_eigenvalues: Vec<f64>,
    /// Matrix-vector products spent.
    pub iterations: usize,
    pub converged: bool,
    /// `(truncation_size, radius_estimate)` per sweep point; empty outside sweeps.
    pub truncation_trace: Vec<(usize, f64)>,
    /// Whether the last two sweep estimates agree within the sweep tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_converged: Option<bool>,
}

impl SpectralReport {
    fn zero() -> Self {
        Self {
            radius_estimate: 0.0,
            radius_lower_bound: 0.0,
            top_eigenvalues: vec![0.0],
            iterations: 0,
            converged: true,
            truncation_trace: Vec::new(),
            trace_converged: None,
        }
    }
}

pub(crate) fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = norm(&v);
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Lanczos recurrence with full reorthogonalization.
pub(crate) struct Lanczos<'a, F: Fn(&[f64], &mut [f64])> {
    matvec: &'a F,
    n: usize,
    /// q_0 .. q_k; holds one more vector than `alpha` unless exhausted.
    pub basis: Vec<Vec<f64>>,
    pub alpha: Vec<f64>,
    /// `beta[j]` couples `q_j` and `q_{j+1}`.
    pub beta: Vec<f64>,
    pub exhausted: bool,
    scale: f64,
    work: Vec<f64>,
}

impl<'a, F: Fn(&[f64], &mut [f64])> Lanczos<'a, F> {
    pub fn new(matvec: &'a F, start: Vec<f64>) -> Self {
        let n = start.len();
        let nrm = norm(&start);
        let q0 = start.into_iter().map(|x| x / nrm).collect();
        Self {
            matvec,
            n,
            basis: vec![q0],
            alpha: Vec::new(),
            beta: Vec::new(),
            exhausted: false,
            scale: 0.0,
            work: vec![0.0; n],
        }
    }

    pub fn steps(&self) -> usize {
        self.alpha.len()
    }

    fn orthogonalize(basis: &[Vec<f64>], w: &mut [f64]) {
        // two passes of classical Gram-Schmidt
        for _ in 0..2 {
            for q in basis {
                let c = dot(q, w);
                w.iter_mut().zip(q).for_each(|(x, qi)| *x -= c * qi);
            }
        }
    }

    /// Advance one step. Returns `false` once the Krylov space is invariant
    /// and no fresh direction is left.
    pub fn step(&mut self, rng: &mut ChaCha8Rng) -> bool {
        if self.exhausted {
            return false;
        }
        let j = self.alpha.len();
        let mut w = std::mem::take(&mut self.work);
        (self.matvec)(&self.basis[j], &mut w);
        let a = dot(&self.basis[j], &w);
        self.alpha.push(a);
        Self::orthogonalize(&self.basis, &mut w);
        let b = norm(&w);
        self.scale = self.scale.max(a.abs()).max(b);
        if b > 1e-10 * self.scale.max(f64::MIN_POSITIVE) {
            self.beta.push(b);
            self.basis.push(w.iter().map(|x| x / b).collect());
            self.work = w;
            return true;
        }
        // invariant subspace: continue with a fresh direction if one exists
        self.beta.push(0.0);
        self.work = w;
        if self.basis.len() < self.n {
            let mut fresh = random_unit(self.n, rng);
            Self::orthogonalize(&self.basis, &mut fresh);
            let fnorm = norm(&fresh);
            if fnorm > 1e-8 {
                self.basis
                    .push(fresh.into_iter().map(|x| x / fnorm).collect());
                return true;
            }
        }
        self.exhausted = true;
        false
    }

    /// Eigen-decomposition of the projected tridiagonal matrix, with the
    /// listed eigenvector rows.
    pub fn ritz(&self, rows: &[usize]) -> super::tridiag::TridiagEigen {
        let k = self.alpha.len();
        tridiag_eigen(&self.alpha, &self.beta[..k.saturating_sub(1)], rows)
    }

    /// Residual norm `‖A y − θ y‖` of the Ritz pair whose last eigenvector
    /// component is `last`.
    pub fn residual_bound(&self, last: f64) -> f64 {
        if self.exhausted {
            0.0
        } else {
            (self.beta.last().copied().unwrap_or(0.0) * last).abs()
        }
    }

    /// `V z` for a coefficient vector over the first `z.len()` basis vectors.
    pub fn combine(&self, z: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (q, &c) in self.basis.iter().zip(z) {
            if c != 0.0 {
                y.iter_mut().zip(q).for_each(|(yi, qi)| *yi += c * qi);
            }
        }
        y
    }
}

fn ensure_finite(op: &LinOp) -> Result<()> {
    if op.entries().any(|(_, _, v)| !v.is_finite()) {
        return Err(Error::input("operator has non-finite entries"));
    }
    Ok(())
}

/// Estimate the spectral radius of `op`.
///
/// Symmetric operators use restarted Lanczos with full reorthogonalization on
/// `A`; other operators get the norm `‖A‖` via Lanczos on `AᵀA`. If a restart
/// cycle stops improving, the remaining budget goes to power iteration on `A²`
/// (or `(AᵀA)²`) from the best vector found.
pub fn spectral_radius(op: &LinOp, cfg: &LanczosConfig) -> Result<SpectralReport> {
    if !(cfg.tol > 0.0) {
        return Err(Error::input("tolerance must be positive"));
    }
    ensure_finite(op)?;
    let n = op.size();
    if op.nnz() == 0 {
        return Ok(SpectralReport::zero());
    }
    let symmetric = op.is_symmetric();
    let scratch = std::cell::RefCell::new(vec![0.0; n]);
    let matvec = |x: &[f64], y: &mut [f64]| {
        if symmetric {
            op.apply_into(x, y);
        } else {
            let mut s = scratch.borrow_mut();
            op.apply_into(x, &mut s);
            op.apply_transpose_into(&s, y);
        }
    };
    let run = radius_core(&matvec, n, cfg);
    let to_radius = |x: f64| {
        if symmetric {
            x.abs()
        } else {
            x.max(0.0).sqrt()
        }
    };

    let lower = {
        let mut ay = vec![0.0; n];
        let y = &run.vector;
        let yy = dot(y, y);
        if symmetric {
            op.apply_into(y, &mut ay);
            (dot(y, &ay) / yy).abs()
        } else {
            op.apply_into(y, &mut ay);
            (dot(&ay, &ay) / yy).sqrt()
        }
    };
    // the recomputed Rayleigh quotient is the sharper value once they agree
    let ritz = to_radius(run.theta);
    let estimate = if (ritz - lower).abs() <= cfg.tol {
        lower
    } else {
        ritz.max(lower)
    };
    let mut top: Vec<f64> = if symmetric {
        run.ritz_values.clone()
    } else {
        run.ritz_values.iter().map(|&x| to_radius(x)).collect()
    };
    top.sort_by(|a, b| b.total_cmp(a));
    top.truncate(8);
    Ok(SpectralReport {
        radius_estimate: estimate,
        radius_lower_bound: lower,
        top_eigenvalues: top,
        iterations: run.matvecs,
        converged: run.converged,
        truncation_trace: Vec::new(),
        trace_converged: None,
    })
}

struct RadiusRun {
    theta: f64,
    vector: Vec<f64>,
    ritz_values: Vec<f64>,
    matvecs: usize,
    converged: bool,
}

fn radius_core<F: Fn(&[f64], &mut [f64])>(matvec: &F, n: usize, cfg: &LanczosConfig) -> RadiusRun {
    let mut rng = cfg.rng();
    let m_cap = cfg.basis_dim(n);
    let mut start = random_unit(n, &mut rng);
    let mut matvecs = 0usize;
    let mut best: Option<RadiusRun> = None;
    let mut prev_theta: Option<f64> = None;

    while matvecs < cfg.max_iter {
        let mut lz = Lanczos::new(matvec, start.clone());
        let budget = m_cap.min(cfg.max_iter - matvecs);
        let mut converged = false;
        let mut last_check: Option<f64> = None;
        while lz.steps() < budget {
            let more = lz.step(&mut rng);
            matvecs += 1;
            let k = lz.steps();
            if !more || k.is_multiple_of(10) || k == budget {
                let eig = lz.ritz(&[k - 1]);
                let idx = extreme_index(&eig.values);
                let res = lz.residual_bound(eig.rows[0][idx]);
                let theta = eig.values[idx];
                // residual bound, or a Ritz value that has stopped moving
                let stationary = last_check.is_some_and(|p| (theta - p).abs() <= cfg.tol * 1e-2);
                if lz.exhausted || res <= cfg.tol || stationary {
                    converged = true;
                    break;
                }
                last_check = Some(theta);
                if !more {
                    break;
                }
            }
        }
        let k = lz.steps();
        let all: Vec<usize> = (0..k).collect();
        let eig = lz.ritz(&all);
        let hi = k - 1;
        let idx = extreme_index(&eig.values);
        let column = |i: usize| -> Vec<f64> { (0..k).map(|r| eig.rows[r][i]).collect() };
        let vector = lz.combine(&column(idx));
        let theta = eig.values[idx];
        let run = RadiusRun {
            theta,
            vector,
            ritz_values: eig.values.clone(),
            matvecs,
            converged,
        };
        let previous_best = best.as_ref().map(|b| b.theta.abs());
        if previous_best.is_none_or(|b| theta.abs() >= b) {
            best = Some(run);
        }
        // successive restart cycles agreeing within tol also count as converged
        if converged
            || lz.exhausted
            || prev_theta.is_some_and(|p: f64| (theta.abs() - p.abs()).abs() <= cfg.tol)
        {
            if let Some(b) = best.as_mut() {
                b.converged = true;
            }
            break;
        }
        // restart from a blend of both spectral ends
        let mut next = column(idx);
        let other = if idx == hi { 0 } else { hi };
        if other != idx {
            let w = (eig.values[other].abs() / theta.abs().max(f64::MIN_POSITIVE)).min(1.0);
            next.iter_mut()
                .zip(column(other))
                .for_each(|(a, b)| *a += w * b);
        }
        start = lz.combine(&next);

        // a cycle that lost ground means restarting is not helping
        if previous_best.is_some_and(|b| theta.abs() < b - cfg.tol) && matvecs < cfg.max_iter {
            let b = best.take().unwrap();
            best = Some(power_fallback(matvec, b, cfg, &mut matvecs));
            break;
        }
        prev_theta = Some(theta);
    }
    let mut out = best.expect("at least one Lanczos cycle runs");
    out.matvecs = matvecs;
    out
}

fn extreme_index(values: &[f64]) -> usize {
    let last = values.len() - 1;
    if values[0].abs() > values[last].abs() {
        0
    } else {
        last
    }
}

/// Power iteration on the square of the operator, tracking the Rayleigh
/// quotient of the operator itself.
fn power_fallback<F: Fn(&[f64], &mut [f64])>(
    matvec: &F,
    mut best: RadiusRun,
    cfg: &LanczosConfig,
    matvecs: &mut usize,
) -> RadiusRun {
    let n = best.vector.len();
    let mut v = best.vector.clone();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);
    let mut av = vec![0.0; n];
    let mut aav = vec![0.0; n];
    while *matvecs + 2 <= cfg.max_iter {
        matvec(&v, &mut av);
        matvec(&av, &mut aav);
        *matvecs += 2;
        let rq = dot(&v, &av);
        let res = av
            .iter()
            .zip(&v)
            .map(|(a, x)| (a - rq * x).powi(2))
            .sum::<f64>()
            .sqrt();
        if rq.abs() > best.theta.abs() {
            best.theta = rq;
            best.vector = v.clone();
        }
        if res <= cfg.tol {
            best.converged = true;
            break;
        }
        let nn = norm(&aav);
        if nn == 0.0 {
            break;
        }
        v.iter_mut().zip(&aav).for_each(|(x, y)| *x = y / nn);
    }
    best
}
