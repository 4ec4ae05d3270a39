use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::lanczos::{dot, norm, random_unit, Lanczos, LanczosConfig};
use super::linop::LinOp;
use crate::error::{Error, Result};

/// A named candidate approximate eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub id: String,
    pub vector: Vec<f64>,
}

impl Witness {
    pub fn new(id: impl Into<String>, vector: Vec<f64>) -> Self {
        Self {
            id: id.into(),
            vector,
        }
    }
}

/// Residual evidence that `target` lies near the spectrum of a symmetric
/// operator. A certificate never claims non-membership; `gap_hint` only
/// reports how far the nearest computed eigenvalue sits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipCertificate {
    pub target: f64,
    pub tolerance: f64,
    /// `min ‖A v − target v‖ / ‖v‖` over every vector tried.
    pub best_residual: f64,
    pub witness_id: String,
    pub certified: bool,
    /// Distance from `target` to the nearest Ritz value, when Lanczos ran.
    pub gap_hint: Option<f64>,
    /// Residual of each vector tried, in evaluation order.
    pub residuals: Vec<(String, f64)>,
    #[serde(skip)]
    pub witness: Vec<f64>,
}

/// `‖A v − t v‖ / ‖v‖`, or `None` for the zero vector.
pub fn residual(op: &LinOp, target: f64, v: &[f64]) -> Option<f64> {
    let nv = norm(v);
    if nv == 0.0 || !nv.is_finite() {
        return None;
    }
    let mut av = vec![0.0; v.len()];
    op.apply_into(v, &mut av);
    let r = av
        .iter()
        .zip(v)
        .map(|(a, x)| (a - target * x).powi(2))
        .sum::<f64>()
        .sqrt();
    Some(r / nv)
}

/// Test whether `target` is within `tol` of the spectrum of `op`.
///
/// Tries every supplied witness, then two vectors from a single Lanczos run:
/// the Ritz vector whose Ritz value is nearest `target`, and the Krylov vector
/// minimizing `‖(A − target) y‖` (smallest singular vector of the projected
/// `(k+1) × k` matrix). Residuals are recomputed against `op` directly.
pub fn in_spectrum(
    op: &LinOp,
    target: f64,
    tol: f64,
    witnesses: &[Witness],
    cfg: &LanczosConfig,
) -> Result<MembershipCertificate> {
    if !op.is_symmetric() {
        return Err(Error::input(
            "spectrum membership needs a symmetric operator; residuals do not bound the spectrum otherwise",
        ));
    }
    if !(tol > 0.0) || !target.is_finite() {
        return Err(Error::input("tolerance must be positive and target finite"));
    }
    let n = op.size();
    let mut residuals = Vec::new();
    let mut best: Option<(f64, String, Vec<f64>)> = None;
    let mut consider = |id: String, v: Vec<f64>, residuals: &mut Vec<(String, f64)>| {
        if let Some(r) = residual(op, target, &v) {
            residuals.push((id.clone(), r));
            if best.as_ref().is_none_or(|b| r < b.0) {
                best = Some((r, id, v));
            }
        }
    };
    for w in witnesses {
        if w.vector.len() != n {
            return Err(Error::input(format!(
                "witness {} has length {} but the operator has size {n}",
                w.id,
                w.vector.len()
            )));
        }
        consider(w.id.clone(), w.vector.clone(), &mut residuals);
    }

    let mut gap_hint = None;
    {
        let mut rng = cfg.rng();
        let matvec = |x: &[f64], y: &mut [f64]| op.apply_into(x, y);
        let mut lz = Lanczos::new(&matvec, random_unit(n, &mut rng));
        let m = cfg.basis_dim(n);
        while lz.steps() < m && lz.step(&mut rng) {}
        let k = lz.steps();
        if k > 0 {
            let all: Vec<usize> = (0..k).collect();
            let eig = lz.ritz(&all);
            let (near, gap) = eig
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| (i, (v - target).abs()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            gap_hint = Some(gap);
            let z: Vec<f64> = (0..k).map(|r| eig.rows[r][near]).collect();
            consider(format!("lanczos-ritz-{k}"), lz.combine(&z), &mut residuals);

            if let Some(y) = refined_vector(&lz, target) {
                consider(
                    format!("lanczos-refined-{k}"),
                    lz.combine(&y),
                    &mut residuals,
                );
            }
        }
    }

    let (best_residual, witness_id, witness) =
        best.unwrap_or((f64::INFINITY, String::new(), Vec::new()));
    Ok(MembershipCertificate {
        target,
        tolerance: tol,
        best_residual,
        witness_id,
        certified: best_residual <= tol,
        gap_hint,
        residuals,
        witness,
    })
}

/// Coefficients of the unit Krylov vector minimizing `‖(A − t) V y‖`.
fn refined_vector<F: Fn(&[f64], &mut [f64])>(lz: &Lanczos<'_, F>, target: f64) -> Option<Vec<f64>> {
    let k = lz.steps();
    let rows = if lz.exhausted { k } else { k + 1 };
    let mut b = DMatrix::<f64>::zeros(rows, k);
    for j in 0..k {
        b[(j, j)] = lz.alpha[j] - target;
        if j + 1 < rows {
            b[(j + 1, j)] = lz.beta[j];
        }
        if j + 1 < k {
            b[(j, j + 1)] = lz.beta[j];
        }
    }
    let svd = b.svd(false, true);
    let v_t = svd.v_t?;
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))?;
    let y: Vec<f64> = v_t.row(idx).iter().copied().collect();
    (dot(&y, &y) > 0.0).then_some(y)
}
