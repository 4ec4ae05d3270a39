use rayon::prelude::*;

use super::lanczos::{spectral_radius, LanczosConfig, SpectralReport};
use super::linop::LinOp;
use crate::error::{Error, Result};

/// Rebuild an operator at each truncation parameter and record its radius.
///
/// Sizes are processed concurrently; results are merged in size order. The
/// returned report is the one for the largest size, with the full
/// `(truncation_size, radius_estimate)` trace attached and `trace_converged`
/// set when the last two estimates differ by less than `tol`.
pub fn truncation_sweep<B>(
    builder: B,
    sizes: &[usize],
    tol: f64,
    cfg: &LanczosConfig,
) -> Result<SpectralReport>
where
    B: Fn(usize) -> Result<LinOp> + Sync,
{
    if sizes.is_empty() {
        return Err(Error::input("truncation sweep needs at least one size"));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input("truncation sizes must be strictly increasing"));
    }
    let results: Vec<Result<(usize, SpectralReport)>> = sizes
        .par_iter()
        .map(|&size| {
            let op = builder(size).map_err(|e| Error::Build {
                size,
                source: Box::new(e),
            })?;
            let rep = spectral_radius(&op, cfg)?;
            Ok((op.size(), rep))
        })
        .collect();

    let mut trace = Vec::with_capacity(sizes.len());
    let mut last = None;
    for r in results {
        let (n, rep) = r?;
        trace.push((n, rep.radius_estimate));
        last = Some(rep);
    }
    let mut report = last.expect("sizes is non-empty");
    report.trace_converged = match trace.as_slice() {
        [.., (_, a), (_, b)] => Some((a - b).abs() < tol),
        _ => None,
    };
    report.truncation_trace = trace;
    Ok(report)
}
