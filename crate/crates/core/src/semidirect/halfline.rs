//! The `R ⋊ Z2` model: irreducibles `σ_r` for `r > 0`, each of dimension 2,
//! with measure `dr / 4π`, discretized on a midpoint grid.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    in_spectrum, residual, spectral_radius, DomainKind, LanczosConfig, LinOp, SpectrumDomain,
    Witness,
};
use crate::verdict::AmenabilityVerdict;

/// Index slack when converting real endpoints to cell indices.
const SNAP_EPS: f64 = 1e-9;

/// Cells `[jh, (j+1)h)` of `(0, max_r]`, sampled at midpoints `(j + ½) h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfLineGrid {
    step: f64,
    max_r: f64,
    cells: usize,
}

impl HalfLineGrid {
    pub fn new(step: f64, max_r: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) || !(max_r.is_finite() && max_r >= step) {
            return Err(Error::input(format!(
                "grid needs 0 < h <= max_r, got h = {step}, max_r = {max_r}"
            )));
        }
        let cells = (max_r / step + SNAP_EPS).floor() as usize;
        Ok(Self { step, max_r, cells })
    }

    /// Parse `h:max_r`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (h, m) = parse_pair(spec, "grid spec h:max_r")?;
        Self::new(h, m)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn max_r(&self) -> f64 {
        self.max_r
    }

    pub fn len(&self) -> usize {
        self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells == 0
    }

    pub fn point(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.step
    }

    /// Measure of one cell under `dr / 4π`.
    pub fn cell_mass(&self) -> f64 {
        self.step / (4.0 * PI)
    }

    pub fn domain(&self) -> Result<SpectrumDomain> {
        SpectrumDomain::uniform(
            DomainKind::UniformGrid,
            (0..self.cells).map(|j| self.point(j).to_string()).collect(),
            2.0,
            self.cell_mass(),
        )
    }
}

/// Parse an interval spec `a:b`.
pub fn parse_interval(spec: &str) -> Result<(f64, f64)> {
    parse_pair(spec, "interval spec a:b")
}

fn parse_pair(spec: &str, what: &str) -> Result<(f64, f64)> {
    let (a, b) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("{what}: expected `x:y`, got {spec:?}")))?;
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("{what}: bad number {s:?}")))
    };
    Ok((num(a)?, num(b)?))
}

/// A shift `r` moved to the nearest positive multiple of the grid step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnappedShift {
    pub requested: f64,
    pub steps: usize,
    pub snapped: f64,
    pub delta: f64,
}

fn snap(grid: &HalfLineGrid, r: f64) -> Result<SnappedShift> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::input(format!("shift r must be positive, got {r}")));
    }
    let steps = ((r / grid.step).round() as usize).max(1);
    let snapped = steps as f64 * grid.step;
    if steps >= grid.cells || snapped >= grid.max_r {
        return Err(Error::input(format!(
            "shift r = {r} snaps to {snapped}, which leaves no point of (0, {}] on the grid",
            grid.max_r
        )));
    }
    Ok(SnappedShift {
        requested: r,
        steps,
        snapped,
        delta: snapped - r,
    })
}

/// Entries of `L_r`, `L⁺_{-r}` and `L⁻_{-r}` for a shift of `k` cells:
/// `(L_r f)(s) = f(s − r)`, `(L⁺ f)(s) = f(s + r)`, `(L⁻ f)(s) = f(r − s)`,
/// each dropped when the argument leaves the grid.
fn shift_entries(n: usize, k: usize) -> [Vec<(usize, usize)>; 3] {
    let mut back = Vec::new();
    let mut fwd = Vec::new();
    let mut refl = Vec::new();
    for i in 0..n {
        if i >= k {
            back.push((i, i - k));
        }
        if i + k < n {
            fwd.push((i, i + k));
        }
        if i < k && k - 1 - i < n {
            refl.push((i, k - 1 - i));
        }
    }
    [back, fwd, refl]
}

fn entries_clipped(n: usize, kept: usize) -> usize {
    3 * n - kept
}

/// `L_{σ_r} = L_r + L⁺_{-r} + L⁻_{-r}` on the grid, with `r` snapped to a
/// multiple of the step.
pub fn sigma_r_operator(grid: &HalfLineGrid, r: f64) -> Result<(LinOp, SnappedShift)> {
    let shift = snap(grid, r)?;
    let parts = shift_entries(grid.cells, shift.steps);
    let kept: usize = parts.iter().map(Vec::len).sum();
    let triplets = parts
        .into_iter()
        .flatten()
        .map(|(i, j)| (i, j, 1.0))
        .collect();
    let op = LinOp::from_triplets(
        grid.domain()?,
        triplets,
        true,
        0.0,
        entries_clipped(grid.cells, kept),
    )?;
    Ok((op, shift))
}

/// The three 0/1 pieces `[L_r, L⁺_{-r}, L⁻_{-r}]` of [`sigma_r_operator`].
pub fn sigma_r_components(grid: &HalfLineGrid, r: f64) -> Result<[LinOp; 3]> {
    let shift = snap(grid, r)?;
    let [a, b, c] = shift_entries(grid.cells, shift.steps);
    let build = |e: Vec<(usize, usize)>, sym: bool| -> Result<LinOp> {
        let t = e.into_iter().map(|(i, j)| (i, j, 1.0)).collect();
        LinOp::from_triplets(grid.domain()?, t, sym, 0.0, 0)
    };
    Ok([build(a, false)?, build(b, false)?, build(c, true)?])
}

/// `L_nu` for `nu = 2 χ_Ω`, `Ω = (a, b]`, and its target `‖nu‖_1 = 2 μ(Ω)`.
#[derive(Debug, Clone)]
pub struct IntervalOperator {
    pub op: LinOp,
    /// Ω after snapping outward to multiples of the step.
    pub snapped: (f64, f64),
    /// Quadrature nodes `r_k = k h`, one per cell of the snapped Ω.
    pub nodes: usize,
    pub target: f64,
}

/// `L_nu = ∫_Ω L_{σ_r} dr / 4π` by a one-node-per-cell rule.
///
/// Ω is snapped outward to `(k_a h, k_b h]`; the cell `((k−1)h, kh]` uses the
/// node `r = kh`, the only grid-compatible shift in that cell, with mass
/// `h / 4π`. The target `2 μ(Ω_snapped)` therefore equals the interior row sum.
pub fn nu_interval_operator(grid: &HalfLineGrid, a: f64, b: f64) -> Result<IntervalOperator> {
    if !(a >= 0.0 && b > a && b <= grid.max_r + SNAP_EPS * grid.step) {
        return Err(Error::input(format!(
            "interval ({a}, {b}] must satisfy 0 <= a < b <= {}",
            grid.max_r
        )));
    }
    let h = grid.step;
    let ka = (a / h + SNAP_EPS).floor() as usize;
    let kb = ((b / h - SNAP_EPS).ceil() as usize).clamp(ka + 1, grid.cells);
    if kb <= ka {
        return Err(Error::input("interval is degenerate after snapping"));
    }
    let w = grid.cell_mass();
    let n = grid.cells;
    let mut triplets = Vec::new();
    let mut clipped = 0;
    for k in ka + 1..=kb {
        let parts = shift_entries(n, k);
        let kept: usize = parts.iter().map(Vec::len).sum();
        clipped += entries_clipped(n, kept);
        triplets.extend(parts.into_iter().flatten().map(|(i, j)| (i, j, w)));
    }
    let op = LinOp::from_triplets(grid.domain()?, triplets, true, 1e-12, clipped)?;
    let nodes = kb - ka;
    Ok(IntervalOperator {
        op,
        snapped: (ka as f64 * h, kb as f64 * h),
        nodes,
        target: 2.0 * nodes as f64 * w,
    })
}

/// Grid sampling of `f_m = √(4π/m) χ_[m, 2m]`, renormalized to unit norm in
/// `L²(dr / 4π)`.
pub fn window_witness(grid: &HalfLineGrid, m: f64) -> Result<Vec<f64>> {
    if !(m > 0.0) || 2.0 * m > grid.max_r + SNAP_EPS {
        return Err(Error::input(format!(
            "witness window [m, 2m] = [{m}, {}] must lie in (0, {}]",
            2.0 * m,
            grid.max_r
        )));
    }
    let h = grid.step;
    let lo = (m / h - 0.5 - SNAP_EPS).ceil().max(0.0) as usize;
    let hi = ((2.0 * m / h - 0.5 + SNAP_EPS).floor() as usize).min(grid.cells - 1);
    if hi < lo {
        return Err(Error::input(format!(
            "window [{m}, {}] contains no grid point",
            2.0 * m
        )));
    }
    let count = hi - lo + 1;
    let value = (4.0 * PI / (h * count as f64)).sqrt();
    Ok((0..grid.cells)
        .map(|j| if (lo..=hi).contains(&j) { value } else { 0.0 })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalOutcome {
    pub verdict: AmenabilityVerdict,
    pub snapped: (f64, f64),
    /// `(m, ‖L_nu f_m − ‖nu‖_1 f_m‖)` for each requested window.
    pub witness_residuals: Vec<(f64, f64)>,
}

/// Membership test for `‖nu‖_1 = 2 μ(Ω)` in the spectrum of `L_nu`, using the
/// windows `f_m` as witnesses alongside the Lanczos vectors.
pub fn interval_criterion(
    grid: &HalfLineGrid,
    a: f64,
    b: f64,
    ms: &[f64],
    tol: f64,
    cfg: &LanczosConfig,
) -> Result<IntervalOutcome> {
    let interval = nu_interval_operator(grid, a, b)?;
    let mut witnesses = Vec::with_capacity(ms.len());
    let mut witness_residuals = Vec::with_capacity(ms.len());
    for &m in ms {
        let v = window_witness(grid, m)?;
        let r = residual(&interval.op, interval.target, &v).unwrap_or(f64::INFINITY);
        witness_residuals.push((m, r));
        witnesses.push(Witness::new(format!("f_m-{m}"), v));
    }
    let cert = in_spectrum(&interval.op, interval.target, tol, &witnesses, cfg)?;
    let spectral = spectral_radius(&interval.op, cfg)?;
    Ok(IntervalOutcome {
        verdict: AmenabilityVerdict::from_certificate(cert, spectral),
        snapped: interval.snapped,
        witness_residuals,
    })
}
