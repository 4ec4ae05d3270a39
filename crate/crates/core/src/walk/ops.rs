use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::group::{BallTruncation, Element, GroupKind, GroupModel};
use crate::error::{Error, Result};
use crate::spectral::{
    in_spectrum, spectral_radius, DomainKind, LanczosConfig, LinOp, SpectralReport, SpectrumDomain,
    Witness,
};
use crate::verdict::AmenabilityVerdict;

/// Which side the shift acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `f ↦ f(s⁻¹ x)`
    Left,
    /// `f ↦ f(x s⁻¹)`
    Right,
}

fn ball_domain(group: &GroupModel, ball: &BallTruncation) -> Result<SpectrumDomain> {
    SpectrumDomain::uniform(
        DomainKind::DiscreteLabels,
        ball.elements().iter().map(|x| group.format(x)).collect(),
        1.0,
        1.0,
    )
}

fn check_weights(
    group: &GroupModel,
    weights: &[(Element, f64)],
    allowed: &dyn Fn(&Element) -> bool,
) -> Result<()> {
    for (i, (s, w)) in weights.iter().enumerate() {
        if !group.is_valid(s) || !allowed(s) {
            return Err(Error::input(format!(
                "weight on {} which is not a generator of {}",
                group.format(s),
                group.name()
            )));
        }
        if !(*w >= 0.0) || !w.is_finite() {
            return Err(Error::input(format!(
                "weight {w} on {} is not a nonnegative real",
                group.format(s)
            )));
        }
        if weights[..i].iter().any(|(t, _)| t == s) {
            return Err(Error::input(format!(
                "duplicate weight on {}",
                group.format(s)
            )));
        }
    }
    Ok(())
}

fn inversion_symmetric(group: &GroupModel, weights: &[(Element, f64)]) -> bool {
    weights.iter().all(|(s, w)| {
        let inv = group.inverse(s);
        let w_inv = weights
            .iter()
            .find(|(t, _)| *t == inv)
            .map_or(0.0, |(_, v)| *v);
        w_inv == *w
    })
}

/// `Σ_s coeff(s) · shift_s` compressed to the ball, zero-padded.
fn shift_operator(
    group: &GroupModel,
    coeffs: &[(Element, f64)],
    ball: &BallTruncation,
    side: Side,
    symmetric: bool,
) -> Result<LinOp> {
    let domain = ball_domain(group, ball)?;
    let mut triplets = Vec::with_capacity(ball.len() * coeffs.len());
    let mut clipped = 0;
    let shifts: Vec<(Element, f64)> = coeffs
        .iter()
        .filter(|(_, w)| *w != 0.0)
        .map(|(s, w)| (group.inverse(s), *w))
        .collect();
    for (i, x) in ball.elements().iter().enumerate() {
        for (s_inv, w) in &shifts {
            let y = match side {
                Side::Left => group.multiply(s_inv, x),
                Side::Right => group.multiply(x, s_inv),
            };
            match ball.index_of(&y) {
                Some(j) => triplets.push((i, j, *w)),
                None => clipped += 1,
            }
        }
    }
    LinOp::from_triplets(domain, triplets, symmetric, 0.0, clipped)
}

/// Weighted left-regular convolution `(A f)(x) = Σ_s w(s) f(s⁻¹ x)` on the
/// ball. Weights may sit on generators or on the identity.
pub fn cayley_operator(
    group: &GroupModel,
    weights: &[(Element, f64)],
    ball: &BallTruncation,
) -> Result<LinOp> {
    let gens = group.generators();
    let id = group.identity();
    check_weights(group, weights, &|s| *s == id || gens.contains(s))?;
    shift_operator(
        group,
        weights,
        ball,
        Side::Left,
        inversion_symmetric(group, weights),
    )
}

/// Right-shift form with the modular weight:
/// `Σ_ζ density(ζ) · δ(ζ)^{-(p-1)/2} · R_{ζ⁻¹}`, where `(R_{ζ⁻¹} f)(x) = f(x ζ⁻¹)`.
pub fn modular_weight_operator(
    group: &GroupModel,
    p: f64,
    density: &[(Element, f64)],
    ball: &BallTruncation,
) -> Result<LinOp> {
    if !p.is_finite() {
        return Err(Error::input("modular exponent must be finite"));
    }
    check_weights(group, density, &|z| ball.index_of(z).is_some())?;
    let coeffs: Vec<(Element, f64)> = density
        .iter()
        .map(|(z, w)| {
            (
                z.clone(),
                w * group.modular_function(z).powf(-(p - 1.0) / 2.0),
            )
        })
        .collect();
    shift_operator(
        group,
        &coeffs,
        ball,
        Side::Right,
        inversion_symmetric(group, &coeffs),
    )
}

/// Radius data at one ball size, normalized by `|omega|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusPoint {
    pub radius: usize,
    pub size: usize,
    pub normalized_estimate: f64,
    pub normalized_lower_bound: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KestenOutcome {
    /// `certified` here means the normalized lower bound reached `1 − tol`.
    pub verdict: AmenabilityVerdict,
    pub trace: Vec<RadiusPoint>,
    /// Best normalized lower bound over the sweep.
    pub normalized_radius: f64,
}

/// Kesten-type test: does `Σ_{s∈omega} λ_s` reach norm `|omega|`?
///
/// Runs a ball-radius sweep of the spectral radius. Certified iff some ball
/// gives a normalized lower bound `≥ 1 − tol`. A residual certificate at
/// target `|omega|` on the largest ball is attached for reference.
pub fn kesten_test(
    group: &GroupModel,
    omega: &[Element],
    radii: &[usize],
    tol: f64,
    cfg: &LanczosConfig,
) -> Result<KestenOutcome> {
    if omega.is_empty() {
        return Err(Error::input("omega must be non-empty"));
    }
    if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input(
            "radii must be non-empty and strictly increasing",
        ));
    }
    if omega.iter().any(|s| !omega.contains(&group.inverse(s))) {
        return Err(Error::input("omega must be closed under inverses"));
    }
    let weights: Vec<(Element, f64)> = omega.iter().map(|s| (s.clone(), 1.0)).collect();
    let target = omega.len() as f64;

    let runs: Vec<Result<(BallTruncation, LinOp, SpectralReport)>> = radii
        .par_iter()
        .map(|&r| {
            let ball = BallTruncation::new(group, r);
            let op = cayley_operator(group, &weights, &ball).map_err(|e| Error::Build {
                size: r,
                source: Box::new(e),
            })?;
            let rep = spectral_radius(&op, cfg)?;
            Ok((ball, op, rep))
        })
        .collect();
    let mut trace = Vec::with_capacity(radii.len());
    let mut sweep = Vec::with_capacity(radii.len());
    let mut last = None;
    for (run, &r) in runs.into_iter().zip(radii) {
        let (ball, op, rep) = run?;
        trace.push(RadiusPoint {
            radius: r,
            size: ball.len(),
            normalized_estimate: rep.radius_estimate / target,
            normalized_lower_bound: rep.radius_lower_bound / target,
            converged: rep.converged,
        });
        sweep.push((ball.len(), rep.radius_estimate));
        last = Some((ball, op, rep));
    }
    let (ball, op, mut spectral) = last.expect("radii is non-empty");
    spectral.truncation_trace = sweep;
    let normalized_radius = trace
        .iter()
        .map(|p| p.normalized_lower_bound)
        .fold(0.0, f64::max);

    let witnesses = walk_witnesses(group, &ball);
    let cert = in_spectrum(&op, target, tol * target, &witnesses, cfg)?;
    let mut verdict = AmenabilityVerdict::from_certificate(cert, spectral);
    verdict.tolerance = tol;
    verdict.certified = normalized_radius >= 1.0 - tol;
    Ok(KestenOutcome {
        verdict,
        trace,
        normalized_radius,
    })
}

/// Ball indicators at half and full radius, plus a product-cosine bump on the
/// largest cube inside the ball for lattices.
fn walk_witnesses(group: &GroupModel, ball: &BallTruncation) -> Vec<Witness> {
    let mut out = Vec::new();
    for r in [ball.radius() / 2, ball.radius()] {
        let v = ball
            .elements()
            .iter()
            .map(|x| f64::from(u8::from(group.word_length(x) <= r)))
            .collect();
        out.push(Witness::new(format!("ball-{r}"), v));
    }
    if let GroupKind::Lattice { dim } = group.kind {
        if let Some(half) = ball.radius().checked_div(dim) {
            let half = half as i32;
            let scale = std::f64::consts::PI / (2 * half + 2) as f64;
            let v = ball
                .elements()
                .iter()
                .map(|x| {
                    if x.0.iter().all(|c| c.abs() <= half) {
                        x.0.iter().map(|&c| (scale * c as f64).cos()).product()
                    } else {
                        0.0
                    }
                })
                .collect();
            out.push(Witness::new(format!("cosine-cube-{half}"), v));
        }
    }
    out
}
