use crate::error::{Error, Result};
use crate::spectral::{
    in_spectrum, spectral_radius, DomainKind, LanczosConfig, LinOp, SpectrumDomain, Witness,
};
use crate::verdict::AmenabilityVerdict;

use super::ring::FusionRing;

fn check_trunc(ring: &FusionRing, trunc: usize) -> Result<()> {
    if trunc == 0 || trunc > ring.len() {
        return Err(Error::input(format!(
            "truncation {trunc} must be between 1 and the {} available labels",
            ring.len()
        )));
    }
    Ok(())
}

/// Domain of the first `trunc` labels, each an atom of mass 1.
pub fn label_domain(ring: &FusionRing, trunc: usize) -> Result<SpectrumDomain> {
    check_trunc(ring, trunc)?;
    SpectrumDomain::new(
        DomainKind::DiscreteLabels,
        ring.labels()[..trunc].to_vec(),
        (0..trunc).map(|i| ring.dim(i)).collect(),
        vec![1.0; trunc],
    )
}

fn kappa_triplets(ring: &FusionRing, k: usize, trunc: usize) -> (Vec<(usize, usize, f64)>, usize) {
    let mut triplets = Vec::new();
    let mut clipped = 0usize;
    for a in 0..trunc {
        let (kept, lost) = ring.decompose_truncated(k, a, trunc);
        clipped += lost as usize;
        triplets.extend(kept.into_iter().map(|(b, m)| (b, a, m as f64)));
    }
    (triplets, clipped)
}

/// The fusion operator of `kappa`: `(L_kappa)_{b a} = mult(b ⊂ kappa ⊗ a)`
/// on the first `trunc` labels, outputs past the truncation dropped.
pub fn kappa_operator(ring: &FusionRing, kappa: &str, trunc: usize) -> Result<LinOp> {
    let k = ring.index(kappa)?;
    let domain = label_domain(ring, trunc)?;
    let (triplets, clipped) = kappa_triplets(ring, k, trunc);
    LinOp::from_triplets(domain, triplets, ring.conj(k) == k, 0.0, clipped)
}

fn omega_indices(ring: &FusionRing, omega: &[&str]) -> Result<Vec<usize>> {
    if omega.is_empty() {
        return Err(Error::input("omega must contain at least one label"));
    }
    let mut idx = omega
        .iter()
        .map(|l| ring.index(l))
        .collect::<Result<Vec<_>>>()?;
    idx.sort_unstable();
    idx.dedup();
    Ok(idx)
}

fn is_self_conjugate(ring: &FusionRing, omega: &[usize]) -> bool {
    omega
        .iter()
        .all(|&k| omega.binary_search(&ring.conj(k)).is_ok())
}

/// `L_nu = Σ_{kappa ∈ omega} L_kappa` for `nu = dim · χ_omega` (atoms of mass 1).
pub fn nu_operator(ring: &FusionRing, omega: &[&str], trunc: usize) -> Result<LinOp> {
    let idx = omega_indices(ring, omega)?;
    let domain = label_domain(ring, trunc)?;
    let mut triplets = Vec::new();
    let mut clipped = 0;
    for &k in &idx {
        let (t, c) = kappa_triplets(ring, k, trunc);
        triplets.extend(t);
        clipped += c;
    }
    LinOp::from_triplets(
        domain,
        triplets,
        is_self_conjugate(ring, &idx),
        0.0,
        clipped,
    )
}

/// `‖nu‖_1 = Σ_{a ∈ omega} dim(a)`.
pub fn omega_mass(ring: &FusionRing, omega: &[&str]) -> Result<f64> {
    Ok(omega_indices(ring, omega)?
        .iter()
        .map(|&a| ring.dim(a))
        .sum())
}

/// Dimension bookkeeping for `kappa ⊗ σ_omega`:
/// `dim(kappa) · Σ_{a∈omega} dim(a) = Σ_{a∈omega} Σ_b mult(b ⊂ kappa⊗a) dim(b)`.
///
/// Exact in integer arithmetic when every dimension involved is a known
/// integer, otherwise to `1e-9` relative.
pub fn dim_bookkeeping_check(ring: &FusionRing, kappa: &str, omega: &[&str]) -> Result<bool> {
    let k = ring.index(kappa)?;
    let idx = omega_indices(ring, omega)?;
    Ok(idx.iter().all(|&a| ring.dims_multiply(k, a)))
}

/// Fusion-ring coamenability test: is `Σ_{a∈omega} dim(a)` within `tol` of the
/// spectrum of `L_nu` truncated to `trunc` labels?
///
/// Witnesses are normalized indicators of the first `m + 1` labels for
/// `m ∈ {trunc/8, trunc/4, trunc/2}`, plus the Lanczos vectors tried by
/// [`in_spectrum`].
pub fn coamenability_test(
    ring: &FusionRing,
    omega: &[&str],
    trunc: usize,
    tol: f64,
    cfg: &LanczosConfig,
) -> Result<AmenabilityVerdict> {
    if trunc < 10 {
        return Err(Error::input("coamenability test needs truncation >= 10"));
    }
    let idx = omega_indices(ring, omega)?;
    if !is_self_conjugate(ring, &idx) {
        return Err(Error::input(
            "omega must be closed under conjugation for L_nu to be self-adjoint",
        ));
    }
    let op = nu_operator(ring, omega, trunc)?;
    let target = omega_mass(ring, omega)?;
    let witnesses: Vec<Witness> = [trunc / 8, trunc / 4, trunc / 2]
        .iter()
        .map(|&m| {
            let w = 1.0 / ((m + 1) as f64).sqrt();
            let v = (0..trunc).map(|i| if i <= m { w } else { 0.0 }).collect();
            Witness::new(format!("level-ball-{m}"), v)
        })
        .collect();
    let cert = in_spectrum(&op, target, tol, &witnesses, cfg)?;
    let spectral = spectral_radius(&op, cfg)?;
    Ok(AmenabilityVerdict::from_certificate(cert, spectral))
}
