//! The bicrossed product of `Z × Z` with `Z2` (flip action): irreducibles are
//! unordered pairs `[(g, g')]` with `g != g'`, each of dimension 2.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    in_spectrum, spectral_radius, DomainKind, LanczosConfig, LinOp, MembershipCertificate,
    SpectralReport, SpectrumDomain, Witness,
};
use crate::verdict::AmenabilityVerdict;

/// A class `[(a, b)]` stored by its representative with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairClass {
    pub lo: i64,
    pub hi: i64,
}

impl PairClass {
    /// Class of `(a, b)`; `None` on the diagonal.
    pub fn of(a: i64, b: i64) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Self { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Some(Self { lo: b, hi: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    /// `[(g, g')] ↦ [(−g, −g')]`.
    pub fn conj(self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    /// Parse `r,r'`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (a, b) = spec
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("shift pair {spec:?} is not `r,r'`")))?;
        let num = |s: &str| {
            s.trim()
                .trim_matches(|c| c == '(' || c == ')' || c == '[' || c == ']')
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer in {spec:?}")))
        };
        Self::of(num(a)?, num(b)?).ok_or_else(|| {
            Error::input(format!(
                "pair {spec:?} lies on the diagonal, which has measure zero"
            ))
        })
    }
}

impl std::fmt::Display for PairClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[({},{})]", self.lo, self.hi)
    }
}

/// Classes `[(a, b)]` with `a, b ∈ [−B, B]`, `a != b`, in lexicographic order
/// of representatives. Each class carries mass 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymLatticePair {
    bound: i64,
    /// `offsets[a + B]` = index of the first class with `lo = a`.
    offsets: Vec<usize>,
    len: usize,
}

impl SymLatticePair {
    pub fn new(bound: i64) -> Result<Self> {
        if bound < 1 {
            return Err(Error::input("lattice bound must be at least 1"));
        }
        let mut offsets = Vec::with_capacity((2 * bound + 1) as usize);
        let mut acc = 0usize;
        for a in -bound..=bound {
            offsets.push(acc);
            acc += (bound - a) as usize;
        }
        Ok(Self {
            bound,
            offsets,
            len: acc,
        })
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn index_of(&self, c: PairClass) -> Option<usize> {
        let b = self.bound;
        if c.lo < -b || c.hi > b || c.lo >= c.hi {
            return None;
        }
        Some(self.offsets[(c.lo + b) as usize] + (c.hi - c.lo - 1) as usize)
    }

    pub fn classes(&self) -> impl Iterator<Item = PairClass> + '_ {
        let b = self.bound;
        (-b..=b).flat_map(move |lo| (lo + 1..=b).map(move |hi| PairClass { lo, hi }))
    }

    pub fn domain(&self) -> Result<SpectrumDomain> {
        SpectrumDomain::uniform(
            DomainKind::DiscreteLabels,
            self.classes().map(|c| c.to_string()).collect(),
            2.0,
            1.0,
        )
    }
}

/// Modular function of `Z × Z`.
fn modular(_r: i64, _r2: i64) -> f64 {
    1.0
}

fn shift_triplets(
    pairs: &SymLatticePair,
    shift: PairClass,
    p: f64,
) -> (Vec<(usize, usize, f64)>, usize) {
    let (r, r2) = (shift.lo, shift.hi);
    let prefactor = modular(r, r2).powf((1.0 - p) / 2.0);
    let mut triplets = Vec::with_capacity(2 * pairs.len());
    let mut clipped = 0;
    for (row, c) in pairs.classes().enumerate() {
        let (g, g2) = (c.lo, c.hi);
        for target in [PairClass::of(g - r, g2 - r2), PairClass::of(g - r2, g2 - r)] {
            match target.and_then(|t| pairs.index_of(t)) {
                Some(col) => triplets.push((row, col, prefactor)),
                None => clipped += 1,
            }
        }
    }
    (triplets, clipped)
}

/// `(L f)([(g,g')]) = δ(r,r')^{(1−p)/2} (f([(g−r, g'−r')]) + f([(g−r', g'−r)]))`,
/// zero-padded at the lattice bound and on the diagonal.
pub fn bicrossed_operator(pairs: &SymLatticePair, shift: (i64, i64), p: f64) -> Result<LinOp> {
    let class = PairClass::of(shift.0, shift.1)
        .ok_or_else(|| Error::input("shift pair (r, r') needs r != r'"))?;
    let (triplets, clipped) = shift_triplets(pairs, class, p);
    LinOp::from_triplets(pairs.domain()?, triplets, false, 0.0, clipped)
}

fn normalize_omega(omega: &[PairClass]) -> Result<Vec<PairClass>> {
    if omega.is_empty() {
        return Err(Error::input("omega must contain at least one class"));
    }
    let mut out = omega.to_vec();
    if out.iter().any(|c| c.lo >= c.hi) {
        return Err(Error::input("omega classes must be off the diagonal"));
    }
    out.sort_unstable();
    out.dedup();
    if out.iter().any(|c| out.binary_search(&c.conj()).is_err()) {
        return Err(Error::input(
            "omega must be closed under [(g,g')] ↦ [(−g,−g')]",
        ));
    }
    Ok(out)
}

/// `Σ_{c ∈ omega} L_c` (unit class masses, `nu = dim χ_omega`).
pub fn bicrossed_nu_operator(pairs: &SymLatticePair, omega: &[PairClass], p: f64) -> Result<LinOp> {
    let omega = normalize_omega(omega)?;
    let mut triplets = Vec::new();
    let mut clipped = 0;
    for &c in &omega {
        let (t, k) = shift_triplets(pairs, c, p);
        triplets.extend(t);
        clipped += k;
    }
    LinOp::from_triplets(pairs.domain()?, triplets, true, 0.0, clipped)
}

/// Indicator of the pair box `[−M, M]²` and the lowest Dirichlet mode of the
/// same box-triangle, `sin(πx/L) sin(2πy/L) − sin(2πx/L) sin(πy/L)`.
pub fn folner_witnesses(pairs: &SymLatticePair, m: i64) -> Vec<Witness> {
    let m = m.clamp(1, pairs.bound());
    let l = (2 * m + 2) as f64;
    let inside = |c: &PairClass| c.lo >= -m && c.hi <= m;
    let pi = std::f64::consts::PI;
    let indicator = pairs
        .classes()
        .map(|c| f64::from(u8::from(inside(&c))))
        .collect();
    let profile = pairs
        .classes()
        .map(|c| {
            if !inside(&c) {
                return 0.0;
            }
            let x = (c.lo + m + 1) as f64;
            let y = (c.hi + m + 1) as f64;
            (pi * x / l).sin() * (2.0 * pi * y / l).sin()
                - (2.0 * pi * x / l).sin() * (pi * y / l).sin()
        })
        .collect();
    vec![
        Witness::new(format!("box-{m}"), indicator),
        Witness::new(format!("box-mode-{m}"), profile),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BicrossedPoint {
    pub bound: i64,
    pub size: usize,
    /// Certificate for `∫_Ω dim dμ = 2 μ(Ω)`.
    pub dim_certificate: MembershipCertificate,
    /// Certificate for `μ(Ω)`, the target without the `dim` factor.
    pub measure_certificate: MembershipCertificate,
    pub spectral: SpectralReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BicrossedOutcome {
    /// Verdict on the largest bound, certified if any bound certified.
    pub verdict: AmenabilityVerdict,
    pub target_dim: f64,
    pub target_measure: f64,
    pub points: Vec<BicrossedPoint>,
}

/// Spectrum-membership test over a sweep of lattice bounds, with Følner-box
/// witnesses at `M ∈ {B/4, B/2, B}`.
pub fn bicrossed_amenability_test(
    bounds: &[i64],
    omega: &[PairClass],
    p: f64,
    tol: f64,
    cfg: &LanczosConfig,
) -> Result<BicrossedOutcome> {
    let omega = normalize_omega(omega)?;
    if bounds.is_empty() || bounds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input(
            "bounds must be non-empty and strictly increasing",
        ));
    }
    let target_measure = omega.len() as f64;
    let target_dim = 2.0 * target_measure;
    let points = bounds
        .par_iter()
        .map(|&b| -> Result<BicrossedPoint> {
            let pairs = SymLatticePair::new(b)?;
            let op = bicrossed_nu_operator(&pairs, &omega, p).map_err(|e| Error::Build {
                size: b as usize,
                source: Box::new(e),
            })?;
            let witnesses: Vec<Witness> = [b / 4, b / 2, b]
                .iter()
                .filter(|&&m| m >= 1)
                .flat_map(|&m| folner_witnesses(&pairs, m))
                .collect();
            Ok(BicrossedPoint {
                bound: b,
                size: pairs.len(),
                dim_certificate: in_spectrum(&op, target_dim, tol, &witnesses, cfg)?,
                measure_certificate: in_spectrum(&op, target_measure, tol, &witnesses, cfg)?,
                spectral: spectral_radius(&op, cfg)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let any = points.iter().any(|pt| pt.dim_certificate.certified);
    let last = points.last().expect("bounds is non-empty");
    let mut spectral = last.spectral.clone();
    spectral.truncation_trace = points
        .iter()
        .map(|pt| (pt.size, pt.spectral.radius_estimate))
        .collect();
    let mut verdict = AmenabilityVerdict::from_certificate(last.dim_certificate.clone(), spectral);
    verdict.certified = any;
    Ok(BicrossedOutcome {
        verdict,
        target_dim,
        target_measure,
        points,
    })
}
