use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::descriptor::{RingDescriptor, RuleName};
use crate::error::{Error, Result};

/// Rule rings are validated exhaustively on labels up to this level.
pub const RULE_VALIDATION_LEVEL: usize = 24;

const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
enum Rule {
    /// `table[k][a]` lists `(b, mult)` with nonzero multiplicity.
    Table(Vec<Vec<Vec<(usize, u32)>>>),
    FreeSu2,
}

/// Labels, dimensions, conjugation and tensor-product decomposition of a
/// compact quantum group's representation category.
///
/// Rule rings are closed at a level `L`: labels are `a0 ..= aL`, while
/// decompositions and dimensions are still available past `L` (up to `2L`)
/// so that dimension identities can be checked without clipping.
#[derive(Debug, Clone)]
pub struct FusionRing {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// Dimensions of labels `0 ..` (extended past the label set for rule rings).
    dims: Vec<f64>,
    /// Exact integer dimensions while they fit in `u128`.
    int_dims: Vec<Option<u128>>,
    conj: Vec<usize>,
    rule: Rule,
}

/// One axiom checked by [`FusionRing::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn same_value(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= REL_TOL * a.abs().max(b.abs())
}

impl FusionRing {
    /// Build a ring from its descriptor without checking any axiom.
    pub fn from_descriptor_unchecked(desc: &RingDescriptor) -> Result<Self> {
        match desc {
            RingDescriptor::Table(t) => {
                let n = t.labels.len();
                if n == 0 {
                    return Err(Error::input("fusion table has no labels"));
                }
                if t.dims.len() != n || t.conj.len() != n || t.fusion.len() != n {
                    return Err(Error::input(format!(
                        "table arrays must all have {n} entries (dims {}, conj {}, fusion {})",
                        t.dims.len(),
                        t.conj.len(),
                        t.fusion.len()
                    )));
                }
                let index = index_labels(&t.labels)?;
                let conj =
                    t.conj
                        .iter()
                        .map(|c| {
                            index.get(c).copied().ok_or_else(|| {
                                Error::input(format!("conj names unknown label {c}"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                let mut table = Vec::with_capacity(n);
                for (k, rows) in t.fusion.iter().enumerate() {
                    if rows.len() != n {
                        return Err(Error::input(format!(
                            "fusion row for {} has {} entries, expected {n}",
                            t.labels[k],
                            rows.len()
                        )));
                    }
                    let mut out = Vec::with_capacity(n);
                    for (a, mults) in rows.iter().enumerate() {
                        if mults.len() != n {
                            return Err(Error::input(format!(
                                "multiplicities of {} ⊗ {} have {} entries, expected {n}",
                                t.labels[k],
                                t.labels[a],
                                mults.len()
                            )));
                        }
                        out.push(
                            mults
                                .iter()
                                .enumerate()
                                .filter(|(_, &m)| m > 0)
                                .map(|(b, &m)| (b, m))
                                .collect(),
                        );
                    }
                    table.push(out);
                }
                let int_dims = t
                    .dims
                    .iter()
                    .map(|&d| {
                        (d.fract() == 0.0 && d >= 0.0 && d < 2f64.powi(53)).then_some(d as u128)
                    })
                    .collect();
                Ok(Self {
                    labels: t.labels.clone(),
                    index,
                    dims: t.dims.clone(),
                    int_dims,
                    conj,
                    rule: Rule::Table(table),
                })
            }
            RingDescriptor::Rule(r) => {
                let RuleName::FreeSu2 = r.rule;
                if r.level < 1 {
                    return Err(Error::input("closure level must be at least 1"));
                }
                if !(r.n >= 2.0) || !r.n.is_finite() {
                    return Err(Error::input(format!(
                        "free-su2 rule needs N >= 2 for positive dimensions, got {}",
                        r.n
                    )));
                }
                let labels: Vec<String> = (0..=r.level).map(|k| format!("a{k}")).collect();
                let index = index_labels(&labels)?;
                let ext = 2 * r.level + 2;
                let mut dims = Vec::with_capacity(ext);
                dims.push(1.0);
                dims.push(r.n);
                while dims.len() < ext {
                    let k = dims.len();
                    let next = r.n * dims[k - 1] - dims[k - 2];
                    // saturate instead of overflowing to infinity
                    dims.push(if next.is_finite() { next } else { f64::MAX });
                }
                let int_n = (r.n.fract() == 0.0).then_some(r.n as u128);
                let mut int_dims: Vec<Option<u128>> = Vec::with_capacity(ext);
                int_dims.push(Some(1));
                int_dims.push(int_n);
                while int_dims.len() < ext {
                    let k = int_dims.len();
                    let next = match (int_n, int_dims[k - 1], int_dims[k - 2]) {
                        (Some(n), Some(a), Some(b)) => {
                            n.checked_mul(a).and_then(|x| x.checked_sub(b))
                        }
                        _ => None,
                    };
                    int_dims.push(next);
                }
                Ok(Self {
                    conj: (0..labels.len()).collect(),
                    labels,
                    index,
                    dims,
                    int_dims,
                    rule: Rule::FreeSu2,
                })
            }
        }
    }

    /// Build and validate; the first failing axiom becomes the error.
    pub fn load(desc: &RingDescriptor) -> Result<Self> {
        let ring = Self::from_descriptor_unchecked(desc)?;
        let report = ring.validate();
        if let Some(f) = report.first_failure() {
            let axiom = AXIOMS
                .iter()
                .find(|a| **a == f.axiom)
                .copied()
                .unwrap_or("fusion axiom");
            return Err(Error::Validation {
                axiom,
                detail: f.detail.clone().unwrap_or_default(),
            });
        }
        Ok(ring)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn unit(&self) -> usize {
        0
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::input(format!("unknown label {label}")))
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Dimension of label `i`; for rule rings `i` may exceed the closure level.
    pub fn dim(&self, i: usize) -> f64 {
        self.dims[i]
    }

    pub fn int_dim(&self, i: usize) -> Option<u128> {
        self.int_dims.get(i).copied().flatten()
    }

    pub fn conj(&self, i: usize) -> usize {
        self.conj[i]
    }

    /// Whether the label set is finite (a table) rather than a level closure.
    pub fn is_finite(&self) -> bool {
        matches!(self.rule, Rule::Table(_))
    }

    /// Multiplicity of `b` in `k ⊗ a`.
    pub fn mult(&self, k: usize, a: usize, b: usize) -> u32 {
        match &self.rule {
            Rule::Table(t) => t[k][a].iter().find(|(x, _)| *x == b).map_or(0, |(_, m)| *m),
            Rule::FreeSu2 => {
                let lo = k.abs_diff(a);
                u32::from(b >= lo && b <= k + a && (k + a + b).is_multiple_of(2))
            }
        }
    }

    /// Full decomposition of `k ⊗ a`, including labels past the closure level.
    pub fn decompose(&self, k: usize, a: usize) -> Vec<(usize, u32)> {
        match &self.rule {
            Rule::Table(t) => t[k][a].clone(),
            Rule::FreeSu2 => (k.abs_diff(a)..=k + a).step_by(2).map(|b| (b, 1)).collect(),
        }
    }

    /// Decomposition restricted to the first `trunc` labels, with the total
    /// multiplicity that was clipped.
    pub fn decompose_truncated(
        &self,
        k: usize,
        a: usize,
        trunc: usize,
    ) -> (Vec<(usize, u32)>, u32) {
        let mut clipped = 0;
        let kept = self
            .decompose(k, a)
            .into_iter()
            .filter(|&(b, m)| {
                let keep = b < trunc;
                if !keep {
                    clipped += m;
                }
                keep
            })
            .collect();
        (kept, clipped)
    }

    /// Largest label index whose dimension and decomposition are available.
    fn extended_len(&self) -> usize {
        self.dims.len()
    }

    /// `dim(k)·dim(a) = Σ mult·dim(b)`, exactly when integer dimensions are known.
    pub(crate) fn dims_multiply(&self, k: usize, a: usize) -> bool {
        let terms = self.decompose(k, a);
        if terms.iter().any(|&(b, _)| b >= self.extended_len()) {
            return false;
        }
        let exact = || -> Option<bool> {
            let lhs = self.int_dim(k)?.checked_mul(self.int_dim(a)?)?;
            let mut rhs: u128 = 0;
            for &(b, m) in &terms {
                rhs = rhs.checked_add(self.int_dim(b)?.checked_mul(m as u128)?)?;
            }
            Some(lhs == rhs)
        };
        if let Some(ok) = exact() {
            return ok;
        }
        let lhs = self.dim(k) * self.dim(a);
        let rhs: f64 = terms.iter().map(|&(b, m)| m as f64 * self.dim(b)).sum();
        same_value(lhs, rhs)
    }

    /// Check every ring axiom. Tables are checked on the whole label set; rule
    /// rings on labels up to [`RULE_VALIDATION_LEVEL`].
    pub fn validate(&self) -> ValidationReport {
        let n = match self.rule {
            Rule::Table(_) => self.len(),
            Rule::FreeSu2 => self.len().min(RULE_VALIDATION_LEVEL + 1),
        };
        let labels = 0..n;
        let mut checks = Vec::new();
        let mut push = |axiom: &str, failure: Option<String>| {
            checks.push(AxiomCheck {
                axiom: axiom.to_string(),
                passed: failure.is_none(),
                detail: failure,
            });
        };
        let l = |i: usize| {
            self.labels
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("#{i}"))
        };

        push(
            "dimension positivity",
            labels
                .clone()
                .find(|&i| !(self.dim(i) >= 1.0))
                .map(|i| format!("dim({}) = {} < 1", l(i), self.dim(i))),
        );
        push(
            "conjugation involution",
            labels
                .clone()
                .find(|&i| self.conj(self.conj(i)) != i)
                .map(|i| format!("conj(conj({})) = {}", l(i), l(self.conj(self.conj(i))))),
        );
        push(
            "unit self-conjugate",
            (self.conj(0) != 0).then(|| format!("conj({}) = {}", l(0), l(self.conj(0)))),
        );
        push(
            "conjugate dimension",
            labels
                .clone()
                .find(|&i| !same_value(self.dim(i), self.dim(self.conj(i))))
                .map(|i| format!("dim({}) != dim({})", l(i), l(self.conj(i)))),
        );
        push(
            "unit identity",
            labels
                .clone()
                .find(|&a| self.decompose(0, a) != vec![(a, 1)])
                .map(|a| format!("{} ⊗ {} is not {}", l(0), l(a), l(a))),
        );

        let pairs = || {
            labels
                .clone()
                .flat_map(|k| labels.clone().map(move |a| (k, a)))
        };
        push(
            "dimension homomorphism",
            pairs()
                .find(|&(k, a)| !self.dims_multiply(k, a))
                .map(|(k, a)| format!("dim({k}) dim({a}) != Σ mult dim for {} ⊗ {}", l(k), l(a))),
        );

        let mut frob = None;
        'frob: for (k, a) in pairs() {
            for b in labels.clone() {
                if self.mult(k, a, b) != self.mult(self.conj(k), b, a) {
                    frob = Some(format!(
                        "mult({} ⊂ {} ⊗ {}) != mult({} ⊂ {} ⊗ {})",
                        l(b),
                        l(k),
                        l(a),
                        l(a),
                        l(self.conj(k)),
                        l(b)
                    ));
                    break 'frob;
                }
            }
        }
        push("Frobenius symmetry", frob);
        push("associativity", self.associativity_failure(n));
        ValidationReport { checks }
    }

    /// `N_k N_l = Σ_m mult(m ⊂ k ⊗ l) N_m` entrywise on labels below `n`.
    fn associativity_failure(&self, n: usize) -> Option<String> {
        for k in 0..n {
            for l in 0..n {
                let kl = self.decompose(k, l);
                for a in 0..n {
                    // (N_k N_l)_{b a} = Σ_g mult(b ⊂ k⊗g) mult(g ⊂ l⊗a)
                    let mut lhs: HashMap<usize, u64> = HashMap::new();
                    for (g, m1) in self.decompose(l, a) {
                        for (b, m2) in self.decompose(k, g) {
                            *lhs.entry(b).or_default() += (m1 * m2) as u64;
                        }
                    }
                    let mut rhs: HashMap<usize, u64> = HashMap::new();
                    for &(m, c) in &kl {
                        for (b, m2) in self.decompose(m, a) {
                            *rhs.entry(b).or_default() += (c * m2) as u64;
                        }
                    }
                    lhs.retain(|_, v| *v > 0);
                    rhs.retain(|_, v| *v > 0);
                    if lhs != rhs {
                        return Some(format!(
                            "N_{} N_{} differs from Σ mult N_m in column {}",
                            self.labels[k], self.labels[l], self.labels[a]
                        ));
                    }
                }
            }
        }
        None
    }
}

const AXIOMS: [&str; 8] = [
    "dimension positivity",
    "conjugation involution",
    "unit self-conjugate",
    "conjugate dimension",
    "unit identity",
    "dimension homomorphism",
    "Frobenius symmetry",
    "associativity",
];

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::input(format!("duplicate label {l}")));
        }
    }
    Ok(index)
}
