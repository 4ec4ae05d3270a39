use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// On-disk description of a fusion ring (JSON).
///
/// ```json
/// {"kind": "table", "labels": ["1", "x"], "dims": [1, 1], "conj": ["1", "x"],
///  "fusion": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]}
/// {"kind": "rule", "rule": "free-su2", "N": 2, "level": 10}
/// ```
///
/// For tables, `fusion[k][a][b]` is the multiplicity of `labels[b]` in
/// `labels[k] ⊗ labels[a]`, and `labels[0]` is the unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RingDescriptor {
    Table(TableDescriptor),
    Rule(RuleDescriptor),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDescriptor {
    pub labels: Vec<String>,
    pub dims: Vec<f64>,
    pub conj: Vec<String>,
    pub fusion: Vec<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleName {
    /// `a_m ⊗ a_n = a_|m−n| ⊕ a_|m−n|+2 ⊕ … ⊕ a_m+n`, the SU(2) / O_N^+ rule.
    #[serde(rename = "free-su2")]
    FreeSu2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDescriptor {
    pub rule: RuleName,
    /// Dimension of the generator `a1`; `2` gives SU(2), `N > 2` gives O_N^+.
    #[serde(rename = "N")]
    pub n: f64,
    /// Closure level: labels `a0 ..= a{level}`.
    pub level: usize,
}

impl RingDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serializes")
    }

    pub fn free_su2(n: f64, level: usize) -> Self {
        RingDescriptor::Rule(RuleDescriptor {
            rule: RuleName::FreeSu2,
            n,
            level,
        })
    }

    /// The ring with a single (unit) label.
    pub fn trivial() -> Self {
        RingDescriptor::Table(TableDescriptor {
            labels: vec!["1".into()],
            dims: vec![1.0],
            conj: vec!["1".into()],
            fusion: vec![vec![vec![1]]],
        })
    }
}
