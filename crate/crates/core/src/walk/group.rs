use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Group element in canonical form: lattice coordinates for `Z^d`, or a
/// reduced word for `F_k` (letter `±i` is generator `i` or its inverse).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element(pub Vec<i32>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GroupKind {
    /// `Z^d`; `d = 0` is the trivial group.
    Lattice { dim: usize },
    /// Free group on `rank` generators.
    Free { rank: usize },
}

/// A discrete group with a finite symmetric generating set.
///
/// Built-in groups are unimodular, so the modular function is identically 1
/// and `modular_exponent` only enters through the weight `δ^{-(p-1)/2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupModel {
    pub kind: GroupKind,
    pub modular_exponent: f64,
}

impl GroupModel {
    pub fn lattice(dim: usize) -> Self {
        Self {
            kind: GroupKind::Lattice { dim },
            modular_exponent: 1.0,
        }
    }

    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 || rank > 26 {
            return Err(Error::input(format!(
                "free group rank must be in 1..=26, got {rank}"
            )));
        }
        Ok(Self {
            kind: GroupKind::Free { rank },
            modular_exponent: 1.0,
        })
    }

    /// Parse `Z^d:<d>` (also `Z:<d>`) or `F:<k>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (family, arg) = spec.split_once(':').ok_or_else(|| {
            Error::Parse(format!("group spec {spec:?} is not `Z^d:<d>` or `F:<k>`"))
        })?;
        let n: usize = arg
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad group parameter {arg:?}")))?;
        match family.trim() {
            "Z^d" | "Z" => Ok(Self::lattice(n)),
            "F" => Self::free(n),
            other => Err(Error::Parse(format!("unknown group family {other:?}"))),
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            GroupKind::Lattice { dim } => format!("Z^d:{dim}"),
            GroupKind::Free { rank } => format!("F:{rank}"),
        }
    }

    pub fn identity(&self) -> Element {
        match self.kind {
            GroupKind::Lattice { dim } => Element(vec![0; dim]),
            GroupKind::Free { .. } => Element(Vec::new()),
        }
    }

    /// Symmetric generating set, each generator followed by its inverse.
    pub fn generators(&self) -> Vec<Element> {
        match self.kind {
            GroupKind::Lattice { dim } => (0..dim)
                .flat_map(|i| {
                    [1, -1].map(|s| {
                        let mut v = vec![0; dim];
                        v[i] = s;
                        Element(v)
                    })
                })
                .collect(),
            GroupKind::Free { rank } => (1..=rank as i32)
                .flat_map(|i| [Element(vec![i]), Element(vec![-i])])
                .collect(),
        }
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        match self.kind {
            GroupKind::Lattice { .. } => {
                Element(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect())
            }
            GroupKind::Free { .. } => {
                let mut w = x.0.clone();
                for &letter in &y.0 {
                    if w.last() == Some(&-letter) {
                        w.pop();
                    } else {
                        w.push(letter);
                    }
                }
                Element(w)
            }
        }
    }

    pub fn inverse(&self, x: &Element) -> Element {
        match self.kind {
            GroupKind::Lattice { .. } => Element(x.0.iter().map(|a| -a).collect()),
            GroupKind::Free { .. } => Element(x.0.iter().rev().map(|a| -a).collect()),
        }
    }

    /// Right action by a generator.
    pub fn neighbor(&self, x: &Element, s: &Element) -> Element {
        self.multiply(x, s)
    }

    /// Modular function of the dual; identically 1 for discrete groups.
    pub fn modular_function(&self, _x: &Element) -> f64 {
        1.0
    }

    pub fn word_length(&self, x: &Element) -> usize {
        match self.kind {
            GroupKind::Lattice { .. } => x.0.iter().map(|a| a.unsigned_abs() as usize).sum(),
            GroupKind::Free { .. } => x.0.len(),
        }
    }

    pub fn is_valid(&self, x: &Element) -> bool {
        match self.kind {
            GroupKind::Lattice { dim } => x.0.len() == dim,
            GroupKind::Free { rank } => {
                x.0.iter()
                    .all(|&l| l != 0 && l.unsigned_abs() as usize <= rank)
                    && x.0.windows(2).all(|w| w[0] != -w[1])
            }
        }
    }

    pub fn format(&self, x: &Element) -> String {
        match self.kind {
            GroupKind::Lattice { dim: 0 } => "e".to_string(),
            GroupKind::Lattice { .. } => {
                let parts: Vec<String> = x.0.iter().map(|a| a.to_string()).collect();
                format!("({})", parts.join(","))
            }
            GroupKind::Free { .. } if x.0.is_empty() => "e".to_string(),
            GroupKind::Free { .. } => {
                x.0.iter()
                    .map(|&l| {
                        let c = (b'a' + (l.unsigned_abs() - 1) as u8) as char;
                        if l > 0 {
                            c
                        } else {
                            c.to_ascii_uppercase()
                        }
                    })
                    .collect()
            }
        }
    }

    /// Inverse of [`GroupModel::format`]: `e`, `(1,-2)`, or words like `aB`.
    pub fn parse_element(&self, s: &str) -> Result<Element> {
        let s = s.trim();
        if s == "e" {
            return Ok(self.identity());
        }
        let el = match self.kind {
            GroupKind::Lattice { .. } => {
                let inner = s
                    .strip_prefix('(')
                    .and_then(|t| t.strip_suffix(')'))
                    .ok_or_else(|| {
                        Error::Parse(format!("lattice element {s:?} must look like (1,0)"))
                    })?;
                let coords = inner
                    .split(',')
                    .map(|c| c.trim().parse::<i32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::Parse(format!("bad lattice element {s:?}")))?;
                Element(coords)
            }
            GroupKind::Free { .. } => {
                let mut w = Element(Vec::new());
                for c in s.chars() {
                    if !c.is_ascii_alphabetic() {
                        return Err(Error::Parse(format!("bad free-group word {s:?}")));
                    }
                    let i = (c.to_ascii_lowercase() as u8 - b'a') as i32 + 1;
                    let letter = if c.is_ascii_lowercase() { i } else { -i };
                    w = self.multiply(&w, &Element(vec![letter]));
                }
                w
            }
        };
        if !self.is_valid(&el) {
            return Err(Error::Parse(format!(
                "{s:?} is not an element of {}",
                self.name()
            )));
        }
        Ok(el)
    }

    /// Generator list closed under inverses and `x·s·s⁻¹ = x` on `samples`.
    pub fn check_action(&self, samples: &[Element]) -> Result<()> {
        let gens = self.generators();
        for s in &gens {
            if !gens.contains(&self.inverse(s)) {
                return Err(Error::Validation {
                    axiom: "symmetric generators",
                    detail: format!("inverse of {} missing", self.format(s)),
                });
            }
            for x in samples {
                let back = self.neighbor(&self.neighbor(x, s), &self.inverse(s));
                if &back != x {
                    return Err(Error::Validation {
                        axiom: "free right action",
                        detail: format!(
                            "{}·{}·{}⁻¹ != {}",
                            self.format(x),
                            self.format(s),
                            self.format(s),
                            self.format(x)
                        ),
                    });
                }
                if self.neighbor(x, s) == *x {
                    return Err(Error::Validation {
                        axiom: "free right action",
                        detail: format!("{} fixes {}", self.format(s), self.format(x)),
                    });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// All elements of word length at most `radius`, in breadth-first order.
#[derive(Debug, Clone)]
pub struct BallTruncation {
    radius: usize,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
}

impl BallTruncation {
    pub fn new(group: &GroupModel, radius: usize) -> Self {
        let gens = group.generators();
        let id = group.identity();
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id.clone(), 0usize)]);
        let mut queue = VecDeque::from([(id, 0usize)]);
        while let Some((x, d)) = queue.pop_front() {
            if d == radius {
                continue;
            }
            for s in &gens {
                let y = group.neighbor(&x, s);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elements.len());
                    elements.push(y.clone());
                    queue.push_back((y, d + 1));
                }
            }
        }
        Self {
            radius,
            elements,
            index,
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, x: &Element) -> Option<usize> {
        self.index.get(x).copied()
    }
}
