use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    /// Atoms of a discrete label set (fusion labels, group elements, lattice classes).
    DiscreteLabels,
    /// Midpoints of equal cells on a continuous parameter space.
    UniformGrid,
}

/// A truncated, discretized model of the irreducible-representation space:
/// one entry per point, carrying `dim` and the measure of its atom or cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDomain {
    kind: DomainKind,
    points: Vec<String>,
    dim_weight: Vec<f64>,
    quad_weight: Vec<f64>,
}

impl SpectrumDomain {
    pub fn new(
        kind: DomainKind,
        points: Vec<String>,
        dim_weight: Vec<f64>,
        quad_weight: Vec<f64>,
    ) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::input(
                "spectrum domain must contain at least one point",
            ));
        }
        if dim_weight.len() != n || quad_weight.len() != n {
            return Err(Error::input(format!(
                "domain weight lengths ({}, {}) do not match {n} points",
                dim_weight.len(),
                quad_weight.len()
            )));
        }
        let min_dim = match kind {
            DomainKind::DiscreteLabels => 1.0,
            DomainKind::UniformGrid => f64::MIN_POSITIVE,
        };
        if let Some(i) = dim_weight
            .iter()
            .position(|&d| !(d >= min_dim) || d.is_nan())
        {
            return Err(Error::input(format!(
                "dim weight {} at point {} is below {min_dim}",
                dim_weight[i], points[i]
            )));
        }
        if let Some(i) = quad_weight
            .iter()
            .position(|&q| !(q > 0.0 && q.is_finite()))
        {
            return Err(Error::input(format!(
                "quadrature weight {} at point {} is not positive",
                quad_weight[i], points[i]
            )));
        }
        let mut seen = HashSet::with_capacity(n);
        for p in &points {
            if !seen.insert(p.as_str()) {
                return Err(Error::input(format!("duplicate domain point {p}")));
            }
        }
        Ok(Self {
            kind,
            points,
            dim_weight,
            quad_weight,
        })
    }

    /// Domain where every point has the same `dim` and the same measure.
    pub fn uniform(kind: DomainKind, points: Vec<String>, dim: f64, mass: f64) -> Result<Self> {
        let n = points.len();
        Self::new(kind, points, vec![dim; n], vec![mass; n])
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn dim_weight(&self) -> &[f64] {
        &self.dim_weight
    }

    pub fn quad_weight(&self) -> &[f64] {
        &self.quad_weight
    }

    pub fn truncation_size(&self) -> usize {
        self.points.len()
    }

    /// Total measure of the truncated domain.
    pub fn mass(&self) -> f64 {
        self.quad_weight.iter().sum()
    }

    /// Norm in `L²(domain, quad_weight)`.
    pub fn weighted_norm(&self, v: &[f64]) -> f64 {
        v.iter()
            .zip(&self.quad_weight)
            .map(|(x, w)| w * x * x)
            .sum::<f64>()
            .sqrt()
    }

    pub fn index_of(&self, point: &str) -> Option<usize> {
        self.points.iter().position(|p| p == point)
    }
}
