use coamen::fusion::AxiomCheck;
use coamen::semidirect::BicrossedPoint;
use coamen::walk::RadiusPoint;
use coamen::{AmenabilityVerdict, LinOp, SpectralReport};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// Size and structure of the operator a run was built on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub domain_size: usize,
    pub nnz: usize,
    pub symmetric: bool,
    /// Measured `max |A_ij − A_ji|`.
    pub asymmetry: f64,
    /// Entries dropped at the truncation edge.
    pub clipped: usize,
}

impl Fingerprint {
    pub fn of(op: &LinOp) -> Self {
        Self {
            domain_size: op.size(),
            nnz: op.nnz(),
            symmetric: op.is_symmetric(),
            asymmetry: op.asymmetry(),
            clipped: op.clipped(),
        }
    }
}

/// Model-specific results beyond the common verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum Details {
    Fusion {
        labels: usize,
        omega_mass: f64,
        /// Whether every kept dimension is an exact integer.
        exact_dims: bool,
    },
    Walk {
        group: String,
        normalized_radius: f64,
        trace: Vec<RadiusPoint>,
    },
    Semidirect {
        snapped_interval: (f64, f64),
        quadrature_nodes: usize,
        witness_residuals: Vec<(f64, f64)>,
    },
    Bicrossed {
        target_dim: f64,
        target_measure: f64,
        points: Vec<BicrossedPoint>,
    },
    Sweep {
        sizes: Vec<usize>,
        trace_converged: Option<bool>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub version: String,
    pub config: RunConfig,
    pub fingerprint: Fingerprint,
    pub spectral: SpectralReport,
    pub verdict: AmenabilityVerdict,
    pub details: Details,
    /// Present only when timing was requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// `index,eigenvalue` rows for the top eigenvalues.
    pub fn eigenvalue_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue\n");
        for (i, v) in self.spectral.top_eigenvalues.iter().enumerate() {
            out.push_str(&format!("{i},{v}\n"));
        }
        out
    }

    /// `size,radius_estimate` rows for the truncation trace.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("size,radius_estimate\n");
        for (n, r) in &self.spectral.truncation_trace {
            out.push_str(&format!("{n},{r}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub schema: u32,
    pub version: String,
    pub subject: String,
    pub passed: bool,
    pub checks: Vec<AxiomCheck>,
}
