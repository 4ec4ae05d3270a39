use serde::{Deserialize, Serialize};

use crate::spectral::{MembershipCertificate, SpectralReport};

/// Outcome of an amenability-style test in one example family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmenabilityVerdict {
    /// `‖nu‖_1`, the value the criterion places in the spectrum.
    pub target: f64,
    pub tolerance: f64,
    pub certified: bool,
    pub best_residual: f64,
    pub witness_id: String,
    pub gap_hint: Option<f64>,
    pub certificate: MembershipCertificate,
    pub spectral: SpectralReport,
}

impl AmenabilityVerdict {
    pub fn from_certificate(cert: MembershipCertificate, spectral: SpectralReport) -> Self {
        Self {
            target: cert.target,
            tolerance: cert.tolerance,
            certified: cert.certified,
            best_residual: cert.best_residual,
            witness_id: cert.witness_id.clone(),
            gap_hint: cert.gap_hint,
            certificate: cert,
            spectral,
        }
    }
}
