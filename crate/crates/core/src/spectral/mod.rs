//! Truncated operators, eigen-iteration and residual certificates shared by
//! every example family.

mod certify;
mod domain;
mod lanczos;
mod linop;
mod sweep;
mod tridiag;

pub use certify::{in_spectrum, residual, MembershipCertificate, Witness};
pub use domain::{DomainKind, SpectrumDomain};
pub use lanczos::{spectral_radius, LanczosConfig, SpectralReport};
pub use linop::{apply, BoundaryPolicy, LinOp};
pub use sweep::truncation_sweep;
