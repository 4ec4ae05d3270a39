//! Numerical toolkit for convolution operators on the space of irreducible
//! representations of a locally compact quantum group.
//!
//! Each example family (fusion rings of compact quantum groups, discrete
//! groups with classical duals, the `R ⋊ Z2` half-line model and the bicrossed
//! `Z×Z ⋈ Z2` lattice model) builds a finite truncation of the operators
//! `L_kappa` and `L_nu` as a [`LinOp`]. The shared [`spectral`] layer estimates
//! spectral radii with Lanczos and certifies that `‖nu‖_1` lies within a given
//! distance of the spectrum using residuals of approximate eigenvectors.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fusion;
pub mod semidirect;
pub mod spectral;
pub mod verdict;
pub mod walk;

pub use error::{Error, Result};
pub use spectral::{
    apply, in_spectrum, spectral_radius, truncation_sweep, BoundaryPolicy, DomainKind,
    LanczosConfig, LinOp, MembershipCertificate, SpectralReport, SpectrumDomain, Witness,
};
pub use verdict::AmenabilityVerdict;
