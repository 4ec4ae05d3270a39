//! Compact quantum groups: fusion rings and their fusion-multiplicity
//! operators.

mod descriptor;
mod ops;
mod ring;

pub use descriptor::{RingDescriptor, RuleDescriptor, RuleName, TableDescriptor};
pub use ops::{
    coamenability_test, dim_bookkeeping_check, kappa_operator, label_domain, nu_operator,
    omega_mass,
};
pub use ring::{AxiomCheck, FusionRing, ValidationReport, RULE_VALIDATION_LEVEL};
