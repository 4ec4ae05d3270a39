//! Non-compact examples with non-classical duals: the `R ⋊ Z2` half-line
//! model and the bicrossed `Z×Z ⋈ Z2` lattice model.

mod bicrossed;
mod halfline;

pub use bicrossed::{
    bicrossed_amenability_test, bicrossed_nu_operator, bicrossed_operator, folner_witnesses,
    BicrossedOutcome, BicrossedPoint, PairClass, SymLatticePair,
};
pub use halfline::{
    interval_criterion, nu_interval_operator, parse_interval, sigma_r_components, sigma_r_operator,
    window_witness, HalfLineGrid, IntervalOperator, IntervalOutcome, SnappedShift,
};
