//! Discrete groups with classical duals: weighted Cayley convolution operators
//! and the Kesten-type spectral test.

mod group;
mod ops;

pub use group::{BallTruncation, Element, GroupKind, GroupModel};
pub use ops::{cayley_operator, kesten_test, modular_weight_operator, KestenOutcome, RadiusPoint};
