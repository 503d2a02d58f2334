//! Relativistic Coulomb fixed-energy amplitude through the Duru-Kleinert
//! mapping onto the radial harmonic oscillator.

// `!(x > 0.0)` is used on purpose throughout: unlike `x <= 0.0` it also
// rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coulomb_chain;
pub mod dk_transform;
pub mod error;
pub mod green_amplitude;
pub mod kg_oracle;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
