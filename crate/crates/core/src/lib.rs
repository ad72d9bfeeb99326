//! Radially symmetric plurisubharmonic functions on the unit ball of `C^n`:
//! Monge-Ampère measures, capacities, weighted energies and a radial
//! inverse Monge-Ampère solver.

// `!(a < b)` guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod catalog;
pub mod energy;
pub mod error;
pub mod numerics;
pub mod profiles;
pub mod radial_ma;
pub mod solver;

pub use energy::Weight;
pub use error::{Error, Result};
pub use profiles::RadialProfile;
pub use radial_ma::{ma_measure, RadialMeasure};
