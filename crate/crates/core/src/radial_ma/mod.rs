//! Monge-Ampère measures of radial profiles and the convergence and
//! comparison checks built on them.

mod checks;
mod measure;

pub use checks::{
    approximant_convergence_check, comparison_identity_check, cor23_check, cor25_check, sublevel_mass,
    sublevel_mass_of, ApproximantReport, ComparisonReport, InequalityReport, SandwichReport,
};

pub use measure::RadialMeasure;
pub(crate) use measure::{far_breaks, table_breaks};

use crate::error::Result;
use crate::profiles::RadialProfile;

/// `(dd^c u)^n` for `u = γ(log|z|)`.
pub fn ma_measure(p: &RadialProfile, n: u32) -> Result<RadialMeasure> {
    RadialMeasure::from_profile(p, n)
}
