//! Weights, χ-energies and the energy classes of radial profiles.

mod classes;
mod constructions;
mod functional;
mod weight;

pub use classes::{classify, ClassReport, DEFAULT_P_LIST};
pub use constructions::{
    energy_convergence_check, hat_weight_from_capacity, pluripolar_cover, pluripolar_cover_report, separating_weight, CoverReport,
    EnergyConvergenceReport,
};
pub use functional::{
    capacity_criterion, chi_energy, chi_energy_layercake, chi_energy_layercake_of, chi_energy_of, CriterionVerdict,
    ENERGY_REL_TOL,
};
pub use weight::{CustomWeight, GridWeight, Weight, WeightFlags};
