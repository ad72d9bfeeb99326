//! Capacity-domination data, the decay bound for sublevel capacities and a
//! radial inverse Monge-Ampère solver.

mod bound;
mod dominator;
mod solve;
mod truncation;

pub use bound::{
    capacity_bound, default_r_grid, domination_check, h_function, h_weight, iterate_s, uniform_bound, verify_thm51,
    BoundReport, DominationReport, HFunction, SIteration,
};
pub use dominator::{f_eps, EpsilonDominator, GridDominator};
pub use solve::{solve_radial, RadialSolution, SolvedProfile};
pub use truncation::{prop53_converse_check, prop53_forward, solve_via_truncation, ConverseReport, TruncationReport};
