//! Built-in profiles, weights, measures and dominators used by the property
//! tables, the CLI and the benches.

use crate::energy::Weight;
use crate::error::Result;
use crate::profiles::RadialProfile;
use crate::radial_ma::{ma_measure, RadialMeasure};
use crate::solver::EpsilonDominator;

/// Convex piecewise-linear profile with slopes 0.5, 0.7, 0.8, 1.
pub fn grid_profile() -> RadialProfile {
    RadialProfile::grid(vec![-4.0, -2.0, -1.0, -0.5, 0.0], vec![-2.6, -1.6, -0.9, -0.5, 0.0])
        .expect("built-in grid profile is valid")
}

/// Profiles of finite total Monge-Ampère mass, one per family.
pub fn finite_mass_profiles() -> Vec<RadialProfile> {
    vec![
        RadialProfile::linear(1.0),
        RadialProfile::log1m(1.0),
        RadialProfile::extremal((-1f64).exp()),
        RadialProfile::log1m(1.0).clip(3.0),
        grid_profile(),
    ]
}

/// Exponents of the built-in `power(α)` profiles.
pub const POWER_ALPHAS: [f64; 4] = [0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0];

/// Every built-in profile.
pub fn profiles() -> Vec<RadialProfile> {
    let mut out = finite_mass_profiles();
    out.extend(POWER_ALPHAS.iter().map(|&a| RadialProfile::power(a)));
    out.extend([
        RadialProfile::log1m(2.0),
        RadialProfile::power(0.5).clip(2.0),
        RadialProfile::exhaustion(1.0),
    ]);
    out
}

/// Every built-in weight.
pub fn weights() -> Vec<Weight> {
    vec![
        Weight::power(1.0),
        Weight::power(2.0),
        Weight::power(0.5),
        Weight::ShiftedPower(1.0),
        Weight::exp(1.0),
        Weight::Constant,
        Weight::grid(vec![-4.0, -1.0, 0.0], vec![-7.0, -1.0, 0.0]).expect("built-in grid weight is valid"),
    ]
}

/// `2e^{2x}` per unit log-radius: unit mass, no atoms.
pub fn exp_density_measure(n: u32) -> Result<RadialMeasure> {
    RadialMeasure::with_density(n, 0.0, Vec::new(), Some(|x: f64| 2.0 * (2.0 * x).exp()))
}

/// Every built-in measure in dimension `n`, labelled.
pub fn measures(n: u32) -> Result<Vec<(String, RadialMeasure)>> {
    let mut out = Vec::new();
    for p in finite_mass_profiles() {
        out.push((format!("ma({})", p.label()), ma_measure(&p, n)?));
    }
    out.push(("sphere_atom(0.5, 0.7)".into(), RadialMeasure::sphere_atom(n, 0.5, 0.7)?));
    out.push(("exp_density".into(), exp_density_measure(n)?));
    out.push((
        "exp_density+atom".into(),
        RadialMeasure::with_density(n, 0.0, vec![(-0.5, 0.3)], Some(|x: f64| (2.0 * x).exp()))?,
    ));
    out.push(("zero".into(), RadialMeasure::zero(n)));
    Ok(out)
}

/// Pairs `(μ₁, μ₂)` with `μ₁(B_r) <= μ₂(B_r)` for every `r` and no mass at
/// the origin.
pub fn ordered_measure_pairs(n: u32) -> Result<Vec<(String, RadialMeasure, RadialMeasure)>> {
    let half = RadialMeasure::with_density(n, 0.0, Vec::new(), Some(|x: f64| (2.0 * x).exp()))?;
    Ok(vec![
        (
            "log1m(1) <= log1m(2)".into(),
            ma_measure(&RadialProfile::log1m(1.0), n)?,
            ma_measure(&RadialProfile::log1m(2.0), n)?,
        ),
        (
            "atom 0.5 <= atom 1".into(),
            RadialMeasure::sphere_atom(n, (-1f64).exp(), 0.5)?,
            RadialMeasure::sphere_atom(n, (-1f64).exp(), 1.0)?,
        ),
        (
            "density <= density+atom".into(),
            half,
            RadialMeasure::with_density(n, 0.0, vec![(-0.5, 0.3)], Some(|x: f64| (2.0 * x).exp()))?,
        ),
    ])
}

/// Every built-in dominator.
pub fn dominators() -> Vec<EpsilonDominator> {
    vec![
        EpsilonDominator::constant(1.0),
        EpsilonDominator::exp_decay(1.0),
        EpsilonDominator::power_decay(2.0),
        EpsilonDominator::power_decay(0.5),
        EpsilonDominator::grid(vec![0.0, 1.0, 2.0], vec![1.0, 0.5, 0.25]).expect("built-in grid dominator is valid"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_valid() {
        for p in profiles() {
            assert!(p.validate().is_valid(), "{}: {}", p.label(), p.validate());
        }
        for (name, mu) in measures(2).unwrap() {
            assert!(mu.total().is_finite(), "{name}");
        }
        for (name, a, b) in ordered_measure_pairs(2).unwrap() {
            for r in crate::solver::default_r_grid() {
                assert!(a.mass_closed_ball(r) <= b.mass_closed_ball(r), "{name} at {r}");
            }
        }
        assert_eq!(weights().len(), 7);
        assert_eq!(dominators().len(), 5);
    }
}
