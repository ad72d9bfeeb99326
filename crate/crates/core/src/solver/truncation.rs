use std::sync::Arc;

use crate::capacity::cap_ball;
use crate::energy::{capacity_criterion, chi_energy, Weight};
use crate::error::{Error, Result};
use crate::numerics::{integrate, TailVerdict, DEFAULT_REL_TOL};
use crate::profiles::{validation_grid, RadialProfile};
use crate::radial_ma::{ma_measure, sublevel_mass_of, RadialMeasure};
use crate::solver::{default_r_grid, solve_radial};

/// Solutions of `(dd^c φ_j)^n = min(g, j)(dd^c u₀)^n`.
#[derive(Debug, Clone)]
pub struct TruncationReport {
    pub j: Vec<f64>,
    pub profiles: Vec<RadialProfile>,
    pub energies: Vec<TailVerdict>,
    /// `φ_{j'} <= φ_j` on the validation grid for `j < j'`.
    pub decreasing: bool,
    pub sup_energy: f64,
    /// Solution for the untruncated measure `g(dd^c u₀)^n`.
    pub limit: RadialProfile,
    /// Largest relative deviation of the closed-ball masses of `φ` from
    /// those of `g(dd^c u₀)^n` on the default radii.
    pub limit_mass_error: f64,
    /// `max |φ_j − φ|` on the validation grid, per `j`.
    pub distance_to_limit: Vec<f64>,
}

/// Truncated densities `min(g, j)` against `(dd^c u₀)^n`, for `j` in `j_list`.
pub fn solve_via_truncation<G>(u0: &RadialProfile, g: G, w: &Weight, n: u32, j_list: &[f64]) -> Result<TruncationReport>
where
    G: Fn(f64) -> f64 + Send + Sync + 'static,
{
    let base = ma_measure(u0, n)?;
    if base.dirac0() > 0.0 {
        return Err(Error::ChargesPluripolar(base.dirac0()));
    }
    let g = Arc::new(g);
    let mu = {
        let g = g.clone();
        base.reweighted(move |x| g(x), 0.0)?
    };
    if !mu.total().is_finite() {
        return Err(Error::NotSolvable("infinite total mass".into()));
    }
    let grid: Vec<f64> = validation_grid().into_iter().step_by(8).collect();
    let limit = solve_radial(&mu)?.profile;
    let limit_values: Vec<f64> = grid.iter().map(|&x| limit.value(x)).collect();
    let mut report = TruncationReport {
        j: j_list.to_vec(),
        profiles: Vec::new(),
        energies: Vec::new(),
        decreasing: true,
        sup_energy: 0.0,
        limit: limit.clone(),
        limit_mass_error: limit_mass_error(&limit, &mu)?,
        distance_to_limit: Vec::new(),
    };
    let mut previous: Option<Vec<f64>> = None;
    for &j in j_list {
        let gj = g.clone();
        let mu_j = base.reweighted(move |x| gj(x).min(j), 0.0)?;
        let phi = solve_radial(&mu_j)?.profile;
        let values: Vec<f64> = grid.iter().map(|&x| phi.value(x)).collect();
        if let Some(prev) = &previous {
            if values.iter().zip(prev).any(|(v, p)| *v > p + 1e-10 * (1.0 + p.abs())) {
                report.decreasing = false;
            }
        }
        let distance = values.iter().zip(&limit_values).map(|(v, l)| (v - l).abs()).fold(0.0, f64::max);
        let e = chi_energy(&phi, w, n)?;
        report.sup_energy = report.sup_energy.max(e.extended_value());
        report.energies.push(e);
        report.distance_to_limit.push(distance);
        report.profiles.push(phi);
        previous = Some(values);
    }
    Ok(report)
}

fn limit_mass_error(phi: &RadialProfile, mu: &RadialMeasure) -> Result<f64> {
    let back = ma_measure(phi, mu.n())?;
    let mut worst: f64 = 0.0;
    for r in default_r_grid() {
        let (a, b) = (back.mass_closed_ball(r), mu.mass_closed_ball(r));
        let scale = b.abs().max(1e-300);
        if a != b {
            worst = worst.max((a - b).abs() / scale);
        }
    }
    Ok(worst)
}

/// Best constant `C` with `μ(B_r) <= C·Cap(B_r)^{p/(p+n)}` on `r_grid`.
pub fn prop53_forward(mu: &RadialMeasure, p: f64, n: u32, r_grid: &[f64]) -> Result<f64> {
    holder_constant(mu, p / (p + n as f64), n, r_grid)
}

fn holder_constant(mu: &RadialMeasure, alpha: f64, n: u32, r_grid: &[f64]) -> Result<f64> {
    let mut c: f64 = 0.0;
    for &r in r_grid {
        let m = mu.mass_closed_ball(r);
        if m > 0.0 {
            c = c.max(m / cap_ball(r, n)?.powf(alpha));
        }
    }
    Ok(c)
}

/// `∫₁^∞ p t^{p−1} μ({u < −t}) dt` under `μ <= C·Cap^α`, `α > p/(p+n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConverseReport {
    /// Best `C` on the default radii.
    pub constant: f64,
    pub integral: TailVerdict,
    /// `u` passes the `E^p` capacity criterion.
    pub u_in_ep: bool,
}

impl ConverseReport {
    /// `u ∈ E^p` with a finite constant forces a convergent integral.
    pub fn consistent(&self) -> bool {
        !(self.u_in_ep && self.constant.is_finite()) || self.integral.is_converged()
    }
}

pub fn prop53_converse_check(u: &RadialProfile, mu: &RadialMeasure, p: f64, alpha: f64, n: u32) -> Result<ConverseReport> {
    let threshold = p / (p + n as f64);
    if !(alpha > threshold) {
        return Err(Error::ExponentHypothesis { alpha, threshold });
    }
    let constant = holder_constant(mu, alpha, n, &default_r_grid())?;
    let integrand = |t: f64| {
        let m = sublevel_mass_of(mu, u, t);
        if m == 0.0 {
            0.0
        } else {
            p * t.powf(p - 1.0) * m
        }
    };
    let integral = integrate(integrand, 1.0, f64::INFINITY, DEFAULT_REL_TOL)?;
    let u_in_ep = capacity_criterion(u, &Weight::power(p), n)?.pole.is_converged();
    Ok(ConverseReport { constant, integral, u_in_ep })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_density_reproduces_u0() {
        let u0 = RadialProfile::log1m(1.0);
        let r = solve_via_truncation(&u0, |_| 1.0, &Weight::power(1.0), 2, &[1.0, 2.0]).unwrap();
        for phi in &r.profiles {
            for x in [-100.0, -1.0, -0.01] {
                assert!((phi.value(x) - u0.value(x)).abs() < 1e-9);
            }
        }
        assert!(r.decreasing);
    }

    #[test]
    fn capped_log_density_decreases() {
        let u0 = RadialProfile::log1m(1.0);
        let r = solve_via_truncation(&u0, |x: f64| -x, &Weight::power(1.0), 2, &[1.0, 2.0, 4.0]).unwrap();
        assert!(r.decreasing);
        assert!(r.sup_energy.is_finite());
        assert!(r.limit_mass_error < 1e-8, "{}", r.limit_mass_error);
        assert!(r.distance_to_limit.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn forward_examples() {
        let grid = default_r_grid();
        let atom = RadialMeasure::sphere_atom(2, (-1f64).exp(), 1.0).unwrap();
        let mut with_kink = grid.clone();
        with_kink.push((-1f64).exp());
        let c = prop53_forward(&atom, 2.0, 2, &with_kink).unwrap();
        assert!((c - 1.0).abs() < 1e-12, "{c}");
        assert_eq!(prop53_forward(&RadialMeasure::zero(2), 2.0, 2, &grid).unwrap(), 0.0);
        let log1m = ma_measure(&RadialProfile::log1m(1.0), 2).unwrap();
        assert!(prop53_forward(&log1m, 2.0, 2, &grid).unwrap().is_finite());
    }

    #[test]
    fn converse_examples() {
        let u = RadialProfile::log1m(1.0);
        let mu = ma_measure(&u, 2).unwrap();
        let r = prop53_converse_check(&u, &mu, 1.0, 1.0, 2).unwrap();
        assert!(r.integral.is_converged() && r.consistent());
        let r = prop53_converse_check(&RadialProfile::power(0.5), &mu, 1.0, 1.0, 2).unwrap();
        assert!(r.u_in_ep && r.integral.is_converged() && r.consistent());
        let err = prop53_converse_check(&u, &mu, 1.0, 1.0 / 3.0, 2).unwrap_err();
        assert!(matches!(err, Error::ExponentHypothesis { .. }));
    }
}
