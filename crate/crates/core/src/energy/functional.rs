use crate::capacity::scaled_capacity;
use crate::energy::Weight;
use crate::error::Result;
use crate::numerics::{integrate_half_line, Interval, Status, TailVerdict};
use crate::profiles::{CapDecay, RadialProfile};
use crate::radial_ma::{ma_measure, sublevel_mass_of, RadialMeasure};

/// Relative tolerance for energy and criterion integrals.
pub const ENERGY_REL_TOL: f64 = 1e-10;

/// `E_χ(u) = ∫ (−χ)∘u (dd^c u)^n`.
pub fn chi_energy(p: &RadialProfile, w: &Weight, n: u32) -> Result<TailVerdict> {
    chi_energy_of(&ma_measure(p, n)?, p, w)
}

/// [`chi_energy`] against a precomputed Monge-Ampère measure of `p`.
pub fn chi_energy_of(mu: &RadialMeasure, p: &RadialProfile, w: &Weight) -> Result<TailVerdict> {
    let mut pole = 0.0;
    if mu.dirac0() > 0.0 {
        let at_pole = w.neg_limit();
        if at_pole == f64::INFINITY {
            return Ok(TailVerdict::diverged(f64::INFINITY));
        }
        pole = at_pole * mu.dirac0();
    }
    // `−χ >= −χ(0) > 0` bounds the energy below by a multiple of the mass.
    if w.at_origin() != 0.0 && !mu.total().is_finite() {
        return Ok(TailVerdict::diverged(f64::INFINITY));
    }
    let g = |x: f64| -w.eval(p.value(x));
    let body = mu.integrate(g, Interval::open(f64::NEG_INFINITY, 0.0), ENERGY_REL_TOL)?;
    Ok(body.shifted(pole))
}

/// `E_χ(u)` through the layer-cake formula
/// `−χ(0)·μ(Ω) + ∫₀^∞ χ'(−t) μ({u < −t}) dt`.
pub fn chi_energy_layercake(p: &RadialProfile, w: &Weight, n: u32) -> Result<TailVerdict> {
    chi_energy_layercake_of(&ma_measure(p, n)?, p, w)
}

pub fn chi_energy_layercake_of(mu: &RadialMeasure, p: &RadialProfile, w: &Weight) -> Result<TailVerdict> {
    let offset = -w.at_origin();
    let total = mu.total();
    let base = if offset == 0.0 {
        0.0
    } else if total.is_finite() {
        offset * total
    } else {
        return Ok(TailVerdict::diverged(f64::INFINITY));
    };
    let integrand = |t: f64| {
        let d = w.derivative(-t);
        if d == 0.0 {
            return 0.0;
        }
        d * sublevel_mass_of(mu, p, t)
    };
    if !total.is_finite() {
        // The integrand is infinite near t = 0 only through the mass.
        let probe = integrand(1e-300);
        if probe == f64::INFINITY {
            return Ok(TailVerdict::diverged(f64::INFINITY));
        }
    }
    let v = integrate_half_line(integrand, ENERGY_REL_TOL)?;
    Ok(v.total().shifted(base))
}

/// Verdicts of the capacity criterion `∫₀^∞ tⁿ χ'(−t) Cap({u < −t}) dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionVerdict {
    /// Contribution of `t ∈ (0, 1]`, where the boundary behaviour matters.
    pub boundary: TailVerdict,
    /// Contribution of `t ∈ [1, ∞)`, where the behaviour near the pole
    /// matters; analytic tail exponents override the doubling heuristic.
    pub pole: TailVerdict,
}

impl CriterionVerdict {
    pub fn combined(&self) -> TailVerdict {
        self.boundary.combine(self.pole)
    }

    pub fn is_converged(&self) -> bool {
        self.combined().is_converged()
    }
}

/// Exponent rule for the pole part: `Some(true)` when the tail converges.
fn analytic_tail(p: &RadialProfile, w: &Weight, n: u32) -> Option<bool> {
    let decay = p.capacity_decay()?;
    let n = n as f64;
    match (decay, w) {
        (_, Weight::Constant) => Some(true),
        (CapDecay::Vanishing, _) => Some(true),
        (CapDecay::Rapid, Weight::Power(_) | Weight::ShiftedPower(_)) => Some(true),
        (CapDecay::Power(beta), Weight::Power(q) | Weight::ShiftedPower(q)) => Some(n + q - 1.0 - n * beta < -1.0),
        (CapDecay::Power(_), Weight::Exp(_)) => Some(false),
        _ => None,
    }
}

/// The integral `∫₀^∞ tⁿ χ'(−t) Cap({u < −t}) dt` split at `t = 1`.
pub fn capacity_criterion(p: &RadialProfile, w: &Weight, n: u32) -> Result<CriterionVerdict> {
    let integrand = |t: f64| {
        let d = w.derivative(-t);
        if d == 0.0 {
            return 0.0;
        }
        let h = scaled_capacity(p, t, n);
        if h == 0.0 {
            0.0
        } else {
            d * h
        }
    };
    let whole_ball = p.boundary_value() < 0.0;
    let mut v = if whole_ball {
        // Cap = +inf on a neighbourhood of t = 0.
        let tail = crate::numerics::integrate(integrand, 1.0, f64::INFINITY, ENERGY_REL_TOL).unwrap_or(TailVerdict {
            status: Status::Inconclusive,
            value: f64::NAN,
            ratio: f64::NAN,
        });
        crate::numerics::HalfLine { head: TailVerdict::diverged(f64::INFINITY), tail }
    } else {
        integrate_half_line(integrand, ENERGY_REL_TOL)?
    };
    if let Some(converges) = analytic_tail(p, w, n) {
        v.tail.status = if converges { Status::Converged } else { Status::Diverged };
    }
    Ok(CriterionVerdict { boundary: v.head, pole: v.tail })
}
