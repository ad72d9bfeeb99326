use crate::capacity::cap_sublevel;
use crate::error::{Error, Result};
use crate::numerics::Interval;
use crate::profiles::{superlevel_intervals, RadialProfile};
use crate::radial_ma::{ma_measure, RadialMeasure};

/// Mass of the open sublevel set `{u < −s}` under `μ = (dd^c u)^n`.
pub fn sublevel_mass_of(mu: &RadialMeasure, p: &RadialProfile, s: f64) -> f64 {
    mu.mass_open(p.sublevel_log_radius(s))
}

/// Mass of `{u < −s}` under `(dd^c u)^n`, origin included.
pub fn sublevel_mass(p: &RadialProfile, s: f64, n: u32) -> Result<f64> {
    Ok(sublevel_mass_of(&ma_measure(p, n)?, p, s))
}

/// Deviations `|μ_j(B ∩ {u > −j}) − μ_u(B)|` of the approximant measures.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproximantReport {
    pub j: Vec<f64>,
    /// `μ_u(B)` per annulus.
    pub targets: Vec<f64>,
    /// `masses[k][b]`: mass of `1_{u>−j_k}(dd^c u_{j_k})^n` on annulus `b`.
    pub masses: Vec<Vec<f64>>,
    /// Sup over annuli of the deviation, per `j`.
    pub deviations: Vec<f64>,
}

impl ApproximantReport {
    /// Deviations never increase with `j`.
    pub fn nonincreasing(&self) -> bool {
        self.deviations.windows(2).all(|w| w[1] <= w[0])
    }

    /// Deviations decrease strictly until they fall below `floor`, and stay
    /// below it afterwards.
    pub fn strictly_decreasing_to(&self, floor: f64) -> bool {
        let mut reached = false;
        for w in self.deviations.windows(2) {
            if w[0] < floor {
                reached = true;
            }
            if reached {
                if w[1] >= floor {
                    return false;
                }
            } else if w[1] >= w[0] {
                return false;
            }
        }
        self.deviations.last().is_some_and(|&d| d < floor)
    }

    /// Restricted masses are nondecreasing in `j` and bounded by the target.
    pub fn monotone_masses(&self, tol: f64) -> bool {
        let bounded = self.masses.iter().all(|row| row.iter().zip(&self.targets).all(|(m, t)| *m <= t + tol));
        let increasing = self.masses.windows(2).all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| a <= b));
        bounded && increasing
    }
}

/// Checks `∫_{B ∩ {u>−j}} (dd^c u_j)^n → μ_u(B)` on annuli `r₁ < |z| < r₂`.
pub fn approximant_convergence_check(
    p: &RadialProfile,
    n: u32,
    j_list: &[f64],
    annuli: &[(f64, f64)],
) -> Result<ApproximantReport> {
    for &(r1, r2) in annuli {
        if !(r1 > 0.0) {
            return Err(Error::TouchesPole);
        }
        if !(r1 < r2 && r2 <= 1.0) {
            return Err(Error::RadiusOutOfRange(r2));
        }
    }
    let mu = ma_measure(p, n)?.nonpluripolar_part();
    let shells: Vec<Interval> = annuli.iter().map(|&(a, b)| Interval::open(a.ln(), b.ln())).collect();
    let targets: Vec<f64> = shells.iter().map(|iv| mu.mass_in(*iv)).collect();
    let mut masses = Vec::with_capacity(j_list.len());
    let mut deviations = Vec::with_capacity(j_list.len());
    for &j in j_list {
        let uj = p.clip(j);
        let muj = ma_measure(&uj, n)?;
        // {u > −j} is the shell outside the log-radius where u reaches −j.
        let cut = if -j < p.infimum() { f64::NEG_INFINITY } else { p.inverse(-j)? };
        let row: Vec<f64> = shells
            .iter()
            .map(|iv| {
                let lo = iv.lo.max(cut);
                muj.mass_in(Interval::open(lo, iv.hi))
            })
            .collect();
        let dev = row.iter().zip(&targets).map(|(m, t)| (m - t).abs()).fold(0.0, f64::max);
        masses.push(row);
        deviations.push(dev);
    }
    Ok(ApproximantReport { j: j_list.to_vec(), targets, masses, deviations })
}

/// Masses of `(dd^c u)^n` and `(dd^c max(u, v))^n` on each component of
/// `{u > v}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// Components of `{u > v}` as log-radius intervals.
    pub intervals: Vec<(f64, f64)>,
    pub mass_u: Vec<f64>,
    pub mass_max: Vec<f64>,
}

impl ComparisonReport {
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.mass_u.iter().zip(&self.mass_max).all(|(a, b)| (a - b).abs() <= rel_tol * a.abs().max(b.abs()).max(1.0))
    }
}

/// Checks `1_{u>v}(dd^c max(u,v))^n = 1_{u>v}(dd^c u)^n` interval by interval.
pub fn comparison_identity_check(u: &RadialProfile, v: &RadialProfile, n: u32) -> Result<ComparisonReport> {
    let intervals = superlevel_intervals(u, v)?;
    let mu_u = ma_measure(u, n)?;
    let mu_max = ma_measure(&u.pointwise_max(v)?, n)?;
    let shells = intervals.iter().map(|&(a, b)| Interval::open(a, b));
    let (mass_u, mass_max) = shells.map(|iv| (mu_u.mass_in(iv), mu_max.mass_in(iv))).unzip();
    Ok(ComparisonReport { intervals, mass_u, mass_max })
}

/// Two sides of an inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl InequalityReport {
    fn new(lhs: f64, rhs: f64) -> Self {
        let slack = if rhs == f64::INFINITY { f64::INFINITY } else { rhs - lhs };
        InequalityReport { lhs, rhs, slack }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol
    }
}

/// Checks `∫_{φ<u} (dd^c u)^n <= ∫_{{φ<u} ∪ {φ=−∞}} (dd^c φ)^n`.
///
/// The origin belongs to `{φ < u}` when `φ(0) < u(0)` as limits, and to
/// `{φ = −∞}` when `φ` has a pole.
pub fn cor23_check(phi: &RadialProfile, u: &RadialProfile, n: u32) -> Result<InequalityReport> {
    if u.boundary_value() > 0.0 {
        return Err(Error::InvalidProfile("u must be nonpositive".into()));
    }
    let mu_phi = ma_measure(phi, n)?;
    if !mu_phi.total().is_finite() {
        return Err(Error::NotInF("phi has infinite total mass".into()));
    }
    let mu_u = ma_measure(u, n)?;
    let intervals = superlevel_intervals(u, phi)?;
    let origin_inside = phi.infimum() < u.infimum();
    let mut lhs: f64 = intervals.iter().map(|&(a, b)| mu_u.mass_in(Interval::open(a, b))).sum();
    let mut rhs: f64 = intervals.iter().map(|&(a, b)| mu_phi.mass_in(Interval::open(a, b))).sum();
    if origin_inside {
        lhs += mu_u.dirac0();
    }
    if origin_inside || !phi.is_bounded() {
        rhs += mu_phi.dirac0();
    }
    Ok(InequalityReport::new(lhs, rhs))
}

/// The three terms of `t^n Cap({φ<−s−t}) <= (dd^c φ)^n({φ<−s}) <= s^n Cap({φ<−s})`.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub lower: f64,
    pub mass: f64,
    pub upper: f64,
}

impl SandwichReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.lower <= self.mass + tol && self.mass <= self.upper + tol
    }

    /// `min(mass − lower, upper − mass)`.
    pub fn slack(&self) -> f64 {
        (self.mass - self.lower).min(self.upper - self.mass)
    }
}

/// Two-sided capacity bound for the mass of a sublevel set.
pub fn cor25_check(p: &RadialProfile, s: f64, t: f64, n: u32) -> Result<SandwichReport> {
    let mu = ma_measure(p, n)?;
    sandwich_with(&mu, p, s, t)
}

pub(crate) fn sandwich_with(mu: &RadialMeasure, p: &RadialProfile, s: f64, t: f64) -> Result<SandwichReport> {
    if !mu.total().is_finite() {
        return Err(Error::NotInF("infinite total mass".into()));
    }
    let n = mu.n();
    let scaled = |a: f64, cap: f64| if cap == 0.0 { 0.0 } else { a.powi(n as i32) * cap };
    let lower = scaled(t, cap_sublevel(p, s + t, n));
    let upper = scaled(s, cap_sublevel(p, s, n));
    Ok(SandwichReport { lower, mass: sublevel_mass_of(mu, p, s), upper })
}
