use std::f64::consts::E;
use std::io::Write;
use std::sync::Arc;

use crate::capacity::{cap_ball, cap_sublevel, fmt_ext};
use crate::energy::{capacity_criterion, CriterionVerdict, CustomWeight, Weight, WeightFlags};
use crate::error::{Error, Result};
use crate::numerics::{invert_monotone, log_space, Direction, MonotoneFn};
use crate::radial_ma::RadialMeasure;
use crate::solver::{f_eps, solve_radial, EpsilonDominator};

/// Default radii for domination checks: 256 log-spaced in `(10⁻⁶, 1 − 10⁻⁶)`.
pub fn default_r_grid() -> Vec<f64> {
    log_space(1e-6, 1.0 - 1e-6, 256)
}

/// Closed-ball comparison `μ(B_r) <= F_ε(Cap(B_r))`.
#[derive(Debug, Clone, PartialEq)]
pub struct DominationReport {
    pub r: Vec<f64>,
    pub mass: Vec<f64>,
    pub bound: Vec<f64>,
    /// `max_r μ(B_r) / F_ε(Cap(B_r))`.
    pub worst_ratio: f64,
}

impl DominationReport {
    pub fn passes(&self) -> bool {
        self.worst_ratio <= 1.0 + 1e-12
    }
}

/// Checks `μ(B_r) <= F_ε(Cap(B_r))` on closed balls.
pub fn domination_check(mu: &RadialMeasure, d: &EpsilonDominator, r_grid: &[f64]) -> Result<DominationReport> {
    if mu.dirac0() > 0.0 {
        return Err(Error::ChargesPluripolar(mu.dirac0()));
    }
    let n = mu.n();
    let mut report = DominationReport { r: r_grid.to_vec(), mass: Vec::new(), bound: Vec::new(), worst_ratio: 0.0 };
    for &r in r_grid {
        let m = mu.mass_closed_ball(r);
        let b = f_eps(d, cap_ball(r, n)?, n)?;
        let ratio = if m == 0.0 { 0.0 } else { m / b };
        report.worst_ratio = report.worst_ratio.max(ratio);
        report.mass.push(m);
        report.bound.push(b);
    }
    Ok(report)
}

/// `H(x) = e·∫₀^x ε + e·ε(0) + μ(Ω)^{1/n}` on `x >= 0`.
#[derive(Debug, Clone)]
pub struct HFunction {
    pub dominator: EpsilonDominator,
    /// `s₀ = μ(Ω)^{1/n}`.
    pub s0: f64,
}

impl HFunction {
    pub fn eval(&self, x: f64) -> f64 {
        E * self.dominator.primitive(x) + self.at_zero()
    }

    pub fn derivative(&self, x: f64) -> f64 {
        E * self.dominator.eval(x)
    }

    /// `H(0) = e·ε(0) + s₀`.
    pub fn at_zero(&self) -> f64 {
        E * self.dominator.eval(0.0) + self.s0
    }

    /// `sup H`, finite exactly when `ε` is integrable.
    pub fn sup(&self) -> f64 {
        E * self.dominator.total_integral() + self.at_zero()
    }

    /// `H⁻¹(s)` for `H(0) <= s < sup H`.
    pub fn inverse(&self, s: f64) -> Option<f64> {
        if s < self.at_zero() || s >= self.sup() {
            return None;
        }
        self.dominator.primitive_inverse((s - self.at_zero()) / E)
    }

    /// `H` as a monotone function on `[0, ∞)`.
    pub fn monotone(&self) -> MonotoneFn {
        let h = self.clone();
        let dh = self.clone();
        MonotoneFn::closed(format!("H[{}]", self.dominator.label()), Direction::Nondecreasing, 0.0, f64::INFINITY, move |x| {
            h.eval(x)
        })
        .with_derivative(move |x| dh.derivative(x))
    }

    /// `H⁻¹(s)` by bisection on [`HFunction::monotone`].
    pub fn inverse_by_bisection(&self, s: f64) -> Result<f64> {
        invert_monotone(&self.monotone(), s, 1e-14)
    }
}

pub fn h_function(d: &EpsilonDominator, mu_total: f64, n: u32) -> HFunction {
    assert!(mu_total.is_finite() && mu_total >= 0.0, "total mass must be finite");
    HFunction { dominator: d.clone(), s0: mu_total.powf(1.0 / n as f64) }
}

/// `exp(−n·H⁻¹(s))`; 1 below `H(0)` and 0 from `sup H` on.
pub fn capacity_bound(d: &EpsilonDominator, mu_total: f64, n: u32, s: f64) -> f64 {
    bound_from(&h_function(d, mu_total, n), n, s)
}

fn bound_from(h: &HFunction, n: u32, s: f64) -> f64 {
    if s < h.at_zero() {
        return 1.0;
    }
    match h.inverse(s) {
        Some(x) => (-(n as f64) * x).exp(),
        None => 0.0,
    }
}

/// `e∫₀^∞ ε + e·ε(0) + μ(Ω)^{1/n}`, `+inf` when `ε` is not integrable.
pub fn uniform_bound(d: &EpsilonDominator, mu_total: f64, n: u32) -> f64 {
    h_function(d, mu_total, n).sup()
}

/// The sequence `s_{j+1} = s_j + e·ε(f(s_j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SIteration {
    pub s: Vec<f64>,
    pub f: Vec<f64>,
    /// Indices `j` with `f(s_j) < j + f(s₀)`.
    pub violations: Vec<usize>,
}

impl SIteration {
    /// `f(s_j) >= j` for every emitted `j`.
    pub fn dominates_index(&self) -> bool {
        self.f.iter().enumerate().all(|(j, &v)| v >= j as f64 - 1e-9)
    }

    /// CSV with columns `j,s_j,f_sj`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["j", "s_j", "f_sj"])?;
        for (j, (s, f)) in self.s.iter().zip(&self.f).enumerate() {
            w.write_record([j.to_string(), fmt_ext(*s), fmt_ext(*f)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Iterates `s_j` until `f(s_j) > (40/n)·ln 10` or `10⁴` steps, where
/// `f(s) = −(1/n) log Cap({u < −s})`.
pub fn iterate_s<F: Fn(f64) -> f64>(d: &EpsilonDominator, f: F, s0: f64, n: u32) -> SIteration {
    let stop = 40.0 / n as f64 * 10f64.ln();
    let mut it = SIteration { s: Vec::new(), f: Vec::new(), violations: Vec::new() };
    let mut s = s0;
    let f0 = f(s0);
    for j in 0..=10_000 {
        let v = f(s);
        it.s.push(s);
        it.f.push(v);
        if v < j as f64 + f0 - 1e-9 {
            it.violations.push(j);
        }
        if v > stop {
            break;
        }
        s += E * d.eval(v);
    }
    it
}

/// Outcome of the capacity-decay check on the solution of `(dd^c φ)^n = μ`.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub n: u32,
    pub s0: f64,
    pub s: Vec<f64>,
    pub bound: Vec<f64>,
    pub actual: Vec<f64>,
    /// `bound − actual` per grid point.
    pub violation: Vec<f64>,
    pub worst_violation: f64,
    pub iteration: SIteration,
    /// Criterion of the solution against `−χ(−t) = exp(n H⁻¹(t) / 2)`.
    pub criterion: CriterionVerdict,
    /// For `ε ≡ 1`: `max_s Cap({φ < −s}) e^{ns/e}` on the grid.
    pub decay_constant: Option<f64>,
}

impl BoundReport {
    pub fn passes(&self) -> bool {
        self.worst_violation >= -1e-9 && self.criterion.is_converged()
    }

    /// CSV with columns `s,bound,actual,violation`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["s", "bound", "actual", "violation"])?;
        for k in 0..self.s.len() {
            w.write_record([
                fmt_ext(self.s[k]),
                fmt_ext(self.bound[k]),
                fmt_ext(self.actual[k]),
                fmt_ext(self.violation[k]),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Weight with `−χ(−t) = exp(n·H⁻¹(t)/2)`, constant `−1` below `H(0)`.
pub fn h_weight(h: &HFunction, n: u32) -> Weight {
    let half_n = n as f64 / 2.0;
    let (h1, h2) = (h.clone(), h.clone());
    let chi = move |t: f64| {
        let s = -t;
        if s < h1.at_zero() {
            return -1.0;
        }
        match h1.inverse(s) {
            Some(x) => -(half_n * x).exp(),
            None => f64::NEG_INFINITY,
        }
    };
    let derivative = move |t: f64| {
        let s = -t;
        if s < h2.at_zero() {
            return 0.0;
        }
        match h2.inverse(s) {
            Some(x) => half_n * (half_n * x).exp() / h2.derivative(x),
            None => f64::INFINITY,
        }
    };
    Weight::Custom(Arc::new(CustomWeight {
        label: format!("expH[{}]", h.dominator.label()),
        chi: Arc::new(chi),
        derivative: Arc::new(derivative),
        flags: WeightFlags { vanishes_at_origin: false, unbounded_below: true, convex: false, concave: false },
        neg_limit: f64::INFINITY,
    }))
}

/// Solves `(dd^c φ)^n = μ` and compares `Cap({φ < −s})` to `exp(−nH⁻¹(s))`
/// on `s ∈ [max(s₀, 10⁻³), 10³]`.
pub fn verify_thm51(mu: &RadialMeasure, d: &EpsilonDominator) -> Result<BoundReport> {
    let dom = domination_check(mu, d, &default_r_grid())?;
    if !dom.passes() {
        return Err(Error::DominationViolated(dom.worst_ratio));
    }
    let n = mu.n();
    let h = h_function(d, mu.total(), n);
    let phi = solve_radial(mu)?.profile;
    let s = log_space(h.s0.max(1e-3), 1e3, 96);
    let bound: Vec<f64> = s.iter().map(|&v| bound_from(&h, n, v)).collect();
    let actual: Vec<f64> = s.iter().map(|&v| cap_sublevel(&phi, v, n)).collect();
    let violation: Vec<f64> = bound.iter().zip(&actual).map(|(b, a)| b - a).collect();
    let worst_violation = violation.iter().copied().fold(f64::INFINITY, f64::min);
    let curve = |v: f64| -cap_sublevel(&phi, v, n).ln() / n as f64;
    let iteration = iterate_s(d, curve, h.s0, n);
    let criterion = capacity_criterion(&phi, &h_weight(&h, n), n)?;
    let decay_constant = match d {
        EpsilonDominator::Constant(c) if *c == 1.0 => {
            Some(s.iter().zip(&actual).map(|(v, a)| a * (n as f64 * v / E).exp()).fold(0.0, f64::max))
        }
        _ => None,
    };
    Ok(BoundReport { n, s0: h.s0, s, bound, actual, violation, worst_violation, iteration, criterion, decay_constant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::RadialProfile;
    use crate::radial_ma::ma_measure;

    #[test]
    fn h_examples() {
        let h = h_function(&EpsilonDominator::constant(1.0), 1.0, 2);
        assert!((h.eval(1.0) - (2.0 * E + 1.0)).abs() < 1e-14);
        assert!((h.inverse(2.0 * E + 1.0).unwrap() - 1.0).abs() < 1e-14);
        let h = h_function(&EpsilonDominator::exp_decay(1.0), 1.0, 2);
        assert!((h.sup() - (2.0 * E + 1.0)).abs() < 1e-14);
        let h = h_function(&EpsilonDominator::power_decay(2.0), 32.0, 5);
        assert!((h.at_zero() - (E + 2.0)).abs() < 1e-14);
    }

    #[test]
    fn bound_examples() {
        let c = EpsilonDominator::constant(1.0);
        assert!((capacity_bound(&c, 1.0, 2, 2.0 * E + 1.0) - (-2f64).exp()).abs() < 1e-14);
        assert_eq!(capacity_bound(&EpsilonDominator::exp_decay(1.0), 1.0, 2, 2.0 * E + 1.5), 0.0);
        assert_eq!(capacity_bound(&c, 1.0, 2, 1.0), 1.0);
        assert!((uniform_bound(&EpsilonDominator::exp_decay(1.0), 1.0, 2) - 6.43656365691809).abs() < 1e-12);
        assert_eq!(uniform_bound(&c, 1.0, 2), f64::INFINITY);
        assert!((uniform_bound(&EpsilonDominator::power_decay(2.0), 1.0, 2) - (2.0 * E + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn iteration_examples() {
        let c = EpsilonDominator::constant(1.0);
        let it = iterate_s(&c, |s| s, 0.0, 2);
        assert!((it.s[3] - 3.0 * E).abs() < 1e-13);
        let d = EpsilonDominator::exp_decay(1.0);
        let it = iterate_s(&d, |s| s, 1.0, 2);
        assert!(it.s.windows(2).all(|w| w[1] > w[0]));
        assert!(it.s.iter().all(|s| *s < 50.0));
    }

    #[test]
    fn domination_examples() {
        let c = EpsilonDominator::constant(1.0);
        let grid = default_r_grid();
        let atom = ma_measure(&RadialProfile::extremal((-1f64).exp()), 2).unwrap();
        assert!(domination_check(&atom, &c, &grid).unwrap().passes());
        let log1m = ma_measure(&RadialProfile::log1m(1.0), 2).unwrap();
        assert!(domination_check(&log1m, &c, &grid).unwrap().passes());
        let dirac = RadialMeasure::dirac(2, 1.0);
        assert_eq!(domination_check(&dirac, &c, &grid).unwrap_err(), Error::ChargesPluripolar(1.0));
    }

    #[test]
    fn log1m_bound_holds() {
        let mu = ma_measure(&RadialProfile::log1m(1.0), 2).unwrap();
        let r = verify_thm51(&mu, &EpsilonDominator::constant(1.0)).unwrap();
        assert!(r.passes(), "worst {} criterion {:?}", r.worst_violation, r.criterion);
        assert!(r.iteration.dominates_index() && r.iteration.violations.is_empty());
        assert!(r.decay_constant.unwrap().is_finite());
    }

    #[test]
    fn sphere_atom_bound_holds() {
        let mu = RadialMeasure::sphere_atom(2, (-1f64).exp(), 1.0).unwrap();
        let r = verify_thm51(&mu, &EpsilonDominator::constant(1.0)).unwrap();
        assert!(r.passes());
    }

    #[test]
    fn failing_domination_is_an_error() {
        let mu = ma_measure(&RadialProfile::log1m(1.0), 2).unwrap();
        let d = EpsilonDominator::exp_decay(5.0);
        assert!(matches!(verify_thm51(&mu, &d), Err(Error::DominationViolated(_))));
    }
}
