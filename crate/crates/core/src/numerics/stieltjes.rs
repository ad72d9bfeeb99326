use crate::error::{Error, Result};
use crate::numerics::monotone::{Direction, MonotoneFn};
use crate::numerics::quadrature::{
    finite, integrate, integrate_from_neg_infinity, integrate_from_singular, integrate_to_singular, TailVerdict,
};

/// An interval of the real line with open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, lo_closed: false, hi_closed: false }
    }

    /// `(lo, hi]`
    pub fn left_open(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, lo_closed: false, hi_closed: true }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }
}

/// A positive measure on the line: an absolutely continuous part given by a
/// nondecreasing cumulative function, plus finitely many atoms.
#[derive(Debug, Clone)]
pub struct Distribution {
    continuous: MonotoneFn,
    atoms: Vec<(f64, f64)>,
}

impl Distribution {
    /// `atoms` are `(location, jump)` pairs with positive jumps.
    pub fn new(continuous: MonotoneFn, mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if continuous.direction() != Direction::Nondecreasing {
            return Err(Error::NotADistribution("declared nonincreasing".into()));
        }
        continuous.check_direction()?;
        if let Some(&(x, j)) = atoms.iter().find(|(_, j)| !(*j > 0.0)) {
            return Err(Error::NotADistribution(format!("atom at {x} has jump {j}")));
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Distribution { continuous, atoms })
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn continuous(&self) -> &MonotoneFn {
        &self.continuous
    }
}

/// `∫ g dν` over `interval` for a distribution `ν`: the continuous part is
/// integrated as `∫ g·F'`, and each atom inside the interval contributes
/// `g(a_i)·jump_i`.
///
/// Open finite ends are treated as possibly singular endpoints and infinite
/// ends use the doubling rule, so the verdict reflects convergence there.
pub fn stieltjes<G>(g: G, dist: &Distribution, interval: Interval, rel_tol: f64) -> Result<TailVerdict>
where
    G: Fn(f64) -> f64,
{
    if interval.is_empty() {
        return Ok(TailVerdict::converged(0.0));
    }
    let mut atom_sum = 0.0;
    for &(x, jump) in &dist.atoms {
        if interval.contains(x) {
            let v = g(x);
            if !v.is_finite() {
                if v == f64::INFINITY {
                    return Ok(TailVerdict::diverged(f64::INFINITY));
                }
                return Err(Error::NonIntegrableSample { x, value: v });
            }
            atom_sum += v * jump;
        }
    }
    let (dom_lo, dom_hi) = dist.continuous.domain();
    let lo = interval.lo.max(dom_lo);
    let hi = interval.hi.min(dom_hi);
    if !(lo < hi) {
        return Ok(TailVerdict::converged(atom_sum));
    }
    let integrand = |x: f64| g(x) * dist.continuous.derivative(x);
    let mut breaks: Vec<f64> = dist.atoms.iter().map(|a| a.0).filter(|&x| x > lo && x < hi).collect();
    if let Some(knots) = dist.continuous.knots() {
        breaks.extend(knots.iter().copied().filter(|&x| x > lo && x < hi));
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let verdict = integrate_with_breaks(&integrand, lo, hi, !interval.lo_closed, !interval.hi_closed, &breaks, rel_tol)?;
    Ok(verdict.shifted(atom_sum))
}

/// Integrates over `(lo, hi)` split at `breaks`. Infinite ends use doubling,
/// ends flagged singular use the exponential endpoint map, and the
/// remaining finite pieces are integrated adaptively.
pub(crate) fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    lo_singular: bool,
    hi_singular: bool,
    breaks: &[f64],
    rel_tol: f64,
) -> Result<TailVerdict> {
    let mut points = Vec::with_capacity(breaks.len() + 2);
    points.push(lo);
    points.extend(breaks.iter().copied().filter(|&x| x > lo && x < hi));
    points.push(hi);
    // Make sure the end pieces are finite so the special maps get a finite
    // partner endpoint.
    if !lo.is_finite() && points.len() == 2 {
        let mid = if hi.is_finite() { hi - 1.0 } else { 0.0 };
        points.insert(1, mid);
    }
    if !hi.is_finite() && points.len() == 2 {
        let mid = if lo.is_finite() { lo + 1.0 } else { 0.0 };
        points.insert(1, mid);
    }
    let pieces = points.len() - 1;
    let mut total = TailVerdict::converged(0.0);
    for k in 0..pieces {
        let (a, b) = (points[k], points[k + 1]);
        let first = k == 0;
        let last = k == pieces - 1;
        let piece = if first && !a.is_finite() {
            integrate_from_neg_infinity(f, b, rel_tol)?
        } else if last && !b.is_finite() {
            integrate(f, a, f64::INFINITY, rel_tol)?
        } else if first && last && lo_singular && hi_singular {
            let mid = 0.5 * (a + b);
            integrate_from_singular(f, a, mid, rel_tol)?.combine(integrate_to_singular(f, mid, b, rel_tol)?)
        } else if first && lo_singular {
            integrate_from_singular(f, a, b, rel_tol)?
        } else if last && hi_singular {
            integrate_to_singular(f, a, b, rel_tol)?
        } else {
            TailVerdict::converged(finite(f, a, b)?)
        };
        total = total.combine(piece);
        if total.is_diverged() {
            return Ok(total);
        }
    }
    Ok(total)
}
