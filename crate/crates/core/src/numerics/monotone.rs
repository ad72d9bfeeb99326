use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Declared direction of a monotone function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Nondecreasing,
    Nonincreasing,
}

#[derive(Clone)]
enum Rule {
    Closed { f: ScalarFn, df: Option<ScalarFn>, label: String },
    Grid { xs: Vec<f64>, ys: Vec<f64> },
}

/// A monotone scalar function on an interval, given either by a closed-form
/// rule or by a knot grid with piecewise-linear interpolation.
#[derive(Clone)]
pub struct MonotoneFn {
    rule: Rule,
    direction: Direction,
    lo: f64,
    hi: f64,
}

impl fmt::Debug for MonotoneFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rule = match &self.rule {
            Rule::Closed { label, .. } => format!("closed({label})"),
            Rule::Grid { xs, .. } => format!("grid({} knots)", xs.len()),
        };
        f.debug_struct("MonotoneFn")
            .field("rule", &rule)
            .field("direction", &self.direction)
            .field("domain", &(self.lo, self.hi))
            .finish()
    }
}

impl MonotoneFn {
    /// Closed-form rule on `[lo, hi]` (endpoints may be infinite).
    pub fn closed<F>(label: impl Into<String>, direction: Direction, lo: f64, hi: f64, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        MonotoneFn { rule: Rule::Closed { f: Arc::new(f), df: None, label: label.into() }, direction, lo, hi }
    }

    /// Attaches an analytic derivative to a closed-form rule.
    pub fn with_derivative<F>(mut self, df: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if let Rule::Closed { df: slot, .. } = &mut self.rule {
            *slot = Some(Arc::new(df));
        }
        self
    }

    /// Knot grid; knots must be strictly increasing and values must respect
    /// `direction` within 1e-12 relative.
    pub fn grid(xs: Vec<f64>, ys: Vec<f64>, direction: Direction) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::Parse("grid needs at least two knots with matching values".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Parse("grid knots must be strictly increasing".into()));
        }
        for w in ys.windows(2) {
            let slack = 1e-12 * w[0].abs().max(w[1].abs());
            let ok = match direction {
                Direction::Nondecreasing => w[1] >= w[0] - slack,
                Direction::Nonincreasing => w[1] <= w[0] + slack,
            };
            if !ok {
                return Err(Error::NotADistribution(format!("grid values violate {direction:?}")));
            }
        }
        let (lo, hi) = (xs[0], xs[xs.len() - 1]);
        Ok(MonotoneFn { rule: Rule::Grid { xs, ys }, direction, lo, hi })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn knots(&self) -> Option<&[f64]> {
        match &self.rule {
            Rule::Grid { xs, .. } => Some(xs),
            Rule::Closed { .. } => None,
        }
    }

    /// Evaluates the function; grids are clamped to their end values.
    pub fn eval(&self, x: f64) -> f64 {
        match &self.rule {
            Rule::Closed { f, .. } => f(x),
            Rule::Grid { xs, ys } => {
                if x <= xs[0] {
                    return ys[0];
                }
                let last = xs.len() - 1;
                if x >= xs[last] {
                    return ys[last];
                }
                let k = xs.partition_point(|&v| v <= x) - 1;
                let t = (x - xs[k]) / (xs[k + 1] - xs[k]);
                ys[k] + t * (ys[k + 1] - ys[k])
            }
        }
    }

    /// Derivative: analytic when supplied, piecewise constant on grids,
    /// central differences otherwise.
    pub fn derivative(&self, x: f64) -> f64 {
        match &self.rule {
            Rule::Closed { df: Some(df), .. } => df(x),
            Rule::Closed { f, df: None, .. } => {
                let h = 1e-6 * (1.0 + x.abs());
                let (a, b) = (x - h, x + h);
                let (a, b) = (a.max(self.lo), b.min(self.hi));
                (f(b) - f(a)) / (b - a)
            }
            Rule::Grid { xs, ys } => {
                if x < xs[0] || x >= xs[xs.len() - 1] {
                    return 0.0;
                }
                let k = xs.partition_point(|&v| v <= x) - 1;
                (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k])
            }
        }
    }

    /// Checks the declared direction on the knots (grids) or on a sample of
    /// the finite part of the domain (closed forms).
    pub fn check_direction(&self) -> Result<()> {
        let samples: Vec<f64> = match &self.rule {
            Rule::Grid { xs, .. } => xs.clone(),
            Rule::Closed { .. } => {
                let lo = if self.lo.is_finite() { self.lo } else { -1e6 };
                let hi = if self.hi.is_finite() { self.hi } else { 1e6 };
                (0..=256).map(|k| lo + (hi - lo) * k as f64 / 256.0).collect()
            }
        };
        for w in samples.windows(2) {
            let (a, b) = (self.eval(w[0]), self.eval(w[1]));
            let ok = match self.direction {
                Direction::Nondecreasing => b >= a,
                Direction::Nonincreasing => b <= a,
            };
            if !ok {
                return Err(Error::NotADistribution(format!(
                    "values {a} at {} and {b} at {} violate {:?}",
                    w[0], w[1], self.direction
                )));
            }
        }
        Ok(())
    }
}

/// Solves `f(x) = y` by bisection on the domain of `f`.
///
/// Infinite domain ends are bracketed by doubling. On a plateau at level `y`
/// the leftmost point of the plateau is returned (the infimum of
/// `{x : f(x) >= y}` for nondecreasing `f`, mirrored for nonincreasing).
pub fn invert_monotone(f: &MonotoneFn, y: f64, tol: f64) -> Result<f64> {
    // Work with a nondecreasing view g(x) = ±f(x).
    let sign = match f.direction() {
        Direction::Nondecreasing => 1.0,
        Direction::Nonincreasing => -1.0,
    };
    let g = |x: f64| sign * f.eval(x);
    let target = sign * y;
    let (dom_lo, dom_hi) = f.domain();

    let mut lo = if dom_lo.is_finite() { dom_lo } else { dom_hi.min(0.0) - 1.0 };
    let mut hi = if dom_hi.is_finite() { dom_hi } else { dom_lo.max(0.0) + 1.0 };
    if !dom_lo.is_finite() {
        let mut step = 1.0;
        while g(lo) >= target {
            step *= 2.0;
            lo -= step;
            if !lo.is_finite() || step > 1e300 {
                return Err(Error::OutOfRange(format!("{y} below the range of the function")));
            }
        }
    } else if g(lo) > target + tol * (1.0 + y.abs()) {
        return Err(Error::OutOfRange(format!("{y} below the range of the function")));
    }
    if !dom_hi.is_finite() {
        let mut step = 1.0;
        while g(hi) < target {
            step *= 2.0;
            hi += step;
            if !hi.is_finite() || step > 1e300 {
                return Err(Error::OutOfRange(format!("{y} above the range of the function")));
            }
        }
    } else if g(hi) < target - tol * (1.0 + y.abs()) {
        return Err(Error::OutOfRange(format!("{y} above the range of the function")));
    }
    if g(lo) >= target {
        return Ok(lo);
    }
    // Invariant: g(lo) < target <= g(hi) (up to tolerance at a finite hi).
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_inverse() {
        let f = MonotoneFn::closed("x", Direction::Nondecreasing, f64::NEG_INFINITY, f64::INFINITY, |x| x);
        assert!((invert_monotone(&f, 0.3, 1e-12).unwrap() - 0.3).abs() < 1e-12);
    }

    #[test]
    fn affine_h_inverse() {
        let e = std::f64::consts::E;
        let f = MonotoneFn::closed("H", Direction::Nondecreasing, 0.0, f64::INFINITY, move |x| e * x + e + 1.0);
        let x = invert_monotone(&f, 2.0 * e + 1.0, 1e-12).unwrap();
        assert!((x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cube_root() {
        let f = MonotoneFn::closed("x^3", Direction::Nondecreasing, f64::NEG_INFINITY, f64::INFINITY, |x| x * x * x);
        assert!((invert_monotone(&f, 8.0, 1e-12).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn plateau_returns_leftmost_point() {
        let f = MonotoneFn::closed("clamp", Direction::Nondecreasing, -5.0, 5.0, |x: f64| x.clamp(-1.0, 1.0));
        let x = invert_monotone(&f, 1.0, 1e-12).unwrap();
        assert!((x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn out_of_range() {
        let f = MonotoneFn::closed("1-e^-x", Direction::Nondecreasing, 0.0, f64::INFINITY, |x: f64| 1.0 - (-x).exp());
        assert!(matches!(invert_monotone(&f, 2.0, 1e-12), Err(Error::OutOfRange(_))));
        assert!(matches!(invert_monotone(&f, -1.0, 1e-12), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn nonincreasing_inverse() {
        let f = MonotoneFn::closed("e^-x", Direction::Nonincreasing, 0.0, f64::INFINITY, |x: f64| (-x).exp());
        let x = invert_monotone(&f, 0.5, 1e-12).unwrap();
        assert!((x - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn grid_must_be_increasing() {
        assert!(MonotoneFn::grid(vec![0.0, 0.0], vec![1.0, 2.0], Direction::Nondecreasing).is_err());
        assert!(MonotoneFn::grid(vec![0.0, 1.0], vec![2.0, 1.0], Direction::Nondecreasing).is_err());
    }
}
