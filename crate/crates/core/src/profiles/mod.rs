//! Radial model functions `u(z) = γ(log|z|)` on the unit ball, stored as
//! convex nondecreasing profiles `γ` of `x = log|z| <= 0`.
//!
//! Kinks carry the right derivative, so the closed-ball mass `γ'₊(x)^n` is
//! right-continuous in the radius.

mod grid;
mod lattice;

use std::fmt;
use std::sync::Arc;

pub use grid::GridProfile;
pub use lattice::{crossings, superlevel_intervals, MaxProfile, MAX_SIGN_CHANGES};

use crate::energy::Weight;
use crate::error::{Error, Result};
use crate::numerics::log_space;
use crate::solver::SolvedProfile;

/// Number of points of the validation grid.
pub const VALIDATION_POINTS: usize = 1024;

/// The 1024 log-spaced points of `[−10⁶, −10⁻⁶]`, increasing.
pub fn validation_grid() -> Vec<f64> {
    log_space(1e-6, 1e6, VALIDATION_POINTS).into_iter().rev().map(|v| -v).collect()
}

/// `max(base, −level)` with the radius where the clipping starts.
#[derive(Debug, Clone)]
pub struct ClippedProfile {
    pub(crate) base: RadialProfile,
    pub(crate) level: f64,
    /// Log-radius where `base` reaches `−level`.
    pub(crate) kink: f64,
}

impl ClippedProfile {
    pub fn base(&self) -> &RadialProfile {
        &self.base
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn kink(&self) -> f64 {
        self.kink
    }
}

/// `χ⁻¹(γ₀ + χ(0))` for a concave increasing weight `χ`.
#[derive(Debug, Clone)]
pub struct ComposedProfile {
    pub(crate) weight: Weight,
    pub(crate) base: RadialProfile,
}

impl ComposedProfile {
    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn base(&self) -> &RadialProfile {
        &self.base
    }

    /// `χ⁻¹(z + χ(0))`.
    fn psi(&self, z: f64) -> f64 {
        self.weight.inverse_rise(z).unwrap_or(f64::NEG_INFINITY)
    }

    fn value(&self, x: f64) -> f64 {
        self.psi(self.base.value(x))
    }

    fn chain(&self, x: f64, base_slope: f64) -> f64 {
        if base_slope == 0.0 {
            return 0.0;
        }
        base_slope / self.weight.derivative(self.psi(self.base.value(x)))
    }

    fn second_derivative(&self, x: f64) -> f64 {
        let t = self.psi(self.base.value(x));
        let d1 = self.weight.derivative(t);
        let d2 = self.weight.second_derivative(t).unwrap_or(0.0);
        let b1 = self.base.right_derivative(x);
        let b2 = self.base.second_derivative(x);
        -d2 / (d1 * d1 * d1) * b1 * b1 + b2 / d1
    }
}

/// Tail behaviour of `t ↦ Cap({u < −t})` for tagged families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CapDecay {
    /// `Cap ~ t^{−nβ}`.
    Power(f64),
    /// Faster than any power.
    Rapid,
    /// Sublevel sets are eventually empty.
    Vanishing,
}

/// A jump of `γ'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kink {
    pub x: f64,
    pub left: f64,
    pub right: f64,
}

/// A convex nondecreasing profile on `(−∞, 0]`.
#[derive(Debug, Clone)]
pub enum RadialProfile {
    /// `a·x`
    Linear(f64),
    /// `−(−x)^α`, `0 < α < 1`
    Power(f64),
    /// `−c·log(1 − x)`
    Log1m(f64),
    /// `max(x / log(1/r₀), −1)`
    Extremal(f64),
    /// `c <= 0`
    Constant(f64),
    /// `j·(e^{2x} − 1)`, the profile of `j·(|z|² − 1)`.
    Exhaustion(f64),
    Clipped(Arc<ClippedProfile>),
    Grid(Arc<GridProfile>),
    Max(Arc<MaxProfile>),
    Composed(Arc<ComposedProfile>),
    Solved(Arc<SolvedProfile>),
}

/// Result of [`RadialProfile::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub monotone: bool,
    pub convex: bool,
    pub boundary_value: f64,
    pub bounded: bool,
    pub infimum: f64,
    pub issues: Vec<String>,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid, boundary {}, ", self.boundary_value)?;
            if self.bounded {
                write!(f, "bounded by {}", self.infimum)
            } else {
                write!(f, "unbounded")
            }
        } else {
            write!(f, "invalid: {}", self.issues.join("; "))
        }
    }
}

impl RadialProfile {
    pub fn linear(a: f64) -> Self {
        assert!(a > 0.0 && a.is_finite(), "linear profile needs a > 0");
        RadialProfile::Linear(a)
    }

    pub fn power(alpha: f64) -> Self {
        assert!(alpha > 0.0 && alpha < 1.0, "power profile needs 0 < alpha < 1");
        RadialProfile::Power(alpha)
    }

    pub fn log1m(c: f64) -> Self {
        assert!(c > 0.0 && c.is_finite(), "log1m profile needs c > 0");
        RadialProfile::Log1m(c)
    }

    pub fn extremal(r0: f64) -> Self {
        assert!(r0 > 0.0 && r0 < 1.0, "extremal profile needs 0 < r0 < 1");
        RadialProfile::Extremal(r0)
    }

    pub fn constant(c: f64) -> Self {
        assert!(c <= 0.0 && c.is_finite(), "constant profile needs c <= 0");
        RadialProfile::Constant(c)
    }

    pub fn exhaustion(j: f64) -> Self {
        assert!(j > 0.0 && j.is_finite(), "exhaustion profile needs j > 0");
        RadialProfile::Exhaustion(j)
    }

    pub fn grid(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        Ok(RadialProfile::Grid(Arc::new(GridProfile::new(xs, ys)?)))
    }

    /// `χ⁻¹(γ + χ(0))`; the weight must be concave and strictly increasing.
    pub fn compose_inverse(weight: &Weight, base: RadialProfile) -> Result<Self> {
        if !weight.flags().concave {
            return Err(Error::WeightNotConcave);
        }
        if matches!(weight, Weight::Constant) {
            return Err(Error::InvalidWeight("constant weight is not invertible".into()));
        }
        Ok(RadialProfile::Composed(Arc::new(ComposedProfile { weight: weight.clone(), base })))
    }

    /// Canonical approximant `max(γ, −j)`.
    pub fn clip(&self, j: f64) -> RadialProfile {
        assert!(j > 0.0, "clip level must be positive");
        if j >= -self.infimum() {
            return self.clone();
        }
        if -j >= self.boundary_value() {
            return RadialProfile::Constant(-j);
        }
        let kink = self.inverse(-j).expect("level below the boundary value");
        RadialProfile::Clipped(Arc::new(ClippedProfile { base: self.clone(), level: j, kink }))
    }

    /// Profile of `max(u, v)`.
    pub fn pointwise_max(&self, other: &RadialProfile) -> Result<RadialProfile> {
        Ok(RadialProfile::Max(Arc::new(MaxProfile::new(self.clone(), other.clone())?)))
    }

    pub fn label(&self) -> String {
        match self {
            RadialProfile::Linear(a) => format!("linear {a}"),
            RadialProfile::Power(a) => format!("power {a}"),
            RadialProfile::Log1m(c) => format!("log1m {c}"),
            RadialProfile::Extremal(r) => format!("extremal {r}"),
            RadialProfile::Constant(c) => format!("constant {c}"),
            RadialProfile::Exhaustion(j) => format!("exhaustion {j}"),
            RadialProfile::Clipped(c) => format!("clipped {} {}", c.level, c.base.label()),
            RadialProfile::Grid(g) => format!("grid({} knots)", g.knots().len()),
            RadialProfile::Max(m) => format!("max({}; {})", m.a.label(), m.b.label()),
            RadialProfile::Composed(c) => format!("cover({}; {})", c.weight.label(), c.base.label()),
            RadialProfile::Solved(_) => "solved".into(),
        }
    }

    /// `γ(x)` for `x <= 0`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x <= 0.0) {
            return Err(Error::OutsideDomain(format!("x = {x} > 0")));
        }
        Ok(self.value(x))
    }

    /// `γ(x)` without the domain check; `x = −∞` gives the infimum.
    pub(crate) fn value(&self, x: f64) -> f64 {
        match self {
            RadialProfile::Linear(a) => a * x,
            RadialProfile::Power(a) => -(-x).powf(*a),
            RadialProfile::Log1m(c) => -c * (-x).ln_1p(),
            RadialProfile::Extremal(r) => (x / -r.ln()).max(-1.0),
            RadialProfile::Constant(c) => *c,
            RadialProfile::Exhaustion(j) => j * (2.0 * x).exp_m1(),
            RadialProfile::Clipped(c) => c.base.value(x).max(-c.level),
            RadialProfile::Grid(g) => g.value(x),
            RadialProfile::Max(m) => m.value(x),
            RadialProfile::Composed(c) => c.value(x),
            RadialProfile::Solved(s) => s.value(x),
        }
    }

    /// `γ'₊(x)`; `+∞` at an infinite-slope boundary.
    pub fn right_derivative(&self, x: f64) -> f64 {
        match self {
            RadialProfile::Linear(a) => *a,
            RadialProfile::Power(a) => a * (-x).powf(a - 1.0),
            RadialProfile::Log1m(c) => c / (1.0 - x),
            RadialProfile::Extremal(r) => {
                let l = -r.ln();
                if x >= -l {
                    1.0 / l
                } else {
                    0.0
                }
            }
            RadialProfile::Constant(_) => 0.0,
            RadialProfile::Exhaustion(j) => 2.0 * j * (2.0 * x).exp(),
            RadialProfile::Clipped(c) => {
                if x >= c.kink {
                    c.base.right_derivative(x)
                } else {
                    0.0
                }
            }
            RadialProfile::Grid(g) => g.right_derivative(x),
            RadialProfile::Max(m) => m.right_derivative(x),
            RadialProfile::Composed(c) => c.chain(x, c.base.right_derivative(x)),
            RadialProfile::Solved(s) => s.right_derivative(x),
        }
    }

    /// `γ'₋(x)`.
    pub fn left_derivative(&self, x: f64) -> f64 {
        match self {
            RadialProfile::Extremal(r) => {
                let l = -r.ln();
                if x > -l {
                    1.0 / l
                } else {
                    0.0
                }
            }
            RadialProfile::Clipped(c) => {
                if x > c.kink {
                    c.base.left_derivative(x)
                } else {
                    0.0
                }
            }
            RadialProfile::Grid(g) => g.left_derivative(x),
            RadialProfile::Max(m) => m.left_derivative(x),
            RadialProfile::Composed(c) => c.chain(x, c.base.left_derivative(x)),
            RadialProfile::Solved(s) => s.left_derivative(x),
            _ => self.right_derivative(x),
        }
    }

    /// `γ''(x)` away from kinks.
    pub fn second_derivative(&self, x: f64) -> f64 {
        match self {
            RadialProfile::Linear(_)
            | RadialProfile::Extremal(_)
            | RadialProfile::Constant(_)
            | RadialProfile::Grid(_) => 0.0,
            RadialProfile::Power(a) => a * (1.0 - a) * (-x).powf(a - 2.0),
            RadialProfile::Log1m(c) => c / ((1.0 - x) * (1.0 - x)),
            RadialProfile::Exhaustion(j) => 4.0 * j * (2.0 * x).exp(),
            RadialProfile::Clipped(c) => {
                if x > c.kink {
                    c.base.second_derivative(x)
                } else {
                    0.0
                }
            }
            RadialProfile::Max(m) => m.second_derivative(x),
            RadialProfile::Composed(c) => c.second_derivative(x),
            RadialProfile::Solved(s) => s.second_derivative(x),
        }
    }

    /// Candidate kink locations; [`kinks`](Self::kinks) keeps the real ones.
    pub(crate) fn kink_points(&self) -> Vec<f64> {
        match self {
            RadialProfile::Extremal(r) => vec![r.ln()],
            RadialProfile::Clipped(c) => {
                let mut xs = vec![c.kink];
                xs.extend(c.base.kink_points().into_iter().filter(|&x| x > c.kink));
                xs
            }
            RadialProfile::Grid(g) => g.kink_points(),
            RadialProfile::Max(m) => m.kink_candidates(),
            RadialProfile::Composed(c) => c.base.kink_points(),
            RadialProfile::Solved(s) => s.kink_points(),
            _ => Vec::new(),
        }
    }

    /// Points of `(−∞, 0)` where `γ'₊ > γ'₋`, increasing.
    pub fn kinks(&self) -> Vec<Kink> {
        let mut xs: Vec<f64> = self.kink_points().into_iter().filter(|x| x.is_finite() && *x < 0.0).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs.into_iter()
            .filter_map(|x| {
                let (left, right) = (self.left_derivative(x), self.right_derivative(x));
                (right > left).then_some(Kink { x, left, right })
            })
            .collect()
    }

    /// `inf γ = lim_{x→−∞} γ(x)`.
    pub fn infimum(&self) -> f64 {
        match self {
            RadialProfile::Linear(_) | RadialProfile::Power(_) | RadialProfile::Log1m(_) => f64::NEG_INFINITY,
            RadialProfile::Extremal(_) => -1.0,
            RadialProfile::Constant(c) => *c,
            RadialProfile::Exhaustion(j) => -j,
            RadialProfile::Clipped(c) => -c.level,
            RadialProfile::Grid(g) => g.infimum(),
            RadialProfile::Max(m) => m.a.infimum().max(m.b.infimum()),
            RadialProfile::Composed(c) => c.psi(c.base.infimum()),
            RadialProfile::Solved(s) => s.infimum(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.infimum() > f64::NEG_INFINITY
    }

    /// `γ(0⁻)`.
    pub fn boundary_value(&self) -> f64 {
        self.value(0.0)
    }

    /// `lim_{x→0⁻} γ'(x)`.
    pub fn boundary_slope(&self) -> f64 {
        match self {
            RadialProfile::Power(_) => f64::INFINITY,
            RadialProfile::Grid(g) => g.last_slope(),
            RadialProfile::Max(m) => m.boundary_slope(),
            RadialProfile::Clipped(c) => c.base.boundary_slope(),
            RadialProfile::Composed(c) => c.chain(0.0, c.base.boundary_slope()),
            RadialProfile::Solved(s) => s.boundary_slope(),
            _ => self.left_derivative(0.0),
        }
    }

    /// `lim_{x→−∞} γ'(x)`; its `n`-th power is the Dirac mass at the pole.
    pub fn pole_slope(&self) -> f64 {
        match self {
            RadialProfile::Linear(a) => *a,
            RadialProfile::Grid(g) => g.first_slope().max(0.0),
            RadialProfile::Max(m) => m.pole_slope(),
            RadialProfile::Composed(c) => {
                let base = c.base.pole_slope();
                if base == 0.0 {
                    0.0
                } else {
                    base / c.weight.derivative_at_minus_infinity()
                }
            }
            RadialProfile::Solved(s) => s.pole_slope(),
            _ => 0.0,
        }
    }

    /// `inf{x : γ(x) >= y}`; at an attained infimum the right end of the
    /// bottom plateau, and `−∞` below the range.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        let boundary = self.boundary_value();
        if y > boundary {
            return Err(Error::AboveBoundaryValue { y, boundary });
        }
        if y < self.infimum() {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(self.inverse_in_range(y))
    }

    fn inverse_in_range(&self, y: f64) -> f64 {
        match self {
            RadialProfile::Linear(a) => y / a,
            RadialProfile::Power(a) => -(-y).powf(1.0 / a),
            RadialProfile::Log1m(c) => -(-y / c).exp_m1(),
            RadialProfile::Extremal(r) => {
                let l = -r.ln();
                y.max(-1.0) * l
            }
            RadialProfile::Constant(_) => 0.0,
            RadialProfile::Exhaustion(j) => 0.5 * (y / j).ln_1p(),
            RadialProfile::Clipped(c) => {
                if y <= -c.level {
                    c.kink
                } else {
                    c.base.inverse_in_range(y)
                }
            }
            RadialProfile::Grid(g) => g.inverse(y),
            RadialProfile::Max(m) => {
                let branch = |p: &RadialProfile| {
                    if y > p.boundary_value() {
                        f64::INFINITY
                    } else if y < p.infimum() {
                        f64::NEG_INFINITY
                    } else {
                        p.inverse_in_range(y)
                    }
                };
                branch(&m.a).min(branch(&m.b))
            }
            RadialProfile::Composed(c) => {
                let target = c.weight.rise(y);
                if target < c.base.infimum() {
                    f64::NEG_INFINITY
                } else {
                    c.base.inverse_in_range(target.min(c.base.boundary_value()))
                }
            }
            RadialProfile::Solved(s) => s.inverse(y),
        }
    }

    /// Log-radius of the open sublevel ball `{u < −s}`: `−∞` when empty,
    /// `0` when it is the whole ball.
    pub fn sublevel_log_radius(&self, s: f64) -> f64 {
        if -s > self.boundary_value() {
            return 0.0;
        }
        if -s <= self.infimum() {
            return f64::NEG_INFINITY;
        }
        self.inverse_in_range(-s)
    }

    /// Capacity tail class for families with a closed form.
    pub fn capacity_decay(&self) -> Option<CapDecay> {
        match self {
            RadialProfile::Linear(_) => Some(CapDecay::Power(1.0)),
            RadialProfile::Power(a) => Some(CapDecay::Power(1.0 / a)),
            RadialProfile::Log1m(_) => Some(CapDecay::Rapid),
            RadialProfile::Extremal(_)
            | RadialProfile::Constant(_)
            | RadialProfile::Exhaustion(_)
            | RadialProfile::Clipped(_) => Some(CapDecay::Vanishing),
            RadialProfile::Grid(g) => Some(if g.first_slope() > 0.0 { CapDecay::Power(1.0) } else { CapDecay::Vanishing }),
            RadialProfile::Max(m) => match (m.a.capacity_decay()?, m.b.capacity_decay()?) {
                (CapDecay::Vanishing, _) | (_, CapDecay::Vanishing) => Some(CapDecay::Vanishing),
                (CapDecay::Rapid, _) | (_, CapDecay::Rapid) => Some(CapDecay::Rapid),
                (CapDecay::Power(a), CapDecay::Power(b)) => Some(CapDecay::Power(a.max(b))),
            },
            RadialProfile::Composed(c) => {
                let p = match c.weight {
                    Weight::Power(p) | Weight::ShiftedPower(p) => p,
                    Weight::Exp(_) => return Some(CapDecay::Rapid),
                    _ => return None,
                };
                match c.base.capacity_decay()? {
                    CapDecay::Power(b) => Some(CapDecay::Power(p * b)),
                    other => Some(other),
                }
            }
            RadialProfile::Solved(_) => None,
        }
    }

    /// Monotonicity, convexity and boundary checks on the validation grid.
    pub fn validate(&self) -> Diagnostics {
        let xs = validation_grid();
        let vs: Vec<f64> = xs.iter().map(|&x| self.value(x)).collect();
        let mut issues = Vec::new();
        if let Some(k) = vs.iter().position(|v| v.is_nan()) {
            issues.push(format!("value undefined at x = {}", xs[k]));
        }
        let monotone_at = vs.windows(2).position(|w| w[1] < w[0] - 1e-12 * (1.0 + w[0].abs()));
        if let Some(k) = monotone_at {
            issues.push(format!("monotonicity: γ decreases near x = {}", xs[k]));
        }
        let slopes: Vec<f64> =
            xs.windows(2).zip(vs.windows(2)).map(|(x, v)| (v[1] - v[0]) / (x[1] - x[0])).collect();
        let convex_at = slopes.windows(2).position(|s| s[1] < s[0] - 1e-9 * (1.0 + s[0].abs()));
        if let Some(k) = convex_at {
            issues.push(format!("convexity: secant slope drops near x = {}", xs[k + 1]));
        }
        let mut monotone = monotone_at.is_none();
        let mut convex = convex_at.is_none();
        if let RadialProfile::Grid(g) = self {
            for issue in g.knot_issues() {
                monotone &= !issue.starts_with("monotonicity");
                convex &= !issue.starts_with("convexity");
                issues.push(issue);
            }
        }
        let boundary_value = self.boundary_value();
        if !(boundary_value <= 1e-12) {
            issues.push(format!("boundary value {boundary_value} > 0"));
        }
        let infimum = self.infimum();
        Diagnostics { monotone, convex, boundary_value, bounded: infimum > f64::NEG_INFINITY, infimum, issues }
    }
}

impl fmt::Display for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn eval_examples() {
        assert_eq!(RadialProfile::linear(1.0).eval(-2.0).unwrap(), -2.0);
        assert_eq!(RadialProfile::power(0.5).eval(-4.0).unwrap(), -2.0);
        assert!((RadialProfile::log1m(1.0).eval(-(E - 1.0)).unwrap() + 1.0).abs() < 1e-15);
        assert!(matches!(RadialProfile::linear(1.0).eval(0.5), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(RadialProfile::linear(1.0).inverse(-3.0).unwrap(), -3.0);
        assert!((RadialProfile::extremal((-1f64).exp()).inverse(-1.0).unwrap() + 1.0).abs() < 1e-15);
        assert!((RadialProfile::power(0.5).inverse(-3.0).unwrap() + 9.0).abs() < 1e-12);
        assert_eq!(RadialProfile::extremal(0.5).inverse(-2.0).unwrap(), f64::NEG_INFINITY);
        assert!(matches!(RadialProfile::linear(1.0).inverse(0.5), Err(Error::AboveBoundaryValue { .. })));
    }

    #[test]
    fn right_derivative_examples() {
        assert_eq!(RadialProfile::linear(2.0).right_derivative(-7.0), 2.0);
        let c = RadialProfile::linear(1.0).clip(1.0);
        assert_eq!(c.right_derivative(-1.5), 0.0);
        assert_eq!(c.right_derivative(-1.0), 1.0);
        assert_eq!(c.left_derivative(-1.0), 0.0);
        assert!((RadialProfile::power(0.5).right_derivative(-4.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn clip_examples() {
        let ex = RadialProfile::extremal((-1f64).exp());
        let c = RadialProfile::linear(1.0).clip(1.0);
        for x in validation_grid() {
            assert!((ex.value(x) - c.value(x)).abs() < 1e-15);
        }
        let nested = c.clip(2.0);
        assert!(matches!(nested, RadialProfile::Clipped(_)));
        assert_eq!(RadialProfile::power(0.5).clip(2.0).eval(-9.0).unwrap(), -2.0);
    }

    #[test]
    fn clip_above_boundary_is_constant() {
        let c = RadialProfile::grid(vec![-1.0, 0.0], vec![-3.0, -2.0]).unwrap().clip(1.0);
        assert_eq!(c.value(-0.5), -1.0);
    }

    #[test]
    fn max_examples() {
        let l1 = RadialProfile::linear(1.0);
        let m = l1.pointwise_max(&RadialProfile::linear(2.0)).unwrap();
        for x in validation_grid() {
            assert_eq!(m.value(x), x);
        }
        let m = l1.pointwise_max(&RadialProfile::constant(-1.0)).unwrap();
        let ex = RadialProfile::extremal((-1f64).exp());
        for x in validation_grid() {
            assert_eq!(m.value(x), ex.value(x));
        }
        let k = m.kinks();
        assert_eq!(k.len(), 1);
        assert!((k[0].x + 1.0).abs() < 1e-12 && k[0].left == 0.0 && k[0].right == 1.0);
        assert_eq!(m.pole_slope(), 0.0);
        assert_eq!(m.infimum(), -1.0);
        assert!((m.inverse(-1.0).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn validate_examples() {
        let d = RadialProfile::linear(1.0).validate();
        assert!(d.is_valid() && !d.bounded && d.boundary_value == 0.0);
        let d = RadialProfile::grid(vec![-2.0, -1.0, 0.0], vec![-1.0, -2.0, 0.0]).unwrap().validate();
        assert!(!d.is_valid() && !d.monotone);
        let d = RadialProfile::extremal((-1f64).exp()).validate();
        assert!(d.is_valid() && d.bounded && d.infimum == -1.0);
    }

    #[test]
    fn composed_with_identity_weight_is_linear() {
        let p = RadialProfile::compose_inverse(&Weight::power(1.0), RadialProfile::linear(1.0)).unwrap();
        for x in [-100.0, -1.0, -0.01] {
            assert!((p.value(x) - x).abs() < 1e-12);
            assert!((p.right_derivative(x) - 1.0).abs() < 1e-12);
        }
        assert_eq!(p.pole_slope(), 1.0);
    }

    #[test]
    fn composed_with_exp_weight_is_log1m() {
        let p = RadialProfile::compose_inverse(&Weight::exp(1.0), RadialProfile::linear(1.0)).unwrap();
        let q = RadialProfile::log1m(1.0);
        for x in [-100.0, -3.0, -0.5, -1e-4] {
            assert!((p.value(x) - q.value(x)).abs() < 1e-12);
            assert!((p.right_derivative(x) - q.right_derivative(x)).abs() < 1e-12);
            assert!((p.second_derivative(x) - q.second_derivative(x)).abs() < 1e-12);
        }
        assert_eq!(p.pole_slope(), 0.0);
        assert!(p.validate().is_valid());
    }

    #[test]
    fn convex_weight_is_rejected() {
        let r = RadialProfile::compose_inverse(&Weight::power(0.5), RadialProfile::linear(1.0));
        assert!(matches!(r, Err(Error::WeightNotConcave)));
    }

    #[test]
    fn sublevel_radius() {
        let p = RadialProfile::linear(1.0).clip(1.0);
        assert_eq!(p.sublevel_log_radius(0.5), -0.5);
        assert_eq!(p.sublevel_log_radius(1.0), f64::NEG_INFINITY);
        let q = RadialProfile::grid(vec![-1.0, 0.0], vec![-2.0, -1.0]).unwrap();
        assert_eq!(q.sublevel_log_radius(0.5), 0.0);
    }
}
