use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::ScalarFn;

/// Qualitative flags of a weight `χ: R⁻ → R⁻`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightFlags {
    /// `χ(0) = 0`.
    pub vanishes_at_origin: bool,
    /// `χ(-∞) = -∞`.
    pub unbounded_below: bool,
    pub convex: bool,
    pub concave: bool,
}

/// Piecewise-linear weight on knots `t_0 < ... < t_k = 0`, extended below
/// `t_0` by the leftmost secant slope.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWeight {
    ts: Vec<f64>,
    values: Vec<f64>,
}

impl GridWeight {
    pub fn new(ts: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if ts.len() != values.len() || ts.len() < 2 {
            return Err(Error::InvalidWeight("grid needs at least two knots".into()));
        }
        if ts.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidWeight("grid knots must be strictly increasing".into()));
        }
        if ts[ts.len() - 1] != 0.0 {
            return Err(Error::InvalidWeight("grid must end at t = 0".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v > 0.0) {
            return Err(Error::InvalidWeight("grid values must be finite and nonpositive".into()));
        }
        if values.windows(2).any(|w| w[1] < w[0] - 1e-12 * w[0].abs()) {
            return Err(Error::InvalidWeight("grid values must be nondecreasing".into()));
        }
        Ok(GridWeight { ts, values })
    }

    pub fn knots(&self) -> &[f64] {
        &self.ts
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn slope(&self, k: usize) -> f64 {
        (self.values[k + 1] - self.values[k]) / (self.ts[k + 1] - self.ts[k])
    }

    fn segment(&self, t: f64) -> usize {
        let k = self.ts.partition_point(|&v| v <= t);
        k.saturating_sub(1).min(self.ts.len() - 2)
    }

    fn eval(&self, t: f64) -> f64 {
        let k = self.segment(t);
        self.values[k] + self.slope(k) * (t - self.ts[k])
    }

    fn derivative(&self, t: f64) -> f64 {
        self.slope(self.segment(t))
    }

    fn inverse(&self, y: f64) -> Result<f64> {
        let last = self.values.len() - 1;
        if y > self.values[last] {
            return Err(Error::OutOfRange(format!("{y} above χ(0)")));
        }
        if y < self.values[0] {
            let s = self.slope(0);
            if s <= 0.0 {
                return Err(Error::OutOfRange(format!("{y} below the range of the weight")));
            }
            return Ok(self.ts[0] + (y - self.values[0]) / s);
        }
        let k = self.values.partition_point(|&v| v < y).max(1) - 1;
        let k = k.min(last - 1);
        let s = self.slope(k);
        if s <= 0.0 {
            return Ok(self.ts[k]);
        }
        Ok(self.ts[k] + (y - self.values[k]) / s)
    }

    fn flags(&self) -> WeightFlags {
        let slopes: Vec<f64> = (0..self.ts.len() - 1).map(|k| self.slope(k)).collect();
        let tol = |s: f64| 1e-9 * (1.0 + s.abs());
        WeightFlags {
            vanishes_at_origin: self.values[self.values.len() - 1] == 0.0,
            unbounded_below: slopes[0] > 0.0,
            convex: slopes.windows(2).all(|w| w[1] >= w[0] - tol(w[0])),
            concave: slopes.windows(2).all(|w| w[1] <= w[0] + tol(w[0])),
        }
    }
}

/// A weight given by closures, for weights assembled by other modules.
#[derive(Clone)]
pub struct CustomWeight {
    pub label: String,
    pub chi: ScalarFn,
    pub derivative: ScalarFn,
    pub flags: WeightFlags,
    /// `-χ(-∞)`, possibly `+inf`.
    pub neg_limit: f64,
}

impl fmt::Debug for CustomWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomWeight").field("label", &self.label).field("flags", &self.flags).finish()
    }
}

/// An increasing weight `χ: R⁻ → R⁻`.
#[derive(Debug, Clone)]
pub enum Weight {
    /// `χ(t) = -(-t)^p`
    Power(f64),
    /// `χ(t) = -1 - (-t)^p`
    ShiftedPower(f64),
    /// `χ ≡ -1`
    Constant,
    /// `χ(t) = -e^{-κt}`
    Exp(f64),
    Grid(Arc<GridWeight>),
    /// `t ↦ χ(c·t)`
    Dilated { base: Arc<Weight>, factor: f64 },
    Custom(Arc<CustomWeight>),
}

impl Weight {
    pub fn power(p: f64) -> Self {
        assert!(p > 0.0, "power weight needs p > 0");
        Weight::Power(p)
    }

    pub fn exp(kappa: f64) -> Self {
        assert!(kappa > 0.0, "exp weight needs kappa > 0");
        Weight::Exp(kappa)
    }

    pub fn grid(ts: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(Weight::Grid(Arc::new(GridWeight::new(ts, values)?)))
    }

    /// `χ̂(t) = χ(2t)`.
    pub fn doubled(&self) -> Weight {
        self.dilated(2.0)
    }

    pub fn dilated(&self, factor: f64) -> Weight {
        assert!(factor > 0.0);
        Weight::Dilated { base: Arc::new(self.clone()), factor }
    }

    pub fn label(&self) -> String {
        match self {
            Weight::Power(p) => format!("power {p}"),
            Weight::ShiftedPower(p) => format!("shifted_power {p}"),
            Weight::Constant => "constant".into(),
            Weight::Exp(k) => format!("exp {k}"),
            Weight::Grid(g) => format!("grid({} knots)", g.ts.len()),
            Weight::Dilated { base, factor } => format!("{}@{factor}t", base.label()),
            Weight::Custom(c) => c.label.clone(),
        }
    }

    /// `χ(t)` for `t <= 0`.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Weight::Power(p) => -(-t).powf(*p),
            Weight::ShiftedPower(p) => -1.0 - (-t).powf(*p),
            Weight::Constant => -1.0,
            Weight::Exp(k) => -(-k * t).exp(),
            Weight::Grid(g) => g.eval(t),
            Weight::Dilated { base, factor } => base.eval(factor * t),
            Weight::Custom(c) => (c.chi)(t),
        }
    }

    /// `χ'(t)` for `t < 0`.
    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            Weight::Power(p) | Weight::ShiftedPower(p) => power_derivative(*p, t),
            Weight::Constant => 0.0,
            Weight::Exp(k) => k * (-k * t).exp(),
            Weight::Grid(g) => g.derivative(t),
            Weight::Dilated { base, factor } => factor * base.derivative(factor * t),
            Weight::Custom(c) => (c.derivative)(t),
        }
    }

    /// `χ''(t)` where a closed form exists.
    pub fn second_derivative(&self, t: f64) -> Option<f64> {
        match self {
            Weight::Power(p) | Weight::ShiftedPower(p) => {
                let p = *p;
                if p == 1.0 {
                    Some(0.0)
                } else {
                    Some(-p * (p - 1.0) * (-t).powf(p - 2.0))
                }
            }
            Weight::Constant => Some(0.0),
            Weight::Exp(k) => Some(-k * k * (-k * t).exp()),
            Weight::Dilated { base, factor } => base.second_derivative(factor * t).map(|v| factor * factor * v),
            Weight::Grid(_) | Weight::Custom(_) => None,
        }
    }

    /// `lim_{t→-∞} χ'(t)`.
    pub fn derivative_at_minus_infinity(&self) -> f64 {
        match self {
            Weight::Power(p) | Weight::ShiftedPower(p) => match p.partial_cmp(&1.0) {
                Some(std::cmp::Ordering::Less) => 0.0,
                Some(std::cmp::Ordering::Equal) => 1.0,
                _ => f64::INFINITY,
            },
            Weight::Constant => 0.0,
            Weight::Exp(_) => f64::INFINITY,
            Weight::Grid(g) => g.slope(0),
            Weight::Dilated { base, factor } => factor * base.derivative_at_minus_infinity(),
            Weight::Custom(c) => (c.derivative)(-1e300),
        }
    }

    /// Inverse `χ⁻¹(y)` on the range of `χ`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        let top = self.at_origin();
        if y > top {
            return Err(Error::OutOfRange(format!("{y} above χ(0) = {top}")));
        }
        match self {
            Weight::Power(p) => Ok(-(-y).powf(1.0 / p)),
            Weight::ShiftedPower(p) => Ok(-(-1.0 - y).powf(1.0 / p)),
            Weight::Constant => Err(Error::InvalidWeight("constant weight is not invertible".into())),
            Weight::Exp(k) => Ok(-(-y).ln() / k),
            Weight::Grid(g) => g.inverse(y),
            Weight::Dilated { base, factor } => Ok(base.inverse(y)? / factor),
            Weight::Custom(c) => {
                let f = c.chi.clone();
                let m = crate::numerics::MonotoneFn::closed(
                    c.label.clone(),
                    crate::numerics::Direction::Nondecreasing,
                    f64::NEG_INFINITY,
                    0.0,
                    move |t| f(t),
                );
                crate::numerics::invert_monotone(&m, y, 1e-14)
            }
        }
    }

    /// `χ(t) − χ(0)`, without cancellation for the closed forms.
    pub fn rise(&self, t: f64) -> f64 {
        match self {
            Weight::Power(p) | Weight::ShiftedPower(p) => -(-t).powf(*p),
            Weight::Constant => 0.0,
            Weight::Exp(k) => -(-k * t).exp_m1(),
            Weight::Dilated { base, factor } => base.rise(factor * t),
            _ => self.eval(t) - self.at_origin(),
        }
    }

    /// `χ⁻¹(z + χ(0))` for `z <= 0`.
    pub fn inverse_rise(&self, z: f64) -> Result<f64> {
        match self {
            Weight::Power(p) | Weight::ShiftedPower(p) => Ok(-(-z.min(0.0)).powf(1.0 / p)),
            Weight::Exp(k) => Ok(-(-z.min(0.0)).ln_1p() / k),
            Weight::Dilated { base, factor } => Ok(base.inverse_rise(z)? / factor),
            _ => self.inverse((z + self.at_origin()).min(self.at_origin())),
        }
    }

    /// `χ(0)`.
    pub fn at_origin(&self) -> f64 {
        self.eval(0.0)
    }

    /// `-χ(-∞)` as an extended real.
    pub fn neg_limit(&self) -> f64 {
        match self {
            Weight::Power(_) | Weight::ShiftedPower(_) | Weight::Exp(_) => f64::INFINITY,
            Weight::Constant => 1.0,
            Weight::Grid(g) => {
                if g.slope(0) > 0.0 {
                    f64::INFINITY
                } else {
                    -g.values[0]
                }
            }
            Weight::Dilated { base, .. } => base.neg_limit(),
            Weight::Custom(c) => c.neg_limit,
        }
    }

    pub fn flags(&self) -> WeightFlags {
        match self {
            Weight::Power(p) => WeightFlags {
                vanishes_at_origin: true,
                unbounded_below: true,
                convex: *p <= 1.0,
                concave: *p >= 1.0,
            },
            Weight::ShiftedPower(p) => WeightFlags {
                vanishes_at_origin: false,
                unbounded_below: true,
                convex: *p <= 1.0,
                concave: *p >= 1.0,
            },
            Weight::Constant => {
                WeightFlags { vanishes_at_origin: false, unbounded_below: false, convex: true, concave: true }
            }
            Weight::Exp(_) => {
                WeightFlags { vanishes_at_origin: false, unbounded_below: true, convex: false, concave: true }
            }
            Weight::Grid(g) => g.flags(),
            Weight::Dilated { base, .. } => base.flags(),
            Weight::Custom(c) => c.flags,
        }
    }
}

fn power_derivative(p: f64, t: f64) -> f64 {
    if p == 1.0 {
        1.0
    } else {
        p * (-t).powf(p - 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_weight_basics() {
        let w = Weight::power(2.0);
        assert_eq!(w.eval(-3.0), -9.0);
        assert_eq!(w.derivative(-3.0), 6.0);
        assert_eq!(w.inverse(-9.0).unwrap(), -3.0);
        assert!(w.flags().concave && !w.flags().convex);
        assert!(Weight::power(0.5).flags().convex);
    }

    #[test]
    fn exp_weight_roundtrip() {
        let w = Weight::exp(1.0);
        assert_eq!(w.at_origin(), -1.0);
        let t = -2.5;
        assert!((w.inverse(w.eval(t)).unwrap() - t).abs() < 1e-14);
        assert!(w.inverse(-0.5).is_err());
    }

    #[test]
    fn doubled_weight() {
        let w = Weight::power(1.0).doubled();
        assert_eq!(w.eval(-1.0), -2.0);
        assert_eq!(w.derivative(-1.0), 2.0);
        assert_eq!(w.inverse(-2.0).unwrap(), -1.0);
    }

    #[test]
    fn grid_weight_extension_and_inverse() {
        let w = Weight::grid(vec![-2.0, -1.0, 0.0], vec![-5.0, -2.0, -1.0]).unwrap();
        assert_eq!(w.eval(-3.0), -8.0);
        assert_eq!(w.derivative(-0.5), 1.0);
        assert_eq!(w.derivative(-10.0), 3.0);
        assert!((w.inverse(-3.5).unwrap() + 1.5).abs() < 1e-15);
        assert!(w.flags().concave);
        assert!(w.flags().unbounded_below);
    }
}
