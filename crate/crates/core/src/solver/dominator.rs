use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Piecewise-linear `ε` on knots `0 = t_0 < t_1 < …`, constant after the
/// last knot.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDominator {
    ts: Vec<f64>,
    values: Vec<f64>,
    /// `E(t_k)`.
    primitive: Vec<f64>,
}

impl GridDominator {
    pub fn new(ts: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if ts.len() != values.len() || ts.len() < 2 {
            return Err(Error::Domain("dominator grid needs at least two knots".into()));
        }
        if ts[0] != 0.0 || ts.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("dominator knots must start at 0 and increase".into()));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Domain("dominator values must be finite, nonnegative and nonincreasing".into()));
        }
        let mut primitive = vec![0.0];
        for k in 1..ts.len() {
            let step = 0.5 * (values[k - 1] + values[k]) * (ts[k] - ts[k - 1]);
            primitive.push(primitive[k - 1] + step);
        }
        Ok(GridDominator { ts, values, primitive })
    }

    fn eval(&self, t: f64) -> f64 {
        let last = self.ts.len() - 1;
        if t >= self.ts[last] {
            return self.values[last];
        }
        let k = self.ts.partition_point(|&v| v <= t) - 1;
        let a = (t - self.ts[k]) / (self.ts[k + 1] - self.ts[k]);
        self.values[k] + a * (self.values[k + 1] - self.values[k])
    }

    fn primitive(&self, x: f64) -> f64 {
        let last = self.ts.len() - 1;
        if x >= self.ts[last] {
            return self.primitive[last] + self.values[last] * (x - self.ts[last]);
        }
        let k = self.ts.partition_point(|&v| v <= x) - 1;
        self.primitive[k] + 0.5 * (self.values[k] + self.eval(x)) * (x - self.ts[k])
    }
}

/// Nonincreasing `ε >= 0` on `[0, ∞)` bounding a measure by capacity.
#[derive(Clone)]
pub enum EpsilonDominator {
    /// `ε ≡ c`.
    Constant(f64),
    /// `ε(t) = e^{−λt}`.
    ExpDecay(f64),
    /// `ε(t) = (1 + t)^{−β}`.
    PowerDecay(f64),
    Grid(Arc<GridDominator>),
}

impl fmt::Debug for EpsilonDominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl EpsilonDominator {
    pub fn constant(c: f64) -> Self {
        assert!(c > 0.0, "constant dominator needs c > 0");
        EpsilonDominator::Constant(c)
    }

    pub fn exp_decay(lambda: f64) -> Self {
        assert!(lambda > 0.0, "exp_decay needs lambda > 0");
        EpsilonDominator::ExpDecay(lambda)
    }

    pub fn power_decay(beta: f64) -> Self {
        assert!(beta > 0.0, "power_decay needs beta > 0");
        EpsilonDominator::PowerDecay(beta)
    }

    pub fn grid(ts: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(EpsilonDominator::Grid(Arc::new(GridDominator::new(ts, values)?)))
    }

    pub fn label(&self) -> String {
        match self {
            EpsilonDominator::Constant(c) => format!("constant {c}"),
            EpsilonDominator::ExpDecay(l) => format!("exp_decay {l}"),
            EpsilonDominator::PowerDecay(b) => format!("power_decay {b}"),
            EpsilonDominator::Grid(g) => format!("grid({} knots)", g.ts.len()),
        }
    }

    /// `ε(t)`; negative arguments are evaluated at 0.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        match self {
            EpsilonDominator::Constant(c) => *c,
            EpsilonDominator::ExpDecay(l) => (-l * t).exp(),
            EpsilonDominator::PowerDecay(b) => (1.0 + t).powf(-b),
            EpsilonDominator::Grid(g) => g.eval(t),
        }
    }

    /// `E(x) = ∫₀^x ε(t) dt` for `x >= 0`.
    pub fn primitive(&self, x: f64) -> f64 {
        if x == f64::INFINITY {
            return self.total_integral();
        }
        match self {
            EpsilonDominator::Constant(c) => c * x,
            EpsilonDominator::ExpDecay(l) => -(-l * x).exp_m1() / l,
            EpsilonDominator::PowerDecay(b) => {
                if *b == 1.0 {
                    x.ln_1p()
                } else {
                    ((1.0 - b) * x.ln_1p()).exp_m1() / (1.0 - b)
                }
            }
            EpsilonDominator::Grid(g) => g.primitive(x),
        }
    }

    /// `∫₀^∞ ε`, possibly `+inf`.
    pub fn total_integral(&self) -> f64 {
        match self {
            EpsilonDominator::Constant(_) => f64::INFINITY,
            EpsilonDominator::ExpDecay(l) => 1.0 / l,
            EpsilonDominator::PowerDecay(b) => {
                if *b > 1.0 {
                    1.0 / (b - 1.0)
                } else {
                    f64::INFINITY
                }
            }
            EpsilonDominator::Grid(g) => {
                let last = g.ts.len() - 1;
                if g.values[last] > 0.0 {
                    f64::INFINITY
                } else {
                    g.primitive[last]
                }
            }
        }
    }

    pub fn is_integrable(&self) -> bool {
        self.total_integral().is_finite()
    }

    /// `x ↦ E(x)` inverted on `[0, E(∞))`, in closed form where available.
    pub(crate) fn primitive_inverse(&self, y: f64) -> Option<f64> {
        if y < 0.0 || y >= self.total_integral() {
            return None;
        }
        Some(match self {
            EpsilonDominator::Constant(c) => y / c,
            EpsilonDominator::ExpDecay(l) => -(-l * y).ln_1p() / l,
            EpsilonDominator::PowerDecay(b) => {
                if *b == 1.0 {
                    y.exp_m1()
                } else {
                    (((1.0 - b) * y).ln_1p() / (1.0 - b)).exp_m1()
                }
            }
            EpsilonDominator::Grid(g) => {
                let k = g.primitive.partition_point(|&v| v <= y);
                let last = g.ts.len() - 1;
                if k > last {
                    g.ts[last] + (y - g.primitive[last]) / g.values[last]
                } else {
                    let (mut lo, mut hi) = (g.ts[k - 1], g.ts[k]);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if g.primitive(mid) < y {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    hi
                }
            }
        })
    }
}

/// `F_ε(x) = x·ε(−ln x / n)ⁿ`.
pub fn f_eps(d: &EpsilonDominator, x: f64, n: u32) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("F_eps needs x > 0, got {x}")));
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok(x * d.eval(-x.ln() / n as f64).powi(n as i32))
}
