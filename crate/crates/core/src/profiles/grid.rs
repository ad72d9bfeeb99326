use std::path::Path;

use crate::error::{Error, Result};

/// Piecewise-linear profile through knots `(x_k, γ_k)` with `x_k <= 0`.
///
/// Below the first knot the first secant is extended; between the last knot
/// and `0` the last secant is extended. Convexity and monotonicity of the
/// data are not enforced here; `validate` reports them.
#[derive(Debug, Clone, PartialEq)]
pub struct GridProfile {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl GridProfile {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::InvalidProfile("grid needs at least two knots".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidProfile("grid knots must be strictly increasing".into()));
        }
        if xs[xs.len() - 1] > 0.0 {
            return Err(Error::InvalidProfile("grid knots must satisfy x <= 0".into()));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("grid values must be finite".into()));
        }
        let slopes = xs.windows(2).zip(ys.windows(2)).map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0])).collect();
        Ok(GridProfile { xs, ys, slopes })
    }

    /// Reads a CSV file with header `x,gamma`.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path.as_ref())?;
        let headers = reader.headers()?.clone();
        let names: Vec<&str> = headers.iter().map(str::trim).collect();
        if names != ["x", "gamma"] {
            return Err(Error::Parse(format!("expected header x,gamma, found {}", names.join(","))));
        }
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for (line, record) in reader.records().enumerate() {
            let record = record?;
            let field = |k: usize| -> Result<f64> {
                record
                    .get(k)
                    .and_then(|v| v.trim().parse().ok())
                    .ok_or_else(|| Error::Parse(format!("row {}: bad number", line + 2)))
            };
            xs.push(field(0)?);
            ys.push(field(1)?);
        }
        GridProfile::new(xs, ys)
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn first_slope(&self) -> f64 {
        self.slopes[0]
    }

    pub fn last_slope(&self) -> f64 {
        self.slopes[self.slopes.len() - 1]
    }

    pub(crate) fn value(&self, x: f64) -> f64 {
        if x == f64::NEG_INFINITY {
            return self.infimum();
        }
        let k = self.xs.partition_point(|&v| v <= x).saturating_sub(1).min(self.slopes.len() - 1);
        // Anchor at the nearer knot to avoid cancellation near either end.
        let j = if (x - self.xs[k]).abs() <= (self.xs[k + 1] - x).abs() { k } else { k + 1 };
        self.ys[j] + self.slopes[k] * (x - self.xs[j])
    }

    pub(crate) fn right_derivative(&self, x: f64) -> f64 {
        let k = self.xs.partition_point(|&v| v <= x).saturating_sub(1).min(self.slopes.len() - 1);
        self.slopes[k]
    }

    pub(crate) fn left_derivative(&self, x: f64) -> f64 {
        let k = self.xs.partition_point(|&v| v < x).saturating_sub(1).min(self.slopes.len() - 1);
        self.slopes[k]
    }

    pub(crate) fn infimum(&self) -> f64 {
        if self.first_slope() > 0.0 {
            f64::NEG_INFINITY
        } else {
            self.ys[0]
        }
    }

    /// Interior knots where the slope changes.
    pub(crate) fn kink_points(&self) -> Vec<f64> {
        (1..self.xs.len() - 1)
            .filter(|&k| self.xs[k] < 0.0 && self.slopes[k] != self.slopes[k - 1])
            .map(|k| self.xs[k])
            .collect()
    }

    pub(crate) fn inverse(&self, y: f64) -> f64 {
        let s0 = self.first_slope();
        if y <= self.ys[0] {
            if s0 > 0.0 {
                return self.xs[0] + (y - self.ys[0]) / s0;
            }
            if y < self.ys[0] {
                return f64::NEG_INFINITY;
            }
            // Bottom plateau: its right end.
            let mut k = 0;
            while k + 1 < self.ys.len() && self.ys[k + 1] == self.ys[0] {
                k += 1;
            }
            if k + 1 == self.ys.len() && self.last_slope() == 0.0 {
                return 0.0;
            }
            return self.xs[k];
        }
        let idx = self.ys.partition_point(|&v| v < y);
        if idx == self.ys.len() {
            let last = self.xs.len() - 1;
            return self.xs[last] + (y - self.ys[last]) / self.last_slope();
        }
        let k = idx - 1;
        if y - self.ys[k] <= self.ys[k + 1] - y {
            self.xs[k] + (y - self.ys[k]) / self.slopes[k]
        } else {
            self.xs[k + 1] - (self.ys[k + 1] - y) / self.slopes[k]
        }
    }

    /// Secant-level convexity and monotonicity issues of the knot data.
    pub(crate) fn knot_issues(&self) -> Vec<String> {
        let mut issues = Vec::new();
        if let Some(k) = self.ys.windows(2).position(|w| w[1] < w[0]) {
            issues.push(format!("monotonicity: value decreases between knots {} and {}", k, k + 1));
        }
        for (k, w) in self.slopes.windows(2).enumerate() {
            if w[1] < w[0] - 1e-12 * (1.0 + w[0].abs()) {
                issues.push(format!("convexity: secant slope drops at knot {}", k + 1));
                break;
            }
        }
        issues
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GridProfile {
        GridProfile::new(vec![-3.0, -1.0, -0.5], vec![-2.0, -1.0, -0.25]).unwrap()
    }

    #[test]
    fn interpolation_and_extension() {
        let g = sample();
        assert_eq!(g.value(-2.0), -1.5);
        assert_eq!(g.value(-5.0), -3.0);
        assert_eq!(g.value(0.0), 0.5);
        assert_eq!(g.right_derivative(-1.0), 1.5);
        assert_eq!(g.left_derivative(-1.0), 0.5);
        assert_eq!(g.kink_points(), vec![-1.0]);
    }

    #[test]
    fn inverse_matches_values() {
        let g = sample();
        for x in [-7.0, -3.0, -2.0, -1.0, -0.7, -0.2] {
            assert!((g.inverse(g.value(x)) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_bottom_returns_right_end() {
        let g = GridProfile::new(vec![-3.0, -1.0, 0.0], vec![-1.0, -1.0, 0.0]).unwrap();
        assert_eq!(g.infimum(), -1.0);
        assert_eq!(g.inverse(-1.0), -1.0);
        assert_eq!(g.inverse(-2.0), f64::NEG_INFINITY);
    }

    #[test]
    fn decreasing_data_is_reported() {
        let g = GridProfile::new(vec![-2.0, -1.0, 0.0], vec![-1.0, -2.0, 0.0]).unwrap();
        assert!(g.knot_issues().iter().any(|s| s.starts_with("monotonicity")));
    }

    #[test]
    fn rejects_positive_knots() {
        assert!(GridProfile::new(vec![-1.0, 1.0], vec![0.0, 0.0]).is_err());
    }
}
