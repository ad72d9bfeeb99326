//! Capacities of balls and sublevel sets in the radial model.
//!
//! The open sublevel set `{u < −s}` is the ball of log-radius
//! `x_s = inf{x : γ(x) >= −s}` and its capacity is `(−x_s)^{−n}`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::numerics::log_space;
use crate::profiles::{CapDecay, RadialProfile};

/// Capacity of the ball of radius `r`: `(log 1/r)^{−n}`.
pub fn cap_ball(r: f64, n: u32) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::RadiusOutOfRange(r));
    }
    Ok(cap_log_ball(r.ln(), n))
}

/// Capacity of the ball of log-radius `x`; 0 for the point `x = −∞` and
/// `+inf` for the whole ball.
pub fn cap_log_ball(x: f64, n: u32) -> f64 {
    if x >= 0.0 {
        return f64::INFINITY;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    (-x).powi(-(n as i32))
}

/// Relative extremal function of the closed ball of radius `r`.
pub fn extremal_profile(r: f64) -> Result<RadialProfile> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::RadiusOutOfRange(r));
    }
    Ok(RadialProfile::extremal(r))
}

/// `Cap({u < −s})`.
pub fn cap_sublevel(p: &RadialProfile, s: f64, n: u32) -> f64 {
    cap_log_ball(p.sublevel_log_radius(s), n)
}

/// `h(t) = t^n Cap({u < −t})`.
pub fn scaled_capacity(p: &RadialProfile, t: f64, n: u32) -> f64 {
    let x = p.sublevel_log_radius(t);
    if x >= 0.0 {
        f64::INFINITY
    } else if x == f64::NEG_INFINITY {
        0.0
    } else {
        (t / -x).powi(n as i32)
    }
}

/// Default s-grid: 96 log-spaced points on `[10⁻³, 10³]`.
pub fn default_s_grid() -> Vec<f64> {
    log_space(1e-3, 1e3, 96)
}

/// `sup_s s^n Cap({u < −s})`, sampled on the default grid and extended
/// towards `s → 0` one decade at a time until stable.
pub fn sup_scaled_capacity(p: &RadialProfile, n: u32) -> f64 {
    let mut best = default_s_grid().into_iter().map(|s| scaled_capacity(p, s, n)).fold(0.0, f64::max);
    let mut stable = 0;
    for k in 4..=300 {
        let decade = log_space(10f64.powi(-k), 10f64.powi(1 - k), 9);
        let next = decade.into_iter().map(|s| scaled_capacity(p, s, n)).fold(best, f64::max);
        if next == f64::INFINITY {
            return next;
        }
        if next - best <= 1e-13 * next {
            stable += 1;
        } else {
            stable = 0;
        }
        best = next;
        if stable >= 3 {
            break;
        }
    }
    best
}

/// Sampled `s ↦ Cap({u < −s})` with `f(s) = −(1/n) log Cap`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityCurve {
    pub n: u32,
    pub s: Vec<f64>,
    pub cap: Vec<f64>,
    pub f: Vec<f64>,
    /// Closed-form tail class when the profile family has one.
    pub decay: Option<CapDecay>,
    /// `f → +∞`: the profile is unbounded below.
    pub unbounded: bool,
}

impl CapacityCurve {
    /// Curve from capacity samples.
    pub fn from_samples(n: u32, s: Vec<f64>, cap: Vec<f64>, unbounded: bool) -> Self {
        let f = cap.iter().map(|&c| -c.ln() / n as f64).collect();
        CapacityCurve { n, s, cap, f, decay: None, unbounded }
    }

    /// `f` at `s`, interpolated linearly between samples and extended as a
    /// constant beyond the ends.
    pub fn f_at(&self, s: f64) -> f64 {
        let k = self.s.partition_point(|&v| v <= s);
        if k == 0 {
            return self.f[0];
        }
        if k == self.s.len() {
            return self.f[k - 1];
        }
        let (s0, s1) = (self.s[k - 1], self.s[k]);
        let (f0, f1) = (self.f[k - 1], self.f[k]);
        if f1 == f64::INFINITY {
            return if s == s0 { f0 } else { f64::INFINITY };
        }
        f0 + (f1 - f0) * (s - s0) / (s1 - s0)
    }

    /// CSV with columns `s,cap,f`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["s", "cap", "f"])?;
        for k in 0..self.s.len() {
            w.write_record([fmt_ext(self.s[k]), fmt_ext(self.cap[k]), fmt_ext(self.f[k])])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip decimal: `inf`/`-inf` for infinities, exponent form
/// below `1e-5` and from `1e16` on in magnitude.
pub fn fmt_ext(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else if v != 0.0 && (v.abs() < 1e-5 || v.abs() >= 1e16) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

/// Capacity curve of a profile on a positive increasing grid.
pub fn capacity_curve(p: &RadialProfile, n: u32, s_grid: &[f64]) -> Result<CapacityCurve> {
    if s_grid.is_empty() || s_grid[0] <= 0.0 || s_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("s-grid must be positive and increasing".into()));
    }
    let cap: Vec<f64> = s_grid.iter().map(|&s| cap_sublevel(p, s, n)).collect();
    let mut curve = CapacityCurve::from_samples(n, s_grid.to_vec(), cap, !p.is_bounded());
    curve.decay = p.capacity_decay();
    Ok(curve)
}

/// Critical exponent estimate `p* = n(β − 1)` from `Cap ~ t^{−nβ}` fitted on
/// `[100, 1000]`; `+inf` when the capacity vanishes there.
pub fn critical_exponent_fit(p: &RadialProfile, n: u32) -> f64 {
    let (a, b) = (cap_sublevel(p, 100.0, n), cap_sublevel(p, 1000.0, n));
    if a == 0.0 || b == 0.0 {
        return f64::INFINITY;
    }
    let slope = (b.ln() - a.ln()) / 10f64.ln();
    -slope - n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn ball_examples() {
        assert_eq!(cap_ball((-1f64).exp(), 2).unwrap(), 1.0);
        assert!((cap_ball((-2f64).exp(), 2).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(cap_ball((-1f64).exp(), 3).unwrap(), 1.0);
        assert!(matches!(cap_ball(1.0, 2), Err(Error::RadiusOutOfRange(_))));
    }

    #[test]
    fn extremal_examples() {
        let p = extremal_profile((-1f64).exp()).unwrap();
        assert_eq!(p.eval(-1.0).unwrap(), -1.0);
        assert_eq!(p.eval(-0.5).unwrap(), -0.5);
    }

    #[test]
    fn sublevel_examples() {
        let t: f64 = 2.5;
        assert!((cap_sublevel(&RadialProfile::linear(1.0), t, 2) - t.powi(-2)).abs() < 1e-15);
        let exact = (t.exp() - 1.0).powi(-2);
        assert!((cap_sublevel(&RadialProfile::log1m(1.0), t, 2) - exact).abs() < 1e-14 * exact);
        assert!((cap_sublevel(&RadialProfile::power(0.5), t, 2) - t.powi(-4)).abs() < 1e-15);
        assert_eq!(cap_sublevel(&RadialProfile::extremal(0.5), 1.0, 2), 0.0);
    }

    #[test]
    fn curve_f_values() {
        let c = capacity_curve(&RadialProfile::linear(1.0), 2, &[0.5, 1.0, 4.0]).unwrap();
        assert!((c.f[2] - 4f64.ln()).abs() < 1e-14);
        let c = capacity_curve(&RadialProfile::log1m(1.0), 2, &[1.0]).unwrap();
        assert!((c.f[0] - (E - 1.0).ln()).abs() < 1e-14);
        let c = capacity_curve(&RadialProfile::extremal(0.5), 2, &[0.5, 2.0]).unwrap();
        assert!(c.f[0].is_finite() && c.f[1] == f64::INFINITY && !c.unbounded);
    }

    #[test]
    fn sup_scaled_is_total_mass() {
        assert_eq!(sup_scaled_capacity(&RadialProfile::linear(1.0), 2), 1.0);
        let v = sup_scaled_capacity(&RadialProfile::log1m(1.0), 3);
        assert!((v - 1.0).abs() < 1e-9);
        assert_eq!(sup_scaled_capacity(&RadialProfile::power(0.5), 2), f64::INFINITY);
    }

    #[test]
    fn fitted_critical_exponent() {
        assert!((critical_exponent_fit(&RadialProfile::power(0.5), 2) - 2.0).abs() < 1e-9);
        assert!(critical_exponent_fit(&RadialProfile::linear(1.0), 2).abs() < 1e-9);
    }
}
