use crate::error::{Error, Result};
use crate::profiles::{validation_grid, RadialProfile};

/// Most sign changes accepted between two profiles.
pub const MAX_SIGN_CHANGES: usize = 64;

/// Profile of `max(u, v)` with the sign changes of `γ_u − γ_v` cached.
#[derive(Debug, Clone)]
pub struct MaxProfile {
    pub(crate) a: RadialProfile,
    pub(crate) b: RadialProfile,
    pub(crate) crossings: Vec<f64>,
}

impl MaxProfile {
    pub fn new(a: RadialProfile, b: RadialProfile) -> Result<Self> {
        let crossings = crossings(&a, &b)?;
        Ok(MaxProfile { a, b, crossings })
    }

    pub fn branches(&self) -> (&RadialProfile, &RadialProfile) {
        (&self.a, &self.b)
    }

    pub fn crossings(&self) -> &[f64] {
        &self.crossings
    }

    fn tied(&self, x: f64, va: f64, vb: f64) -> bool {
        va == vb || self.crossings.binary_search_by(|c| c.total_cmp(&x)).is_ok()
    }

    pub(crate) fn value(&self, x: f64) -> f64 {
        self.a.value(x).max(self.b.value(x))
    }

    pub(crate) fn right_derivative(&self, x: f64) -> f64 {
        let (va, vb) = (self.a.value(x), self.b.value(x));
        if self.tied(x, va, vb) {
            self.a.right_derivative(x).max(self.b.right_derivative(x))
        } else if va > vb {
            self.a.right_derivative(x)
        } else {
            self.b.right_derivative(x)
        }
    }

    pub(crate) fn left_derivative(&self, x: f64) -> f64 {
        let (va, vb) = (self.a.value(x), self.b.value(x));
        if self.tied(x, va, vb) {
            self.a.left_derivative(x).min(self.b.left_derivative(x))
        } else if va > vb {
            self.a.left_derivative(x)
        } else {
            self.b.left_derivative(x)
        }
    }

    pub(crate) fn second_derivative(&self, x: f64) -> f64 {
        let (va, vb) = (self.a.value(x), self.b.value(x));
        if va > vb {
            self.a.second_derivative(x)
        } else if vb > va {
            self.b.second_derivative(x)
        } else if self.a.right_derivative(x) >= self.b.right_derivative(x) {
            self.a.second_derivative(x)
        } else {
            self.b.second_derivative(x)
        }
    }

    pub(crate) fn kink_candidates(&self) -> Vec<f64> {
        let mut xs = self.crossings.clone();
        xs.extend(self.a.kink_points());
        xs.extend(self.b.kink_points());
        xs
    }

    pub(crate) fn boundary_slope(&self) -> f64 {
        let (va, vb) = (self.a.value(0.0), self.b.value(0.0));
        let (sa, sb) = (self.a.boundary_slope(), self.b.boundary_slope());
        if va > vb {
            sa
        } else if vb > va {
            sb
        } else {
            sa.min(sb)
        }
    }

    pub(crate) fn pole_slope(&self) -> f64 {
        self.a.pole_slope().min(self.b.pole_slope())
    }
}

fn sign(d: f64, scale: f64) -> i8 {
    if !d.is_finite() || d.abs() <= 1e-13 * scale {
        0
    } else if d > 0.0 {
        1
    } else {
        -1
    }
}

/// Points of `(−∞, 0)` where `γ_a − γ_b` changes sign, in increasing order.
///
/// Signs are sampled on the validation grid and on a geometric extension
/// down to `−10^300`; each change is refined by bisection.
pub fn crossings(a: &RadialProfile, b: &RadialProfile) -> Result<Vec<f64>> {
    let mut xs: Vec<f64> = (1..=294).rev().map(|k| -1e6 * 10f64.powi(k)).collect();
    xs.extend(validation_grid());
    let s = |x: f64| {
        let (va, vb) = (a.value(x), b.value(x));
        sign(va - vb, 1.0 + va.abs() + vb.abs())
    };
    let mut out = Vec::new();
    let mut last: Option<(f64, i8)> = None;
    for &x in &xs {
        let sx = s(x);
        if sx == 0 {
            continue;
        }
        if let Some((xl, sl)) = last {
            if sl != sx {
                out.push(bisect(&s, xl, x, sl));
                if out.len() > MAX_SIGN_CHANGES {
                    return Err(Error::TooOscillatory(out.len()));
                }
            }
        }
        last = Some((x, sx));
    }
    Ok(out)
}

fn bisect(s: &impl Fn(f64) -> i8, mut lo: f64, mut hi: f64, s_lo: i8) -> f64 {
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if s(mid) == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Maximal open intervals of log-radius on which `γ_a > γ_b`.
pub fn superlevel_intervals(a: &RadialProfile, b: &RadialProfile) -> Result<Vec<(f64, f64)>> {
    let mut xs: Vec<f64> = (1..=294).rev().map(|k| -1e6 * 10f64.powi(k)).collect();
    xs.extend(validation_grid());
    let above = |x: f64| {
        let (va, vb) = (a.value(x), b.value(x));
        sign(va - vb, 1.0 + va.abs() + vb.abs()) > 0
    };
    let mut out = Vec::new();
    let mut start = if above(xs[0]) { Some(f64::NEG_INFINITY) } else { None };
    let mut prev = xs[0];
    let mut changes = 0;
    for &x in &xs[1..] {
        let inside = above(x);
        if inside != start.is_some() {
            changes += 1;
            if changes > 2 * MAX_SIGN_CHANGES {
                return Err(Error::TooOscillatory(changes));
            }
            let cut = bisect_bool(&above, prev, x);
            match start.take() {
                Some(lo) => out.push((lo, cut)),
                None => start = Some(cut),
            }
        }
        prev = x;
    }
    if let Some(lo) = start {
        out.push((lo, 0.0));
    }
    Ok(out)
}

/// Boundary of a predicate that differs at `lo` and `hi`.
fn bisect_bool(p: &impl Fn(f64) -> bool, mut lo: f64, mut hi: f64) -> f64 {
    let at_lo = p(lo);
    for _ in 0..2200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if p(mid) == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_crossing_between_lines() {
        let c = crossings(&RadialProfile::linear(1.0), &RadialProfile::linear(2.0)).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn line_against_extremal() {
        let half = RadialProfile::linear(0.5);
        let ex = RadialProfile::linear(1.0).clip(1.0);
        let c = crossings(&half, &ex).unwrap();
        assert_eq!(c.len(), 1);
        assert!((c[0] + 2.0).abs() < 1e-12);
        let iv = superlevel_intervals(&half, &ex).unwrap();
        assert_eq!(iv.len(), 1);
        assert!((iv[0].0 + 2.0).abs() < 1e-12 && iv[0].1 == 0.0);
    }

    #[test]
    fn identical_profiles_have_empty_superlevel() {
        let p = RadialProfile::log1m(1.0);
        assert!(superlevel_intervals(&p, &p).unwrap().is_empty());
    }
}
