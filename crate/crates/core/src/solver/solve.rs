use crate::error::{Error, Result};
use crate::numerics::{adaptive_gk, finite, finite_wide, integrate_from_neg_infinity};
use crate::profiles::RadialProfile;
use crate::radial_ma::{far_breaks, table_breaks, RadialMeasure};

use std::sync::Arc;

/// Profile `γ(x) = −∫_x^0 m(s)^{1/n} ds` with `m` the closed-ball mass of a
/// measure, tabulated on fixed breakpoints and the atom radii.
#[derive(Debug, Clone)]
pub struct SolvedProfile {
    measure: RadialMeasure,
    xs: Vec<f64>,
    values: Vec<f64>,
    infimum: f64,
}

impl SolvedProfile {
    fn slope(&self, x: f64) -> f64 {
        self.root(self.measure.mass_closed(x))
    }

    fn root(&self, m: f64) -> f64 {
        let n = self.measure.n();
        if n == 1 {
            m
        } else {
            m.powf(1.0 / n as f64)
        }
    }

    pub fn measure(&self) -> &RadialMeasure {
        &self.measure
    }

    pub(crate) fn value(&self, x: f64) -> f64 {
        if x >= 0.0 {
            return 0.0;
        }
        if x == f64::NEG_INFINITY {
            return self.infimum;
        }
        let f = |s: f64| self.slope(s);
        let k = self.xs.partition_point(|&v| v < x);
        if k == self.xs.len() {
            return -finite(&f, x, 0.0).unwrap_or(f64::NAN);
        }
        let piece = if k == 0 {
            finite_wide(&f, x, self.xs[0])
        } else {
            adaptive_gk(&f, x, self.xs[k], 1e-12, 1e-15 * (1.0 + self.values[k].abs()))
        };
        (self.values[k] - piece.unwrap_or(f64::NAN)).max(self.infimum)
    }

    pub(crate) fn right_derivative(&self, x: f64) -> f64 {
        self.slope(x)
    }

    pub(crate) fn left_derivative(&self, x: f64) -> f64 {
        self.root(self.measure.mass_open(x))
    }

    pub(crate) fn second_derivative(&self, x: f64) -> f64 {
        let d = self.measure.density(x);
        if d == 0.0 {
            return 0.0;
        }
        let n = self.measure.n() as f64;
        let m = self.measure.mass_closed(x);
        d * m.powf(1.0 / n - 1.0) / n
    }

    pub(crate) fn kink_points(&self) -> Vec<f64> {
        self.measure.atoms().iter().map(|a| a.0).collect()
    }

    pub(crate) fn infimum(&self) -> f64 {
        self.infimum
    }

    pub(crate) fn boundary_slope(&self) -> f64 {
        self.root(self.measure.total())
    }

    pub(crate) fn pole_slope(&self) -> f64 {
        self.root(self.measure.dirac0())
    }

    /// `inf{x : γ(x) >= y}`, or the right end of the bottom plateau.
    pub(crate) fn inverse(&self, y: f64) -> f64 {
        let on_plateau = y <= self.infimum;
        let pred = |x: f64| if on_plateau { self.value(x) > y } else { self.value(x) >= y };
        // Bracket with the tabulated values before bisecting.
        let k = self.values.partition_point(|&v| if on_plateau { v <= y } else { v < y });
        let (mut lo, mut hi) = match k {
            0 => (self.xs[0], self.xs[0]),
            k if k == self.xs.len() => (self.xs[k - 1], 0.0),
            k => (self.xs[k - 1], self.xs[k]),
        };
        while pred(lo) {
            hi = lo;
            lo *= 2.0;
            if lo < -1e300 {
                return f64::NEG_INFINITY;
            }
        }
        for _ in 0..2200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if pred(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// Radial profile with `(dd^c u)^n = μ` and boundary values 0.
///
/// The right derivative is `m(x)^{1/n}`. A Dirac mass at the origin gives a
/// logarithmic pole; see [`RadialSolution::charges_pole`].
pub fn solve_radial(mu: &RadialMeasure) -> Result<RadialSolution> {
    let total = mu.total();
    if !total.is_finite() {
        return Err(Error::NotSolvable("infinite total mass".into()));
    }
    let mut xs = table_breaks();
    let head = xs[0];
    // Far knots keep evaluations and inversions deep in the tail cheap.
    xs.extend(far_breaks());
    xs.extend(mu.atoms().iter().map(|a| a.0));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let n = mu.n();
    let root = move |m: f64| if n == 1 { m } else { m.powf(1.0 / n as f64) };
    let slope = |s: f64| root(mu.mass_closed(s));
    let mut values = vec![0.0; xs.len()];
    let last = xs.len() - 1;
    values[last] = -finite(&slope, xs[last], 0.0)?;
    for k in (0..last).rev() {
        let abs_tol = 1e-15 * (1.0 + values[k + 1].abs());
        values[k] = values[k + 1] - adaptive_gk(&slope, xs[k], xs[k + 1], 1e-12, abs_tol)?;
    }
    let at_head = values[xs.partition_point(|&v| v < head)];
    let tail = integrate_from_neg_infinity(slope, head, 1e-12)?;
    let infimum = if mu.dirac0() > 0.0 || !tail.is_converged() { f64::NEG_INFINITY } else { at_head - tail.value };
    let profile = SolvedProfile { measure: mu.clone(), xs, values, infimum };
    Ok(RadialSolution { profile: RadialProfile::Solved(Arc::new(profile)), charges_pole: mu.dirac0() > 0.0 })
}

/// Output of [`solve_radial`].
#[derive(Debug, Clone)]
pub struct RadialSolution {
    pub profile: RadialProfile,
    /// The data has a Dirac mass at the origin: the solution has a pole and
    /// uniqueness is not claimed.
    pub charges_pole: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_atom_gives_extremal() {
        let mu = RadialMeasure::sphere_atom(2, (-1f64).exp(), 1.0).unwrap();
        let sol = solve_radial(&mu).unwrap();
        let ex = RadialProfile::extremal((-1f64).exp());
        for x in [-1e5, -3.0, -1.0, -0.5, -1e-4] {
            assert!((sol.profile.value(x) - ex.value(x)).abs() < 1e-12, "x = {x}");
        }
        assert_eq!(sol.profile.infimum(), -1.0);
        assert!(!sol.charges_pole);
        assert!((sol.profile.inverse(-1.0).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn dirac_gives_log() {
        let sol = solve_radial(&RadialMeasure::dirac(3, 1.0)).unwrap();
        assert!(sol.charges_pole);
        for x in [-1e4, -2.0, -1e-3] {
            assert!((sol.profile.value(x) - x).abs() < 1e-9 * (1.0 + x.abs()));
        }
        assert_eq!(sol.profile.infimum(), f64::NEG_INFINITY);
    }

    #[test]
    fn log1m_measure_gives_log1m() {
        let p = RadialProfile::log1m(1.0);
        let mu = RadialMeasure::from_profile(&p, 2).unwrap();
        let sol = solve_radial(&mu).unwrap();
        for x in [-1e6, -30.0, -1.0, -1e-5] {
            let exact = p.value(x);
            assert!((sol.profile.value(x) - exact).abs() < 1e-10 * (1.0 + exact.abs()), "x = {x}");
        }
    }

    #[test]
    fn infinite_mass_is_rejected() {
        let mu = RadialMeasure::from_profile(&RadialProfile::power(0.5), 2).unwrap();
        assert!(matches!(solve_radial(&mu), Err(Error::NotSolvable(_))));
    }
}
