use std::fmt;
use std::io::Write;
use std::sync::Arc;

use crate::capacity::fmt_ext;
use crate::error::{Error, Result};
use crate::numerics::{
    adaptive_gk, finite, integrate_from_neg_infinity, integrate_to_singular, integrate_with_breaks, Direction,
    Distribution, Interval, MonotoneFn, ScalarFn, TailVerdict,
};
use crate::profiles::RadialProfile;

const TABLE_REL_TOL: f64 = 1e-13;

/// Breakpoints `−10^{k/8}`, `k = −48..=48`, increasing.
pub(crate) fn table_breaks() -> Vec<f64> {
    (-48..=48).rev().map(|k| -(10f64.powf(k as f64 / 8.0))).collect()
}

/// Cumulative table of a density in log-radius.
struct DensityTable {
    density: ScalarFn,
    xs: Vec<f64>,
    cumulative: Vec<f64>,
    total: f64,
}

impl DensityTable {
    fn new(density: ScalarFn, extra_breaks: &[f64]) -> Result<Self> {
        let mut xs = table_breaks();
        let pole_side = xs[0];
        xs.extend(far_breaks());
        xs.extend(extra_breaks.iter().copied().filter(|x| x.is_finite() && *x < 0.0));
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let f = |x: f64| flush_subnormal(density(x));
        let head = integrate_from_neg_infinity(f, pole_side, TABLE_REL_TOL)?;
        if head.is_diverged() {
            return Err(Error::NotADistribution("infinite mass near the pole".into()));
        }
        // Knots on the pole side get their own head integrals so that tiny
        // masses keep their relative accuracy.
        let split = xs.partition_point(|&v| v < pole_side);
        let mut cumulative = Vec::with_capacity(xs.len());
        for &x in &xs[..split] {
            let v = integrate_from_neg_infinity(f, x, TABLE_REL_TOL)?;
            cumulative.push(if v.is_converged() { v.value.clamp(0.0, head.value.max(0.0)) } else { 0.0 });
        }
        for k in (1..split).rev() {
            cumulative[k - 1] = cumulative[k - 1].min(cumulative[k]);
        }
        cumulative.push(head.value.max(0.0));
        for w in xs[split..].windows(2) {
            let piece = finite(&f, w[0], w[1])?;
            cumulative.push(cumulative[cumulative.len() - 1] + piece.max(0.0));
        }
        let last = xs[xs.len() - 1];
        let tail = integrate_to_singular(f, last, 0.0, TABLE_REL_TOL)?;
        let total = if tail.is_converged() { cumulative[cumulative.len() - 1] + tail.value } else { f64::INFINITY };
        Ok(DensityTable { density, xs, cumulative, total })
    }

    fn cumulative(&self, x: f64) -> f64 {
        if x == f64::NEG_INFINITY {
            return 0.0;
        }
        if x >= 0.0 {
            return self.total;
        }
        let f = |t: f64| flush_subnormal((self.density)(t));
        let k = self.xs.partition_point(|&v| v <= x);
        if k == 0 {
            return integrate_from_neg_infinity(f, x, TABLE_REL_TOL)
                .map(|v| v.value.clamp(0.0, self.cumulative[0]))
                .unwrap_or(0.0);
        }
        let base = self.cumulative[k - 1];
        // Accuracy relative to the mass below, not to the piece; flushed
        // densities cost at most `MIN_POSITIVE` per unit length.
        let abs_tol = (1e-14 * base).max(f64::MIN_POSITIVE * (x - self.xs[k - 1])).max(1e-300);
        base + adaptive_gk(&f, self.xs[k - 1], x, 1e-12, abs_tol).unwrap_or(0.0)
    }
}

/// Subnormal densities carry no usable digits and stall adaptive quadrature.
fn flush_subnormal(v: f64) -> f64 {
    if v.abs() < f64::MIN_POSITIVE {
        0.0
    } else {
        v
    }
}

/// `−10^k` for `k = 300, …, 7`, beyond the fixed table.
pub(crate) fn far_breaks() -> impl Iterator<Item = f64> {
    (7..=300).rev().map(|k| -(10f64.powi(k)))
}

#[derive(Clone)]
enum Body {
    Zero,
    /// Profile with the Dirac mass `γ'(−∞)^n` it carries at the origin.
    Profile(RadialProfile, f64),
    Density(Arc<DensityTable>),
}

/// A rotation-invariant positive measure on the unit ball: an atom at the
/// origin, sphere atoms and an absolutely continuous radial part.
///
/// Positions are log-radii `x = log r < 0`.
#[derive(Clone)]
pub struct RadialMeasure {
    n: u32,
    dirac0: f64,
    atoms: Vec<(f64, f64)>,
    body: Body,
}

impl fmt::Debug for RadialMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = match &self.body {
            Body::Zero => "zero".to_string(),
            Body::Profile(p, _) => format!("ma({p})"),
            Body::Density(_) => "density".to_string(),
        };
        f.debug_struct("RadialMeasure")
            .field("n", &self.n)
            .field("dirac0", &self.dirac0)
            .field("atoms", &self.atoms)
            .field("body", &body)
            .finish()
    }
}

fn check_atoms(atoms: &mut Vec<(f64, f64)>) -> Result<()> {
    for &(x, jump) in atoms.iter() {
        if !(x < 0.0 && x.is_finite()) {
            return Err(Error::RadiusOutOfRange(x.exp()));
        }
        if !(jump > 0.0 && jump.is_finite()) {
            return Err(Error::NotADistribution(format!("sphere atom at log r = {x} has mass {jump}")));
        }
    }
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
    for &(x, j) in atoms.iter() {
        match merged.last_mut() {
            Some(last) if last.0 == x => last.1 += j,
            _ => merged.push((x, j)),
        }
    }
    *atoms = merged;
    Ok(())
}

impl RadialMeasure {
    /// `(dd^c γ(log|z|))^n` for a valid profile.
    pub fn from_profile(p: &RadialProfile, n: u32) -> Result<Self> {
        assert!(n >= 1, "dimension must be positive");
        let diag = p.validate();
        if !diag.is_valid() {
            return Err(Error::InvalidProfile(diag.to_string()));
        }
        let pow = |s: f64| s.powi(n as i32);
        let atoms = p
            .kinks()
            .into_iter()
            .map(|k| (k.x, pow(k.right) - pow(k.left)))
            .filter(|a| a.1 > 0.0)
            .collect();
        let dirac0 = pow(p.pole_slope());
        Ok(RadialMeasure { n, dirac0, atoms, body: Body::Profile(p.clone(), dirac0) })
    }

    pub fn zero(n: u32) -> Self {
        RadialMeasure { n, dirac0: 0.0, atoms: Vec::new(), body: Body::Zero }
    }

    /// `mass·δ₀`.
    pub fn dirac(n: u32, mass: f64) -> Self {
        assert!(mass >= 0.0);
        RadialMeasure { dirac0: mass, ..Self::zero(n) }
    }

    /// Uniform mass on the sphere of radius `r`.
    pub fn sphere_atom(n: u32, r: f64, mass: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::RadiusOutOfRange(r));
        }
        Self::with_density(n, 0.0, vec![(r.ln(), mass)], None::<fn(f64) -> f64>)
    }

    /// A measure from its pieces; `density` is the mass per unit log-radius.
    pub fn with_density<F>(n: u32, dirac0: f64, mut atoms: Vec<(f64, f64)>, density: Option<F>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        assert!(n >= 1, "dimension must be positive");
        if !(dirac0 >= 0.0 && dirac0.is_finite()) {
            return Err(Error::NotADistribution(format!("dirac mass {dirac0}")));
        }
        check_atoms(&mut atoms)?;
        let body = match density {
            None => Body::Zero,
            Some(f) => {
                let breaks: Vec<f64> = atoms.iter().map(|a| a.0).collect();
                Body::Density(Arc::new(DensityTable::new(Arc::new(f), &breaks)?))
            }
        };
        Ok(RadialMeasure { n, dirac0, atoms, body })
    }

    /// `g·μ` for a nonnegative factor `g` of the log-radius; the origin keeps
    /// its mass only when `g(−∞)` is given.
    pub fn reweighted<G>(&self, g: G, at_pole: f64) -> Result<Self>
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let atoms: Vec<(f64, f64)> =
            self.atoms.iter().map(|&(x, j)| (x, g(x) * j)).filter(|a| a.1 > 0.0).collect();
        let base = self.clone();
        let density = move |x: f64| {
            let d = base.density(x);
            if d == 0.0 {
                0.0
            } else {
                flush_subnormal(g(x) * d)
            }
        };
        Self::with_density(self.n, self.dirac0 * at_pole, atoms, Some(density))
    }

    /// The measure with the origin's mass removed.
    pub fn nonpluripolar_part(&self) -> Self {
        RadialMeasure { dirac0: 0.0, ..self.clone() }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dirac0(&self) -> f64 {
        self.dirac0
    }

    /// Sphere atoms `(log r, mass)`, increasing in `r`.
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    fn pow(&self, s: f64) -> f64 {
        s.powi(self.n as i32)
    }

    /// Density of the absolutely continuous part per unit log-radius.
    pub fn density(&self, x: f64) -> f64 {
        match &self.body {
            Body::Zero => 0.0,
            Body::Profile(p, _) => {
                let d1 = p.right_derivative(x);
                let d2 = p.second_derivative(x);
                if d2 == 0.0 || d1 == 0.0 && self.n > 1 {
                    return 0.0;
                }
                let v = self.n as f64 * d1.powi(self.n as i32 - 1) * d2;
                if v.is_nan() {
                    0.0
                } else {
                    flush_subnormal(v)
                }
            }
            Body::Density(t) => flush_subnormal((t.density)(x)),
        }
    }

    fn atoms_up_to(&self, x: f64, closed: bool) -> f64 {
        self.atoms.iter().filter(|a| if closed { a.0 <= x } else { a.0 < x }).map(|a| a.1).sum()
    }

    /// Mass of the closed ball of log-radius `x` (origin included).
    pub fn mass_closed(&self, x: f64) -> f64 {
        if x >= 0.0 {
            return self.total();
        }
        match &self.body {
            Body::Profile(p, pole) => {
                if x == f64::NEG_INFINITY {
                    self.dirac0
                } else {
                    self.dirac0 + (self.pow(p.right_derivative(x)) - pole).max(0.0)
                }
            }
            Body::Zero => self.dirac0 + self.atoms_up_to(x, true),
            Body::Density(t) => self.dirac0 + t.cumulative(x) + self.atoms_up_to(x, true),
        }
    }

    /// Mass of the open ball of log-radius `x`; the whole mass for `x >= 0`.
    pub fn mass_open(&self, x: f64) -> f64 {
        if x >= 0.0 {
            return self.total();
        }
        match &self.body {
            Body::Profile(p, pole) => {
                if x == f64::NEG_INFINITY {
                    0.0
                } else {
                    self.dirac0 + (self.pow(p.left_derivative(x)) - pole).max(0.0)
                }
            }
            Body::Zero => {
                if x == f64::NEG_INFINITY {
                    0.0
                } else {
                    self.dirac0 + self.atoms_up_to(x, false)
                }
            }
            Body::Density(t) => {
                if x == f64::NEG_INFINITY {
                    0.0
                } else {
                    self.dirac0 + t.cumulative(x) + self.atoms_up_to(x, false)
                }
            }
        }
    }

    /// Closed-ball mass as a function of the radius.
    pub fn mass_closed_ball(&self, r: f64) -> f64 {
        self.mass_closed(r.ln())
    }

    /// Total mass, `+inf` when infinite.
    pub fn total(&self) -> f64 {
        match &self.body {
            Body::Profile(p, pole) => self.dirac0 + (self.pow(p.boundary_slope()) - pole).max(0.0),
            Body::Zero => self.dirac0 + self.atoms_up_to(0.0, false),
            Body::Density(t) => self.dirac0 + t.total + self.atoms_up_to(0.0, false),
        }
    }

    /// Mass of the shell `{x ∈ interval}` of log-radii; the origin is never
    /// included.
    pub fn mass_in(&self, iv: Interval) -> f64 {
        if iv.is_empty() {
            return 0.0;
        }
        let upper = if iv.hi_closed { self.mass_closed(iv.hi) } else { self.mass_open(iv.hi) };
        let lower = if iv.lo == f64::NEG_INFINITY {
            self.dirac0
        } else if iv.lo_closed {
            self.mass_open(iv.lo)
        } else {
            self.mass_closed(iv.lo)
        };
        if upper == f64::INFINITY {
            return f64::INFINITY;
        }
        (upper - lower).max(0.0)
    }

    /// Mass of the annulus `r₁ < |z| < r₂`.
    pub fn mass_annulus(&self, r1: f64, r2: f64) -> f64 {
        self.mass_in(Interval::open(r1.ln(), r2.ln()))
    }

    /// `∫ g dμ` over the shell `{x ∈ interval}` (origin excluded), with `g` a
    /// function of the log-radius.
    pub fn integrate<G: Fn(f64) -> f64>(&self, g: G, iv: Interval, rel_tol: f64) -> Result<TailVerdict> {
        if iv.is_empty() {
            return Ok(TailVerdict::converged(0.0));
        }
        let mut atom_sum = 0.0;
        for &(x, jump) in &self.atoms {
            if iv.contains(x) {
                let v = g(x);
                if v == f64::INFINITY {
                    return Ok(TailVerdict::diverged(f64::INFINITY));
                }
                if !v.is_finite() {
                    return Err(Error::NonIntegrableSample { x, value: v });
                }
                atom_sum += v * jump;
            }
        }
        if matches!(self.body, Body::Zero) {
            return Ok(TailVerdict::converged(atom_sum));
        }
        let hi = iv.hi.min(0.0);
        let lo = iv.lo;
        if !(lo < hi) {
            return Ok(TailVerdict::converged(atom_sum));
        }
        let f = |x: f64| {
            let d = self.density(x);
            if d == 0.0 {
                0.0
            } else {
                // An overflowing density lives on a set too thin to matter.
                g(x) * d.min(f64::MAX)
            }
        };
        let mut breaks: Vec<f64> = self.atoms.iter().map(|a| a.0).collect();
        breaks.push(-1.0);
        let hi_singular = hi == 0.0 || !iv.hi_closed;
        let lo_singular = lo.is_finite() && !iv.lo_closed;
        let v = integrate_with_breaks(&f, lo, hi, lo_singular, hi_singular, &breaks, rel_tol)?;
        Ok(v.shifted(atom_sum))
    }

    /// Cumulative distribution in log-radius as a [`Distribution`]; the
    /// origin's mass is excluded.
    pub fn distribution(&self) -> Result<Distribution> {
        let me = self.clone();
        let dens = self.clone();
        let f = MonotoneFn::closed("radial mass", Direction::Nondecreasing, f64::NEG_INFINITY, 0.0, move |x| {
            match &me.body {
                Body::Zero => 0.0,
                Body::Profile(..) => me.mass_closed(x) - me.dirac0 - me.atoms_up_to(x, true),
                Body::Density(t) => t.cumulative(x),
            }
            .max(0.0)
        })
        .with_derivative(move |x| dens.density(x));
        Distribution::new(f, self.atoms.clone())
    }

    /// CSV with header comment `# dirac0=.. n=.. total=..` and columns
    /// `r,m,atom_jump` on the given radii plus every atom radius.
    pub fn write_csv<W: Write>(&self, out: W, radii: &[f64]) -> Result<()> {
        let mut out = out;
        let total = self.total();
        let total = if total.is_finite() { total.to_string() } else { "inf".into() };
        writeln!(out, "# dirac0={} n={} total={}", self.dirac0, self.n, total)?;
        let mut rs: Vec<f64> = radii.to_vec();
        rs.extend(self.atoms.iter().map(|a| a.0.exp()));
        rs.sort_by(f64::total_cmp);
        rs.dedup();
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["r", "m", "atom_jump"])?;
        for r in rs {
            let x = r.ln();
            let jump: f64 = self.atoms.iter().filter(|a| a.0 == x).map(|a| a.1).sum();
            w.write_record([fmt_ext(r), fmt_ext(self.mass_closed(x)), fmt_ext(jump)])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::DEFAULT_REL_TOL;

    #[test]
    fn log_is_the_unit_dirac() {
        let m = RadialMeasure::from_profile(&RadialProfile::linear(1.0), 2).unwrap();
        assert_eq!(m.dirac0(), 1.0);
        assert!(m.atoms().is_empty());
        assert_eq!(m.mass_closed(-3.0), 1.0);
        assert_eq!(m.total(), 1.0);
        assert_eq!(m.density(-1.0), 0.0);
    }

    #[test]
    fn clipped_log_is_a_sphere_atom() {
        let p = RadialProfile::linear(1.0).clip(1.0);
        let m = RadialMeasure::from_profile(&p, 2).unwrap();
        assert_eq!(m.dirac0(), 0.0);
        assert_eq!(m.atoms(), &[(-1.0, 1.0)]);
        assert_eq!(m.mass_closed(-1.0), 1.0);
        assert_eq!(m.mass_open(-1.0), 0.0);
        assert_eq!(m.mass_closed(-1.0001), 0.0);
    }

    #[test]
    fn power_half_has_infinite_mass() {
        let m = RadialMeasure::from_profile(&RadialProfile::power(0.5), 2).unwrap();
        assert_eq!(m.dirac0(), 0.0);
        let r: f64 = 0.3;
        assert!((m.mass_closed_ball(r) - 1.0 / (4.0 * -r.ln())).abs() < 1e-15);
        assert_eq!(m.total(), f64::INFINITY);
    }

    #[test]
    fn density_integrates_to_mass() {
        let m = RadialMeasure::from_profile(&RadialProfile::log1m(1.0), 2).unwrap();
        let v = m.integrate(|_| 1.0, Interval::open(f64::NEG_INFINITY, 0.0), DEFAULT_REL_TOL).unwrap();
        assert!(v.is_converged());
        assert!((v.value - 1.0).abs() < 1e-8);
        let shell = m.mass_in(Interval::open(-2.0, -1.0));
        assert!((shell - (0.25 - 1.0 / 9.0)).abs() < 1e-15);
    }

    #[test]
    fn density_table_matches_closed_form() {
        let m = RadialMeasure::with_density(2, 0.0, vec![], Some(|x: f64| 2.0 / (1.0 - x).powi(3))).unwrap();
        for x in [-1e7, -50.0, -1.0, -1e-3] {
            let exact = (1.0f64 - x).powi(-2);
            assert!((m.mass_closed(x) - exact).abs() < 1e-10 * exact.max(1e-300), "x = {x}");
        }
        assert!((m.total() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn reweighting_scales_atoms_and_density() {
        let base = RadialMeasure::from_profile(&RadialProfile::log1m(1.0).clip(2.0), 2).unwrap();
        let doubled = base.reweighted(|_| 2.0, 0.0).unwrap();
        assert!((doubled.total() - 2.0 * base.total()).abs() < 1e-10);
        assert_eq!(doubled.atoms().len(), 1);
    }

    #[test]
    fn distribution_view() {
        let m = RadialMeasure::from_profile(&RadialProfile::log1m(1.0).clip(1.0), 2).unwrap();
        let d = m.distribution().unwrap();
        let v = crate::numerics::stieltjes(|_| 1.0, &d, Interval::left_open(f64::NEG_INFINITY, 0.0), 1e-10)
            .unwrap();
        assert!((v.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn csv_header() {
        let m = RadialMeasure::sphere_atom(2, (-1f64).exp(), 1.0).unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf, &[0.5]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("# dirac0=0 n=2 total=1\nr,m,atom_jump\n"));
    }
}
