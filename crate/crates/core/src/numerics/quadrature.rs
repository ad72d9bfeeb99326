//! Adaptive Gauss-Kronrod quadrature and the interval-doubling driver for
//! improper integrals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Default relative tolerance used across the crate.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Relative tolerance used inside finite pieces; tighter than the doubling
/// rule so that piece errors never dominate the stabilization test.
const PIECE_REL_TOL: f64 = 1e-12;
const PIECE_ABS_TOL: f64 = 1e-300;
const MAX_SUBDIVISIONS: usize = 2000;
const MAX_DOUBLINGS: usize = 120;
const STABLE_RUNS: usize = 3;
const GROWTH_FACTOR: f64 = 1.5;

// Kronrod 15-point abscissae (positive half) and weights, with the embedded
// Gauss 7-point weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Outcome of a convergence test on an integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Converged,
    Diverged,
    Inconclusive,
}

/// Result of integrating with a convergence verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailVerdict {
    pub status: Status,
    /// Best available value: the integral when converged, the last partial
    /// sum otherwise (`+inf` for a diverged nonnegative integral is never
    /// substituted; the partial sum is kept for diagnostics).
    pub value: f64,
    /// Ratio of the last two partial sums (1.0 for finite intervals).
    pub ratio: f64,
}

impl TailVerdict {
    pub fn converged(value: f64) -> Self {
        TailVerdict { status: Status::Converged, value, ratio: 1.0 }
    }

    pub fn diverged(value: f64) -> Self {
        TailVerdict { status: Status::Diverged, value, ratio: f64::INFINITY }
    }

    pub fn is_converged(&self) -> bool {
        self.status == Status::Converged
    }

    pub fn is_diverged(&self) -> bool {
        self.status == Status::Diverged
    }

    /// Value as an extended real: `+inf` when diverged, NaN when inconclusive.
    pub fn extended_value(&self) -> f64 {
        match self.status {
            Status::Converged => self.value,
            Status::Diverged => f64::INFINITY,
            Status::Inconclusive => f64::NAN,
        }
    }

    /// Sum of two verdicts: diverged dominates, converged needs both.
    pub fn combine(self, other: TailVerdict) -> TailVerdict {
        let status = match (self.status, other.status) {
            (Status::Diverged, _) | (_, Status::Diverged) => Status::Diverged,
            (Status::Converged, Status::Converged) => Status::Converged,
            _ => Status::Inconclusive,
        };
        let ratio = if self.ratio.is_nan() { other.ratio } else { self.ratio.max(other.ratio) };
        TailVerdict { status, value: self.value + other.value, ratio }
    }

    /// Adds a finite constant to the value.
    pub fn shifted(self, c: f64) -> TailVerdict {
        TailVerdict { value: self.value + c, ..self }
    }

    pub fn scaled(self, c: f64) -> TailVerdict {
        TailVerdict { value: self.value * c, ..self }
    }
}

fn sample<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonIntegrableSample { x, value: v })
    }
}

/// One 15-point Kronrod rule on [a, b]: (estimate, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = sample(f, center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = sample(f, center - dx)?;
        let f2 = sample(f, center + dx)?;
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let est = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    Ok((est, err))
}

struct Segment {
    a: f64,
    b: f64,
    est: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss-Kronrod integration over a finite interval.
///
/// Returns the estimate; the error target is `max(abs_tol, rel_tol*|I|)`.
/// Exhausting the subdivision budget returns the best estimate rather than
/// failing, since callers only rely on pieces being accurate to well below
/// their own tolerances.
pub fn adaptive_gk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return adaptive_gk(f, b, a, rel_tol, abs_tol).map(|v| -v);
    }
    let (est, err) = gk15(f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, est, err });
    let mut total = est;
    let mut total_err = err;
    let mut count = 1;
    while total_err > abs_tol.max(rel_tol * total.abs()) && count < MAX_SUBDIVISIONS {
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval below float resolution; keep it as is.
            heap.push(seg);
            break;
        }
        let (e1, r1) = gk15(f, seg.a, mid)?;
        let (e2, r2) = gk15(f, mid, seg.b)?;
        total += e1 + e2 - seg.est;
        total_err += r1 + r2 - seg.err;
        heap.push(Segment { a: seg.a, b: mid, est: e1, err: r1 });
        heap.push(Segment { a: mid, b: seg.b, est: e2, err: r2 });
        count += 1;
    }
    // Re-sum to shed accumulated rounding from the running updates.
    Ok(heap.iter().map(|s| s.est).sum())
}

/// Finite-interval integral with the crate's piece tolerance.
pub(crate) fn finite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<f64> {
    adaptive_gk(f, a, b, PIECE_REL_TOL, PIECE_ABS_TOL)
}

/// Finite integral over a possibly very long interval of the negative axis,
/// split at the points `-10^k` so every piece is short in log scale.
pub(crate) fn finite_wide<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<f64> {
    let mut cuts = vec![a];
    let mut k = 300;
    while k >= 0 {
        let c = -(10f64.powi(k));
        if c > a && c < b {
            cuts.push(c);
        }
        k -= 1;
    }
    cuts.push(b);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += finite(f, w[0], w[1])?;
    }
    Ok(total)
}

/// Integral of `f` over `[a, b]`, with `b` finite or `+inf`.
///
/// Finite intervals are integrated adaptively and reported as converged.
/// For `b = +inf` the partial sums `S_k = ∫_a^{b_k}` are formed on the
/// doubling sequence `b_0 = max(a+1, 10)`, `b_{k+1} - a = 2 (b_k - a)`.
/// The integral is converged once three consecutive doublings change the
/// partial sum by less than `rel_tol` (relative), and diverged once the
/// partial sum grows by a factor of at least 1.5 across three consecutive
/// doublings. Anything else after the doubling budget is inconclusive.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<TailVerdict> {
    if b.is_finite() {
        return Ok(TailVerdict::converged(finite(&f, a, b)?));
    }
    assert!(b == f64::INFINITY && a.is_finite(), "integrate expects a finite lower limit");
    let mut upper = (a + 1.0).max(10.0);
    let mut partial = finite(&f, a, upper)?;
    let mut sums = vec![partial];
    let mut stable = 0;
    for _ in 0..MAX_DOUBLINGS {
        let next = a + 2.0 * (upper - a);
        partial += finite(&f, upper, next)?;
        upper = next;
        let prev = sums[sums.len() - 1];
        sums.push(partial);
        let ratio = if prev != 0.0 { partial / prev } else if partial == 0.0 { 1.0 } else { f64::INFINITY };
        if !partial.is_finite() {
            return Ok(TailVerdict { status: Status::Diverged, value: partial, ratio });
        }
        let change = (partial - prev).abs();
        if change <= rel_tol * partial.abs() || (partial == 0.0 && change == 0.0) {
            stable += 1;
        } else {
            stable = 0;
        }
        if stable >= STABLE_RUNS {
            return Ok(TailVerdict { status: Status::Converged, value: partial, ratio });
        }
        let k = sums.len();
        if k >= 4 {
            let base = sums[k - 4].abs();
            if base > 0.0 && partial.abs() >= GROWTH_FACTOR * base {
                return Ok(TailVerdict { status: Status::Diverged, value: partial, ratio });
            }
        }
    }
    let k = sums.len();
    let ratio = sums[k - 1] / sums[k - 2];
    Ok(TailVerdict { status: Status::Inconclusive, value: partial, ratio })
}

/// A `+inf` sample at positive distance from a singular endpoint means the
/// integrand outgrows every integrable power there.
fn overflow_as_divergence(r: Result<TailVerdict>) -> Result<TailVerdict> {
    match r {
        Err(Error::NonIntegrableSample { value, .. }) if value == f64::INFINITY => {
            Ok(TailVerdict::diverged(f64::INFINITY))
        }
        other => other,
    }
}

/// Integral over `(a, b)` where the open endpoint `b` may carry a singularity.
///
/// Substitutes `x = b - (b - a) e^{-s}` so that power singularities at `b`
/// become exponential tails in `s`, then applies the doubling rule.
pub(crate) fn integrate_to_singular<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<TailVerdict> {
    let width = b - a;
    let g = move |s: f64| {
        let step = width * (-s).exp();
        if step == 0.0 {
            return 0.0;
        }
        let x = b - step;
        if x == b {
            return 0.0;
        }
        f(x) * step
    };
    overflow_as_divergence(integrate(g, 0.0, f64::INFINITY, rel_tol))
}

/// Integral over `(a, b)` where the open endpoint `a` may carry a singularity.
pub(crate) fn integrate_from_singular<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<TailVerdict> {
    let width = b - a;
    let g = move |s: f64| {
        let step = width * (-s).exp();
        if step == 0.0 {
            return 0.0;
        }
        let x = a + step;
        if x == a {
            return 0.0;
        }
        f(x) * step
    };
    overflow_as_divergence(integrate(g, 0.0, f64::INFINITY, rel_tol))
}

/// Integral over `(-inf, b]`, with the variable scaled by `max(1, |b|)` so
/// the doubling rule sees the integrand on its natural scale.
pub(crate) fn integrate_from_neg_infinity<F: Fn(f64) -> f64>(f: F, b: f64, rel_tol: f64) -> Result<TailVerdict> {
    let scale = b.abs().max(1.0);
    integrate(move |t: f64| scale * f(b - scale * t), 0.0, f64::INFINITY, rel_tol)
}

/// Integral over the open half line `(0, inf)`: the piece `(0, 1]` goes
/// through the singular-endpoint map and `[1, inf)` through doubling.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, rel_tol: f64) -> Result<HalfLine> {
    let head = integrate_from_singular(&f, 0.0, 1.0, rel_tol)?;
    let tail = integrate(&f, 1.0, f64::INFINITY, rel_tol)?;
    Ok(HalfLine { head, tail })
}

/// The two pieces of an integral over `(0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfLine {
    /// Contribution of `(0, 1]`.
    pub head: TailVerdict,
    /// Contribution of `[1, inf)`.
    pub tail: TailVerdict,
}

impl HalfLine {
    pub fn total(&self) -> TailVerdict {
        self.head.combine(self.tail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_integral() {
        let v = integrate(|t: f64| (-t).exp(), 0.0, f64::INFINITY, DEFAULT_REL_TOL).unwrap();
        assert_eq!(v.status, Status::Converged);
        assert!((v.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn harmonic_diverges() {
        let v = integrate(|t: f64| 1.0 / t, 1.0, f64::INFINITY, DEFAULT_REL_TOL).unwrap();
        assert_eq!(v.status, Status::Diverged);
    }

    #[test]
    fn gamma_three() {
        let v = integrate(|t: f64| t * t * (-t).exp(), 0.0, f64::INFINITY, DEFAULT_REL_TOL).unwrap();
        assert_eq!(v.status, Status::Converged);
        assert!((v.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn slow_power_tail_converges() {
        // ∫_1^∞ t^{-3/2} dt = 2
        let v = integrate(|t: f64| t.powf(-1.5), 1.0, f64::INFINITY, DEFAULT_REL_TOL).unwrap();
        assert_eq!(v.status, Status::Converged);
        assert!((v.value - 2.0).abs() < 1e-6, "{}", v.value);
    }

    #[test]
    fn non_finite_sample_is_an_error() {
        let err = integrate(|t: f64| if t > 0.5 { f64::NAN } else { 1.0 }, 0.0, 1.0, DEFAULT_REL_TOL).unwrap_err();
        assert!(matches!(err, Error::NonIntegrableSample { .. }));
    }

    #[test]
    fn endpoint_singularities() {
        // ∫_0^1 t^{-1/2} = 2
        let v = integrate_from_singular(|t: f64| t.powf(-0.5), 0.0, 1.0, DEFAULT_REL_TOL).unwrap();
        assert!(v.is_converged());
        assert!((v.value - 2.0).abs() < 1e-8);
        // ∫_0^1 t^{-1} diverges
        let v = integrate_from_singular(|t: f64| 1.0 / t, 0.0, 1.0, DEFAULT_REL_TOL).unwrap();
        assert!(v.is_diverged());
        // ∫_{-1}^0 (-x)^{-2} diverges at the right end
        let v = integrate_to_singular(|x: f64| x.powi(-2), -1.0, 0.0, DEFAULT_REL_TOL).unwrap();
        assert!(v.is_diverged());
    }

    #[test]
    fn finite_interval_with_jump() {
        let v = integrate(|x: f64| if x < 0.3 { 1.0 } else { 3.0 }, 0.0, 1.0, DEFAULT_REL_TOL).unwrap();
        assert!((v.value - (0.3 + 2.1)).abs() < 1e-10);
    }
}
