//! Numerical primitives: adaptive quadrature with a tail-convergence
//! contract, Stieltjes integration against distributions with atoms, and
//! monotone inversion.

mod monotone;
mod quadrature;
mod stieltjes;

pub use monotone::{invert_monotone, Direction, MonotoneFn, ScalarFn};
pub use quadrature::{adaptive_gk, integrate, integrate_half_line, HalfLine, Status, TailVerdict, DEFAULT_REL_TOL};
pub use stieltjes::{stieltjes, Distribution, Interval};

pub(crate) use quadrature::{finite, finite_wide, integrate_from_neg_infinity, integrate_to_singular};
pub(crate) use stieltjes::integrate_with_breaks;

/// `count` points log-spaced on `[lo, hi]` (both positive).
pub fn log_space(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp()).collect()
}
