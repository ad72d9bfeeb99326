//! Properties asserted over the built-in tables.

use radial_psh::capacity::{cap_sublevel, default_s_grid, sup_scaled_capacity};
use radial_psh::catalog;
use radial_psh::energy::{chi_energy, chi_energy_layercake, classify};
use radial_psh::radial_ma::sublevel_mass;
use radial_psh::solver::{
    capacity_bound, default_r_grid, domination_check, h_function, verify_thm51, EpsilonDominator,
};
use radial_psh::{ma_measure, Error};

#[test]
fn energy_equals_layer_cake() {
    for u in catalog::profiles() {
        for w in catalog::weights() {
            for n in 1..=3 {
                let (a, b) = match (chi_energy(&u, &w, n), chi_energy_layercake(&u, &w, n)) {
                    (Ok(a), Ok(b)) => (a, b),
                    (Err(Error::NotInF(_)), _) | (_, Err(Error::NotInF(_))) => continue,
                    (a, b) => panic!("{} {} n={n}: {a:?} {b:?}", u.label(), w.label()),
                };
                if a.is_converged() && b.is_converged() {
                    let scale = a.value.abs().max(1e-300);
                    assert!((a.value - b.value).abs() <= 1e-6 * scale, "{} {} n={n}: {a:?} vs {b:?}", u.label(), w.label());
                }
            }
        }
    }
}

#[test]
fn class_reports_are_consistent() {
    for u in catalog::profiles() {
        for n in 1..=3 {
            let r = classify(&u, n, &[1.0, 2.0]).unwrap_or_else(|e| panic!("{} n={n}: {e}", u.label()));
            let label = format!("{} n={n}", u.label());
            assert!(!r.in_t || (r.in_f && r.bounded), "{label}: T outside F");
            assert!(!r.in_fa || r.in_f, "{label}: F_a outside F");
            assert!(!r.bounded || !r.in_f || r.in_fa, "{label}: bounded F profile not in F_a");
            assert!(!r.e_p[1] || r.e_p[0], "{label}: E^2 without E^1");
            assert_eq!(r.in_f, r.sup_scaled_capacity.is_finite(), "{label}");
        }
    }
}

#[test]
fn finite_mass_iff_finite_scaled_capacity() {
    for u in catalog::profiles() {
        for n in 1..=3 {
            let mass = ma_measure(&u, n).unwrap().total();
            assert_eq!(mass.is_finite(), sup_scaled_capacity(&u, n).is_finite(), "{} n={n}", u.label());
        }
    }
}

#[test]
fn capacity_and_mass_decrease_along_sublevels() {
    let s = default_s_grid();
    for u in catalog::profiles() {
        for n in 1..=3 {
            let caps: Vec<f64> = s.iter().map(|&v| cap_sublevel(&u, v, n)).collect();
            assert!(caps.windows(2).all(|w| w[1] <= w[0]), "{} n={n}", u.label());
            if ma_measure(&u, n).unwrap().total().is_finite() {
                let m: Vec<f64> = s.iter().map(|&v| sublevel_mass(&u, v, n).unwrap()).collect();
                assert!(m.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)), "{} n={n}", u.label());
            }
        }
    }
}

#[test]
fn capacity_bound_is_nonincreasing() {
    let s: Vec<f64> = (0..400).map(|k| 0.05 * k as f64).collect();
    for d in catalog::dominators() {
        for n in 1..=3 {
            let b: Vec<f64> = s.iter().map(|&v| capacity_bound(&d, 1.5, n, v)).collect();
            assert!(b.windows(2).all(|w| w[1] <= w[0]), "{d:?} n={n}");
        }
    }
}

#[test]
fn h_inverse_round_trips() {
    for d in catalog::dominators() {
        let h = h_function(&d, 1.0, 2);
        // exp_decay: H' = e·e^{−x} makes the inverse ill-conditioned far out.
        let top = if matches!(d, EpsilonDominator::ExpDecay(_)) { 10.0 } else { 50.0 };
        for k in 0..=500 {
            let x = top * k as f64 / 500.0;
            let back = h.inverse(h.eval(x)).unwrap();
            assert!((back - x).abs() < 1e-9 * (1.0 + x), "{d:?}: {x} -> {back}");
        }
    }
}

#[test]
fn dominated_pairs_satisfy_the_decay_bound() {
    let mut verified = 0;
    for n in 1..=2 {
        for (name, mu) in catalog::measures(n).unwrap() {
            if mu.total() == 0.0 || mu.dirac0() > 0.0 {
                continue;
            }
            for d in catalog::dominators() {
                if !domination_check(&mu, &d, &default_r_grid()).unwrap().passes() {
                    continue;
                }
                let r = verify_thm51(&mu, &d).unwrap();
                assert!(r.worst_violation >= -1e-9, "{name} {d:?}: {}", r.worst_violation);
                assert!(r.criterion.is_converged(), "{name} {d:?}: criterion diverged");
                assert!(r.iteration.dominates_index(), "{name} {d:?}: {:?}", r.iteration.violations);
                if let Some(a) = r.decay_constant {
                    assert!(a.is_finite(), "{name}: decay constant");
                }
                verified += 1;
            }
        }
    }
    assert!(verified >= 5, "only {verified} dominated pairs");
}
