use crate::capacity::{scaled_capacity, sup_scaled_capacity};
use crate::energy::{capacity_criterion, chi_energy, chi_energy_of, CriterionVerdict, Weight};
use crate::error::{Error, Result};
use crate::numerics::{finite, TailVerdict};
use crate::profiles::{Diagnostics, RadialProfile};
use crate::radial_ma::{ma_measure, sublevel_mass_of};

/// Largest `t` stored by grid weights.
const GRID_T_MAX: f64 = 1e3;
/// Smallest sublevel mass or scaled capacity kept on a grid.
const GRID_FLOOR: f64 = 1e-280;

/// 0, 48 log-spaced points on `[1e-6, 1)`, then steps of 1/20 up to `t_max`.
fn t_knots(t_max: f64) -> Vec<f64> {
    let mut ts = vec![0.0];
    ts.extend((0..48).map(|k| 10f64.powf(-6.0 + 6.0 * k as f64 / 48.0)));
    let steps = ((t_max - 1.0) * 20.0).round() as usize;
    ts.extend((0..=steps).map(|k| 1.0 + k as f64 / 20.0));
    ts
}

/// Grid weight from `(t_k, χ(−t_k))` with `t` increasing from 0.
fn weight_from_t_grid(ts: &[f64], chi: &[f64]) -> Result<Weight> {
    let knots = ts.iter().rev().map(|t| -t).collect();
    let values = chi.iter().rev().copied().collect();
    Weight::grid(knots, values)
}

/// Weight with `χ'(−t) = 1/μ({u < −t})` and `χ(0) = −1`. An unbounded
/// profile of finite mass has infinite energy against it.
pub fn separating_weight(p: &RadialProfile, n: u32) -> Result<Weight> {
    if p.is_bounded() {
        return Err(Error::NoSeparatingWeightNeeded);
    }
    let mu = ma_measure(p, n)?;
    if !mu.total().is_finite() {
        return Err(Error::NotInF("infinite total mass".into()));
    }
    let inv_mass = |t: f64| 1.0 / sublevel_mass_of(&mu, p, t);
    let mut ts = vec![0.0];
    let mut chi = vec![-1.0];
    for t in t_knots(GRID_T_MAX).into_iter().skip(1) {
        if sublevel_mass_of(&mu, p, t) < GRID_FLOOR {
            break;
        }
        let prev = ts[ts.len() - 1];
        let piece = finite(&inv_mass, prev, t)?;
        chi.push(chi[chi.len() - 1] - piece);
        ts.push(t);
    }
    weight_from_t_grid(&ts, &chi)
}

/// Weight `χ(−t) = −h̃(t)^{−1/2}` with `h(t) = tⁿ Cap({u < −t})` and `h̃`
/// its running supremum from the right. The capacity criterion of `p`
/// against it is at most `h̃(0)^{1/2}`.
pub fn hat_weight_from_capacity(p: &RadialProfile, n: u32) -> Result<Weight> {
    if p.is_bounded() {
        return Err(Error::NoSeparatingWeightNeeded);
    }
    let mu = ma_measure(p, n)?;
    if mu.dirac0() > 0.0 {
        return Err(Error::NotInFa(format!("dirac mass {} at the origin", mu.dirac0())));
    }
    if !mu.total().is_finite() {
        return Err(Error::NotInF("infinite total mass".into()));
    }
    let ts = t_knots(GRID_T_MAX);
    let mut h: Vec<f64> = ts.iter().map(|&t| if t == 0.0 { 0.0 } else { scaled_capacity(p, t, n) }).collect();
    // Beyond the grid, h is probed on a geometric sequence.
    let beyond = (1..=40).map(|k| scaled_capacity(p, GRID_T_MAX * 2f64.powi(k), n)).fold(0.0, f64::max);
    let mut run = beyond;
    for v in h.iter_mut().rev() {
        run = run.max(*v);
        *v = run;
    }
    h[0] = h[0].max(sup_scaled_capacity(p, n));
    let last = h[h.len() - 1];
    if last > 1e-3 * h[0] {
        return Err(Error::NotInFa(format!("sup of t^n Cap beyond t = {GRID_T_MAX} is {last}, not tending to 0")));
    }
    let keep = h.iter().position(|&v| v < GRID_FLOOR).unwrap_or(h.len());
    let chi: Vec<f64> = h[..keep].iter().map(|v| -1.0 / v.sqrt()).collect();
    weight_from_t_grid(&ts[..keep], &chi)
}

/// Energies of two decreasing sequences converging to `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyConvergenceReport {
    pub limit: f64,
    pub j: Vec<f64>,
    /// `E_χ(max(u, −j))`.
    pub canonical: Vec<f64>,
    pub canonical_deviation: Vec<f64>,
    /// `E_χ(max(u, j(r² − 1)))`.
    pub alternative: Vec<f64>,
    pub alternative_deviation: Vec<f64>,
}

impl EnergyConvergenceReport {
    /// Both deviation sequences end below `tol` and the energies stay
    /// bounded by `bound`.
    pub fn converges(&self, tol: f64, bound: f64) -> bool {
        let ends = |d: &[f64]| d.last().is_some_and(|v| *v < tol);
        let bounded = self.canonical.iter().chain(&self.alternative).all(|e| *e <= bound);
        ends(&self.canonical_deviation) && ends(&self.alternative_deviation) && bounded
    }
}

/// Energies of `max(u, −j)` and of `max(u, j(r² − 1))` for `j` in `j_list`.
pub fn energy_convergence_check(p: &RadialProfile, w: &Weight, n: u32, j_list: &[f64]) -> Result<EnergyConvergenceReport> {
    let e = chi_energy(p, w, n)?;
    if !e.is_converged() {
        return Err(Error::NotInEChi(format!("energy of {} against {} does not converge", p.label(), w.label())));
    }
    let energy = |q: &RadialProfile| -> Result<f64> {
        let v = chi_energy_of(&ma_measure(q, n)?, q, w)?;
        Ok(if v.is_converged() { v.value } else { f64::INFINITY })
    };
    let mut report = EnergyConvergenceReport {
        limit: e.value,
        j: j_list.to_vec(),
        canonical: Vec::new(),
        canonical_deviation: Vec::new(),
        alternative: Vec::new(),
        alternative_deviation: Vec::new(),
    };
    for &j in j_list {
        let c = energy(&p.clip(j))?;
        let a = energy(&p.pointwise_max(&RadialProfile::exhaustion(j))?)?;
        report.canonical.push(c);
        report.canonical_deviation.push((c - e.value).abs());
        report.alternative.push(a);
        report.alternative_deviation.push((a - e.value).abs());
    }
    Ok(report)
}

/// `χ⁻¹(log|z| + χ(0))`, a profile with a pole at the origin. Fails when
/// the composition is not convex.
pub fn pluripolar_cover(w: &Weight, n: u32) -> Result<RadialProfile> {
    Ok(pluripolar_cover_report(w, n)?.profile)
}

#[derive(Debug, Clone)]
pub struct CoverReport {
    pub profile: RadialProfile,
    pub diagnostics: Diagnostics,
    pub energy: TailVerdict,
    /// Criterion against `χ̂(t) = χ(2t)`.
    pub doubled_criterion: CriterionVerdict,
}

/// [`pluripolar_cover`] with the energy and criterion verdicts of the result.
pub fn pluripolar_cover_report(w: &Weight, n: u32) -> Result<CoverReport> {
    if !w.flags().concave {
        return Err(Error::WeightNotConcave);
    }
    if w.neg_limit() != f64::INFINITY {
        return Err(Error::InvalidWeight("weight must tend to -inf at -inf".into()));
    }
    let profile = RadialProfile::compose_inverse(w, RadialProfile::linear(1.0))?;
    let diagnostics = profile.validate();
    if !diagnostics.is_valid() {
        return Err(Error::InvalidProfile(diagnostics.to_string()));
    }
    let energy = chi_energy(&profile, w, n)?;
    let doubled_criterion = capacity_criterion(&profile, &w.doubled(), n)?;
    Ok(CoverReport { profile, diagnostics, energy, doubled_criterion })
}
