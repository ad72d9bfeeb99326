use std::io::Write;

use crate::capacity::{critical_exponent_fit, fmt_ext, sup_scaled_capacity};
use crate::energy::{capacity_criterion, chi_energy_of, CriterionVerdict, Weight};
use crate::error::{Error, Result};
use crate::numerics::TailVerdict;
use crate::profiles::RadialProfile;
use crate::radial_ma::ma_measure;

pub const DEFAULT_P_LIST: [f64; 3] = [1.0, 2.0, 3.0];

/// Class memberships of one profile in dimension `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport {
    pub profile: String,
    pub n: u32,
    pub in_t: bool,
    pub in_f: bool,
    pub in_fa: bool,
    pub bounded: bool,
    /// `sup_s sⁿ Cap({u < −s})`.
    pub sup_scaled_capacity: f64,
    pub p_list: Vec<f64>,
    /// `E^p` membership per entry of `p_list`.
    pub e_p: Vec<bool>,
    pub criteria: Vec<CriterionVerdict>,
    pub e_exp: bool,
    pub exp_energy: TailVerdict,
    /// Fitted critical exponent; diagnostic only.
    pub p_star: f64,
}

impl ClassReport {
    pub fn csv_header(p_list: &[f64]) -> Vec<String> {
        let mut h: Vec<String> =
            ["profile", "n", "in_T", "in_F", "in_Fa", "E_exp", "p_star"].iter().map(|s| s.to_string()).collect();
        h.extend(p_list.iter().map(|p| format!("E^{p}")));
        h
    }

    pub fn csv_row(&self) -> Vec<String> {
        let mut r = vec![
            self.profile.clone(),
            self.n.to_string(),
            self.in_t.to_string(),
            self.in_f.to_string(),
            self.in_fa.to_string(),
            self.e_exp.to_string(),
            fmt_ext(self.p_star),
        ];
        r.extend(self.e_p.iter().map(|b| b.to_string()));
        r
    }

    /// Header and one row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::csv_header(&self.p_list))?;
        w.write_record(self.csv_row())?;
        w.flush()?;
        Ok(())
    }
}

/// Memberships in `T`, `F`, `F_a`, `E^p` and `E_exp`.
///
/// `E^p` uses the pole part of the capacity criterion with `χ = −(−t)^p`;
/// a divergent tail, including the critical exponent, is not a member.
pub fn classify(p: &RadialProfile, n: u32, p_list: &[f64]) -> Result<ClassReport> {
    if p_list.iter().any(|q| !(*q > 0.0)) {
        return Err(Error::Domain("p_list entries must be positive".into()));
    }
    let mu = ma_measure(p, n)?;
    let in_f = mu.total().is_finite();
    let bounded = p.is_bounded();
    let in_fa = in_f && mu.dirac0() == 0.0;
    let in_t = bounded && p.boundary_value() == 0.0 && in_f;
    let criteria = p_list.iter().map(|&q| capacity_criterion(p, &Weight::power(q), n)).collect::<Result<Vec<_>>>()?;
    let e_p = criteria.iter().map(|c| c.pole.is_converged()).collect();
    let exp_energy = chi_energy_of(&mu, p, &Weight::exp(1.0))?;
    Ok(ClassReport {
        profile: p.label(),
        n,
        in_t,
        in_f,
        in_fa,
        bounded,
        sup_scaled_capacity: sup_scaled_capacity(p, n),
        p_list: p_list.to_vec(),
        e_p,
        criteria,
        e_exp: exp_energy.is_converged(),
        exp_energy,
        p_star: critical_exponent_fit(p, n),
    })
}
