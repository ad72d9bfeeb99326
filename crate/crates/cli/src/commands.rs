//! One function per command: a summary record, the CSV files to write and
//! the first violated invariant, if any.

use radial_psh::capacity::{
    capacity_curve, critical_exponent_fit, default_s_grid, fmt_ext, sup_scaled_capacity,
};
use radial_psh::energy::{capacity_criterion, chi_energy, chi_energy_layercake, classify, DEFAULT_P_LIST};
use radial_psh::numerics::{log_space, Status, TailVerdict};
use radial_psh::solver::{capacity_bound, default_r_grid, h_function, solve_radial, verify_thm51};
use radial_psh::ma_measure;

use crate::error::{CliError, CliResult, Failure};
use crate::scenario::{Command, Scenario};

/// A header and one row.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub header: Vec<String>,
    pub row: Vec<String>,
}

impl Record {
    fn new(fields: Vec<(&str, String)>) -> Self {
        let (header, row) = fields.into_iter().map(|(k, v)| (k.to_string(), v)).unzip();
        Record { header, row }
    }

    pub fn to_csv(&self) -> CliResult<String> {
        csv_text(std::iter::once(&self.header).chain(std::iter::once(&self.row)))
    }

    /// `key=value` pairs on one line.
    pub fn summary(&self) -> String {
        self.header.iter().zip(&self.row).map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    }
}

pub fn csv_text<'a>(rows: impl IntoIterator<Item = &'a Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(r).map_err(|e| CliError::validation(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::validation(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn core_csv(f: impl FnOnce(&mut Vec<u8>) -> radial_psh::Result<()>) -> CliResult<String> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Result of one command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: Command,
    pub record: Record,
    /// `(suffix, contents)`; the empty suffix is the main output.
    pub files: Vec<(&'static str, String)>,
    pub failure: Option<Failure>,
}

fn status(v: &TailVerdict) -> &'static str {
    match v.status {
        Status::Converged => "converged",
        Status::Diverged => "diverged",
        Status::Inconclusive => "inconclusive",
    }
}

fn b(v: bool) -> String {
    v.to_string()
}

pub fn execute(sc: &Scenario, cmd: Command) -> CliResult<Outcome> {
    match cmd {
        Command::Classify => run_classify(sc),
        Command::Energy => run_energy(sc),
        Command::Capacity => run_capacity(sc),
        Command::Solve => run_solve(sc),
        Command::Bound => run_bound(sc),
        Command::Verify => run_verify(sc),
    }
}

fn outcome(command: Command, record: Record, extra: Vec<(&'static str, String)>, failure: Option<Failure>) -> CliResult<Outcome> {
    let mut files = vec![("", record.to_csv()?)];
    files.extend(extra);
    Ok(Outcome { command, record, files, failure })
}

fn with_main(command: Command, record: Record, main: String, extra: Vec<(&'static str, String)>, failure: Option<Failure>) -> Outcome {
    let mut files = vec![("", main)];
    files.extend(extra);
    Outcome { command, record, files, failure }
}

fn run_classify(sc: &Scenario) -> CliResult<Outcome> {
    let cmd = Command::Classify;
    let (p, n) = (sc.profile(cmd)?, sc.n(cmd)?);
    let p_list = sc.list("p_list")?.unwrap_or_else(|| DEFAULT_P_LIST.to_vec());
    if p_list.iter().any(|q| *q <= 0.0) {
        return Err(CliError::validation("p_list entries must be positive"));
    }
    let r = classify(&p, n, &p_list)?;
    let record = Record {
        header: radial_psh::energy::ClassReport::csv_header(&p_list),
        row: r.csv_row(),
    };
    let failure = if r.in_t && !r.in_f {
        Some(Failure::new("T(Omega) is contained in F(Omega)", "energy", r.profile.clone()))
    } else if r.in_fa && !r.in_f {
        Some(Failure::new("F_a(Omega) is contained in F(Omega)", "energy", r.profile.clone()))
    } else {
        None
    };
    outcome(cmd, record, Vec::new(), failure)
}

fn run_energy(sc: &Scenario) -> CliResult<Outcome> {
    let cmd = Command::Energy;
    let (p, w, n) = (sc.profile(cmd)?, sc.weight(cmd)?, sc.n(cmd)?);
    let tol = sc.tol(1e-6)?;
    let direct = chi_energy(&p, &w, n)?;
    let cake = chi_energy_layercake(&p, &w, n)?;
    let crit = capacity_criterion(&p, &w, n)?.combined();
    let record = Record::new(vec![
        ("profile", p.label()),
        ("weight", w.label()),
        ("n", n.to_string()),
        ("energy", fmt_ext(direct.value)),
        ("energy_status", status(&direct).into()),
        ("layercake", fmt_ext(cake.value)),
        ("layercake_status", status(&cake).into()),
        ("criterion", fmt_ext(crit.value)),
        ("criterion_status", status(&crit).into()),
    ]);
    let failure = (direct.is_converged()
        && cake.is_converged()
        && (direct.value - cake.value).abs() > tol * direct.value.abs().max(1e-300))
    .then(|| {
        Failure::new(
            "energy equals its layer-cake form",
            "energy",
            format!("{} vs {} exceeds relative tolerance {}", fmt_ext(direct.value), fmt_ext(cake.value), fmt_ext(tol)),
        )
    });
    outcome(cmd, record, Vec::new(), failure)
}

fn run_capacity(sc: &Scenario) -> CliResult<Outcome> {
    let cmd = Command::Capacity;
    let (p, n) = (sc.profile(cmd)?, sc.n(cmd)?);
    let s = sc.grid("s_grid", |c| log_space(1e-3, 1e3, c), default_s_grid().len())?;
    let curve = capacity_curve(&p, n, &s)?;
    let record = Record::new(vec![
        ("profile", p.label()),
        ("n", n.to_string()),
        ("points", s.len().to_string()),
        ("sup_scaled_capacity", fmt_ext(sup_scaled_capacity(&p, n))),
        ("p_star", fmt_ext(critical_exponent_fit(&p, n))),
        ("unbounded", b(curve.unbounded)),
    ]);
    let failure = curve.cap.windows(2).position(|w| w[1] > w[0]).map(|k| {
        Failure::new(
            "Cap({u < -s}) is nonincreasing in s",
            "capacity",
            format!("cap({}) = {} > cap({}) = {}", fmt_ext(s[k + 1]), fmt_ext(curve.cap[k + 1]), fmt_ext(s[k]), fmt_ext(curve.cap[k])),
        )
    });
    let main = core_csv(|buf| curve.write_csv(buf))?;
    Ok(with_main(cmd, record, main, Vec::new(), failure))
}

fn run_solve(sc: &Scenario) -> CliResult<Outcome> {
    let cmd = Command::Solve;
    let n = sc.n(cmd)?;
    let (label, mu) = sc.measure(cmd, n)?;
    let tol = sc.tol(1e-8)?;
    let r = sc.grid("r_grid", |c| log_space(1e-6, 1.0 - 1e-6, c), default_r_grid().len())?;
    if r.last().is_some_and(|&v| v >= 1.0) {
        return Err(CliError::validation("r_grid must lie in (0, 1)"));
    }
    let sol = solve_radial(&mu)?;
    let back = ma_measure(&sol.profile, n)?;
    let mut rows = vec![["r", "gamma", "mass", "mass_of_solution"].map(String::from).to_vec()];
    let mut worst = 0f64;
    for &v in &r {
        let (a, m) = (back.mass_closed_ball(v), mu.mass_closed_ball(v));
        if m > 0.0 || a > 0.0 {
            worst = worst.max((a - m).abs() / m.max(a));
        }
        rows.push(vec![fmt_ext(v), fmt_ext(sol.profile.eval(v.ln())?), fmt_ext(m), fmt_ext(a)]);
    }
    let record = Record::new(vec![
        ("measure", label),
        ("n", n.to_string()),
        ("total", fmt_ext(mu.total())),
        ("dirac0", fmt_ext(mu.dirac0())),
        ("infimum", fmt_ext(sol.profile.infimum())),
        ("round_trip_error", fmt_ext(worst)),
        ("charges_pole", b(sol.charges_pole)),
    ]);
    let failure = (worst > tol || back.dirac0() != mu.dirac0()).then(|| {
        Failure::new(
            "(dd^c phi)^n reproduces mu on closed balls",
            "solver",
            format!("worst relative error {} exceeds {}", fmt_ext(worst), fmt_ext(tol)),
        )
    });
    Ok(with_main(cmd, record, csv_text(&rows)?, Vec::new(), failure))
}

fn run_bound(sc: &Scenario) -> CliResult<Outcome> {
    let cmd = Command::Bound;
    let (d, n) = (sc.dominator(cmd)?, sc.n(cmd)?);
    let total = match sc.number("mu_total", |v| v >= 0.0, ">= 0")? {
        Some(t) => t,
        None => sc.measure(cmd, n)?.1.total(),
    };
    if !total.is_finite() {
        return Err(CliError::validation("total mass must be finite"));
    }
    let h = h_function(&d, total, n);
    let h0 = h.at_zero();
    let s = sc.grid("s_grid", |c| (0..c).map(|k| h0 + 0.25 * k as f64).collect(), 96)?;
    let bound: Vec<f64> = s.iter().map(|&v| capacity_bound(&d, total, n, v)).collect();
    let mut rows = vec![vec!["s".to_string(), "bound".to_string()]];
    rows.extend(s.iter().zip(&bound).map(|(a, c)| vec![fmt_ext(*a), fmt_ext(*c)]));
    let record = Record::new(vec![
        ("dominator", d.label()),
        ("n", n.to_string()),
        ("mu_total", fmt_ext(total)),
        ("h0", fmt_ext(h0)),
        ("uniform_bound", fmt_ext(h.sup())),
        ("integrable", b(d.is_integrable())),
    ]);
    let failure = bound.windows(2).position(|w| w[1] > w[0]).map(|k| {
        Failure::new("capacity bound is nonincreasing in s", "solver", format!("increases at s = {}", fmt_ext(s[k + 1])))
    });
    Ok(with_main(cmd, record, csv_text(&rows)?, Vec::new(), failure))
}

fn run_verify(sc: &Scenario) -> CliResult<Outcome> {
    let cmd = Command::Verify;
    let n = sc.n(cmd)?;
    let d = sc.dominator(cmd)?;
    let (label, mu) = sc.measure(cmd, n)?;
    let tol = sc.tol(1e-9)?;
    let r = verify_thm51(&mu, &d)?;
    let record = Record::new(vec![
        ("measure", label),
        ("dominator", d.label()),
        ("n", n.to_string()),
        ("s0", fmt_ext(r.s0)),
        ("worst_violation", fmt_ext(r.worst_violation)),
        ("criterion", status(&r.criterion.combined()).into()),
        ("iterations", r.iteration.s.len().to_string()),
        ("passes", b(r.worst_violation >= -tol && r.criterion.is_converged() && r.iteration.dominates_index())),
    ]);
    let failure = if r.worst_violation < -tol {
        let k = r.violation.iter().position(|&v| v == r.worst_violation).unwrap_or(0);
        Some(Failure::new(
            "Cap({phi < -s}) <= exp(-n H^-1(s))",
            "solver",
            format!("violation {} at s = {}", fmt_ext(r.worst_violation), fmt_ext(r.s[k])),
        ))
    } else if !r.criterion.is_converged() {
        Some(Failure::new("solution lies in E_chi for the H weight", "solver", "capacity criterion did not converge"))
    } else if !r.iteration.dominates_index() {
        Some(Failure::new("f(s_j) >= j along the s-iteration", "solver", format!("fails at j in {:?}", r.iteration.violations)))
    } else {
        None
    };
    let main = core_csv(|buf| r.write_csv(buf))?;
    let sj = core_csv(|buf| r.iteration.write_csv(buf))?;
    Ok(with_main(cmd, record, main, vec![(".sj", sj)], failure))
}
