//! Typed view of one concrete scenario.

use std::path::{Path, PathBuf};

use radial_psh::numerics::log_space;
use radial_psh::solver::EpsilonDominator;
use radial_psh::{RadialMeasure, RadialProfile, Weight};

use crate::config::{parse_number, Entry};
use crate::error::{CliError, CliResult};
use crate::specs;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Classify,
    Energy,
    Capacity,
    Solve,
    Bound,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Energy => "energy",
            Command::Capacity => "capacity",
            Command::Solve => "solve",
            Command::Bound => "bound",
            Command::Verify => "verify",
        }
    }

    fn parse(s: &str) -> Option<Command> {
        Some(match s {
            "classify" => Command::Classify,
            "energy" => Command::Energy,
            "capacity" => Command::Capacity,
            "solve" => Command::Solve,
            "bound" => Command::Bound,
            "verify" => Command::Verify,
            _ => return None,
        })
    }
}

/// Command-line overrides shared by every scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub tol: Option<f64>,
    pub out: PathBuf,
    pub grid: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options { tol: None, out: PathBuf::from("."), grid: None }
    }
}

pub struct Scenario<'a> {
    pub entries: Vec<Entry>,
    /// Directory against which relative input paths resolve.
    pub base: &'a Path,
    pub options: &'a Options,
}

impl<'a> Scenario<'a> {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    fn require(&self, key: &str, cmd: Command) -> CliResult<&Entry> {
        self.get(key).ok_or_else(|| CliError::validation(format!("{} needs `{key}`", cmd.name())))
    }

    fn at<T>(e: &Entry, r: CliResult<T>) -> CliResult<T> {
        r.map_err(|err| match err {
            CliError::Validation(m) => CliError::at_line(e.line, m),
            other => other,
        })
    }

    /// The command to run; `command = sweep` defers to `task`.
    pub fn command(&self, sweeping: bool) -> CliResult<Command> {
        let e = self.get("command").ok_or_else(|| CliError::validation("missing `command`"))?;
        let name = if e.value == "sweep" {
            if !sweeping {
                return Err(CliError::at_line(e.line, "`command = sweep` needs `radpsh sweep`"));
            }
            let t = self.get("task").ok_or_else(|| CliError::at_line(e.line, "`command = sweep` needs `task`"))?;
            return Command::parse(&t.value)
                .ok_or_else(|| CliError::at_line(t.line, format!("unknown task `{}`", t.value)));
        } else {
            &e.value
        };
        Command::parse(name).ok_or_else(|| CliError::at_line(e.line, format!("unknown command `{name}`")))
    }

    pub fn n(&self, cmd: Command) -> CliResult<u32> {
        let e = self.require("n", cmd)?;
        match e.value.parse::<u32>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(CliError::at_line(e.line, format!("n must be an integer >= 1, got `{}`", e.value))),
        }
    }

    pub fn profile(&self, cmd: Command) -> CliResult<RadialProfile> {
        let e = self.require("profile", cmd)?;
        Self::at(e, specs::parse_profile(&e.value, self.base))
    }

    pub fn weight(&self, cmd: Command) -> CliResult<Weight> {
        let e = self.require("weight", cmd)?;
        Self::at(e, specs::parse_weight(&e.value))
    }

    /// `dominator`, or its alias `eps`.
    pub fn dominator(&self, cmd: Command) -> CliResult<EpsilonDominator> {
        let e = match (self.get("dominator"), self.get("eps")) {
            (Some(_), Some(b)) => return Err(CliError::at_line(b.line, "`eps` duplicates `dominator`")),
            (Some(e), None) | (None, Some(e)) => e,
            (None, None) => return Err(CliError::validation(format!("{} needs `dominator`", cmd.name()))),
        };
        Self::at(e, specs::parse_dominator(&e.value))
    }

    /// `measure`, or the Monge-Ampère measure of `profile`. Returns the label.
    pub fn measure(&self, cmd: Command, n: u32) -> CliResult<(String, RadialMeasure)> {
        if let Some(e) = self.get("measure") {
            return Ok((e.value.clone(), Self::at(e, specs::parse_measure(&e.value, n, self.base))?));
        }
        if self.get("profile").is_some() {
            let p = self.profile(cmd)?;
            return Ok((format!("ma {}", p.label()), radial_psh::ma_measure(&p, n)?));
        }
        Err(CliError::validation(format!("{} needs `measure` or `profile`", cmd.name())))
    }

    pub fn number(&self, key: &str, ok: impl Fn(f64) -> bool, need: &str) -> CliResult<Option<f64>> {
        let Some(e) = self.get(key) else { return Ok(None) };
        let v = Self::at(e, parse_number(&e.value))?;
        if !ok(v) {
            return Err(CliError::at_line(e.line, format!("{key} must be {need}, got {v}")));
        }
        Ok(Some(v))
    }

    /// `--tol`, then `tol`, then `default`.
    pub fn tol(&self, default: f64) -> CliResult<f64> {
        let file = self.number("tol", |v| v > 0.0, "positive")?;
        Ok(self.options.tol.or(file).unwrap_or(default))
    }

    pub fn list(&self, key: &str) -> CliResult<Option<Vec<f64>>> {
        let Some(e) = self.get(key) else { return Ok(None) };
        let v: CliResult<Vec<f64>> = e.value.split(',').map(parse_number).collect();
        Self::at(e, v).map(Some)
    }

    /// A positive increasing grid: `log a b count`, `linear a b count` or a
    /// comma list. Falls back to `default(count)` with `--grid` as the count.
    pub fn grid(&self, key: &str, default: impl Fn(usize) -> Vec<f64>, count: usize) -> CliResult<Vec<f64>> {
        let Some(e) = self.get(key) else {
            return Ok(default(self.options.grid.unwrap_or(count)));
        };
        let words: Vec<&str> = e.value.split_whitespace().collect();
        let g = match words.as_slice() {
            [kind @ ("log" | "linear"), a, b, c] => {
                let (a, b) = (Self::at(e, parse_number(a))?, Self::at(e, parse_number(b))?);
                let c: usize = c.parse().map_err(|_| CliError::at_line(e.line, format!("bad count `{c}`")))?;
                if c < 2 || !(a > 0.0 && b > a) {
                    return Err(CliError::at_line(e.line, format!("{key} needs 0 < a < b and count >= 2")));
                }
                if *kind == "log" {
                    log_space(a, b, c)
                } else {
                    (0..c).map(|k| a + (b - a) * k as f64 / (c - 1) as f64).collect()
                }
            }
            _ => self.list(key)?.unwrap_or_default(),
        };
        if g.is_empty() || g[0] <= 0.0 || g.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::at_line(e.line, format!("{key} must be positive and increasing")));
        }
        Ok(g)
    }

    /// Output path under `--out`; `default` when `output` is unset.
    pub fn output(&self, default: &str) -> PathBuf {
        self.options.out.join(self.get("output").map_or(default, |e| e.value.as_str()))
    }
}
