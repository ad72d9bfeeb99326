//! Text specs for profiles, weights, dominators and measures.
//!
//! Parameters are checked here so the core constructors never see values
//! they would reject.

use std::path::Path;

use radial_psh::catalog::exp_density_measure;
use radial_psh::profiles::GridProfile;
use radial_psh::solver::EpsilonDominator;
use radial_psh::{ma_measure, RadialMeasure, RadialProfile, Weight};

use crate::config::parse_number;
use crate::error::{CliError, CliResult};

struct Tokens<'a> {
    what: &'static str,
    spec: &'a str,
    rest: Vec<&'a str>,
}

impl<'a> Tokens<'a> {
    fn new(what: &'static str, spec: &'a str) -> Self {
        Tokens { what, spec, rest: spec.split_whitespace().rev().collect() }
    }

    fn err(&self, msg: impl std::fmt::Display) -> CliError {
        CliError::validation(format!("{} `{}`: {msg}", self.what, self.spec))
    }

    fn word(&mut self, name: &str) -> CliResult<&'a str> {
        self.rest.pop().ok_or_else(|| self.err(format!("missing {name}")))
    }

    fn number(&mut self, name: &str, ok: impl Fn(f64) -> bool, need: &str) -> CliResult<f64> {
        let w = self.word(name)?;
        let v = parse_number(w).map_err(|e| self.err(e))?;
        if !ok(v) {
            return Err(self.err(format!("{name} must be {need}, got {v}")));
        }
        Ok(v)
    }

    /// The remaining tokens as one spec.
    fn remainder(&mut self, name: &str) -> CliResult<String> {
        if self.rest.is_empty() {
            return Err(self.err(format!("missing {name}")));
        }
        let mut words: Vec<&str> = std::mem::take(&mut self.rest);
        words.reverse();
        Ok(words.join(" "))
    }

    fn done(&self) -> CliResult<()> {
        match self.rest.last() {
            Some(t) => Err(self.err(format!("unexpected `{t}`"))),
            None => Ok(()),
        }
    }
}

fn positive(v: f64) -> bool {
    v > 0.0
}

fn unit_open(v: f64) -> bool {
    v > 0.0 && v < 1.0
}

/// `linear a`, `power α`, `log1m c`, `extremal r0`, `constant c`,
/// `exhaustion j`, `clip j <profile>`, `max <profile> | <profile>`,
/// `grid <csv>` with columns `x,gamma`. Relative paths resolve against `base`.
pub fn parse_profile(spec: &str, base: &Path) -> CliResult<RadialProfile> {
    if let Some(pair) = spec.trim_start().strip_prefix("max ") {
        let (a, b) = pair
            .split_once('|')
            .ok_or_else(|| CliError::validation(format!("profile `{spec}`: max needs `<profile> | <profile>`")))?;
        return Ok(parse_profile(a.trim(), base)?.pointwise_max(&parse_profile(b.trim(), base)?)?);
    }
    let mut t = Tokens::new("profile", spec);
    let p = match t.word("family")? {
        "linear" => RadialProfile::linear(t.number("a", positive, "positive")?),
        "power" => RadialProfile::power(t.number("alpha", unit_open, "in (0, 1)")?),
        "log1m" => RadialProfile::log1m(t.number("c", positive, "positive")?),
        "extremal" => RadialProfile::extremal(t.number("r0", unit_open, "in (0, 1)")?),
        "constant" => RadialProfile::constant(t.number("c", |v| v <= 0.0, "<= 0")?),
        "exhaustion" => RadialProfile::exhaustion(t.number("j", positive, "positive")?),
        "clip" => {
            let j = t.number("level", positive, "positive")?;
            let inner = t.remainder("profile to clip")?;
            parse_profile(&inner, base)?.clip(j)
        }
        "grid" => {
            let path = base.join(t.word("csv path")?);
            if !path.is_file() {
                return Err(t.err(format!("no such file {}", path.display())));
            }
            RadialProfile::Grid(std::sync::Arc::new(GridProfile::from_csv(&path)?))
        }
        other => return Err(t.err(format!("unknown family `{other}`"))),
    };
    t.done()?;
    Ok(p)
}

/// `power p`, `shifted_power p`, `exp κ`, `constant`, `doubled <weight>`.
pub fn parse_weight(spec: &str) -> CliResult<Weight> {
    let mut t = Tokens::new("weight", spec);
    let w = match t.word("family")? {
        "power" => Weight::power(t.number("p", positive, "positive")?),
        "shifted_power" => Weight::ShiftedPower(t.number("p", positive, "positive")?),
        "exp" => Weight::exp(t.number("kappa", positive, "positive")?),
        "constant" => Weight::Constant,
        "doubled" => parse_weight(&t.remainder("weight to double")?)?.doubled(),
        other => return Err(t.err(format!("unknown family `{other}`"))),
    };
    t.done()?;
    Ok(w)
}

/// `constant c`, `exp_decay λ`, `power_decay β`, `grid t:v,t:v,...`.
pub fn parse_dominator(spec: &str) -> CliResult<EpsilonDominator> {
    let mut t = Tokens::new("dominator", spec);
    let d = match t.word("family")? {
        "constant" => EpsilonDominator::constant(t.number("c", positive, "positive")?),
        "exp_decay" => EpsilonDominator::exp_decay(t.number("lambda", positive, "positive")?),
        "power_decay" => EpsilonDominator::power_decay(t.number("beta", positive, "positive")?),
        "grid" => {
            let knots = t.word("knots")?;
            let mut ts = Vec::new();
            let mut vs = Vec::new();
            for pair in knots.split(',') {
                let (a, b) = pair.split_once(':').ok_or_else(|| t.err(format!("knot `{pair}` is not t:v")))?;
                ts.push(parse_number(a).map_err(|e| t.err(e))?);
                vs.push(parse_number(b).map_err(|e| t.err(e))?);
            }
            EpsilonDominator::grid(ts, vs)?
        }
        other => return Err(t.err(format!("unknown family `{other}`"))),
    };
    t.done()?;
    Ok(d)
}

/// `ma <profile>`, `dirac m`, `sphere_atom r m`, `exp_density`, `zero`.
pub fn parse_measure(spec: &str, n: u32, base: &Path) -> CliResult<RadialMeasure> {
    let mut t = Tokens::new("measure", spec);
    let mu = match t.word("kind")? {
        "ma" => {
            let p = parse_profile(&t.remainder("profile")?, base)?;
            ma_measure(&p, n)?
        }
        "dirac" => RadialMeasure::dirac(n, t.number("mass", |v| v >= 0.0, ">= 0")?),
        "sphere_atom" => {
            let r = t.number("radius", unit_open, "in (0, 1)")?;
            let m = t.number("mass", |v| v >= 0.0, ">= 0")?;
            RadialMeasure::sphere_atom(n, r, m)?
        }
        "exp_density" => exp_density_measure(n)?,
        "zero" => RadialMeasure::zero(n),
        other => return Err(t.err(format!("unknown kind `{other}`"))),
    };
    t.done()?;
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn here() -> &'static Path {
        Path::new(".")
    }

    #[test]
    fn families_parse() {
        assert_eq!(parse_profile("power 0.5", here()).unwrap().label(), RadialProfile::power(0.5).label());
        assert_eq!(
            parse_profile("clip 2 log1m 1", here()).unwrap().label(),
            RadialProfile::log1m(1.0).clip(2.0).label()
        );
        assert!(parse_profile("max linear 1 | power 0.5", here()).unwrap().validate().is_valid());
        assert_eq!(parse_weight("exp 1").unwrap().label(), Weight::exp(1.0).label());
        assert_eq!(parse_dominator("exp_decay 2").unwrap().label(), EpsilonDominator::exp_decay(2.0).label());
        assert_eq!(parse_measure("dirac 1", 2, here()).unwrap().dirac0(), 1.0);
    }

    #[test]
    fn missing_and_bad_parameters_are_validation_errors() {
        for spec in ["linear", "power 1.5", "power 0.5 0.2", "cone 1", "linear x", "grid missing.csv"] {
            let e = parse_profile(spec, here()).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{spec}: {e}");
        }
        assert!(parse_dominator("grid 0:1,1").is_err());
        assert!(parse_weight("power -1").is_err());
    }
}
