//! Batch front-end for the radial toolkit: scenario files in, CSV out.

// `!(a < b)` guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod scenario;
pub mod specs;

use std::fs;
use std::path::{Path, PathBuf};

use radial_psh::capacity::fmt_ext;
use rayon::prelude::*;

use commands::{csv_text, execute, Outcome};
use config::ScenarioFile;
use error::{CliError, CliResult, Failure};
pub use scenario::Options;
use scenario::Scenario;

/// Exit status with the message for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Exit {
    pub code: i32,
    pub message: String,
}

impl From<CliError> for Exit {
    fn from(e: CliError) -> Self {
        Exit { code: e.exit_code(), message: e.to_string() }
    }
}

/// Executes `radpsh run` (`sweeping = false`) or `radpsh sweep`. Returns
/// the summary lines for stdout.
pub fn run_file(path: &Path, options: &Options, sweeping: bool) -> Result<Vec<String>, Exit> {
    if options.tol.is_some_and(|t| !(t > 0.0)) {
        return Err(CliError::validation("--tol must be positive").into());
    }
    if options.grid.is_some_and(|g| g < 2) {
        return Err(CliError::validation("--grid must be at least 2").into());
    }
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    let file = ScenarioFile::parse(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario").to_string();
    let ctx = Context { scenario: path.display().to_string(), stem, options };
    let declared_sweep = file.entries.iter().any(|e| e.key == "command" && e.value == "sweep");
    if sweeping || declared_sweep {
        return ctx.sweep(&file, base);
    }
    if !file.ranged.is_empty() {
        return Err(CliError::validation("ranged parameters need `radpsh sweep` or `command = sweep`").into());
    }
    let sc = Scenario { entries: file.entries, base, options };
    let outcome = execute(&sc, sc.command(false)?);
    ctx.finish_run(&sc, outcome)
}

struct Context<'a> {
    scenario: String,
    stem: String,
    options: &'a Options,
}

impl Context<'_> {
    fn report_path(&self, sc: &Scenario, main: &Path) -> PathBuf {
        match sc.get("report") {
            Some(e) => self.options.out.join(&e.value),
            None => main.with_extension("report.txt"),
        }
    }

    fn write(&self, path: &Path, contents: &str) -> CliResult<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, contents)?;
        Ok(())
    }

    fn fail(&self, sc: &Scenario, main: &Path, f: &Failure) -> Exit {
        let report = self.report_path(sc, main);
        if let Err(e) = self.write(&report, &f.report(&self.scenario)) {
            return e.into();
        }
        Exit {
            code: 4,
            message: format!("verification failed: {} ({}); report: {}", f.invariant, f.module, report.display()),
        }
    }

    fn finish_run(&self, sc: &Scenario, outcome: CliResult<Outcome>) -> Result<Vec<String>, Exit> {
        let main = sc.output(&format!("{}.csv", self.stem));
        let o = match outcome {
            Ok(o) => o,
            Err(CliError::Verification(f)) => return Err(self.fail(sc, &main, &f)),
            Err(e) => return Err(e.into()),
        };
        for (suffix, contents) in &o.files {
            let path = if suffix.is_empty() { main.clone() } else { main.with_extension(format!("{}.csv", &suffix[1..])) };
            self.write(&path, contents)?;
        }
        if let Some(f) = &o.failure {
            return Err(self.fail(sc, &main, f));
        }
        Ok(vec![format!("{}: {} -> {}", o.command.name(), o.record.summary(), main.display())])
    }

    fn sweep(&self, file: &ScenarioFile, base: &Path) -> Result<Vec<String>, Exit> {
        let ranged = match file.ranged.as_slice() {
            [r] => r,
            rs => {
                return Err(CliError::validation(format!("a sweep needs exactly one ranged parameter, found {}", rs.len()))
                    .into())
            }
        };
        let values = ranged.range().values();
        let column = ranged.column(&file.entries);
        let head = Scenario { entries: file.entries.clone(), base, options: self.options };
        let main = head.output(&format!("{}.csv", self.stem));
        let results: Vec<CliResult<Outcome>> = values
            .par_iter()
            .map(|&v| {
                let sc = Scenario { entries: file.instantiate(ranged, v), base, options: self.options };
                execute(&sc, sc.command(true)?)
            })
            .collect();
        let mut rows: Vec<Vec<String>> = Vec::new();
        let mut failures: Vec<(f64, Failure)> = Vec::new();
        for (&v, r) in values.iter().zip(results) {
            let o = match r {
                Ok(o) => o,
                Err(CliError::Verification(f)) => return Err(self.fail(&head, &main, &f)),
                Err(e) => return Err(Exit { code: e.exit_code(), message: format!("{column} = {}: {e}", fmt_ext(v)) }),
            };
            if rows.is_empty() {
                rows.push(std::iter::once(column.clone()).chain(o.record.header.iter().cloned()).collect());
            }
            rows.push(std::iter::once(fmt_ext(v)).chain(o.record.row).collect());
            if let Some(f) = o.failure {
                failures.push((v, f));
            }
        }
        self.write(&main, &csv_text(&rows)?)?;
        if let Some((v, first)) = failures.first() {
            let at: Vec<String> = failures.iter().map(|(v, _)| fmt_ext(*v)).collect();
            let f = Failure::new(
                first.invariant.clone(),
                first.module,
                format!("{column} = {}: {}; failing values: {}", fmt_ext(*v), first.detail, at.join(", ")),
            );
            return Err(self.fail(&head, &main, &f));
        }
        Ok(vec![format!("sweep: {column} over {} values, {} columns -> {}", values.len(), rows[0].len(), main.display())])
    }
}
