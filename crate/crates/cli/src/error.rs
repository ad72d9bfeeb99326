use radial_psh::Error;
use thiserror::Error as ThisError;

/// A violated invariant: which one, in which module, and the evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub invariant: String,
    pub module: &'static str,
    pub detail: String,
}

impl Failure {
    pub fn new(invariant: impl Into<String>, module: &'static str, detail: impl Into<String>) -> Self {
        Failure { invariant: invariant.into(), module, detail: detail.into() }
    }

    /// Text of the report file.
    pub fn report(&self, scenario: &str) -> String {
        format!(
            "invariant: {}\nmodule: {}\nscenario: {}\ndetail: {}\n",
            self.invariant, self.module, scenario, self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("verification failed: {} ({})", .0.invariant, .0.module)]
    Verification(Failure),
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    pub fn at_line(line: usize, msg: impl std::fmt::Display) -> Self {
        CliError::Validation(format!("line {line}: {msg}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonIntegrableSample { .. }
            | Error::NoConvergence(_)
            | Error::NotADistribution(_)
            | Error::TooOscillatory(_) => CliError::Numerical(e.to_string()),
            Error::DominationViolated(ratio) => CliError::Verification(Failure::new(
                "mu(B_r) <= F_eps(Cap(B_r)) on closed balls",
                "solver",
                format!("worst ratio {}", radial_psh::capacity::fmt_ext(ratio)),
            )),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("io: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
