use thiserror::Error;

/// Errors raised by the radial toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-integrable sample: integrand is {value} at x = {x}")]
    NonIntegrableSample { x: f64, value: f64 },
    #[error("not a distribution function: {0}")]
    NotADistribution(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("outside domain: {0}")]
    OutsideDomain(String),
    #[error("above boundary value: {y} > {boundary}")]
    AboveBoundaryValue { y: f64, boundary: f64 },
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("weight must be concave")]
    WeightNotConcave,
    #[error("Borel set must avoid the pole")]
    TouchesPole,
    #[error("profiles too oscillatory: {0} sign changes")]
    TooOscillatory(usize),
    #[error("not in F(Omega): {0}")]
    NotInF(String),
    #[error("not in F_a: {0}")]
    NotInFa(String),
    #[error("not in E_chi: {0}")]
    NotInEChi(String),
    #[error("no separating weight needed: profile is bounded")]
    NoSeparatingWeightNeeded,
    #[error("radius out of range: {0}")]
    RadiusOutOfRange(f64),
    #[error("domain: {0}")]
    Domain(String),
    #[error("charges a pluripolar set: dirac mass {0} at the origin")]
    ChargesPluripolar(f64),
    #[error("domination hypothesis violated: worst ratio {0}")]
    DominationViolated(f64),
    #[error("not solvable in F(Omega): {0}")]
    NotSolvable(String),
    #[error("exponent hypothesis violated: alpha = {alpha} <= p/(p+n) = {threshold}")]
    ExponentHypothesis { alpha: f64, threshold: f64 },
    #[error("integral did not converge: {0}")]
    NoConvergence(String),
    #[error("io: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
