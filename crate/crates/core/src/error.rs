use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid quadrature order {0}")]
    InvalidOrder(usize),
    #[error("integrand not finite at {0}")]
    IntegrandBlowup(String),
    #[error("argument out of range: {0}")]
    Range(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("argument on a branch cut: {0}")]
    BranchCut(String),
    #[error("denominator vanishes near {0}")]
    NearPole(String),
    #[error("series undefined this close to z = +-i")]
    TooCloseToSingularity,
    #[error("saddle series denominator vanishes")]
    DenominatorZero,
    #[error("characteristics cross at x = {x}, t = {t}")]
    MultivaluedRegion { x: f64, t: f64 },
    #[error("residue probe does not match a pole: {0}")]
    NotAPole(String),
    #[error("argument sits on a sector boundary")]
    SectorBoundary,
    #[error("degenerate saddle: |h''| = {0:e}")]
    DegenerateSaddle(f64),
    #[error("seed rejected: {0}")]
    SeedRejected(String),
    #[error("time step failed at t = {0}")]
    StepFailure(f64),
    #[error("no interior maximum on the sampled window")]
    NoInteriorMax,
    #[error("index outside the validity range: {0}")]
    ValidityRange(String),
    #[error("Airy branch choice is ambiguous")]
    BranchAmbiguity,
    #[error("eigenvalue solve failed: {0}")]
    Eigensolve(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidGrid(_) | Error::InvalidParameter(_) | Error::Io(_) => 2,
            _ => 3,
        }
    }
}
