use std::fmt;

/// Which theorem precondition a caller violated.
#[derive(Debug, Clone, PartialEq)]
pub enum Precondition {
    SingularChannel { eta: f64 },
    ZeroDispersion,
    SupportMismatch { input: usize },
    NonUniqueCaid,
    NotSymmetric,
    EtaNonzero { eta: f64 },
}

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precondition::SingularChannel { eta } => write!(f, "channel is singular (eta = {eta})"),
            Precondition::ZeroDispersion => write!(f, "dispersion is zero"),
            Precondition::SupportMismatch { input } => {
                write!(f, "an achiever puts no mass on input {input}, which is in the capacity support")
            }
            Precondition::NonUniqueCaid => {
                write!(f, "capacity-achieving input is not unique; supply the achievers explicitly")
            }
            Precondition::NotSymmetric => write!(f, "order-4 expansion needs a Cover-Thomas symmetric channel"),
            Precondition::EtaNonzero { eta } => {
                write!(f, "cubic rate-function coefficient needs eta = 0, got {eta}")
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("precondition failed: {0}")]
    Precondition(Precondition),
    #[error("absolute continuity violated: {0}")]
    AbsoluteContinuity(String),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("tilted input leaves the simplex at n = {n}, eps = {eps}: weight {weight} on input {input}")]
    SimplexViolation { n: f64, eps: f64, input: usize, weight: f64 },
    #[error("alphabet too large: {0}")]
    AlphabetTooLarge(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("singular hessian")]
    SingularHessian,
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Parse { .. } => 2,
            Error::Precondition(_)
            | Error::AbsoluteContinuity(_)
            | Error::Degenerate(_)
            | Error::SimplexViolation { .. }
            | Error::AlphabetTooLarge(_) => 3,
            Error::NoConvergence(_) | Error::SingularHessian | Error::Numerical(_) => 4,
        }
    }

    /// Short stable tag for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Parse { .. } => "parse",
            Error::Precondition(_) => "precondition",
            Error::AbsoluteContinuity(_) => "absolute-continuity",
            Error::Degenerate(_) => "degenerate",
            Error::SimplexViolation { .. } => "simplex-violation",
            Error::AlphabetTooLarge(_) => "alphabet-too-large",
            Error::NoConvergence(_) => "no-convergence",
            Error::SingularHessian => "singular-hessian",
            Error::Numerical(_) => "numerical",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        domain(format!("eps = {eps} is outside (0, 1)"))
    }
}
