use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input: wrong shape, violated precondition, exceeded cap.
    Validation,
    /// A numerical guard tripped (singular element, ill-conditioned matrix).
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported root datum: {0}")]
    UnsupportedDatum(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("weight {0} is not admissible for this lattice")]
    Inadmissible(String),
    #[error("weight {0} is not dominant")]
    NotDominant(String),
    #[error("{what} exceeds cap ({size} > {cap})")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("element is singular (|denominator| = {0:e}); use the singular formula")]
    SingularElement(f64),
    #[error("numerical guard tripped: {0}")]
    NumericalGuard(String),
    #[error("quadrature grid {grid} too small, need at least {needed}")]
    GridTooSmall { grid: usize, needed: usize },
    #[error("matrix is singular or ill-conditioned (condition number {0:e})")]
    IllConditioned(f64),
    #[error("element is not theta-semisimple: {0}")]
    NotSemisimple(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::SingularElement(_)
            | Error::NumericalGuard(_)
            | Error::IllConditioned(_)
            | Error::NotSemisimple(_) => ErrorKind::Numerical,
            _ => ErrorKind::Validation,
        }
    }
}
