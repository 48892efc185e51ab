use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulus q = {q}: {reason}")]
    InvalidModulus { q: u32, reason: &'static str },
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("value is not rational")]
    NotRational,
    #[error("expected an integer, got {0}")]
    NotInteger(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("tolerance violated: {0}")]
    Tolerance(String),
    #[error("orthogonality failure: {0}")]
    Orthogonality(String),
    #[error("inconsistent system: {0}")]
    Inconsistent(String),
    #[error("no attaching path found within budget: {0}")]
    NoPathFound(Box<crate::complex::SearchDiagnostics>),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
