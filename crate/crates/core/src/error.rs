use std::fmt;

use thiserror::Error;

/// A single violated problem invariant, tagged with a stable machine-readable code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: &'static str,
    pub message: String,
}

impl Violation {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.code, self.message)
    }
}

/// Every violation found while validating a problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violations(pub Vec<Violation>);

impl Violations {
    pub fn codes(&self) -> Vec<&'static str> {
        self.0.iter().map(|v| v.code).collect()
    }
}

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported query: {0}")]
    Unsupported(String),

    #[error("invalid problem: {0}")]
    Invalid(Violations),

    #[error("numerical breakdown: {0}")]
    Breakdown(String),

    #[error("requested accuracy not reached: best value {best:e}, error estimate {estimate:e}")]
    Accuracy { best: f64, estimate: f64 },

    #[error("series did not converge within {terms} terms")]
    Convergence { terms: usize },

    #[error(
        "domain truncation: boundary density {boundary:e} exceeds {limit:e} of the maximum; increase the half-width"
    )]
    Truncation { boundary: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
