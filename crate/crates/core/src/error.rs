use thiserror::Error;

/// Errors produced by the model, solvers and the run harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or input value is outside its admissible domain.
    #[error("domain error for `{field}`: {message}")]
    Domain { field: String, message: String },

    /// An operation was invoked while its stated precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Configuration text could not be parsed.
    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    /// A runtime invariant of the time integrator was breached.
    #[error("integration fault at t = {t}: {message}")]
    IntegrationFault { t: f64, message: String },

    /// Non-finite values appeared during time integration.
    #[error("divergence at t = {t}: non-finite {what}; try a smaller time step")]
    Divergence { t: f64, what: String },

    /// A shooting bracket or far-field condition could not be met on the
    /// truncated domain.
    #[error("truncation error: {0}; try a larger truncation length")]
    Truncation(String),

    /// No monotone wavefront exists at the requested speed.
    #[error("no monotone front at speed s = {s}: {message}")]
    NoMonotoneFront { s: f64, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Domain {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit code used by the CLI: 2 for config/input problems,
    /// 3 for numerical faults.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain { .. } | Error::Precondition(_) | Error::Config { .. } => 2,
            Error::IntegrationFault { .. }
            | Error::Divergence { .. }
            | Error::Truncation(_)
            | Error::NoMonotoneFront { .. } => 3,
            Error::Io(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
