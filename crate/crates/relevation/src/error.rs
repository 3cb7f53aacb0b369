use thiserror::Error;

/// Crate-wide error type.
///
/// Numerical routines distinguish between caller mistakes (`Domain`,
/// `OutOfSupport`, `Parse`, `History`, `Truncation`) and genuine numeric
/// failures (`Numeric`, `Singularity`), because the CLI maps the two groups
/// to different exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated a precondition (bad parameter, time outside
    /// `[0, inf)`, uniform draw outside `(0, 1)`, unordered inputs, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A quantity was requested where the survival function has already
    /// underflowed to zero.
    #[error("out of numeric support at t = {t}: survival underflowed to zero")]
    OutOfSupport { t: f64 },

    /// A numeric routine failed to converge or left its configured bounds.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// An integrand hit a vanishing denominator inside the integration range.
    /// Carries the first abscissa at which the guard tripped.
    #[error("integrand singular at x = {abscissa}: {what}")]
    Singularity { abscissa: f64, what: String },

    /// A finite distribution sequence was indexed past its end.
    #[error("sequence exhausted: entry {index} requested but only {len} available")]
    SequenceExhausted { index: usize, len: usize },

    /// An empirical statistic was requested for more arrivals than were
    /// simulated.
    #[error("truncation: arrival {requested} requested but paths hold {available}")]
    Truncation { requested: usize, available: usize },

    /// A distribution or sequence description failed to parse. Reports the
    /// offending token and what was expected in its place.
    #[error("parse error at `{token}`: expected {expected}")]
    Parse { token: String, expected: String },

    /// A history pair violated one of the severity preconditions. Carries
    /// the name of the violated clause.
    #[error("history precondition violated: {clause}")]
    History { clause: String },

    /// Two curves could not be brought onto a common grid.
    #[error("incompatible grids: {0}")]
    IncompatibleGrids(String),
}

pub type Result<T> = std::result::Result<T, Error>;
