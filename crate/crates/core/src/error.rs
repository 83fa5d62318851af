use thiserror::Error;

/// Errors raised by the library.
///
/// Statistical uncertainty (an ideal verdict that cannot be decided on a
/// finite window) is never an error; it is carried by
/// [`IdealVerdict`](crate::ideals::IdealVerdict).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid distance distribution function: {0}")]
    InvalidDdf(String),

    #[error("`{name}` must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("grid resolution must be at least 2, got {0}")]
    GridTooCoarse(usize),

    #[error("sequence of distribution functions is empty")]
    EmptySequence,

    #[error("equilateral distance function must differ from the unit steps at 0 and at infinity")]
    DegenerateEquilateral,

    #[error("need at least {need} sample points, got {got}")]
    TooFewPoints { need: usize, got: usize },

    #[error("no eta on the geometric grid below t = {t} passes the composition check")]
    NoVicinityEta { t: f64 },

    #[error(
        "exact mode on window ({m}, {n}) needs {quadruples} quadruples, over the budget of {budget}"
    )]
    BudgetExceeded {
        m: u64,
        n: u64,
        quadruples: u128,
        budget: u128,
    },

    #[error("sampled mode needs at least {min} samples, got {got}")]
    TooFewSamples { min: u64, got: u64 },

    #[error("window ({m}, {n}) is too small: {reason}")]
    WindowTooSmall {
        m: u64,
        n: u64,
        reason: &'static str,
    },

    #[error("index set is finite; a cofinal set is required")]
    FiniteIndexSet,

    #[error("index set is not a product of row and column sets")]
    NotGrid,

    #[error("index set has no element beyond the half-window of ({m}, {n})")]
    NotCofinal { m: u64, n: u64 },

    #[error("index set has an empty trace on every requested window")]
    EmptyTrace,

    #[error("entry x({j},{k}) = {value} lies inside the excluded gap ({alpha}, {beta})")]
    GapViolation {
        j: u64,
        k: u64,
        value: f64,
        alpha: f64,
        beta: f64,
    },

    #[error("invalid gap: alpha = {alpha} must be below beta = {beta}")]
    InvalidGap { alpha: f64, beta: f64 },

    #[error("unknown built-in sequence `{0}`")]
    UnknownSequence(String),

    #[error("invalid parameter for `{sequence}`: {reason}")]
    InvalidSequenceParam { sequence: String, reason: String },

    #[error("extraction failed at level {level}: no admissible index in the window")]
    ExtractionFailed {
        level: usize,
        found: Vec<(u64, u64)>,
    },

    #[error("window schedule is empty")]
    EmptySchedule,

    #[error("`{0}` must be nonempty and sorted ascending")]
    BadGrid(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && !value.is_nan() {
        Ok(())
    } else {
        Err(Error::NonPositive { name, value })
    }
}
