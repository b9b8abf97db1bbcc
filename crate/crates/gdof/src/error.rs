use thiserror::Error;

/// Errors reported by the bound computations and oracles.
#[derive(Debug, Error)]
pub enum GdofError {
    /// An interference exponent was negative, NaN or infinite.
    #[error("invalid interference exponent: {0}")]
    InvalidExponent(String),

    /// An operation was called outside the region it is defined on.
    #[error("operation `{op}` requires region {required}, but ({alpha1}, {alpha2}) is {found}")]
    WrongRegion {
        op: &'static str,
        required: &'static str,
        found: &'static str,
        alpha1: f64,
        alpha2: f64,
    },

    /// A rank-deficiency index outside {0, 1, 2}.
    #[error("rank deficiency k must be 0, 1 or 2, got {0}")]
    InvalidRankDeficiency(u8),

    /// A power split outside its admissible box.
    #[error("power split ({a1}, {a2}) outside [0, {alpha1}] x [0, {alpha2}]")]
    InvalidPowerSplit {
        a1: f64,
        a2: f64,
        alpha1: f64,
        alpha2: f64,
    },

    /// Linear program with inconsistent dimensions.
    #[error("linear program dimension mismatch: {0}")]
    LpDimension(String),

    /// Linear program too large for exhaustive vertex enumeration.
    #[error("linear program has {0} variables; vertex enumeration supports at most {max}", max = crate::lp::MAX_VARIABLES)]
    LpCapacity(usize),

    /// A sampling box could not be derived from the constraint set.
    #[error("no finite sampling box derivable for variable `{0}`")]
    UnboundedSamplingBox(String),

    /// Invalid Monte Carlo configuration.
    #[error("invalid Monte Carlo configuration: {0}")]
    InvalidMcConfig(String),

    /// A search step size outside (0, 0.1].
    #[error("grid step must be in (0, 0.1], got {0}")]
    InvalidGridStep(f64),
}

pub type Result<T> = std::result::Result<T, GdofError>;
