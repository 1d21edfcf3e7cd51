//! Error type shared by every module in the crate.

use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// All failure modes of the evaluation engine.
///
/// Degenerate-but-representable situations (all-zero series, undefined MAPE,
/// zero-variance R²) are modelled as `Option` values or flags on the result
/// types, not as errors; this enum covers genuine contract violations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Series cannot be partitioned into train/test/future at the requested
    /// ratio and horizon.
    SeriesTooShort { len: usize, needed: usize },
    /// Paired sequences differ in length.
    LengthMismatch { left: usize, right: usize },
    /// An operation received an empty input it cannot work with.
    EmptyInput,
    /// Training slice has all-zero first differences; the scaled-error
    /// denominator vanishes.
    FlatTrainingSeries,
    /// Total actual demand is zero; the volumetric accuracy ratio is
    /// undefined.
    ZeroTotalDemand,
    /// Regime diagnosis needs at least two points.
    TrajectoryTooShort,
    /// Horizon arguments must be at least 1.
    InvalidHorizon,
    /// Candidate model history is too short for the requested forecaster.
    HistoryTooShort { needed: usize, got: usize },
    /// A parameter is outside its documented domain.
    InvalidParams(String),
    /// Series values violate construction invariants (non-finite, negative,
    /// too short).
    InvalidSeries(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SeriesTooShort { len, needed } => {
                write!(f, "series too short: {len} observations, need at least {needed}")
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::EmptyInput => write!(f, "empty input"),
            Error::FlatTrainingSeries => {
                write!(f, "flat training series: naive scaling denominator is zero")
            }
            Error::ZeroTotalDemand => write!(f, "total actual demand is zero"),
            Error::TrajectoryTooShort => write!(f, "trajectory needs at least 2 points"),
            Error::InvalidHorizon => write!(f, "horizons must be >= 1"),
            Error::HistoryTooShort { needed, got } => {
                write!(f, "history too short: got {got}, need at least {needed}")
            }
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::InvalidSeries(msg) => write!(f, "invalid series: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
