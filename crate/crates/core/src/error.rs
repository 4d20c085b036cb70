use alloc::string::String;
use core::fmt;

/// Errors raised by model construction and analysis entry points.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Paired vectors disagree in length.
    LengthMismatch { expected: usize, got: usize },
    /// A regime distribution must contain at least one regime.
    EmptyDistribution,
    /// Regime probabilities must be strictly positive.
    NonPositiveProbability { index: usize, value: f64 },
    /// Regime probabilities must sum to 1.
    ProbabilitySum { sum: f64 },
    /// Per-regime losses must be non-negative.
    NegativeLoss { index: usize, value: f64 },
    /// A weight or probability parameter fell outside [0, 1].
    ParameterOutOfRange { name: &'static str, value: f64 },
    /// The combined loss must sit between the human and algorithm losses
    /// in its regime (bounded-combination assumption).
    BoundedCombinationViolated { combined: f64, low: f64, high: f64 },
    /// A tabular rule was evaluated without a regime index.
    MissingRegimeIndex,
    /// The requested operation does not apply to tabular rules.
    TabularUnsupported,
    /// Generic argument error with a short explanation.
    BadArgument(&'static str),
    /// The constraint set admits no feasible weight vector.
    Infeasible { constraint: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::EmptyDistribution => write!(f, "regime distribution is empty"),
            Error::NonPositiveProbability { index, value } => {
                write!(
                    f,
                    "regime {index} probability {value} is not strictly positive"
                )
            }
            Error::ProbabilitySum { sum } => {
                write!(f, "probabilities sum to {sum}, expected 1")
            }
            Error::NegativeLoss { index, value } => {
                write!(f, "regime {index} loss {value} is negative")
            }
            Error::ParameterOutOfRange { name, value } => {
                write!(f, "parameter {name} = {value} is outside [0, 1]")
            }
            Error::BoundedCombinationViolated {
                combined,
                low,
                high,
            } => write!(
                f,
                "combined loss {combined} violates the bounded-combination assumption: \
                 it must lie in [{low}, {high}]"
            ),
            Error::MissingRegimeIndex => {
                write!(f, "tabular rule requires a regime index")
            }
            Error::TabularUnsupported => {
                write!(f, "operation is not supported for tabular rules")
            }
            Error::BadArgument(msg) => write!(f, "{msg}"),
            Error::Infeasible { constraint } => {
                write!(f, "constraint set is infeasible: {constraint}")
            }
        }
    }
}

impl core::error::Error for Error {}
