use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A direction vector that should have unit length does not.
    NonUnitDirection { norm: f64 },
    /// Ball parameters outside `0 < decay < 1`, `initial_speed > 0`.
    InvalidBallParams { initial_speed: f64, decay: f64 },
    /// The ball cannot physically travel as far as the target.
    UnreachableTarget { distance: f64, max_travel: f64 },
    /// Shooting at the ball's own position.
    DegenerateTarget,
    /// Invalid argument to an operation.
    Contract(&'static str),
    /// Feature vector length does not match the network input.
    DimensionMismatch { expected: usize, got: usize },
    EmptyDataset,
    /// Zero-intercept regression with no variation in the regressor.
    DegenerateRegression,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonUnitDirection { norm } => {
                write!(f, "direction must have unit norm, got norm {norm}")
            }
            Error::InvalidBallParams {
                initial_speed,
                decay,
            } => write!(
                f,
                "invalid ball parameters: initial_speed={initial_speed}, decay={decay}"
            ),
            Error::UnreachableTarget {
                distance,
                max_travel,
            } => write!(
                f,
                "target at distance {distance} is beyond the maximum ball travel {max_travel}"
            ),
            Error::DegenerateTarget => write!(f, "target coincides with the ball"),
            Error::Contract(msg) => write!(f, "contract violation: {msg}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "expected {expected} features, got {got}")
            }
            Error::EmptyDataset => write!(f, "dataset is empty"),
            Error::DegenerateRegression => {
                write!(f, "regression is degenerate: all poscounts are zero")
            }
        }
    }
}

impl core::error::Error for Error {}
