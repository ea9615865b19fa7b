use core::fmt;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// A precondition on a plain argument failed.
    InvalidArgument(&'static str),
    /// The operation only supports lower-dimensional lattices.
    UnsupportedDimension(usize),
    /// A synthesis grid is too coarse for the retained spectrum.
    Undersampled { required: usize, requested: usize },
    /// A dyadic shell reaches past the stored coefficients.
    ShellCoverage { shell: u32, truncation: u32 },
    /// A dyadic partition is shorter than the spectrum it must cover.
    PartitionCoverage { jmax: u32, truncation: u32 },
    /// Chaos/Wick order outside the implemented range.
    UnsupportedOrder(u32),
    /// Cramér-transform threshold at or below the distribution mean.
    BelowMean { threshold: f64, mean: f64 },
    /// Not enough Monte Carlo samples for the requested report.
    InsufficientSamples { required: usize, actual: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            Error::UnsupportedDimension(dim) => {
                write!(f, "unsupported lattice dimension {dim}")
            }
            Error::Undersampled {
                required,
                requested,
            } => write!(
                f,
                "undersampled grid: need at least {required} points, got {requested}"
            ),
            Error::ShellCoverage { shell, truncation } => {
                write!(f, "shell {shell} not covered by truncation {truncation}")
            }
            Error::PartitionCoverage { jmax, truncation } => write!(
                f,
                "partition with jmax {jmax} shorter than spectrum radius {truncation}"
            ),
            Error::UnsupportedOrder(order) => write!(f, "unsupported order {order}"),
            Error::BelowMean { threshold, mean } => {
                write!(f, "threshold {threshold} not above the mean {mean}")
            }
            Error::InsufficientSamples { required, actual } => {
                write!(f, "insufficient samples: need {required}, got {actual}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
