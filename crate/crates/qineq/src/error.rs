use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument is outside its admissible range.
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    /// The distribution has no finite mean for the given parameters, so
    /// mean-based curves and indices are undefined.
    #[error("{family} distribution has infinite mean ({detail})")]
    InfiniteMean {
        family: &'static str,
        detail: String,
    },

    /// Data failed `Sample` validation (NaN, infinity, negative entries, empty).
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    /// A denominator quantile is zero on a set of positive measure, so the
    /// requested curve or index is undefined for this sample.
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// Adaptive quadrature exhausted its subdivision budget before reaching
    /// the requested tolerance.
    #[error(
        "quadrature did not converge: estimated error {achieved:.3e} > tolerance {requested:.3e}"
    )]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    /// A computation produced a value that cannot be correct (NaN, a negative
    /// variance beyond tolerance, an index far outside [0, 1], ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A textual specification (distribution string, config file, ...) could
    /// not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Shorthand for an [`Error::InvalidArgument`].
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input (arguments, samples, parse errors)
    /// as opposed to numerical failures.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument { .. }
                | Error::InfiniteMean { .. }
                | Error::InvalidSample(_)
                | Error::DegenerateSample(_)
                | Error::Parse(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_prob_open(name: &'static str, p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(
            name,
            format!("must lie in the open interval (0, 1), got {p}"),
        ));
    }
    Ok(())
}
