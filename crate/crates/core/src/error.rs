use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("quantum efficiency {0} is outside (0.5, 1]")]
    Efficiency(f64),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{what}: argument {x} is outside the representable range")]
    Overflow { what: &'static str, x: f64 },
    #[error("index {index} exceeds the table limit {limit}")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("precision loss: estimated error {estimate:e} exceeds tolerance {tolerance:e}")]
    PrecisionLoss { estimate: f64, tolerance: f64 },
    #[error("quadrature did not converge, estimated residual {residual:e}")]
    NonConvergence { residual: f64 },
    #[error("no phase count up to {f_max} reaches the threshold {threshold:e}")]
    ThresholdNotReached { f_max: usize, threshold: f64 },
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    /// Coarse classification used by front ends to pick exit codes.
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Config(_) | Error::Unsupported(_) => ErrorCategory::Config,
            Error::Efficiency(_)
            | Error::InvalidState(_)
            | Error::Overflow { .. }
            | Error::IndexOutOfRange { .. } => ErrorCategory::Domain,
            Error::PrecisionLoss { .. }
            | Error::NonConvergence { .. }
            | Error::ThresholdNotReached { .. } => ErrorCategory::Numerical,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Domain,
    Numerical,
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if eta.is_finite() && eta > 0.5 && eta <= 1.0 {
        Ok(())
    } else {
        Err(Error::Efficiency(eta))
    }
}
