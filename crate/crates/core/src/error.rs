//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the precoding library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: {detail}")]
    DimensionMismatch {
        context: &'static str,
        detail: String,
    },

    #[error("matrix is not Hermitian: {0}")]
    NotHermitian(String),

    #[error("rank deficient: {0}")]
    RankDeficient(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (residual {residual})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("unsupported modulation order {order}: {reason}")]
    BadModulation { order: usize, reason: &'static str },

    #[error("value ({re}, {im}) is not on the {order}-PSK constellation")]
    NotOnConstellation { re: f64, im: f64, order: usize },

    #[error("degenerate detection thresholds for user {user}: |denominator| = {denominator}")]
    DegenerateThresholds { user: usize, denominator: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("linear program did not reach optimality ({status}) while {context}")]
    LpNotOptimal {
        status: &'static str,
        context: &'static str,
    },

    #[error("transmit signal has zero power; normalization factor undefined")]
    ZeroSignal,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(context: &'static str, detail: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            context,
            detail: detail.into(),
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
