use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be 1, 2 or 3 (got {0})")]
    InvalidDimension(usize),

    #[error("n_modes must lie in 2..=1024 (got {0})")]
    InvalidModeCount(usize),

    #[error("quad_factor must be at least 2 (got {0})")]
    InvalidQuadFactor(usize),

    #[error("quadrature size {0} exceeds the limit of {max} nodes", max = crate::hermite::MAX_QUADRATURE_NODES)]
    QuadratureTooLarge(usize),

    #[error("tensor grid of {0} points exceeds the limit of {max}", max = crate::hermite::MAX_GRID_POINTS)]
    GridTooLarge(usize),

    #[error("shape mismatch: expected {expected}, got {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("beta must satisfy 0 <= beta < 1/2 (got {0})")]
    BetaOutOfRange(f64),

    #[error("({q}, {r}) is not an admissible pair in dimension {dim}")]
    NotAdmissible { q: f64, r: f64, dim: usize },

    #[error("H^1 norm {norm:.3e} exceeded divergence threshold at t = {t}")]
    Divergence { t: f64, norm: f64 },

    #[error("Picard iteration did not converge in {iterations} iterations (last contraction ratio {last_ratio:.3e}, residual {residual:.3e})")]
    PicardNotConverged {
        iterations: usize,
        last_ratio: f64,
        residual: f64,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
