//! Hermite-spectral simulation of the bilinear-controlled Gross–Pitaevskii
//! equation
//!
//! ```text
//! i ∂t ψ + H ψ = u(t) K(x) ψ - σ |ψ|² ψ,    H = -Δ + |x|²,
//! ```
//!
//! together with diagnostics for its dispersive and smoothing structure.

// Negated float comparisons such as `!(x > 0.0)` are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod hermite;
mod parallel;
pub mod spectral;

pub use error::{Error, Result};
pub use field::{GridField, SpectralField};
pub use hermite::HermiteBasis;
