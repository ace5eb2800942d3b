//! Smoothing residual `ψ(t) - e^{itH}ψ₀` and its Hölder-in-time behaviour.

use crate::dynamics::{Nonlinearity, Trajectory};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::hermite::HermiteBasis;
use crate::spectral::{free_propagate, sobolev_norm, weighted_norm_sqr};

/// Time-stamped states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSeries {
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
}

/// `ψ(t) - e^{itH}ψ₀` at every record of a trajectory.
pub fn residual_states(basis: &HermiteBasis, trajectory: &Trajectory) -> Result<StateSeries> {
    let mut times = Vec::with_capacity(trajectory.records.len());
    let mut states = Vec::with_capacity(trajectory.records.len());
    for rec in &trajectory.records {
        let free = free_propagate(basis, &trajectory.psi0, rec.t)?;
        times.push(rec.t);
        states.push(if rec.t == 0.0 {
            basis.zeros()
        } else {
            rec.state.sub(&free)
        });
    }
    Ok(StateSeries { times, states })
}

fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..0.5).contains(&beta) {
        return Err(Error::BetaOutOfRange(beta));
    }
    Ok(())
}

/// `r(t) = ‖ψ(t) - e^{itH}ψ₀‖_{ℋ^{k+β}}` for a bilinear (`σ = 0`) trajectory.
pub fn smoothing_residual_series(
    basis: &HermiteBasis,
    trajectory: &Trajectory,
    k: u32,
    beta: f64,
) -> Result<Vec<(f64, f64)>> {
    check_beta(beta)?;
    if !k.is_multiple_of(2) {
        return Err(Error::param("k", format!("must be even (got {k})")));
    }
    if trajectory.sigma != Nonlinearity::Linear {
        return Err(Error::param(
            "sigma",
            "smoothing residual needs a bilinear (sigma = 0) trajectory",
        ));
    }
    let series = residual_states(basis, trajectory)?;
    series
        .times
        .iter()
        .zip(&series.states)
        .map(|(&t, s)| Ok((t, sobolev_norm(basis, s, k as f64 + beta)?)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolderEstimate {
    pub alpha: f64,
    /// `sup ‖f(t₁) - f(t₂)‖ / |t₁ - t₂|^α` over pairs at least `min_gap` apart.
    pub quotient_sup: f64,
    /// Least-squares slope of `log ‖Δf‖` against `log |Δt|`; `None` when
    /// fewer than 8 pairs have a nonzero difference.
    pub fitted_alpha: Option<f64>,
    pub pairs: usize,
}

/// Hölder quotient of a state series measured in `ℋ^order`.
pub fn holder_quotient(
    basis: &HermiteBasis,
    series: &StateSeries,
    order: f64,
    alpha: f64,
    min_gap: f64,
) -> Result<HolderEstimate> {
    if series.times.len() < 2 || series.times.len() != series.states.len() {
        return Err(Error::param("series", "need at least two time-stamped states"));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::param("alpha", format!("must lie in (0, 1] (got {alpha})")));
    }
    for s in &series.states {
        basis.check_spectral(s)?;
    }
    let mut quotient_sup = 0.0_f64;
    let mut pairs = 0;
    let mut logs: Vec<(f64, f64)> = Vec::new();
    let n = series.times.len();
    for i in 0..n {
        for j in i + 1..n {
            let gap = (series.times[j] - series.times[i]).abs();
            if gap < min_gap || gap == 0.0 {
                continue;
            }
            pairs += 1;
            let diff = series.states[j].sub(&series.states[i]);
            let dist = weighted_norm_sqr(basis.eigenvalues(), diff.coeffs(), order).sqrt();
            quotient_sup = quotient_sup.max(dist / gap.powf(alpha));
            if dist > 0.0 {
                logs.push((gap.ln(), dist.ln()));
            }
        }
    }
    let fitted_alpha = if logs.len() >= 8 { slope(&logs) } else { None };
    Ok(HolderEstimate {
        alpha,
        quotient_sup,
        fitted_alpha,
        pairs,
    })
}

/// Least-squares slope; `None` for a degenerate abscissa.
pub(crate) fn slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let s = sxy / sxx;
    (sxx > 0.0 && s.is_finite()).then_some(s)
}
