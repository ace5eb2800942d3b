use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::hermite::HermiteBasis;
use crate::parallel;
use crate::spectral::{wsp_norm_with, AdmissiblePair, LinfMode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrichartzReport {
    pub pair: AdmissiblePair,
    pub s: f64,
    /// `‖ψ‖_{L^q_t 𝒲^{s,r}_x}` over the recorded time span.
    pub value: f64,
}

/// Mixed norm over the record times of `trajectory`: trapezoid rule in time
/// on `‖ψ(t)‖^q_{𝒲^{s,r}}`, maximum for `q = ∞`. Spatial `L^∞` uses the
/// refined grid.
pub fn strichartz_norm(
    basis: &HermiteBasis,
    trajectory: &Trajectory,
    pair: AdmissiblePair,
    s: f64,
) -> Result<StrichartzReport> {
    if pair.dim() != basis.dim() {
        return Err(Error::param(
            "pair",
            format!("built for d = {}, basis has d = {}", pair.dim(), basis.dim()),
        ));
    }
    let mut samples: Vec<(f64, &crate::field::SpectralField)> =
        trajectory.records.iter().map(|r| (r.t, &r.state)).collect();
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    samples.dedup_by(|a, b| a.0 == b.0);
    let (q, r) = (pair.q(), pair.r());
    if q.is_finite() && samples.len() < 2 {
        return Err(Error::param("trajectory", "need at least two distinct record times"));
    }
    let norms = parallel::map(&samples, |(_, state)| {
        wsp_norm_with(basis, state, s, r, LinfMode::Refined)
    });
    let norms: Vec<f64> = norms.into_iter().collect::<Result<_>>()?;
    let value = if q.is_infinite() {
        norms.iter().copied().fold(0.0, f64::max)
    } else {
        let integral: f64 = samples
            .windows(2)
            .zip(norms.windows(2))
            .map(|(t, n)| 0.5 * (t[1].0 - t[0].0) * (n[0].powf(q) + n[1].powf(q)))
            .sum();
        integral.powf(1.0 / q)
    };
    Ok(StrichartzReport { pair, s, value })
}
