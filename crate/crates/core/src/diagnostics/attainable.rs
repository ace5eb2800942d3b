//! Attainable-set sampling and the coefficient-tail precompactness proxy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::residual::residual_states;
use crate::dynamics::{simulate_from, ControlSignal, SimConfig};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::hermite::HermiteBasis;
use crate::parallel;

/// `Σ_{λ_k > Λ} λ_k^{order} |c_k|²`.
pub fn tail_mass(basis: &HermiteBasis, f: &SpectralField, order: f64, cutoff: f64) -> f64 {
    basis
        .eigenvalues()
        .iter()
        .zip(f.coeffs())
        .filter(|(&lambda, _)| lambda > cutoff)
        .map(|(&lambda, c)| lambda.powf(order) * c.norm_sqr())
        .sum()
}

/// Eigenvalue `2j + d` of the mode `(j, 0, .., 0)`, used to place cutoffs.
pub fn mode_cutoff(dim: usize, j: usize) -> f64 {
    (2 * j + dim) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailProfile {
    pub sample: usize,
    /// Time of the residual (snapped to the integrator grid).
    pub t: f64,
    pub order: f64,
    pub cutoffs: Vec<f64>,
    /// `tail_mass[j]` is the tail above `cutoffs[j]`.
    pub tail_mass: Vec<f64>,
}

impl TailProfile {
    pub fn from_state(basis: &HermiteBasis, f: &SpectralField, order: f64, cutoffs: &[f64]) -> Self {
        Self {
            sample: 0,
            t: 0.0,
            order,
            cutoffs: cutoffs.to_vec(),
            tail_mass: cutoffs.iter().map(|&c| tail_mass(basis, f, order, c)).collect(),
        }
    }
}

/// Ensemble parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct AttainableSpec {
    pub n_samples: usize,
    /// Every sampled control has `‖u‖_{L²([0,T])}` equal to this.
    pub control_norm: f64,
    /// Number of constant pieces per control.
    pub intervals: usize,
    pub k: u32,
    pub beta: f64,
    pub cutoffs: Vec<f64>,
    pub seed: u64,
}

/// Piecewise-constant control with uniform random values rescaled to the
/// requested `L²` norm.
pub fn random_control(rng: &mut ChaCha8Rng, horizon: f64, intervals: usize, norm: f64) -> Result<ControlSignal> {
    let raw: Vec<f64> = (0..intervals).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let current = (raw.iter().map(|v| v * v).sum::<f64>() * horizon / intervals as f64).sqrt();
    let factor = if current > 0.0 { norm / current } else { 0.0 };
    ControlSignal::piecewise_constant(horizon, raw.iter().map(|v| v * factor).collect())
}

/// [`random_control`] drawn from stream `stream` of a generator seeded with `seed`.
pub fn seeded_control(horizon: f64, intervals: usize, norm: f64, seed: u64, stream: u64) -> Result<ControlSignal> {
    if intervals == 0 {
        return Err(Error::param("intervals", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    random_control(&mut rng, horizon, intervals, norm)
}

/// Draws `(u, t)` per sample and profiles the residual `ψ(t) - e^{itH}ψ₀` in
/// `ℋ^{k+β}`. Sample `i` uses stream `i` of the seeded generator, so results
/// do not depend on scheduling.
pub fn attainable_ensemble(
    basis: &HermiteBasis,
    template: &SimConfig,
    spec: &AttainableSpec,
) -> Result<Vec<TailProfile>> {
    if spec.n_samples == 0 {
        return Err(Error::param("n_samples", "must be at least 1"));
    }
    if spec.intervals == 0 {
        return Err(Error::param("intervals", "must be at least 1"));
    }
    if !(spec.control_norm >= 0.0) || !spec.control_norm.is_finite() {
        return Err(Error::param("control_norm", "must be finite and >= 0"));
    }
    if !(0.0..0.5).contains(&spec.beta) {
        return Err(Error::BetaOutOfRange(spec.beta));
    }
    let order = spec.k as f64 + spec.beta;
    let psi0 = template.initial_state.build(basis, template.seed)?;
    let samples: Vec<usize> = (0..spec.n_samples).collect();
    let profiles = parallel::map(&samples, |&i| -> Result<TailProfile> {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        rng.set_stream(i as u64);
        let control = random_control(&mut rng, template.t_final, spec.intervals, spec.control_norm)?;
        let t = rng.gen_range(0.0..=template.t_final);
        let mut cfg = template.clone();
        cfg.control = control;
        cfg.record_times = vec![t];
        cfg.residual = None;
        let traj = simulate_from(basis, &cfg, psi0.clone())?;
        let residual = residual_states(basis, &traj)?;
        let mut profile = TailProfile::from_state(basis, &residual.states[0], order, &spec.cutoffs);
        profile.sample = i;
        profile.t = residual.times[0];
        Ok(profile)
    });
    profiles.into_iter().collect()
}

/// Largest tail above `cutoffs[j]` across the ensemble.
pub fn sup_tail(profiles: &[TailProfile], j: usize) -> f64 {
    profiles.iter().map(|p| p.tail_mass[j]).fold(0.0, f64::max)
}
