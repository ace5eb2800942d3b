//! Continuity of the end state under weak convergence of the control, using
//! the oscillatory family `u_n = u + A sin(2π n t / T) ⇀ u`.

use crate::dynamics::{simulate, ControlSignal, SimConfig};
use crate::error::{Error, Result};
use crate::hermite::HermiteBasis;
use crate::parallel;
use crate::spectral::sobolev_norm;

/// `err(n) = ‖ψ_{u_n}(T) - ψ_u(T)‖_{ℋˢ}` for each `n` in `n_list`.
pub fn weak_limit_experiment(
    basis: &HermiteBasis,
    cfg: &SimConfig,
    n_list: &[u32],
    amplitude: f64,
    s: f64,
) -> Result<Vec<(u32, f64)>> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[1] <= w[0]) || n_list[0] == 0 {
        return Err(Error::param(
            "n_list",
            "must be non-empty, positive and strictly increasing",
        ));
    }
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(Error::param(
            "amplitude",
            format!("must be finite and >= 0 (got {amplitude})"),
        ));
    }
    let mut cfg = cfg.clone();
    cfg.record_times = vec![cfg.t_final];
    let base = simulate(basis, &cfg)?;
    let reference = base.final_state();

    let runs = parallel::map(n_list, |&n| -> Result<(u32, f64)> {
        if amplitude == 0.0 {
            return Ok((n, 0.0));
        }
        let mut perturbed = cfg.clone();
        perturbed.control = ControlSignal::sinusoid_perturbed(cfg.control.clone(), amplitude, n)?;
        let traj = simulate(basis, &perturbed)?;
        Ok((n, sobolev_norm(basis, &traj.final_state().sub(reference), s)?))
    });
    runs.into_iter().collect()
}
