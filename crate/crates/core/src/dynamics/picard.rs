//! Fixed-point iteration of the Duhamel map
//!
//! ```text
//! Φ(ψ)(t) = e^{i(t-t0)H} ψ(t0) - i ∫ u(s) e^{i(t-s)H} (K ψ)(s) ds
//!                              + i σ ∫ e^{i(t-s)H} (|ψ|² ψ)(s) ds
//! ```
//!
//! on a uniform time grid. The integrals use the trapezoid rule panel by
//! panel, with `u` replaced by its exact mean over the panel. The iteration
//! starts from the free evolution.

use num_complex::Complex64;

use super::config::SimConfig;
use super::control::ControlSignal;
use super::potential::Potential;
use super::strang::Propagator;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::hermite::HermiteBasis;
use crate::parallel;
use crate::spectral::rotate_in_place;

#[derive(Debug, Clone)]
pub struct PicardOutcome {
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
    /// Number of Φ applications performed.
    pub iterations: usize,
    /// `‖ψ^{(m)} - ψ^{(m-1)}‖_{L^∞_t L²}` for each iteration.
    pub distances: Vec<f64>,
    /// Successive ratios `distances[m] / distances[m-1]`.
    pub ratios: Vec<f64>,
}

impl PicardOutcome {
    pub fn final_state(&self) -> &SpectralField {
        self.states.last().expect("at least one time point")
    }

    /// Largest observed contraction ratio, 0 when fewer than two iterations ran.
    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(0.0, f64::max)
    }
}

/// Grid `t_0 = start, .., t_n = end` with spacing `dt` (last panel may be shorter).
pub fn time_grid(start: f64, end: f64, dt: f64) -> Vec<f64> {
    let span = end - start;
    let n = ((span / dt) - 1e-9).ceil().max(1.0) as usize;
    (0..=n).map(|j| (start + dt * j as f64).min(end)).collect()
}

/// Solves on `times` starting from `start` at `times[0]`.
pub fn picard_window(
    prop: &Propagator<'_>,
    start: &SpectralField,
    times: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<PicardOutcome> {
    if times.len() < 2 {
        return Err(Error::param("times", "need at least two time points"));
    }
    let basis = prop.basis();
    let lambdas = basis.eigenvalues();
    let t0 = times[0];
    let sigma = prop.sigma();
    let control: &ControlSignal = prop.control();

    let rotate = |f: &SpectralField, tau: f64| {
        let mut g = f.clone();
        rotate_in_place(lambdas, g.coeffs_mut(), tau);
        g
    };

    let mut current: Vec<SpectralField> = times.iter().map(|&t| rotate(start, t - t0)).collect();
    if control.is_zero() && sigma == 0.0 {
        return Ok(PicardOutcome {
            times: times.to_vec(),
            states: current,
            iterations: 1,
            distances: vec![0.0],
            ratios: Vec::new(),
        });
    }
    let panel_means: Vec<f64> = times
        .windows(2)
        .map(|w| control.integral(w[0], w[1]) / (w[1] - w[0]))
        .collect();

    let mut distances = Vec::new();
    let mut ratios = Vec::new();
    let i = Complex64::new(0.0, 1.0);
    for iteration in 1..=max_iter {
        let indexed: Vec<(usize, &SpectralField)> = current.iter().enumerate().collect();
        let forcing: Vec<Result<(SpectralField, Option<SpectralField>)>> = parallel::map(&indexed, |(j, state)| {
            let (mut k_term, cubic) = prop.forcing_terms(state)?;
            let tau = times[*j] - t0;
            rotate_in_place(lambdas, k_term.coeffs_mut(), -tau);
            let cubic = cubic.map(|mut c| {
                rotate_in_place(lambdas, c.coeffs_mut(), -tau);
                c
            });
            Ok((k_term, cubic))
        });
        let forcing: Vec<(SpectralField, Option<SpectralField>)> = forcing.into_iter().collect::<Result<_>>()?;

        let len = start.coeffs().len();
        let mut accum = vec![Complex64::new(0.0, 0.0); len];
        let mut next = Vec::with_capacity(times.len());
        next.push(rotate(start, 0.0));
        for p in 0..times.len() - 1 {
            let h = times[p + 1] - times[p];
            let ctrl = -i * (0.5 * h * panel_means[p]);
            let (ka, ca) = &forcing[p];
            let (kb, cb) = &forcing[p + 1];
            for (idx, acc) in accum.iter_mut().enumerate() {
                *acc += ctrl * (ka.coeffs()[idx] + kb.coeffs()[idx]);
            }
            if let (Some(ca), Some(cb)) = (ca, cb) {
                let cub = i * (0.5 * h * sigma);
                for (idx, acc) in accum.iter_mut().enumerate() {
                    *acc += cub * (ca.coeffs()[idx] + cb.coeffs()[idx]);
                }
            }
            let mut state = start.clone();
            for (c, a) in state.coeffs_mut().iter_mut().zip(&accum) {
                *c += a;
            }
            rotate_in_place(lambdas, state.coeffs_mut(), times[p + 1] - t0);
            next.push(state);
        }

        let distance = next
            .iter()
            .zip(&current)
            .map(|(a, b)| a.sub(b).norm_l2())
            .fold(0.0, f64::max);
        if let Some(&prev) = distances.last() {
            if prev > 0.0 {
                ratios.push(distance / prev);
            }
        }
        distances.push(distance);
        current = next;
        if !current.last().is_some_and(|s| s.is_finite()) {
            break;
        }
        if distance <= tol {
            return Ok(PicardOutcome {
                times: times.to_vec(),
                states: current,
                iterations: iteration,
                distances,
                ratios,
            });
        }
    }
    Err(Error::PicardNotConverged {
        iterations: distances.len(),
        last_ratio: ratios.last().copied().unwrap_or(f64::NAN),
        residual: distances.last().copied().unwrap_or(f64::NAN),
    })
}

/// Single Picard window from the configured initial state at `t = 0` to
/// `t_final`, on a grid with the configured `dt`.
pub fn picard_solve(basis: &HermiteBasis, cfg: &SimConfig, t_final: f64) -> Result<PicardOutcome> {
    cfg.validate()?;
    if !(t_final > 0.0) || t_final > cfg.t_final {
        return Err(Error::param("t_final", "must lie in (0, cfg.t_final]"));
    }
    let potential = Potential::build(cfg.potential.clone(), basis, cfg.derivative_order)?;
    let prop = Propagator::new(basis, &potential, &cfg.control, cfg.sigma.sigma());
    let psi0 = cfg.initial_state.build(basis, cfg.seed)?;
    let times = time_grid(0.0, t_final, cfg.dt);
    picard_window(&prop, &psi0, &times, cfg.picard_tol, cfg.picard_max_iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::config::InitialState;
    use crate::spectral::free_propagate;

    #[test]
    fn time_grid_covers_window() {
        let g = time_grid(0.0, 0.1, 0.01);
        assert_eq!(g.len(), 11);
        assert_eq!(*g.last().unwrap(), 0.1);
        let g = time_grid(1.0, 1.25, 0.1);
        assert_eq!(g.len(), 4);
        assert_eq!(*g.last().unwrap(), 1.25);
    }

    #[test]
    fn free_problem_converges_in_one_iteration() {
        let cfg = SimConfig {
            initial_state: InitialState::Random { decay: 1.0 },
            dt: 0.01,
            ..Default::default()
        };
        let basis = cfg.basis().unwrap();
        let out = picard_solve(&basis, &cfg, 0.3).unwrap();
        assert_eq!(out.iterations, 1);
        let psi0 = cfg.initial_state.build(&basis, cfg.seed).unwrap();
        let free = free_propagate(&basis, &psi0, 0.3).unwrap();
        assert!(out.final_state().max_abs_diff(&free) < 1e-13);
    }

    #[test]
    fn divergent_setting_reports_ratio() {
        let cfg = SimConfig {
            control: ControlSignal::piecewise_constant(1.0, vec![400.0]).unwrap(),
            dt: 0.01,
            picard_max_iter: 5,
            ..Default::default()
        };
        let basis = cfg.basis().unwrap();
        match picard_solve(&basis, &cfg, 1.0) {
            Err(Error::PicardNotConverged {
                iterations, last_ratio, ..
            }) => {
                assert_eq!(iterations, 5);
                assert!(last_ratio > 1.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
