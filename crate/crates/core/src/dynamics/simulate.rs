use super::config::{Integrator, Nonlinearity, SimConfig};
use super::energy::energy;
use super::picard::{picard_window, time_grid};
use super::potential::Potential;
use super::strang::Propagator;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::hermite::HermiteBasis;
use crate::spectral::{free_propagate, linf_norm, sobolev_norm, LinfMode};

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    /// Time of the integrator step the record was snapped to.
    pub t: f64,
    pub state: SpectralField,
    pub l2: f64,
    pub energy: f64,
    /// `(s, ‖ψ(t)‖_{ℋˢ})` for each configured order.
    pub sobolev: Vec<(f64, f64)>,
    /// `‖ψ(t) - e^{itH}ψ₀‖_{ℋ^{k+β}}` when configured.
    pub residual_sobolev: Option<f64>,
    /// Node-maximum estimate of `‖ψ(t)‖_{L^∞}`.
    pub linf: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub sigma: Nonlinearity,
    pub psi0: SpectralField,
    pub records: Vec<TrajectoryRecord>,
    pub dt: f64,
    pub steps: usize,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn final_state(&self) -> &SpectralField {
        &self.records.last().expect("non-empty trajectory").state
    }
}

/// Index of the grid step nearest to `t` on `grid`.
fn nearest_step(grid: &[f64], t: f64) -> usize {
    let mut best = 0;
    for (j, &g) in grid.iter().enumerate() {
        if (g - t).abs() < (grid[best] - t).abs() {
            best = j;
        }
    }
    best
}

fn make_record(
    basis: &HermiteBasis,
    cfg: &SimConfig,
    psi0: &SpectralField,
    t: f64,
    state: SpectralField,
) -> Result<TrajectoryRecord> {
    let sobolev = cfg
        .sobolev_orders
        .iter()
        .map(|&s| Ok((s, sobolev_norm(basis, &state, s)?)))
        .collect::<Result<Vec<_>>>()?;
    let residual_sobolev = match &cfg.residual {
        Some(spec) => {
            let free = free_propagate(basis, psi0, t)?;
            Some(sobolev_norm(basis, &state.sub(&free), spec.order())?)
        }
        None => None,
    };
    Ok(TrajectoryRecord {
        t,
        l2: state.norm_l2(),
        energy: energy(basis, &state)?,
        linf: linf_norm(basis, &state, LinfMode::Nodes)?,
        sobolev,
        residual_sobolev,
        state,
    })
}

/// Integrates from the configured initial state to `t_final`, recording at
/// the integrator steps nearest to the requested record times.
pub fn simulate(basis: &HermiteBasis, cfg: &SimConfig) -> Result<Trajectory> {
    let psi0 = cfg.initial_state.build(basis, cfg.seed)?;
    simulate_from(basis, cfg, psi0)
}

/// As [`simulate`], from an explicit initial state.
pub fn simulate_from(basis: &HermiteBasis, cfg: &SimConfig, psi0: SpectralField) -> Result<Trajectory> {
    cfg.validate()?;
    basis.check_spectral(&psi0)?;
    if basis.dim() != cfg.dim || basis.n_modes() != cfg.n_modes {
        return Err(Error::ShapeMismatch {
            expected: format!("basis dim {} / {} modes", cfg.dim, cfg.n_modes),
            found: format!("dim {} / {} modes", basis.dim(), basis.n_modes()),
        });
    }
    let potential = Potential::build(cfg.potential.clone(), basis, cfg.derivative_order)?;
    let prop = Propagator::new(basis, &potential, &cfg.control, cfg.sigma.sigma());
    let grid = time_grid(0.0, cfg.t_final, cfg.dt);
    let steps = grid.len() - 1;

    let mut wanted: Vec<(usize, usize)> = cfg
        .effective_record_times()
        .iter()
        .enumerate()
        .map(|(order, &t)| (nearest_step(&grid, t), order))
        .collect();
    wanted.sort();
    let mut records: Vec<Option<TrajectoryRecord>> = vec![None; wanted.len()];
    let mut cursor = 0;
    let mut emit = |step: usize, state: &SpectralField, records: &mut Vec<Option<TrajectoryRecord>>| -> Result<()> {
        while cursor < wanted.len() && wanted[cursor].0 == step {
            let rec = make_record(basis, cfg, &psi0, grid[step], state.clone())?;
            records[wanted[cursor].1] = Some(rec);
            cursor += 1;
        }
        Ok(())
    };

    let guard = |t: f64, state: &SpectralField| -> Result<()> {
        let h1 = sobolev_norm(basis, state, 1.0)?;
        if !(h1 <= cfg.divergence_threshold) {
            return Err(Error::Divergence { t, norm: h1 });
        }
        Ok(())
    };

    emit(0, &psi0, &mut records)?;
    match cfg.integrator {
        Integrator::Strang => {
            let mut state = psi0.clone();
            for step in 0..steps {
                state = prop.strang_step(&state, grid[step], grid[step + 1] - grid[step])?;
                guard(grid[step + 1], &state)?;
                emit(step + 1, &state, &mut records)?;
            }
        }
        Integrator::Picard => {
            let per_window = ((cfg.picard_window / cfg.dt).round() as usize).max(1);
            let mut state = psi0.clone();
            let mut first = 0;
            while first < steps {
                let last = (first + per_window).min(steps);
                let window = &grid[first..=last];
                let outcome = picard_window(&prop, &state, window, cfg.picard_tol, cfg.picard_max_iter)?;
                for (offset, s) in outcome.states.iter().enumerate().skip(1) {
                    guard(window[offset], s)?;
                    emit(first + offset, s, &mut records)?;
                }
                state = outcome.states.last().unwrap().clone();
                first = last;
            }
        }
    }

    Ok(Trajectory {
        sigma: cfg.sigma,
        psi0,
        records: records
            .into_iter()
            .map(|r| r.expect("every record time is reached"))
            .collect(),
        dt: cfg.dt,
        steps,
    })
}
