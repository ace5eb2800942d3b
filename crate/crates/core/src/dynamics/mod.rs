//! Time evolution of `i∂tψ + Hψ = u(t)K(x)ψ - σ|ψ|²ψ`, written as
//! `∂tψ = iHψ - iu(t)Kψ + iσ|ψ|²ψ`.

mod config;
mod control;
mod energy;
mod picard;
mod potential;
mod simulate;
mod strang;

pub use config::{uniform_times, InitialState, Integrator, Nonlinearity, ResidualSpec, SimConfig};
pub use control::{ControlKind, ControlSignal};
pub use energy::energy;
pub use picard::{picard_solve, picard_window, time_grid, PicardOutcome};
pub use potential::{Potential, PotentialKind, PotentialSpec};
pub use simulate::{simulate, simulate_from, Trajectory, TrajectoryRecord};
pub use strang::{grid_nonlinear_phase, Propagator};
