//! Measurable functionals over trajectories and ensembles.

mod attainable;
mod bounds;
mod convergence;
mod kato;
mod residual;
mod strichartz;
mod weak;

pub use attainable::{
    attainable_ensemble, mode_cutoff, random_control, seeded_control, sup_tail, tail_mass, AttainableSpec, TailProfile,
};
pub use bounds::{
    calibrate_gronwall, energy_bound_check, energy_tolerance, gronwall_check, gronwall_envelope, BoundCheck,
};
pub use convergence::{self_convergence, ConvergenceReport};
pub use kato::{kato_scan, KatoPoint};
pub use residual::{holder_quotient, residual_states, smoothing_residual_series, HolderEstimate, StateSeries};
pub use strichartz::{strichartz_norm, StrichartzReport};
pub use weak::weak_limit_experiment;
