//! A-priori bounds checked along recorded trajectories: the Grönwall
//! envelope in `ℋᵏ` (bilinear case) and the energy bound (defocusing case).

use crate::dynamics::{energy, ControlSignal, Nonlinearity, Trajectory};
use crate::error::{Error, Result};
use crate::hermite::HermiteBasis;
use crate::spectral::sobolev_norm;

/// Relative slack for roundoff when the envelope is attained with equality.
const ROUNDOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub holds: bool,
    /// Smallest `bound(t) - value(t)` over the records.
    pub margin: f64,
    /// `(t, bound(t) - value(t))` per record.
    pub margins: Vec<(f64, f64)>,
}

fn require(traj: &Trajectory, sigma: Nonlinearity, what: &str) -> Result<()> {
    if traj.sigma != sigma {
        return Err(Error::param(
            "sigma",
            format!("{what} needs a sigma = {} trajectory", sigma.sigma()),
        ));
    }
    Ok(())
}

/// `‖ψ₀‖_{ℋᵏ} exp(ĉ ‖K‖_{𝒲^{k,∞}} ∫₀ᵗ |u|)`.
pub fn gronwall_envelope(norm0: f64, k_norm: f64, c_hat: f64, l1: f64) -> f64 {
    norm0 * (c_hat * k_norm * l1).exp()
}

/// Checks `‖ψ(t)‖_{ℋᵏ}` against the Grönwall envelope at every record.
pub fn gronwall_check(
    basis: &HermiteBasis,
    trajectory: &Trajectory,
    k: u32,
    k_norm: f64,
    control: &ControlSignal,
    c_hat: f64,
) -> Result<BoundCheck> {
    require(trajectory, Nonlinearity::Linear, "the Grönwall check")?;
    let order = k as f64;
    let norm0 = sobolev_norm(basis, &trajectory.psi0, order)?;
    let mut holds = true;
    let mut margins = Vec::with_capacity(trajectory.records.len());
    for rec in &trajectory.records {
        let value = sobolev_norm(basis, &rec.state, order)?;
        let envelope = gronwall_envelope(norm0, k_norm, c_hat, control.l1_up_to(rec.t));
        holds &= value <= envelope * (1.0 + ROUNDOFF);
        margins.push((rec.t, envelope - value));
    }
    Ok(finish(holds, margins))
}

/// Smallest `ĉ ≥ 0` for which the envelope holds at every record of
/// `trajectory`.
pub fn calibrate_gronwall(
    basis: &HermiteBasis,
    trajectory: &Trajectory,
    k: u32,
    k_norm: f64,
    control: &ControlSignal,
) -> Result<f64> {
    require(trajectory, Nonlinearity::Linear, "Grönwall calibration")?;
    let order = k as f64;
    let norm0 = sobolev_norm(basis, &trajectory.psi0, order)?;
    let mut c = 0.0_f64;
    for rec in &trajectory.records {
        let exposure = k_norm * control.l1_up_to(rec.t);
        let value = sobolev_norm(basis, &rec.state, order)?;
        if exposure > 0.0 && value > norm0 {
            c = c.max((value / norm0).ln() / exposure);
        }
    }
    Ok(c)
}

/// Checks `E(t) ≤ (E(0)^{1/2} + 2 C ‖ψ₀‖_{L²} ∫₀ᵗ|u|)²` with `C = grad_sup`,
/// allowing the splitting tolerance `10 dt² E(0)`.
pub fn energy_bound_check(
    basis: &HermiteBasis,
    trajectory: &Trajectory,
    grad_sup: f64,
    control: &ControlSignal,
) -> Result<BoundCheck> {
    require(trajectory, Nonlinearity::Defocusing, "the energy bound")?;
    let e0 = energy(basis, &trajectory.psi0)?;
    let mass = trajectory.psi0.norm_l2();
    let tolerance = energy_tolerance(trajectory.dt, e0);
    let margins: Vec<(f64, f64)> = trajectory
        .records
        .iter()
        .map(|rec| {
            let bound = (e0.sqrt() + 2.0 * grad_sup * mass * control.l1_up_to(rec.t)).powi(2);
            (rec.t, bound - rec.energy)
        })
        .collect();
    let holds = margins.iter().all(|&(_, m)| m >= -tolerance);
    Ok(finish(holds, margins))
}

/// `10 dt² E(0)`.
pub fn energy_tolerance(dt: f64, e0: f64) -> f64 {
    10.0 * dt * dt * e0
}

fn finish(holds: bool, margins: Vec<(f64, f64)>) -> BoundCheck {
    let margin = margins.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
    BoundCheck { holds, margin, margins }
}
