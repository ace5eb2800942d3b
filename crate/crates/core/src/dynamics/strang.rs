//! Strang splitting: exact free half-steps around an exact pointwise
//! potential/nonlinear phase.

use num_complex::Complex64;

use super::control::ControlSignal;
use super::potential::Potential;
use crate::error::Result;
use crate::field::{GridField, SpectralField};
use crate::hermite::HermiteBasis;
use crate::spectral::rotate_in_place;

/// `ψ_i ↦ exp(-i [K_i U - σ |ψ_i|² dt]) ψ_i`, the exact flow of
/// `i ∂t ψ = (u K - σ |ψ|²) ψ` over a step with `U = ∫ u`.
pub fn grid_nonlinear_phase(
    values: &GridField,
    sigma: f64,
    k_values: &[f64],
    control_integral: f64,
    dt: f64,
) -> GridField {
    let mut out = values.clone();
    apply_phase(out.values_mut(), sigma, k_values, control_integral, dt);
    out
}

pub(crate) fn apply_phase(values: &mut [Complex64], sigma: f64, k_values: &[f64], control_integral: f64, dt: f64) {
    assert_eq!(values.len(), k_values.len(), "potential/grid size mismatch");
    for (v, &k) in values.iter_mut().zip(k_values) {
        let phase = sigma * v.norm_sqr() * dt - k * control_integral;
        if phase != 0.0 {
            *v *= Complex64::cis(phase);
        }
    }
}

/// Right-hand side data shared by both integrators.
#[derive(Debug, Clone, Copy)]
pub struct Propagator<'a> {
    basis: &'a HermiteBasis,
    potential: &'a Potential,
    control: &'a ControlSignal,
    sigma: f64,
}

impl<'a> Propagator<'a> {
    pub fn new(basis: &'a HermiteBasis, potential: &'a Potential, control: &'a ControlSignal, sigma: f64) -> Self {
        assert_eq!(
            potential.grid_values().len(),
            basis.grid_len(),
            "potential built on a different basis"
        );
        Self {
            basis,
            potential,
            control,
            sigma,
        }
    }

    pub fn basis(&self) -> &'a HermiteBasis {
        self.basis
    }

    pub fn potential(&self) -> &'a Potential {
        self.potential
    }

    pub fn control(&self) -> &'a ControlSignal {
        self.control
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// One Strang step from `t` to `t + dt`.
    pub fn strang_step(&self, state: &SpectralField, t: f64, dt: f64) -> Result<SpectralField> {
        let lambdas = self.basis.eigenvalues();
        let mut half = state.clone();
        rotate_in_place(lambdas, half.coeffs_mut(), 0.5 * dt);

        let u_int = self.control.integral(t, t + dt);
        if self.sigma == 0.0 && u_int == 0.0 {
            rotate_in_place(lambdas, half.coeffs_mut(), 0.5 * dt);
            return Ok(half);
        }

        let mut grid = self.basis.to_grid(&half)?;
        apply_phase(grid.values_mut(), self.sigma, self.potential.grid_values(), u_int, dt);
        let mut out = self.basis.to_spectral(&grid)?;
        rotate_in_place(lambdas, out.coeffs_mut(), 0.5 * dt);
        Ok(out)
    }

    /// Pointwise products `K ψ` and `|ψ|² ψ`, projected back onto the basis.
    pub(crate) fn forcing_terms(&self, state: &SpectralField) -> Result<(SpectralField, Option<SpectralField>)> {
        let grid = self.basis.to_grid(state)?;
        let dim = grid.dim();
        let n = grid.n_nodes();
        let k_psi: Vec<Complex64> = grid
            .values()
            .iter()
            .zip(self.potential.grid_values())
            .map(|(v, k)| v * k)
            .collect();
        let k_term = self.basis.to_spectral(&GridField::from_values(dim, n, k_psi)?)?;
        let cubic = if self.sigma != 0.0 {
            let values: Vec<Complex64> = grid.values().iter().map(|v| v * v.norm_sqr()).collect();
            Some(self.basis.to_spectral(&GridField::from_values(dim, n, values)?)?)
        } else {
            None
        };
        Ok((k_term, cubic))
    }
}
