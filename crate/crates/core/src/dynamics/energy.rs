use crate::error::Result;
use crate::field::SpectralField;
use crate::hermite::HermiteBasis;
use crate::spectral::weighted_norm_sqr;

/// `E = ⟨ψ, Hψ⟩ + ‖ψ‖²_{L²} + ½ ‖ψ‖⁴_{L⁴}`, the first two terms spectrally
/// and the quartic term by quadrature.
pub fn energy(basis: &HermiteBasis, state: &SpectralField) -> Result<f64> {
    basis.check_spectral(state)?;
    let kinetic = weighted_norm_sqr(basis.eigenvalues(), state.coeffs(), 1.0);
    let mass = weighted_norm_sqr(basis.eigenvalues(), state.coeffs(), 0.0);
    let grid = basis.to_grid(state)?;
    let quartic: f64 = grid
        .values()
        .iter()
        .zip(basis.grid_weights())
        .map(|(v, w)| {
            let d = v.norm_sqr();
            w * d * d
        })
        .sum();
    Ok(kinetic + mass + 0.5 * quartic)
}
