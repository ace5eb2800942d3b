use crate::error::Result;
use crate::field::SpectralField;
use crate::hermite::HermiteBasis;
use crate::parallel;
use crate::spectral::{kato_functional, sobolev_norm};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KatoPoint {
    pub k: usize,
    /// Kato functional of `h_k`.
    pub functional: f64,
    /// `‖H^β h_k‖_{L²} = λ_k^β`, the unsmoothed comparison.
    pub comparison: f64,
}

/// Kato functional of the eigenstates `h_k` (first axis) for each `k` in `modes`.
pub fn kato_scan(
    basis: &HermiteBasis,
    modes: &[usize],
    beta: f64,
    window: (f64, f64),
    n_time: usize,
) -> Result<Vec<KatoPoint>> {
    let points = parallel::map(modes, |&k| -> Result<KatoPoint> {
        let mut index = vec![0; basis.dim()];
        index[0] = k;
        let h = SpectralField::basis_state(basis.dim(), basis.n_modes(), &index)?;
        Ok(KatoPoint {
            k,
            functional: kato_functional(basis, &h, beta, window, n_time)?,
            comparison: sobolev_norm(basis, &h, 2.0 * beta)?,
        })
    });
    points.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparison_grows_as_power() {
        let basis = HermiteBasis::new(1, 40, 2).unwrap();
        let out = kato_scan(&basis, &[0, 4, 32], 0.45, (0.0, 1.0), 16).unwrap();
        for p in &out {
            let expected = (2.0 * p.k as f64 + 1.0).powf(0.45);
            assert!((p.comparison - expected).abs() < 1e-13 * expected);
            assert!(p.functional > 0.0);
        }
        assert!(kato_scan(&basis, &[40], 0.45, (0.0, 1.0), 16).is_err());
        assert!(kato_scan(&basis, &[1], 0.5, (0.0, 1.0), 16).is_err());
    }
}
