//! State representations: spectral coefficients and collocation values.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients of a function in the tensor Hermite basis.
///
/// Multi-indices `(k_1, .., k_d)` are stored row-major with the last axis
/// fastest; every axis is truncated to `0..n_modes`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    dim: usize,
    n_modes: usize,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(dim: usize, n_modes: usize) -> Self {
        Self {
            dim,
            n_modes,
            coeffs: vec![Complex64::new(0.0, 0.0); n_modes.pow(dim as u32)],
        }
    }

    pub fn from_coeffs(dim: usize, n_modes: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let expected = n_modes.pow(dim as u32);
        if coeffs.len() != expected {
            return Err(Error::ShapeMismatch {
                expected: format!("{expected} coefficients"),
                found: format!("{}", coeffs.len()),
            });
        }
        Ok(Self { dim, n_modes, coeffs })
    }

    /// The single basis function `h_k` for a multi-index `k` of length `dim`.
    pub fn basis_state(dim: usize, n_modes: usize, index: &[usize]) -> Result<Self> {
        if index.len() != dim || index.iter().any(|&k| k >= n_modes) {
            return Err(Error::ShapeMismatch {
                expected: format!("multi-index of length {dim} with entries < {n_modes}"),
                found: format!("{index:?}"),
            });
        }
        let mut f = Self::zeros(dim, n_modes);
        let flat = index.iter().fold(0, |acc, &k| acc * n_modes + k);
        f.coeffs[flat] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// ℓ² norm of the coefficients, equal to the L² norm of the function.
    pub fn norm_l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            n_modes: self.n_modes,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `self - other`; panics on shape mismatch.
    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.same_shape(other), "subtracting fields of different shape");
        Self {
            dim: self.dim,
            n_modes: self.n_modes,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    /// `a * self + b * other`; panics on shape mismatch.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        assert!(self.same_shape(other), "combining fields of different shape");
        Self {
            dim: self.dim,
            n_modes: self.n_modes,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.dim == other.dim && self.n_modes == other.n_modes
    }

    /// Largest coefficientwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert!(self.same_shape(other));
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Values of a function at the tensor quadrature nodes (row-major, last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    dim: usize,
    n_nodes: usize,
    values: Vec<Complex64>,
}

impl GridField {
    pub fn zeros(dim: usize, n_nodes: usize) -> Self {
        Self {
            dim,
            n_nodes,
            values: vec![Complex64::new(0.0, 0.0); n_nodes.pow(dim as u32)],
        }
    }

    pub fn from_values(dim: usize, n_nodes: usize, values: Vec<Complex64>) -> Result<Self> {
        let expected = n_nodes.pow(dim as u32);
        if values.len() != expected {
            return Err(Error::ShapeMismatch {
                expected: format!("{expected} grid values"),
                found: format!("{}", values.len()),
            });
        }
        Ok(Self { dim, n_nodes, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nodes per axis.
    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}
