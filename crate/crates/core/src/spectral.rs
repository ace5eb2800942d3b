//! Operator calculus for `H` in its eigenbasis: fractional powers, harmonic
//! Sobolev and Lebesgue norms, the exact free propagator and the Kato
//! smoothing functional.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{GridField, SpectralField};
use crate::hermite::HermiteBasis;

/// `λ_k = Σ_j (2 k_j + 1)`.
pub fn eigenvalue(index: &[usize]) -> f64 {
    index.iter().map(|&k| 2.0 * k as f64 + 1.0).sum()
}

/// Strichartz pair `(q, r)`; `f64::INFINITY` stands for ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissiblePair {
    q: f64,
    r: f64,
    dim: usize,
}

impl AdmissiblePair {
    pub fn new(q: f64, r: f64, dim: usize) -> Result<Self> {
        if check_admissible(q, r, dim) {
            Ok(Self { q, r, dim })
        } else {
            Err(Error::NotAdmissible { q, r, dim })
        }
    }

    /// Pair accepted for reporting without the scaling check.
    pub fn whitelisted(q: f64, r: f64, dim: usize) -> Result<Self> {
        if q < 1.0 || r < 1.0 || q.is_nan() || r.is_nan() {
            return Err(Error::param("q/r", "exponents must be at least 1"));
        }
        Ok(Self { q, r, dim })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// `2/q + d/r = d/2` with `q, r ∈ [2, ∞]`, excluding `(d, q, r) = (2, 2, ∞)`.
pub fn check_admissible(q: f64, r: f64, dim: usize) -> bool {
    if !(q >= 2.0 && r >= 2.0) {
        return false;
    }
    if dim == 2 && q == 2.0 && r.is_infinite() {
        return false;
    }
    let d = dim as f64;
    (2.0 / q + d / r - d / 2.0).abs() <= 1e-12
}

/// `c_k ↦ λ_k^s c_k`.
pub fn apply_fractional_h(basis: &HermiteBasis, f: &SpectralField, s: f64) -> Result<SpectralField> {
    basis.check_spectral(f)?;
    let mut out = f.clone();
    if s != 0.0 {
        for (c, &lambda) in out.coeffs_mut().iter_mut().zip(basis.eigenvalues()) {
            *c *= lambda.powf(s);
        }
    }
    Ok(out)
}

/// `‖f‖_{ℋ^s} = (Σ_k λ_k^s |c_k|²)^{1/2}`.
pub fn sobolev_norm(basis: &HermiteBasis, f: &SpectralField, s: f64) -> Result<f64> {
    basis.check_spectral(f)?;
    Ok(weighted_norm_sqr(basis.eigenvalues(), f.coeffs(), s).sqrt())
}

pub(crate) fn weighted_norm_sqr(lambdas: &[f64], coeffs: &[Complex64], s: f64) -> f64 {
    if s == 0.0 {
        coeffs.iter().map(|c| c.norm_sqr()).sum()
    } else {
        coeffs.iter().zip(lambdas).map(|(c, l)| l.powf(s) * c.norm_sqr()).sum()
    }
}

/// Quadrature Lᵖ norm; `p = ∞` is the maximum over the nodes.
pub fn lp_norm(basis: &HermiteBasis, g: &GridField, p: f64) -> Result<f64> {
    basis.check_grid(g)?;
    if p.is_nan() || p < 1.0 {
        return Err(Error::param("p", format!("must be >= 1 (got {p})")));
    }
    Ok(lp_norm_unchecked(basis.grid_weights(), g.values(), p))
}

pub(crate) fn lp_norm_unchecked(weights: &[f64], values: &[Complex64], p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let sum: f64 = if p == 2.0 {
        values.iter().zip(weights).map(|(v, w)| w * v.norm_sqr()).sum()
    } else {
        values.iter().zip(weights).map(|(v, w)| w * v.norm().powf(p)).sum()
    };
    sum.powf(1.0 / p)
}

/// How `L^∞` is approximated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinfMode {
    /// Maximum over the quadrature nodes.
    #[default]
    Nodes,
    /// Maximum over the nodes and an oversampled uniform grid on
    /// `[-x_max, x_max]` that contains the origin. Still a lower bound.
    Refined,
}

/// Points per axis of the refinement grid (odd, so 0 is included).
fn refinement_points(basis: &HermiteBasis) -> usize {
    let m = basis.n_nodes();
    let per_axis = match basis.dim() {
        1 => 4 * m,
        2 => 2 * m,
        _ => m,
    };
    per_axis | 1
}

/// `L^∞` estimate of the function represented by `f`.
pub fn linf_norm(basis: &HermiteBasis, f: &SpectralField, mode: LinfMode) -> Result<f64> {
    let on_nodes = lp_norm_unchecked(basis.grid_weights(), basis.to_grid(f)?.values(), f64::INFINITY);
    match mode {
        LinfMode::Nodes => Ok(on_nodes),
        LinfMode::Refined => {
            let p = refinement_points(basis);
            let x_max = *basis.nodes().last().unwrap();
            let axis: Vec<f64> = (0..p)
                .map(|j| -x_max + 2.0 * x_max * j as f64 / (p - 1) as f64)
                .collect();
            let values = basis.synthesize_on(f, &axis)?;
            Ok(values.iter().map(|v| v.norm()).fold(on_nodes, f64::max))
        }
    }
}

/// `‖H^{s/2} f‖_{Lᵖ}`.
pub fn wsp_norm(basis: &HermiteBasis, f: &SpectralField, s: f64, p: f64) -> Result<f64> {
    wsp_norm_with(basis, f, s, p, LinfMode::Nodes)
}

pub fn wsp_norm_with(basis: &HermiteBasis, f: &SpectralField, s: f64, p: f64, linf: LinfMode) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::param("s", format!("must be >= 0 (got {s})")));
    }
    let lifted = apply_fractional_h(basis, f, s / 2.0)?;
    if p.is_infinite() {
        return linf_norm(basis, &lifted, linf);
    }
    lp_norm(basis, &basis.to_grid(&lifted)?, p)
}

/// Exact free flow `e^{itH}`: `c_k ↦ e^{iλ_k t} c_k`.
pub fn free_propagate(basis: &HermiteBasis, f: &SpectralField, t: f64) -> Result<SpectralField> {
    basis.check_spectral(f)?;
    let mut out = f.clone();
    rotate_in_place(basis.eigenvalues(), out.coeffs_mut(), t);
    Ok(out)
}

pub(crate) fn rotate_in_place(lambdas: &[f64], coeffs: &mut [Complex64], t: f64) {
    if t == 0.0 {
        return;
    }
    for (c, &lambda) in coeffs.iter_mut().zip(lambdas) {
        if *c != Complex64::new(0.0, 0.0) {
            *c *= Complex64::cis(lambda * t);
        }
    }
}

/// `⟨x⟩^{-1} = (1 + |x|²)^{-1/2}` at every grid point.
pub fn inverse_bracket_weights(basis: &HermiteBasis) -> Vec<f64> {
    basis
        .grid_points()
        .iter()
        .map(|p| (1.0 + p.iter().map(|x| x * x).sum::<f64>()).powf(-0.5))
        .collect()
}

/// Space-time norm `‖⟨x⟩^{-1/2} H^{β/2} e^{itH} φ‖_{L²([t0, t1] × ℝ^d)}`.
///
/// Spatial integral by the tensor quadrature, time integral by the composite
/// trapezoid rule with `n_time` panels.
pub fn kato_functional(
    basis: &HermiteBasis,
    phi: &SpectralField,
    beta: f64,
    window: (f64, f64),
    n_time: usize,
) -> Result<f64> {
    if !(0.0..0.5).contains(&beta) {
        return Err(Error::BetaOutOfRange(beta));
    }
    if n_time < 16 {
        return Err(Error::param("n_time", format!("must be >= 16 (got {n_time})")));
    }
    let (t0, t1) = window;
    if !(t1 > t0) {
        return Err(Error::param("window", "t1 must exceed t0"));
    }
    let lifted = apply_fractional_h(basis, phi, beta / 2.0)?;
    let bracket = inverse_bracket_weights(basis);
    let weights: Vec<f64> = bracket.iter().zip(basis.grid_weights()).map(|(b, w)| b * w).collect();
    let h = (t1 - t0) / n_time as f64;
    let mut total = 0.0;
    for j in 0..=n_time {
        let t = t0 + h * j as f64;
        let g = basis.to_grid(&free_propagate(basis, &lifted, t)?)?;
        let density: f64 = g.values().iter().zip(&weights).map(|(v, w)| w * v.norm_sqr()).sum();
        let tw = if j == 0 || j == n_time { 0.5 } else { 1.0 };
        total += tw * h * density;
    }
    Ok(total.sqrt())
}
