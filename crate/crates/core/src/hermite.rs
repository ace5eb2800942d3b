//! Hermite eigenbasis of the harmonic oscillator `H = -Δ + |x|²`.
//!
//! The basis functions are the L²-normalized Hermite functions
//! `h_k(x) = H_k(x) e^{-x²/2} / sqrt(2^k k! sqrt(π))`, evaluated through the
//! three-term recurrence
//!
//! ```text
//! h_{k+1}(x) = x sqrt(2/(k+1)) h_k(x) - sqrt(k/(k+1)) h_{k-1}(x)
//! ```
//!
//! with the Gaussian envelope carried inside the recursion, so the table is
//! finite for every `k` and every node. In `d > 1` dimensions the basis is the
//! tensor product `h_k(x) = Π_j h_{k_j}(x_j)` over the rectangle
//! `k ∈ {0..N-1}^d`, and collocation happens on the tensor Gauss–Hermite grid.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{GridField, SpectralField};

/// Upper bound on the per-axis quadrature size.
pub const MAX_QUADRATURE_NODES: usize = 8192;
/// Upper bound on the total number of tensor grid points.
pub const MAX_GRID_POINTS: usize = 1 << 24;

/// Rescaling threshold for the unnormalized recurrence.
const RESCALE: f64 = 1e150;

/// `π^{-1/4}`, the value of `h_0(0)`.
pub fn h0_peak() -> f64 {
    PI.powf(-0.25)
}

/// Evaluates `h_0(x), .., h_{n-1}(x)` into `out` (`n = out.len()`).
///
/// The recurrence runs on `p_k = h_k e^{x²/2 - s}` with a running log-scale
/// `s`, so neither the polynomial growth nor the Gaussian decay leaves the
/// double range before they are combined.
pub fn hermite_functions(x: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    let half_x2 = 0.5 * x * x;
    let mut log_scale = 0.0_f64;
    let mut envelope = (-half_x2).exp();
    let mut prev = 0.0_f64;
    let mut cur = h0_peak();
    out[0] = cur * envelope;
    for k in 0..n - 1 {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            log_scale += RESCALE.ln();
            envelope = (log_scale - half_x2).exp();
        }
        out[k + 1] = cur * envelope;
    }
}

/// Scaled pair `(p_{n-1}, p_n)` and the log-scale such that
/// `h_j(x) = p_j exp(log_scale - x²/2)`.
fn scaled_pair(x: f64, n: usize) -> (f64, f64, f64) {
    let mut log_scale = 0.0_f64;
    let mut prev = 0.0_f64;
    let mut cur = h0_peak();
    for k in 0..n {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    (prev, cur, log_scale)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples rows `i` and `i+1`), by implicit QL.
fn tridiagonal_eigenvalues(mut diag: Vec<f64>, off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 200, "QL iteration failed to converge");
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0_f64, 1.0_f64, 0.0_f64);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    diag.sort_by(|a, b| a.total_cmp(b));
    diag
}

/// Gauss–Hermite rule for the weight `e^{-x²}` with `m` nodes.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    /// Ascending abscissae, exactly antisymmetric about 0.
    pub nodes: Vec<f64>,
    /// Weights for `∫ f(x) e^{-x²} dx`.
    pub weights: Vec<f64>,
    /// `weights[i] * e^{x_i²}`, weights for `∫ f(x) dx`.
    pub phys_weights: Vec<f64>,
}

impl GaussHermite {
    /// Golub–Welsch eigenvalues as starting points, then Newton on `h_m`
    /// polished to a relative step of 1e-14.
    pub fn new(m: usize) -> Result<Self> {
        if m < 1 {
            return Err(Error::param("m", "quadrature needs at least one node"));
        }
        if m > MAX_QUADRATURE_NODES {
            return Err(Error::QuadratureTooLarge(m));
        }
        let off: Vec<f64> = (1..m).map(|k| (k as f64 / 2.0).sqrt()).collect();
        let guesses = if m == 1 {
            vec![0.0]
        } else {
            tridiagonal_eigenvalues(vec![0.0; m], &off)
        };

        let half = m / 2;
        let mut positive = Vec::with_capacity(half);
        for &guess in &guesses[m - half..] {
            positive.push(newton_root(guess.abs(), m));
        }

        let mut nodes = Vec::with_capacity(m);
        nodes.extend(positive.iter().rev().map(|&x| -x));
        if m % 2 == 1 {
            nodes.push(0.0);
        }
        nodes.extend(positive.iter().copied());

        let mut weights = Vec::with_capacity(m);
        let mut phys_weights = Vec::with_capacity(m);
        for &x in &nodes {
            let (p_prev, _, log_scale) = scaled_pair(x, m);
            // W = 1 / (m h_{m-1}(x)²)
            let ln_phys = -(m as f64).ln() - 2.0 * p_prev.abs().ln() - 2.0 * log_scale + x * x;
            phys_weights.push(ln_phys.exp());
            weights.push((ln_phys - x * x).exp());
        }
        Ok(Self {
            nodes,
            weights,
            phys_weights,
        })
    }
}

fn newton_root(mut x: f64, m: usize) -> f64 {
    let two_m = (2.0 * m as f64).sqrt();
    for _ in 0..100 {
        let (p_prev, p, _) = scaled_pair(x, m);
        let dp = two_m * p_prev - x * p;
        let step = p / dp;
        x -= step;
        if step.abs() <= 1e-14 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// Discretization of the Hermite eigenbasis in `dim` dimensions.
#[derive(Debug, Clone)]
pub struct HermiteBasis {
    dim: usize,
    n_modes: usize,
    quad: GaussHermite,
    /// `h_k(x_i)` stored k-major: `synthesis[k * m + i]`.
    synthesis: Vec<f64>,
    /// `W_i h_k(x_i)` stored i-major: `analysis[i * n + k]`.
    analysis: Vec<f64>,
    /// `λ_k = Σ_j (2 k_j + 1)` in coefficient order.
    eigenvalues: Vec<f64>,
    /// Tensor product of `phys_weights` in grid order.
    grid_weights: Vec<f64>,
}

impl HermiteBasis {
    /// Builds the basis with `quad_factor * n_modes` quadrature nodes per axis.
    pub fn new(dim: usize, n_modes: usize, quad_factor: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidDimension(dim));
        }
        if !(2..=1024).contains(&n_modes) {
            return Err(Error::InvalidModeCount(n_modes));
        }
        if quad_factor < 2 {
            return Err(Error::InvalidQuadFactor(quad_factor));
        }
        let m = quad_factor * n_modes;
        if m > MAX_QUADRATURE_NODES {
            return Err(Error::QuadratureTooLarge(m));
        }
        let grid_points = (m as u128).pow(dim as u32);
        if grid_points > MAX_GRID_POINTS as u128 {
            return Err(Error::GridTooLarge(grid_points.min(usize::MAX as u128) as usize));
        }
        let quad = GaussHermite::new(m)?;

        let mut synthesis = vec![0.0; n_modes * m];
        let mut analysis = vec![0.0; m * n_modes];
        let mut column = vec![0.0; n_modes];
        for (i, (&x, &w)) in quad.nodes.iter().zip(&quad.phys_weights).enumerate() {
            hermite_functions(x, &mut column);
            for (k, &h) in column.iter().enumerate() {
                synthesis[k * m + i] = h;
                analysis[i * n_modes + k] = w * h;
            }
        }

        let eigenvalues = tensor_map(dim, n_modes, |idx| idx.iter().map(|&k| 2.0 * k as f64 + 1.0).sum());
        let grid_weights = tensor_map(dim, m, |idx| idx.iter().map(|&i| quad.phys_weights[i]).product());

        Ok(Self {
            dim,
            n_modes,
            quad,
            synthesis,
            analysis,
            eigenvalues,
            grid_weights,
        })
    }

    /// Basis with the default `quad_factor = 2`.
    pub fn with_default_quadrature(dim: usize, n_modes: usize) -> Result<Self> {
        Self::new(dim, n_modes, 2)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Quadrature nodes per axis.
    pub fn n_nodes(&self) -> usize {
        self.quad.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.quad.nodes
    }

    pub fn quad_weights(&self) -> &[f64] {
        &self.quad.weights
    }

    pub fn phys_weights(&self) -> &[f64] {
        &self.quad.phys_weights
    }

    /// `h_k(x_i)`.
    pub fn table(&self, k: usize, i: usize) -> f64 {
        self.synthesis[k * self.n_nodes() + i]
    }

    /// Row `h_k(x_0), .., h_k(x_{M-1})`.
    pub fn table_row(&self, k: usize) -> &[f64] {
        let m = self.n_nodes();
        &self.synthesis[k * m..(k + 1) * m]
    }

    pub fn spectral_len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn grid_len(&self) -> usize {
        self.grid_weights.len()
    }

    /// Eigenvalues of `H` in coefficient order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Tensor quadrature weights for `∫ f dx` in grid order.
    pub fn grid_weights(&self) -> &[f64] {
        &self.grid_weights
    }

    /// Coordinates of every tensor grid point, in grid order.
    pub fn grid_points(&self) -> Vec<[f64; 3]> {
        let nodes = &self.quad.nodes;
        tensor_map(self.dim, nodes.len(), |idx| {
            let mut p = [0.0; 3];
            for (slot, &i) in p.iter_mut().zip(idx) {
                *slot = nodes[i];
            }
            p
        })
    }

    /// Multi-index of the flat coefficient position `flat`.
    pub fn multi_index(&self, flat: usize) -> [usize; 3] {
        unflatten(flat, self.dim, self.n_modes)
    }

    pub fn zeros(&self) -> SpectralField {
        SpectralField::zeros(self.dim, self.n_modes)
    }

    pub fn check_spectral(&self, f: &SpectralField) -> Result<()> {
        if f.dim() != self.dim || f.n_modes() != self.n_modes {
            return Err(Error::ShapeMismatch {
                expected: format!("dim {} / {} modes", self.dim, self.n_modes),
                found: format!("dim {} / {} modes", f.dim(), f.n_modes()),
            });
        }
        Ok(())
    }

    pub fn check_grid(&self, g: &GridField) -> Result<()> {
        if g.dim() != self.dim || g.n_nodes() != self.n_nodes() {
            return Err(Error::ShapeMismatch {
                expected: format!("dim {} / {} nodes", self.dim, self.n_nodes()),
                found: format!("dim {} / {} nodes", g.dim(), g.n_nodes()),
            });
        }
        Ok(())
    }

    /// Synthesis `g(x_i) = Σ_k c_k h_k(x_i)`.
    pub fn to_grid(&self, f: &SpectralField) -> Result<GridField> {
        self.check_spectral(f)?;
        let values = apply_all_axes(f.coeffs(), self.dim, self.n_modes, self.n_nodes(), &self.synthesis);
        GridField::from_values(self.dim, self.n_nodes(), values)
    }

    /// Analysis `c_k = Σ_i W_i g(x_i) h_k(x_i)`.
    pub fn to_spectral(&self, g: &GridField) -> Result<SpectralField> {
        self.check_grid(g)?;
        let coeffs = apply_all_axes(g.values(), self.dim, self.n_nodes(), self.n_modes, &self.analysis);
        SpectralField::from_coeffs(self.dim, self.n_modes, coeffs)
    }

    /// Samples `f` at arbitrary points of a tensor grid given by `axis`
    /// (same coordinates on every axis).
    pub fn synthesize_on(&self, f: &SpectralField, axis: &[f64]) -> Result<Vec<Complex64>> {
        self.check_spectral(f)?;
        let n = self.n_modes;
        let p = axis.len();
        let mut mat = vec![0.0; n * p];
        let mut column = vec![0.0; n];
        for (j, &x) in axis.iter().enumerate() {
            hermite_functions(x, &mut column);
            for (k, &h) in column.iter().enumerate() {
                mat[k * p + j] = h;
            }
        }
        Ok(apply_all_axes(f.coeffs(), self.dim, n, p, &mat))
    }
}

/// Calls `f` on every multi-index of `{0..n}^dim` in row-major order.
pub(crate) fn tensor_map<T>(dim: usize, n: usize, mut f: impl FnMut(&[usize]) -> T) -> Vec<T> {
    let len = n.pow(dim as u32);
    let mut out = Vec::with_capacity(len);
    let mut idx = vec![0usize; dim];
    for _ in 0..len {
        out.push(f(&idx));
        for a in (0..dim).rev() {
            idx[a] += 1;
            if idx[a] < n {
                break;
            }
            idx[a] = 0;
        }
    }
    out
}

fn unflatten(mut flat: usize, dim: usize, n: usize) -> [usize; 3] {
    let mut idx = [0usize; 3];
    for a in (0..dim).rev() {
        idx[a] = flat % n;
        flat /= n;
    }
    idx
}

/// Applies the same `n_out × n_in` matrix along every axis of a `dim`-tensor.
/// `mat` is laid out column-major: `mat[c * n_out + r]`.
fn apply_all_axes(src: &[Complex64], dim: usize, n_in: usize, n_out: usize, mat: &[f64]) -> Vec<Complex64> {
    let mut data = src.to_vec();
    for axis in 0..dim {
        let outer = n_out.pow(axis as u32);
        let inner = n_in.pow((dim - axis - 1) as u32);
        data = apply_axis(&data, outer, n_in, inner, mat, n_out);
    }
    data
}

fn apply_axis(src: &[Complex64], outer: usize, n_in: usize, inner: usize, mat: &[f64], n_out: usize) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let mut dst = vec![zero; outer * n_out * inner];
    for o in 0..outer {
        let s_block = &src[o * n_in * inner..(o + 1) * n_in * inner];
        let d_block = &mut dst[o * n_out * inner..(o + 1) * n_out * inner];
        for c in 0..n_in {
            let col = &mat[c * n_out..(c + 1) * n_out];
            if inner == 1 {
                let v = s_block[c];
                if v == zero {
                    continue;
                }
                for (d, &m) in d_block.iter_mut().zip(col) {
                    d.re += v.re * m;
                    d.im += v.im * m;
                }
            } else {
                let lane = &s_block[c * inner..(c + 1) * inner];
                if lane.iter().all(|v| *v == zero) {
                    continue;
                }
                for (r, &m) in col.iter().enumerate() {
                    if m == 0.0 {
                        continue;
                    }
                    let d = &mut d_block[r * inner..(r + 1) * inner];
                    for (x, y) in d.iter_mut().zip(lane) {
                        x.re += y.re * m;
                        x.im += y.im * m;
                    }
                }
            }
        }
    }
    dst
}
