//! Real control potentials `K(x)` and their derivative bounds.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hermite::{tensor_map, HermiteBasis};

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialKind {
    /// `A exp(-|x - c|² / w²)`
    GaussianBump,
    /// `A sech(|x - c| / w)`
    Sech,
    /// `A (1 + |x - c|² / w²)^{-power/2}`
    PolynomialDecay { power: f64 },
    /// `A`
    Constant,
    /// Radial profile `values[j]` at `r_j = j r_max / (len - 1)`, linear in
    /// between and constant beyond `r_max`; `r = |x - c|`.
    Sampled { r_max: f64, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    pub amplitude: f64,
    pub width: f64,
    /// Missing trailing coordinates are taken as 0.
    pub center: Vec<f64>,
}

impl PotentialSpec {
    pub fn gaussian_bump(amplitude: f64, width: f64) -> Self {
        Self {
            kind: PotentialKind::GaussianBump,
            amplitude,
            width,
            center: Vec::new(),
        }
    }

    pub fn constant(amplitude: f64) -> Self {
        Self {
            kind: PotentialKind::Constant,
            amplitude,
            width: 1.0,
            center: Vec::new(),
        }
    }

    pub fn with_center(mut self, center: Vec<f64>) -> Self {
        self.center = center;
        self
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if !self.amplitude.is_finite() {
            return Err(Error::param("potential.amplitude", "must be finite"));
        }
        if !(self.width > 0.0) || !self.width.is_finite() {
            return Err(Error::param(
                "potential.width",
                format!("must be positive (got {})", self.width),
            ));
        }
        if self.center.len() > dim || self.center.iter().any(|c| !c.is_finite()) {
            return Err(Error::param(
                "potential.center",
                format!("must hold at most {dim} finite coordinates"),
            ));
        }
        match &self.kind {
            PotentialKind::PolynomialDecay { power } if !(*power > 0.0) => {
                Err(Error::param("potential.power", "must be positive"))
            }
            PotentialKind::Sampled { r_max, values } => {
                if values.len() < 2 || !(*r_max > 0.0) || values.iter().any(|v| !v.is_finite()) {
                    Err(Error::param(
                        "potential.values",
                        "need at least two finite samples and r_max > 0",
                    ))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// `K(x)` for a point with `x.len()` coordinates.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x
            .iter()
            .enumerate()
            .map(|(j, &xj)| {
                let c = self.center.get(j).copied().unwrap_or(0.0);
                (xj - c) * (xj - c)
            })
            .sum();
        let w = self.width;
        let a = self.amplitude;
        match &self.kind {
            PotentialKind::GaussianBump => a * (-r2 / (w * w)).exp(),
            PotentialKind::Sech => a / (r2.sqrt() / w).cosh(),
            PotentialKind::PolynomialDecay { power } => a * (1.0 + r2 / (w * w)).powf(-0.5 * power),
            PotentialKind::Constant => a,
            PotentialKind::Sampled { r_max, values } => {
                let r = r2.sqrt();
                if r >= *r_max {
                    return a * values[values.len() - 1];
                }
                let pos = r / r_max * (values.len() - 1) as f64;
                let j = pos.floor() as usize;
                let frac = pos - j as f64;
                a * (values[j] + frac * (values[j + 1] - values[j]))
            }
        }
    }
}

/// A potential evaluated on a basis, with derivative bounds.
#[derive(Debug, Clone)]
pub struct Potential {
    spec: PotentialSpec,
    grid_values: Vec<f64>,
    grad_sup: f64,
    wkinf_norms: Vec<f64>,
}

impl Potential {
    /// Evaluates `K` on the quadrature grid and estimates `‖∇K‖_∞` and
    /// `‖K‖_{W^{m,∞}} = Σ_{|α| ≤ m} ‖∂^α K‖_∞` for `m ≤ max_order` by
    /// fourth-order central differences on an oversampled uniform grid.
    pub fn build(spec: PotentialSpec, basis: &HermiteBasis, max_order: usize) -> Result<Self> {
        spec.validate(basis.dim())?;
        let grid_values = basis
            .grid_points()
            .iter()
            .map(|p| spec.eval(&p[..basis.dim()]))
            .collect();
        let (grad_sup, wkinf_norms) = derivative_bounds(&spec, basis, max_order);
        Ok(Self {
            spec,
            grid_values,
            grad_sup,
            wkinf_norms,
        })
    }

    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    pub fn grid_values(&self) -> &[f64] {
        &self.grid_values
    }

    pub fn grad_sup(&self) -> f64 {
        self.grad_sup
    }

    /// `wkinf_norms()[m]` estimates `‖K‖_{W^{m,∞}}`.
    pub fn wkinf_norms(&self) -> &[f64] {
        &self.wkinf_norms
    }

    pub fn wkinf_norm(&self, order: usize) -> Option<f64> {
        self.wkinf_norms.get(order).copied()
    }
}

fn fd_points_per_axis(basis: &HermiteBasis) -> usize {
    let m = basis.n_nodes();
    match basis.dim() {
        1 => 8 * m + 1,
        2 => (4 * m + 1).min(257),
        _ => (2 * m + 1).min(65),
    }
}

fn derivative_bounds(spec: &PotentialSpec, basis: &HermiteBasis, max_order: usize) -> (f64, Vec<f64>) {
    let dim = basis.dim();
    let n = fd_points_per_axis(basis);
    let half = basis.nodes().last().copied().unwrap_or(1.0).abs().max(1.0);
    let h = 2.0 * half / (n - 1) as f64;
    let coord = |i: usize| -half + h * i as f64;
    let values: Vec<f64> = tensor_map(dim, n, |idx| {
        let mut p = [0.0; 3];
        for (slot, &i) in p.iter_mut().zip(idx) {
            *slot = coord(i);
        }
        spec.eval(&p[..dim])
    });

    let mut cache: BTreeMap<Vec<usize>, Vec<f64>> = BTreeMap::new();
    cache.insert(vec![0; dim], values);
    let mut norms = Vec::with_capacity(max_order + 1);
    let mut running = 0.0;
    for order in 0..=max_order.max(1) {
        for alpha in multi_indices(dim, order) {
            if !cache.contains_key(&alpha) {
                let axis = alpha.iter().rposition(|&a| a > 0).expect("order > 0");
                let mut parent = alpha.clone();
                parent[axis] -= 1;
                let derived = differentiate(&cache[&parent], dim, n, axis, h);
                cache.insert(alpha.clone(), derived);
            }
            running += sup_abs(&cache[&alpha]);
        }
        norms.push(running);
    }

    norms.truncate(max_order + 1);

    let partials: Vec<&Vec<f64>> = (0..dim)
        .map(|a| {
            let mut alpha = vec![0; dim];
            alpha[a] = 1;
            &cache[&alpha]
        })
        .collect();
    let grad_sup = (0..partials[0].len())
        .filter_map(|i| {
            let s: f64 = partials.iter().map(|p| p[i] * p[i]).sum();
            s.is_finite().then(|| s.sqrt())
        })
        .fold(0.0, f64::max);
    (grad_sup, norms)
}

fn multi_indices(dim: usize, order: usize) -> Vec<Vec<usize>> {
    if dim == 1 {
        return vec![vec![order]];
    }
    let mut out = Vec::new();
    for first in (0..=order).rev() {
        for mut rest in multi_indices(dim - 1, order - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Fourth-order central difference along `axis`; NaN where the stencil
/// leaves the box.
fn differentiate(values: &[f64], dim: usize, n: usize, axis: usize, h: f64) -> Vec<f64> {
    let stride = n.pow((dim - axis - 1) as u32);
    let mut out = vec![f64::NAN; values.len()];
    for (flat, slot) in out.iter_mut().enumerate() {
        let i = (flat / stride) % n;
        if i < 2 || i + 2 >= n {
            continue;
        }
        let at = |o: isize| values[(flat as isize + o * stride as isize) as usize];
        *slot = (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h);
    }
    out
}

fn sup_abs(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|v| v.is_finite())
        .map(|v| v.abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_bump_gradient_matches_closed_form() {
        let basis = HermiteBasis::new(1, 32, 2).unwrap();
        let (a, w) = (1.5, 0.8);
        let k = Potential::build(PotentialSpec::gaussian_bump(a, w), &basis, 2).unwrap();
        // max |d/dx A e^{-x²/w²}| = A sqrt(2) e^{-1/2} / w
        let exact = a * 2.0_f64.sqrt() * (-0.5_f64).exp() / w;
        assert!((k.grad_sup() - exact).abs() < 1e-3 * exact);
        // W^{0,∞} is the amplitude
        assert!((k.wkinf_norm(0).unwrap() - a).abs() < 1e-12);
        // second derivative peaks at the centre: 2A/w²
        let second = 2.0 * a / (w * w);
        assert!((k.wkinf_norm(2).unwrap() - (a + exact + second)).abs() < 1e-2);
    }

    #[test]
    fn constant_has_zero_gradient() {
        let basis = HermiteBasis::new(2, 8, 2).unwrap();
        let k = Potential::build(PotentialSpec::constant(2.0), &basis, 2).unwrap();
        assert_eq!(k.grad_sup(), 0.0);
        assert_eq!(k.wkinf_norms(), &[2.0, 2.0, 2.0]);
        assert!(k.grid_values().iter().all(|&v| v == 2.0));
    }

    #[test]
    fn radial_potentials_in_3d() {
        let basis = HermiteBasis::new(3, 4, 2).unwrap();
        let spec = PotentialSpec {
            kind: PotentialKind::Sech,
            amplitude: 1.0,
            width: 1.0,
            center: vec![0.5],
        };
        let k = Potential::build(spec.clone(), &basis, 1).unwrap();
        assert_eq!(k.grid_values().len(), 512);
        assert!(k.grad_sup() > 0.0 && k.grad_sup() < 1.0);
        assert_eq!(spec.eval(&[0.5, 0.0, 0.0]), 1.0);
    }

    #[test]
    fn sampled_profile_interpolates() {
        let spec = PotentialSpec {
            kind: PotentialKind::Sampled {
                r_max: 2.0,
                values: vec![1.0, 0.0, 0.5],
            },
            amplitude: 2.0,
            width: 1.0,
            center: vec![],
        };
        assert!((spec.eval(&[0.5]) - 1.0).abs() < 1e-15);
        assert!((spec.eval(&[-1.5]) - 0.5).abs() < 1e-15);
        assert_eq!(spec.eval(&[10.0]), 1.0);
    }

    #[test]
    fn validation_names_fields() {
        let mut spec = PotentialSpec::gaussian_bump(1.0, 0.0);
        assert!(matches!(
            spec.validate(1),
            Err(Error::InvalidParameter {
                name: "potential.width",
                ..
            })
        ));
        spec.width = 1.0;
        spec.center = vec![0.0, 0.0];
        assert!(spec.validate(1).is_err());
        assert!(spec.validate(2).is_ok());
    }

    #[test]
    fn multi_index_enumeration() {
        assert_eq!(multi_indices(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(multi_indices(3, 1).len(), 3);
        assert_eq!(multi_indices(3, 2).len(), 6);
    }
}
