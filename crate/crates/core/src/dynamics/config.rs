use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::control::ControlSignal;
use super::potential::PotentialSpec;
use crate::error::{Error, Result};
use crate::field::{GridField, SpectralField};
use crate::hermite::HermiteBasis;

/// Sign of the cubic term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nonlinearity {
    Focusing,
    Linear,
    Defocusing,
}

impl Nonlinearity {
    pub fn sigma(self) -> f64 {
        match self {
            Nonlinearity::Focusing => -1.0,
            Nonlinearity::Linear => 0.0,
            Nonlinearity::Defocusing => 1.0,
        }
    }
}

impl TryFrom<i64> for Nonlinearity {
    type Error = Error;

    fn try_from(value: i64) -> Result<Self> {
        match value {
            -1 => Ok(Nonlinearity::Focusing),
            0 => Ok(Nonlinearity::Linear),
            1 => Ok(Nonlinearity::Defocusing),
            other => Err(Error::param("sigma", format!("must be -1, 0 or 1 (got {other})"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    Strang,
    Picard,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// `h_k` for a multi-index; missing trailing entries are 0.
    Eigenstate { mode: Vec<usize> },
    /// Displaced ground state `π^{-d/4} e^{-|x-a|²/2 + i p·x}`, projected and
    /// renormalized.
    Coherent { position: Vec<f64>, momentum: Vec<f64> },
    /// `c_k = λ_k^{-(decay + 1/2)} e^{iθ_k} / Z` with uniform phases.
    Random { decay: f64 },
}

impl InitialState {
    pub fn build(&self, basis: &HermiteBasis, seed: u64) -> Result<SpectralField> {
        let dim = basis.dim();
        match self {
            InitialState::Eigenstate { mode } => {
                if mode.len() > dim {
                    return Err(Error::param(
                        "initial_state.mode",
                        format!("has more than {dim} entries"),
                    ));
                }
                let mut index = mode.clone();
                index.resize(dim, 0);
                SpectralField::basis_state(dim, basis.n_modes(), &index)
                    .map_err(|_| Error::param("initial_state.mode", format!("entries must be < {}", basis.n_modes())))
            }
            InitialState::Coherent { position, momentum } => {
                if position.len() > dim || momentum.len() > dim {
                    return Err(Error::param(
                        "initial_state.position",
                        format!("has more than {dim} entries"),
                    ));
                }
                let at = |v: &Vec<f64>, j: usize| v.get(j).copied().unwrap_or(0.0);
                let norm = PI.powf(-0.25 * dim as f64);
                let values = basis
                    .grid_points()
                    .iter()
                    .map(|p| {
                        let mut exponent = Complex64::new(0.0, 0.0);
                        for (j, &x) in p.iter().enumerate().take(dim) {
                            let dx = x - at(position, j);
                            exponent += Complex64::new(-0.5 * dx * dx, at(momentum, j) * x);
                        }
                        norm * exponent.exp()
                    })
                    .collect();
                let grid = GridField::from_values(dim, basis.n_nodes(), values)?;
                normalized(basis.to_spectral(&grid)?)
            }
            InitialState::Random { decay } => {
                if !decay.is_finite() {
                    return Err(Error::param("initial_state.decay", "must be finite"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let coeffs = basis
                    .eigenvalues()
                    .iter()
                    .map(|&lambda| {
                        let theta = rng.gen_range(0.0..2.0 * PI);
                        Complex64::from_polar(lambda.powf(-(decay + 0.5)), theta)
                    })
                    .collect();
                normalized(SpectralField::from_coeffs(dim, basis.n_modes(), coeffs)?)
            }
        }
    }
}

fn normalized(f: SpectralField) -> Result<SpectralField> {
    let n = f.norm_l2();
    if !(n > 0.0) {
        return Err(Error::param("initial_state", "projects to the zero state"));
    }
    Ok(f.scaled(Complex64::new(1.0 / n, 0.0)))
}

/// `(k, β)` for the residual `‖ψ(t) - e^{itH}ψ₀‖_{ℋ^{k+β}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSpec {
    pub k: u32,
    pub beta: f64,
}

impl ResidualSpec {
    pub fn order(&self) -> f64 {
        self.k as f64 + self.beta
    }
}

/// Full description of one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub dim: usize,
    pub n_modes: usize,
    pub quad_factor: usize,
    pub sigma: Nonlinearity,
    pub t_final: f64,
    pub dt: f64,
    pub initial_state: InitialState,
    pub seed: u64,
    pub potential: PotentialSpec,
    pub control: ControlSignal,
    /// Empty means `{0, t_final}`.
    pub record_times: Vec<f64>,
    pub integrator: Integrator,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    /// Length of each Picard restart window.
    pub picard_window: f64,
    /// Orders `s` of the ℋˢ norms stored in each record.
    pub sobolev_orders: Vec<f64>,
    pub residual: Option<ResidualSpec>,
    /// Highest derivative order for the `W^{m,∞}` estimates of `K`.
    pub derivative_order: usize,
    /// Abort once `‖ψ(t)‖_{ℋ¹}` exceeds this value.
    pub divergence_threshold: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dim: 1,
            n_modes: 32,
            quad_factor: 2,
            sigma: Nonlinearity::Linear,
            t_final: 1.0,
            dt: 1e-3,
            initial_state: InitialState::Eigenstate { mode: vec![0] },
            seed: 0,
            potential: PotentialSpec::gaussian_bump(1.0, 1.0),
            control: ControlSignal::zero(1.0),
            record_times: Vec::new(),
            integrator: Integrator::Strang,
            picard_tol: 1e-12,
            picard_max_iter: 200,
            picard_window: 0.1,
            sobolev_orders: vec![0.0, 1.0, 2.0],
            residual: None,
            derivative_order: 2,
            divergence_threshold: 1e6,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_final > 0.0) || !self.t_final.is_finite() {
            return Err(Error::param(
                "t_final",
                format!("must be positive (got {})", self.t_final),
            ));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::param("dt", format!("must be positive (got {})", self.dt)));
        }
        if self.dt > self.t_final {
            return Err(Error::param("dt", "must not exceed t_final"));
        }
        if let Some(t) = self.record_times.iter().find(|&&t| !(0.0..=self.t_final).contains(&t)) {
            return Err(Error::param("record_times", format!("{t} lies outside [0, t_final]")));
        }
        if (self.control.horizon() - self.t_final).abs() > 1e-12 * self.t_final {
            return Err(Error::param("control", "horizon must equal t_final"));
        }
        if !(self.picard_tol > 0.0) {
            return Err(Error::param("picard_tol", "must be positive"));
        }
        if self.picard_max_iter == 0 {
            return Err(Error::param("picard_max_iter", "must be positive"));
        }
        if !(self.picard_window > 0.0) {
            return Err(Error::param("picard_window", "must be positive"));
        }
        if self.sobolev_orders.iter().any(|s| !(*s >= 0.0) || !s.is_finite()) {
            return Err(Error::param("sobolev_orders", "orders must be finite and >= 0"));
        }
        if let Some(res) = &self.residual {
            if !(0.0..0.5).contains(&res.beta) {
                return Err(Error::BetaOutOfRange(res.beta));
            }
        }
        if !(self.divergence_threshold > 0.0) {
            return Err(Error::param("divergence_threshold", "must be positive"));
        }
        self.potential.validate(self.dim)
    }

    pub fn basis(&self) -> Result<HermiteBasis> {
        HermiteBasis::new(self.dim, self.n_modes, self.quad_factor)
    }

    /// Record times, defaulting to `{0, t_final}`.
    pub fn effective_record_times(&self) -> Vec<f64> {
        if self.record_times.is_empty() {
            vec![0.0, self.t_final]
        } else {
            self.record_times.clone()
        }
    }
}

/// `count + 1` equispaced times on `[0, t_final]`.
pub fn uniform_times(t_final: f64, count: usize) -> Vec<f64> {
    (0..=count).map(|j| t_final * j as f64 / count as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_parsing() {
        assert_eq!(Nonlinearity::try_from(1).unwrap().sigma(), 1.0);
        assert_eq!(Nonlinearity::try_from(-1).unwrap(), Nonlinearity::Focusing);
        assert!(Nonlinearity::try_from(2).is_err());
    }

    #[test]
    fn validation_names_dt() {
        let cfg = SimConfig {
            dt: 0.0,
            ..Default::default()
        };
        match cfg.validate() {
            Err(Error::InvalidParameter { name, .. }) => assert_eq!(name, "dt"),
            other => panic!("unexpected {other:?}"),
        }
        let cfg = SimConfig {
            record_times: vec![0.5, 2.0],
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        assert!(SimConfig::default().validate().is_ok());
    }

    #[test]
    fn random_state_is_reproducible_and_normalized() {
        let basis = HermiteBasis::new(1, 16, 2).unwrap();
        let init = InitialState::Random { decay: 1.0 };
        let a = init.build(&basis, 11).unwrap();
        let b = init.build(&basis, 11).unwrap();
        let c = init.build(&basis, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!((a.norm_l2() - 1.0).abs() < 1e-14);
        // moduli follow the prescribed decay
        let ratio = a.coeffs()[1].norm() / a.coeffs()[0].norm();
        assert!((ratio - 3.0_f64.powf(-1.5)).abs() < 1e-14);
    }

    #[test]
    fn centred_coherent_state_is_ground_state() {
        let basis = HermiteBasis::new(2, 8, 2).unwrap();
        let init = InitialState::Coherent {
            position: vec![],
            momentum: vec![],
        };
        let f = init.build(&basis, 0).unwrap();
        assert!((f.coeffs()[0].re - 1.0).abs() < 1e-13);
        assert!(f.coeffs()[1..].iter().all(|c| c.norm() < 1e-13));
    }

    #[test]
    fn displaced_coherent_state_has_poisson_weights() {
        let basis = HermiteBasis::new(1, 48, 2).unwrap();
        let init = InitialState::Coherent {
            position: vec![1.0],
            momentum: vec![0.0],
        };
        let f = init.build(&basis, 0).unwrap();
        // |α|² = x0²/2; |c_n|² = e^{-|α|²} |α|^{2n} / n!
        let a2: f64 = 0.5;
        let mut expected = (-a2).exp();
        for n in 0..10 {
            assert!((f.coeffs()[n].norm_sqr() - expected).abs() < 1e-12);
            expected *= a2 / (n + 1) as f64;
        }
    }

    #[test]
    fn eigenstate_out_of_range() {
        let basis = HermiteBasis::new(1, 4, 2).unwrap();
        let init = InitialState::Eigenstate { mode: vec![4] };
        assert!(init.build(&basis, 0).is_err());
    }
}
