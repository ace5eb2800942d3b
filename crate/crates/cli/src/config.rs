//! JSON experiment schema. Every struct rejects unknown keys.

use std::path::PathBuf;

use gpe_core::diagnostics::seeded_control;
use gpe_core::dynamics::{
    uniform_times, ControlSignal, InitialState, Integrator, Nonlinearity, PotentialKind, PotentialSpec, ResidualSpec,
    SimConfig,
};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Simulate,
    KatoScan,
    Smoothing,
    Attainable,
    WeakLimit,
    Convergence,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::KatoScan => "kato-scan",
            ExperimentKind::Smoothing => "smoothing",
            ExperimentKind::Attainable => "attainable",
            ExperimentKind::WeakLimit => "weak-limit",
            ExperimentKind::Convergence => "convergence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: PathBuf,
    #[serde(default = "default_format")]
    pub format: Format,
}

fn default_format() -> Format {
    Format::Csv
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    pub output: OutputSpec,
    pub simulation: Option<SimulationSpec>,
    pub strichartz: Option<Vec<StrichartzSpec>>,
    pub bounds: Option<BoundsSpec>,
    pub kato_scan: Option<KatoScanSpec>,
    pub smoothing: Option<SmoothingSpec>,
    pub attainable: Option<AttainableSection>,
    pub weak_limit: Option<WeakLimitSpec>,
    pub convergence: Option<ConvergenceSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialStateSpec {
    Eigenstate {
        mode: Vec<usize>,
    },
    Coherent {
        position: Vec<f64>,
        #[serde(default)]
        momentum: Vec<f64>,
    },
    Random {
        decay: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialCfg {
    GaussianBump {
        amplitude: f64,
        width: f64,
        #[serde(default)]
        center: Vec<f64>,
    },
    Sech {
        amplitude: f64,
        width: f64,
        #[serde(default)]
        center: Vec<f64>,
    },
    PolynomialDecay {
        amplitude: f64,
        width: f64,
        power: f64,
        #[serde(default)]
        center: Vec<f64>,
    },
    Constant {
        amplitude: f64,
    },
    Sampled {
        amplitude: f64,
        r_max: f64,
        values: Vec<f64>,
        #[serde(default)]
        center: Vec<f64>,
    },
}

impl PotentialCfg {
    fn build(&self) -> PotentialSpec {
        let spec = |kind, amplitude: f64, width: f64, center: &Vec<f64>| PotentialSpec {
            kind,
            amplitude,
            width,
            center: center.clone(),
        };
        match self {
            PotentialCfg::GaussianBump {
                amplitude,
                width,
                center,
            } => spec(PotentialKind::GaussianBump, *amplitude, *width, center),
            PotentialCfg::Sech {
                amplitude,
                width,
                center,
            } => spec(PotentialKind::Sech, *amplitude, *width, center),
            PotentialCfg::PolynomialDecay {
                amplitude,
                width,
                power,
                center,
            } => spec(
                PotentialKind::PolynomialDecay { power: *power },
                *amplitude,
                *width,
                center,
            ),
            PotentialCfg::Constant { amplitude } => PotentialSpec::constant(*amplitude),
            PotentialCfg::Sampled {
                amplitude,
                r_max,
                values,
                center,
            } => spec(
                PotentialKind::Sampled {
                    r_max: *r_max,
                    values: values.clone(),
                },
                *amplitude,
                1.0,
                center,
            ),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ControlCfg {
    Zero,
    PiecewiseConstant {
        values: Vec<f64>,
    },
    Sampled {
        values: Vec<f64>,
    },
    /// Uniform random piecewise-constant values rescaled to `l2_norm`.
    Random {
        intervals: usize,
        l2_norm: f64,
    },
}

impl ControlCfg {
    pub fn build(&self, horizon: f64, seed: u64, stream: u64) -> gpe_core::Result<ControlSignal> {
        match self {
            ControlCfg::Zero => Ok(ControlSignal::zero(horizon)),
            ControlCfg::PiecewiseConstant { values } => ControlSignal::piecewise_constant(horizon, values.clone()),
            ControlCfg::Sampled { values } => ControlSignal::sampled(horizon, values.clone()),
            ControlCfg::Random { intervals, l2_norm } => {
                if !(*l2_norm >= 0.0) || !l2_norm.is_finite() {
                    return Err(gpe_core::Error::InvalidParameter {
                        name: "control.l2_norm",
                        reason: "must be finite and >= 0".into(),
                    });
                }
                seeded_control(horizon, *intervals, *l2_norm, seed, stream)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualCfg {
    pub k: u32,
    pub beta: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSpec {
    #[serde(default = "one")]
    pub dim: usize,
    pub n_modes: usize,
    #[serde(default = "two")]
    pub quad_factor: usize,
    pub sigma: i64,
    pub t_final: f64,
    pub dt: f64,
    pub initial_state: InitialStateSpec,
    pub potential: Option<PotentialCfg>,
    pub control: Option<ControlCfg>,
    pub record_times: Option<Vec<f64>>,
    /// Alternative to `record_times`: this many equal intervals on `[0, T]`.
    pub record_count: Option<usize>,
    pub integrator: Option<IntegratorCfg>,
    pub picard_tol: Option<f64>,
    pub picard_max_iter: Option<usize>,
    pub picard_window: Option<f64>,
    pub sobolev_orders: Option<Vec<f64>>,
    pub residual: Option<ResidualCfg>,
    pub derivative_order: Option<usize>,
    pub divergence_threshold: Option<f64>,
}

fn one() -> usize {
    1
}

fn two() -> usize {
    2
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegratorCfg {
    Strang,
    Picard,
}

impl SimulationSpec {
    /// Builds the solver configuration; the control stream is 0.
    pub fn build(&self, seed: u64) -> Result<SimConfig, CliError> {
        let defaults = SimConfig::default();
        let sigma = Nonlinearity::try_from(self.sigma).map_err(|e| CliError::field("simulation", e))?;
        let initial_state = match &self.initial_state {
            InitialStateSpec::Eigenstate { mode } => InitialState::Eigenstate { mode: mode.clone() },
            InitialStateSpec::Coherent { position, momentum } => InitialState::Coherent {
                position: position.clone(),
                momentum: momentum.clone(),
            },
            InitialStateSpec::Random { decay } => InitialState::Random { decay: *decay },
        };
        if !(self.t_final > 0.0) || !self.t_final.is_finite() {
            return Err(CliError::Validation(format!(
                "simulation.t_final: must be positive (got {})",
                self.t_final
            )));
        }
        let control = self
            .control
            .as_ref()
            .unwrap_or(&ControlCfg::Zero)
            .build(self.t_final, seed, 0)
            .map_err(|e| CliError::field("simulation", e))?;
        let record_times = match (&self.record_times, self.record_count) {
            (Some(_), Some(_)) => {
                return Err(CliError::Validation(
                    "simulation.record_times: give either record_times or record_count, not both".into(),
                ))
            }
            (Some(times), None) => times.clone(),
            (None, Some(0)) => return Err(CliError::Validation("simulation.record_count: must be positive".into())),
            (None, Some(count)) => uniform_times(self.t_final, count),
            (None, None) => Vec::new(),
        };
        let cfg = SimConfig {
            dim: self.dim,
            n_modes: self.n_modes,
            quad_factor: self.quad_factor,
            sigma,
            t_final: self.t_final,
            dt: self.dt,
            initial_state,
            seed,
            potential: self.potential.as_ref().map_or(defaults.potential, PotentialCfg::build),
            control,
            record_times,
            integrator: match self.integrator {
                Some(IntegratorCfg::Picard) => Integrator::Picard,
                _ => Integrator::Strang,
            },
            picard_tol: self.picard_tol.unwrap_or(defaults.picard_tol),
            picard_max_iter: self.picard_max_iter.unwrap_or(defaults.picard_max_iter),
            picard_window: self.picard_window.unwrap_or(defaults.picard_window),
            sobolev_orders: self.sobolev_orders.clone().unwrap_or(defaults.sobolev_orders),
            residual: self.residual.map(|r| ResidualSpec { k: r.k, beta: r.beta }),
            derivative_order: self.derivative_order.unwrap_or(defaults.derivative_order),
            divergence_threshold: self.divergence_threshold.unwrap_or(defaults.divergence_threshold),
        };
        cfg.validate().map_err(|e| CliError::field("simulation", e))?;
        cfg.basis().map_err(|e| CliError::field("simulation", e))?;
        cfg.initial_state
            .build(&cfg.basis().expect("checked above"), seed)
            .map_err(|e| CliError::field("simulation", e))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrichartzSpec {
    /// `null` or a missing value stands for ∞.
    pub q: Option<f64>,
    pub r: Option<f64>,
    #[serde(default)]
    pub s: f64,
    #[serde(default)]
    pub whitelist: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    #[serde(default)]
    pub energy: bool,
    #[serde(default)]
    pub gronwall: Vec<GronwallSpec>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GronwallSpec {
    pub k: u32,
    pub c_hat: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KatoScanSpec {
    #[serde(default = "one")]
    pub dim: usize,
    pub n_modes: usize,
    #[serde(default = "two")]
    pub quad_factor: usize,
    pub beta: f64,
    pub k_max: usize,
    #[serde(default = "one")]
    pub k_step: usize,
    pub window: [f64; 2],
    #[serde(default = "default_n_time")]
    pub n_time: usize,
}

fn default_n_time() -> usize {
    64
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothingSpec {
    pub k: u32,
    pub beta: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn default_alpha() -> f64 {
    0.25
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttainableSection {
    pub n_samples: usize,
    pub control_norm: f64,
    pub intervals: usize,
    pub k: u32,
    pub beta: f64,
    pub cutoffs: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakLimitSpec {
    pub n_list: Vec<u32>,
    #[serde(default = "unit")]
    pub amplitude: f64,
    #[serde(default)]
    pub s: f64,
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSpec {
    pub dts: Vec<f64>,
    #[serde(default = "default_refine")]
    pub refine: usize,
}

fn default_refine() -> usize {
    16
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    /// Structural checks that do not need any numerics: the section for the
    /// chosen experiment is present and no other experiment's section is.
    pub fn check_sections(&self) -> Result<(), CliError> {
        let present = [
            ("simulation", self.simulation.is_some()),
            ("strichartz", self.strichartz.is_some()),
            ("bounds", self.bounds.is_some()),
            ("kato_scan", self.kato_scan.is_some()),
            ("smoothing", self.smoothing.is_some()),
            ("attainable", self.attainable.is_some()),
            ("weak_limit", self.weak_limit.is_some()),
            ("convergence", self.convergence.is_some()),
        ];
        let (required, allowed): (&[&str], &[&str]) = match self.experiment {
            ExperimentKind::Simulate => (&["simulation"], &["strichartz", "bounds"]),
            ExperimentKind::KatoScan => (&["kato_scan"], &[]),
            ExperimentKind::Smoothing => (&["simulation", "smoothing"], &[]),
            ExperimentKind::Attainable => (&["simulation", "attainable"], &[]),
            ExperimentKind::WeakLimit => (&["simulation", "weak_limit"], &[]),
            ExperimentKind::Convergence => (&["simulation", "convergence"], &[]),
        };
        for (name, is_present) in present {
            if required.contains(&name) && !is_present {
                return Err(CliError::Validation(format!(
                    "{name}: required by experiment `{}`",
                    self.experiment.name()
                )));
            }
            if is_present && !required.contains(&name) && !allowed.contains(&name) {
                return Err(CliError::Validation(format!(
                    "{name}: not used by experiment `{}`",
                    self.experiment.name()
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "experiment": "simulate",
        "output": {"dir": "out"},
        "simulation": {
            "n_modes": 16, "sigma": 0, "t_final": 1.0, "dt": 0.01,
            "initial_state": {"type": "eigenstate", "mode": [0]}
        }
    }"#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = ExperimentConfig::parse(MINIMAL).unwrap();
        cfg.check_sections().unwrap();
        assert_eq!(cfg.output.format, Format::Csv);
        let sim = cfg.simulation.unwrap().build(cfg.seed).unwrap();
        assert_eq!(sim.dim, 1);
        assert_eq!(sim.quad_factor, 2);
        assert!(sim.control.is_zero());
    }

    #[test]
    fn unknown_keys_are_rejected_at_every_level() {
        let top = MINIMAL.replacen("\"experiment\"", "\"bogus\": 1, \"experiment\"", 1);
        let nested = MINIMAL.replace("\"mode\": [0]", "\"mode\": [0], \"phase\": 1");
        let sim = MINIMAL.replace("\"dt\": 0.01", "\"dt\": 0.01, \"timestep\": 0.1");
        for text in [top, nested, sim] {
            let err = ExperimentConfig::parse(&text).unwrap_err();
            assert!(err.to_string().contains("unknown field"), "{err}");
        }
    }

    #[test]
    fn validation_names_the_field() {
        let text = MINIMAL.replace("\"dt\": 0.01", "\"dt\": -0.01");
        let cfg = ExperimentConfig::parse(&text).unwrap();
        let err = cfg.simulation.unwrap().build(0).unwrap_err();
        assert!(err.to_string().contains("dt"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn foreign_sections_are_rejected() {
        let text = MINIMAL.replacen("\"output\"", "\"weak_limit\": {\"n_list\": [1]}, \"output\"", 1);
        let cfg = ExperimentConfig::parse(&text).unwrap();
        assert!(cfg.check_sections().unwrap_err().to_string().contains("weak_limit"));
    }
}
