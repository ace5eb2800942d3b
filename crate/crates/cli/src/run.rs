use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use gpe_core::diagnostics::{
    attainable_ensemble, energy_bound_check, energy_tolerance, gronwall_check, holder_quotient, kato_scan,
    residual_states, self_convergence, smoothing_residual_series, strichartz_norm, sup_tail, weak_limit_experiment,
    AttainableSpec,
};
use gpe_core::dynamics::{energy, simulate, Nonlinearity, Potential, SimConfig};
use gpe_core::spectral::AdmissiblePair;
use gpe_core::HermiteBasis;

use crate::config::{ExperimentConfig, ExperimentKind, SimulationSpec, StrichartzSpec};
use crate::error::CliError;
use crate::output::{emit_records, Table};

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct Summary {
    pub experiment: ExperimentKind,
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub elapsed: Duration,
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} file(s) in {} ({:.3} s)",
            self.experiment.name(),
            self.files.len(),
            self.output_dir.display(),
            self.elapsed.as_secs_f64()
        )
    }
}

pub fn run(config_path: &Path, overrides: &Overrides) -> Result<Summary, CliError> {
    let start = Instant::now();
    let text = std::fs::read_to_string(config_path)
        .map_err(|e| CliError::Validation(format!("config: cannot read {}: {e}", config_path.display())))?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    cfg.check_sections()?;
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = &overrides.output_dir {
        cfg.output.dir = dir.clone();
    }

    let tables = compute(&cfg)?;

    let dir = &cfg.output.dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files = Vec::new();
    for table in &tables {
        let path = dir.join(format!("{}.{}", table.name, cfg.output.format.extension()));
        emit_records(table, cfg.output.format, &path)?;
        files.push(path);
    }
    Ok(Summary {
        experiment: cfg.experiment,
        output_dir: dir.clone(),
        files,
        elapsed: start.elapsed(),
    })
}

fn sim_config(cfg: &ExperimentConfig) -> Result<(SimConfig, HermiteBasis), CliError> {
    let spec: &SimulationSpec = cfg.simulation.as_ref().expect("checked by check_sections");
    let sim = spec.build(cfg.seed)?;
    let basis = sim.basis().map_err(|e| CliError::field("simulation", e))?;
    Ok((sim, basis))
}

fn core(section: &'static str) -> impl Fn(gpe_core::Error) -> CliError {
    move |e| CliError::field(section, e)
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// Runs the experiment; every parameter is validated before the first solve.
pub fn compute(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    match cfg.experiment {
        ExperimentKind::Simulate => run_simulate(cfg),
        ExperimentKind::KatoScan => run_kato(cfg),
        ExperimentKind::Smoothing => run_smoothing(cfg),
        ExperimentKind::Attainable => run_attainable(cfg),
        ExperimentKind::WeakLimit => run_weak_limit(cfg),
        ExperimentKind::Convergence => run_convergence(cfg),
    }
}

fn order_label(s: f64) -> String {
    format!("h_{s}")
}

fn pair_of(spec: &StrichartzSpec, dim: usize) -> Result<AdmissiblePair, CliError> {
    let q = spec.q.unwrap_or(f64::INFINITY);
    let r = spec.r.unwrap_or(f64::INFINITY);
    if !(spec.s >= 0.0) {
        return Err(invalid(format!("strichartz.s: must be >= 0 (got {})", spec.s)));
    }
    if spec.whitelist {
        AdmissiblePair::whitelisted(q, r, dim).map_err(core("strichartz"))
    } else {
        AdmissiblePair::new(q, r, dim).map_err(|e| {
            invalid(format!(
                "strichartz.q/r: {e}; set \"whitelist\": true to report it anyway"
            ))
        })
    }
}

fn run_simulate(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    let (sim, basis) = sim_config(cfg)?;
    let pairs = cfg
        .strichartz
        .iter()
        .flatten()
        .map(|s| Ok((pair_of(s, sim.dim)?, s.s)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let bounds = cfg.bounds.clone().unwrap_or_default();
    if bounds.energy && sim.sigma != Nonlinearity::Defocusing {
        return Err(invalid("bounds.energy: the energy bound needs simulation.sigma = 1"));
    }
    if !bounds.gronwall.is_empty() && sim.sigma != Nonlinearity::Linear {
        return Err(invalid(
            "bounds.gronwall: the Grönwall envelope needs simulation.sigma = 0",
        ));
    }
    for g in &bounds.gronwall {
        if g.k as usize > sim.derivative_order {
            return Err(invalid(format!(
                "bounds.gronwall.k: {} exceeds simulation.derivative_order = {}",
                g.k, sim.derivative_order
            )));
        }
        if !(g.c_hat >= 0.0) || !g.c_hat.is_finite() {
            return Err(invalid("bounds.gronwall.c_hat: must be finite and >= 0"));
        }
    }

    let traj = simulate(&basis, &sim).map_err(core("simulation"))?;

    let mut columns = vec!["t".to_string(), "l2".into(), "energy".into(), "linf".into()];
    columns.extend(sim.sobolev_orders.iter().map(|&s| order_label(s)));
    if sim.residual.is_some() {
        columns.push("residual".into());
    }
    let mut records = Table {
        name: "records".into(),
        columns,
        rows: Vec::new(),
    };
    for rec in &traj.records {
        let mut row = vec![rec.t.into(), rec.l2.into(), rec.energy.into(), rec.linf.into()];
        row.extend(rec.sobolev.iter().map(|&(_, v)| v.into()));
        if let Some(r) = rec.residual_sobolev {
            row.push(r.into());
        }
        records.push(row);
    }
    let mut tables = vec![records];

    if !pairs.is_empty() {
        let mut t = Table::new("strichartz", &["q", "r", "s", "value"]);
        for (pair, s) in pairs {
            let rep = strichartz_norm(&basis, &traj, pair, s).map_err(core("strichartz"))?;
            t.push(vec![pair.q().into(), pair.r().into(), s.into(), rep.value.into()]);
        }
        tables.push(t);
    }
    if bounds.energy || !bounds.gronwall.is_empty() {
        let potential =
            Potential::build(sim.potential.clone(), &basis, sim.derivative_order).map_err(core("simulation"))?;
        if bounds.energy {
            let check =
                energy_bound_check(&basis, &traj, potential.grad_sup(), &sim.control).map_err(core("bounds"))?;
            let mut t = Table::new("energy_bound", &["grad_sup", "tolerance", "holds", "margin"]);
            let e0 = energy(&basis, &traj.psi0).map_err(core("bounds"))?;
            let tol = energy_tolerance(sim.dt, e0);
            t.push(vec![
                potential.grad_sup().into(),
                tol.into(),
                check.holds.into(),
                check.margin.into(),
            ]);
            tables.push(t);
        }
        if !bounds.gronwall.is_empty() {
            let mut t = Table::new("gronwall", &["k", "k_norm", "c_hat", "holds", "margin"]);
            for g in &bounds.gronwall {
                let k_norm = potential
                    .wkinf_norm(g.k as usize)
                    .expect("k checked against derivative_order");
                let check =
                    gronwall_check(&basis, &traj, g.k, k_norm, &sim.control, g.c_hat).map_err(core("bounds"))?;
                t.push(vec![
                    g.k.into(),
                    k_norm.into(),
                    g.c_hat.into(),
                    check.holds.into(),
                    check.margin.into(),
                ]);
            }
            tables.push(t);
        }
    }
    Ok(tables)
}

fn run_kato(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    let spec = cfg.kato_scan.as_ref().expect("checked by check_sections");
    let basis = HermiteBasis::new(spec.dim, spec.n_modes, spec.quad_factor).map_err(core("kato_scan"))?;
    if spec.k_max >= spec.n_modes {
        return Err(invalid(format!(
            "kato_scan.k_max: must be below n_modes = {} (got {})",
            spec.n_modes, spec.k_max
        )));
    }
    if spec.k_step == 0 {
        return Err(invalid("kato_scan.k_step: must be positive"));
    }
    if !(0.0..0.5).contains(&spec.beta) {
        return Err(invalid(format!(
            "kato_scan.beta: must satisfy 0 <= beta < 1/2 (got {})",
            spec.beta
        )));
    }
    if !(spec.window[1] > spec.window[0]) {
        return Err(invalid("kato_scan.window: t1 must exceed t0"));
    }
    if spec.n_time < 16 {
        return Err(invalid("kato_scan.n_time: must be >= 16"));
    }
    let modes: Vec<usize> = (0..=spec.k_max).step_by(spec.k_step).collect();
    let points = kato_scan(&basis, &modes, spec.beta, (spec.window[0], spec.window[1]), spec.n_time)
        .map_err(core("kato_scan"))?;
    let mut t = Table::new("kato", &["k", "functional", "comparison"]);
    for p in points {
        t.push(vec![p.k.into(), p.functional.into(), p.comparison.into()]);
    }
    Ok(vec![t])
}

fn run_smoothing(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    let (sim, basis) = sim_config(cfg)?;
    let spec = cfg.smoothing.expect("checked by check_sections");
    if sim.sigma != Nonlinearity::Linear {
        return Err(invalid("simulation.sigma: the smoothing residual needs sigma = 0"));
    }
    if !(0.0..0.5).contains(&spec.beta) {
        return Err(invalid(format!(
            "smoothing.beta: must satisfy 0 <= beta < 1/2 (got {})",
            spec.beta
        )));
    }
    if !spec.k.is_multiple_of(2) {
        return Err(invalid(format!("smoothing.k: must be even (got {})", spec.k)));
    }
    if !(spec.alpha > 0.0 && spec.alpha <= 1.0) {
        return Err(invalid(format!(
            "smoothing.alpha: must lie in (0, 1] (got {})",
            spec.alpha
        )));
    }
    let traj = simulate(&basis, &sim).map_err(core("simulation"))?;
    let series = smoothing_residual_series(&basis, &traj, spec.k, spec.beta).map_err(core("smoothing"))?;
    let mut residual = Table::new("residual", &["t", "residual"]);
    for (t, r) in series {
        residual.push(vec![t.into(), r.into()]);
    }
    let states = residual_states(&basis, &traj).map_err(core("smoothing"))?;
    let est = holder_quotient(
        &basis,
        &states,
        spec.k as f64 + spec.beta,
        spec.alpha,
        sim.dt * (1.0 - 1e-9),
    )
    .map_err(core("smoothing"))?;
    let mut holder = Table::new("holder", &["alpha", "quotient_sup", "fitted_alpha", "pairs"]);
    holder.push(vec![
        est.alpha.into(),
        est.quotient_sup.into(),
        est.fitted_alpha.unwrap_or(f64::NAN).into(),
        est.pairs.into(),
    ]);
    Ok(vec![residual, holder])
}

fn run_attainable(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    let (sim, basis) = sim_config(cfg)?;
    let sec = cfg.attainable.as_ref().expect("checked by check_sections");
    if sec.cutoffs.is_empty() || sec.cutoffs.iter().any(|c| !c.is_finite()) {
        return Err(invalid("attainable.cutoffs: need at least one finite cutoff"));
    }
    let spec = AttainableSpec {
        n_samples: sec.n_samples,
        control_norm: sec.control_norm,
        intervals: sec.intervals,
        k: sec.k,
        beta: sec.beta,
        cutoffs: sec.cutoffs.clone(),
        seed: cfg.seed,
    };
    let profiles = attainable_ensemble(&basis, &sim, &spec).map_err(core("attainable"))?;
    let mut tails = Table::new("tails", &["sample", "t", "cutoff", "tail_mass"]);
    for p in &profiles {
        for (c, m) in p.cutoffs.iter().zip(&p.tail_mass) {
            tails.push(vec![p.sample.into(), p.t.into(), (*c).into(), (*m).into()]);
        }
    }
    let mut sup = Table::new("sup_tails", &["cutoff", "sup_tail_mass"]);
    for (j, c) in spec.cutoffs.iter().enumerate() {
        sup.push(vec![(*c).into(), sup_tail(&profiles, j).into()]);
    }
    Ok(vec![tails, sup])
}

fn run_weak_limit(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    let (sim, basis) = sim_config(cfg)?;
    let spec = cfg.weak_limit.as_ref().expect("checked by check_sections");
    if !(spec.s >= 0.0) {
        return Err(invalid("weak_limit.s: must be >= 0"));
    }
    let errs = weak_limit_experiment(&basis, &sim, &spec.n_list, spec.amplitude, spec.s).map_err(core("weak_limit"))?;
    let mut t = Table::new("weak_limit", &["n", "err"]);
    for (n, e) in errs {
        t.push(vec![n.into(), e.into()]);
    }
    Ok(vec![t])
}

fn run_convergence(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    let (sim, basis) = sim_config(cfg)?;
    let spec = cfg.convergence.as_ref().expect("checked by check_sections");
    if spec.dts.iter().any(|&d| !(d > 0.0) || d > sim.t_final) {
        return Err(invalid("convergence.dts: every step must lie in (0, t_final]"));
    }
    let rep = self_convergence(&basis, &sim, &spec.dts, spec.refine).map_err(core("convergence"))?;
    let mut errors = Table::new("convergence", &["dt", "error"]);
    for (dt, e) in rep.dts.iter().zip(&rep.errors) {
        errors.push(vec![(*dt).into(), (*e).into()]);
    }
    let mut order = Table::new("convergence_order", &["reference_dt", "order"]);
    order.push(vec![rep.reference_dt.into(), rep.order.into()]);
    Ok(vec![errors, order])
}
