//! Acceptance suite: one PASS/FAIL line per criterion. Run with
//! `cargo test -p gpe-cli --test acceptance`.

use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use gpe_core::diagnostics::{
    attainable_ensemble, calibrate_gronwall, energy_bound_check, energy_tolerance, gronwall_check, kato_scan,
    mode_cutoff, seeded_control, self_convergence, smoothing_residual_series, sup_tail, weak_limit_experiment,
    AttainableSpec,
};
use gpe_core::dynamics::{
    energy, picard_solve, simulate, uniform_times, ControlSignal, InitialState, Nonlinearity, Potential, PotentialKind,
    PotentialSpec, SimConfig,
};
use gpe_core::spectral::{linf_norm, sobolev_norm, LinfMode};
use gpe_core::{HermiteBasis, SpectralField};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), Box<dyn Error>>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "transform round trip",
            budget: Some(Duration::from_secs(10)),
            run: transform_round_trip,
        },
        Criterion {
            id: 2,
            name: "eigenstructure",
            budget: None,
            run: eigenstructure,
        },
        Criterion {
            id: 3,
            name: "mass conservation",
            budget: None,
            run: conservation,
        },
        Criterion {
            id: 4,
            name: "Strang order",
            budget: Some(Duration::from_secs(60)),
            run: strang_order,
        },
        Criterion {
            id: 5,
            name: "Picard oracle",
            budget: None,
            run: picard_oracle,
        },
        Criterion {
            id: 6,
            name: "energy bound",
            budget: None,
            run: energy_bound,
        },
        Criterion {
            id: 7,
            name: "Gronwall envelope",
            budget: None,
            run: gronwall_envelope,
        },
        Criterion {
            id: 8,
            name: "Kato plateau",
            budget: Some(Duration::from_secs(120)),
            run: kato_plateau,
        },
        Criterion {
            id: 9,
            name: "smoothing residual",
            budget: None,
            run: smoothing_residual,
        },
        Criterion {
            id: 10,
            name: "weak-control continuity",
            budget: None,
            run: weak_continuity,
        },
        Criterion {
            id: 11,
            name: "compactness proxy",
            budget: None,
            run: compactness_proxy,
        },
        Criterion {
            id: 12,
            name: "CLI determinism",
            budget: None,
            run: cli_determinism,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let (mut pass, mut detail) = match (c.run)() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        let elapsed = start.elapsed();
        if let Some(budget) = c.budget {
            if elapsed > budget {
                pass = false;
                detail.push_str(&format!("; over budget of {} s", budget.as_secs()));
            }
        }
        failed += usize::from(!pass);
        println!(
            "criterion {:>2} {:<24} {} ({:.2} s): {}",
            c.id,
            c.name,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn random_field(rng: &mut ChaCha8Rng, basis: &HermiteBasis) -> SpectralField {
    let coeffs = (0..basis.spectral_len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    SpectralField::from_coeffs(basis.dim(), basis.n_modes(), coeffs).unwrap()
}

/// Widths stay ≥ 1 so that the runs are resolved at `N = 64`; narrower
/// potentials lose mass to the mode cutoff (about 5e-9 at width 0.5).
fn random_potential(rng: &mut ChaCha8Rng) -> PotentialSpec {
    let kind = match rng.gen_range(0..3) {
        0 => PotentialKind::GaussianBump,
        1 => PotentialKind::Sech,
        _ => PotentialKind::PolynomialDecay { power: 2.0 },
    };
    PotentialSpec {
        kind,
        amplitude: rng.gen_range(0.5..2.0),
        width: rng.gen_range(1.0..2.0),
        center: vec![rng.gen_range(-1.0..1.0)],
    }
}

fn coherent(rng: &mut ChaCha8Rng) -> InitialState {
    InitialState::Coherent {
        position: vec![rng.gen_range(-2.0..2.0)],
        momentum: vec![rng.gen_range(-1.0..1.0)],
    }
}

/// A random σ-run on `[0, 1]` with `N = 64`, `dt = 1e-3`.
fn random_run(rng: &mut ChaCha8Rng, sigma: Nonlinearity, stream: u64) -> Result<SimConfig, Box<dyn Error>> {
    let intervals = rng.gen_range(4..=20);
    let norm = rng.gen_range(0.5..2.0);
    Ok(SimConfig {
        n_modes: 64,
        sigma,
        initial_state: coherent(rng),
        potential: random_potential(rng),
        control: seeded_control(1.0, intervals, norm, 2024, stream)?,
        record_times: uniform_times(1.0, 20),
        ..Default::default()
    })
}

fn transform_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0_f64;
    for (dim, n) in [(1, 8), (1, 32), (1, 128), (3, 4), (3, 8), (3, 16)] {
        let basis = HermiteBasis::new(dim, n, 2)?;
        for _ in 0..100 {
            let f = random_field(&mut rng, &basis);
            let back = basis.to_spectral(&basis.to_grid(&f)?)?;
            worst = worst.max(back.max_abs_diff(&f));
        }
    }
    Ok((
        worst <= 1e-12,
        format!("max coefficient error {worst:.2e} over 600 fields"),
    ))
}

fn eigenstructure() -> Outcome {
    let basis = HermiteBasis::new(1, 65, 2)?;
    let mut worst = 0.0_f64;
    for k in 0..=64 {
        let h = SpectralField::basis_state(1, 65, &[k])?;
        for s in [0.0, 1.0, 2.0, 4.0] {
            let exact = (2.0 * k as f64 + 1.0).powf(s / 2.0);
            worst = worst.max((sobolev_norm(&basis, &h, s)? - exact).abs() / exact);
        }
    }
    Ok((worst <= 1e-13, format!("max relative error {worst:.2e}")))
}

fn conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let basis = HermiteBasis::new(1, 64, 2)?;
    let mut worst = 0.0_f64;
    for i in 0..20 {
        let sigma = if i % 2 == 0 {
            Nonlinearity::Linear
        } else {
            Nonlinearity::Defocusing
        };
        let mut cfg = random_run(&mut rng, sigma, i)?;
        cfg.record_times = vec![0.0, 1.0];
        let traj = simulate(&basis, &cfg)?;
        let m0 = traj.records[0].l2;
        worst = worst.max((traj.records[1].l2 - m0).abs() / m0);
    }
    Ok((
        worst <= 1e-10,
        format!("max relative L2 drift {worst:.2e} over 20 runs"),
    ))
}

fn strang_order() -> Outcome {
    let cfg = SimConfig {
        n_modes: 64,
        sigma: Nonlinearity::Defocusing,
        initial_state: InitialState::Coherent {
            position: vec![1.0],
            momentum: vec![0.5],
        },
        potential: PotentialSpec::gaussian_bump(1.0, 1.0),
        // pieces of length 0.1 fall on every step grid below
        control: ControlSignal::piecewise_constant(1.0, vec![0.8, -0.4, 1.2, 0.3, -1.0, 0.6, 0.9, -0.2, 0.4, -0.7])?,
        ..Default::default()
    };
    let basis = cfg.basis()?;
    let report = self_convergence(&basis, &cfg, &[4e-3, 2e-3, 1e-3, 5e-4], 16)?;
    let errors: Vec<String> = report.errors.iter().map(|e| format!("{e:.2e}")).collect();
    Ok((
        (report.order - 2.0).abs() <= 0.2,
        format!("slope {:.4} (errors {})", report.order, errors.join(", ")),
    ))
}

fn picard_oracle() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for sigma in [Nonlinearity::Linear, Nonlinearity::Defocusing] {
        let mut met = 0;
        for amp in [0.5, 2.0, 8.0, 40.0] {
            let cfg = SimConfig {
                n_modes: 64,
                sigma,
                t_final: 0.1,
                dt: 1e-4,
                initial_state: InitialState::Coherent {
                    position: vec![0.5],
                    momentum: vec![0.0],
                },
                potential: PotentialSpec::gaussian_bump(1.0, 1.0),
                control: ControlSignal::piecewise_constant(0.1, vec![amp, -0.5 * amp, 0.75 * amp, amp])?,
                record_times: uniform_times(0.1, 10),
                ..Default::default()
            };
            let basis = cfg.basis()?;
            let k_sup = Potential::build(cfg.potential.clone(), &basis, 0)?
                .wkinf_norm(0)
                .unwrap();
            let strang = simulate(&basis, &cfg)?;
            let mut linf = 0.0_f64;
            for rec in &strang.records {
                linf = linf.max(linf_norm(&basis, &rec.state, LinfMode::Refined)?);
            }
            let linf_sq = linf * linf;
            // Lipschitz constant of the Duhamel map in L^∞_t L² (c = 1 for k = 0);
            // the cubic term is Lipschitz with 3‖ψ‖²_∞ on the ball
            let lip = cfg.control.l1_up_to(0.1) * k_sup + 3.0 * sigma.sigma().abs() * 0.1 * linf_sq;
            match picard_solve(&basis, &cfg, 0.1) {
                Ok(out) => {
                    let diff = out.final_state().sub(strang.final_state()).norm_l2();
                    let ratio = out.max_ratio();
                    if lip < 1.0 {
                        met += 1;
                        pass &= diff <= 1e-6 && ratio < 1.0;
                    }
                    details.push(format!(
                        "σ={} |u|={amp}: L={lip:.2} ratio={ratio:.3} diff={diff:.1e}",
                        sigma.sigma()
                    ));
                }
                Err(e) => {
                    pass &= lip >= 1.0;
                    details.push(format!(
                        "σ={} |u|={amp}: L={lip:.2} no convergence ({e})",
                        sigma.sigma()
                    ));
                }
            }
        }
        pass &= met >= 2;
    }
    Ok((pass, details.join("; ")))
}

fn energy_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let basis = HermiteBasis::new(1, 64, 2)?;
    let mut worst = f64::INFINITY;
    let mut pass = true;
    for i in 0..20 {
        let cfg = random_run(&mut rng, Nonlinearity::Defocusing, 100 + i)?;
        let grad_sup = Potential::build(cfg.potential.clone(), &basis, 1)?.grad_sup();
        let traj = simulate(&basis, &cfg)?;
        let check = energy_bound_check(&basis, &traj, grad_sup, &cfg.control)?;
        let tol = energy_tolerance(cfg.dt, energy(&basis, &traj.psi0)?);
        pass &= check.holds;
        worst = worst.min(check.margin / tol);
    }
    let mut cfg = random_run(&mut rng, Nonlinearity::Defocusing, 200)?;
    cfg.control = ControlSignal::zero(1.0);
    let traj = simulate(&basis, &cfg)?;
    let e0 = energy(&basis, &traj.psi0)?;
    let drift = traj.records.iter().map(|r| (r.energy - e0).abs()).fold(0.0, f64::max);
    let tol = energy_tolerance(cfg.dt, e0);
    pass &= drift <= tol;
    Ok((
        pass,
        format!("min margin / tolerance {worst:.3e} over 20 runs; u=0 drift {drift:.2e} vs tolerance {tol:.2e}"),
    ))
}

fn gronwall_run(rng: &mut ChaCha8Rng, stream: u64, constant_sign: bool) -> Result<SimConfig, Box<dyn Error>> {
    let mut cfg = random_run(rng, Nonlinearity::Linear, stream)?;
    if constant_sign {
        let values: Vec<f64> = (0..8).map(|_| rng.gen_range(0.2..2.0)).collect();
        cfg.control = ControlSignal::piecewise_constant(1.0, values)?;
    }
    Ok(cfg)
}

fn gronwall_envelope() -> Outcome {
    let basis = HermiteBasis::new(1, 64, 2)?;
    let ks = [0u32, 2];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut c_hat = 0.0_f64;
    for i in 0..12 {
        let cfg = gronwall_run(&mut rng, 300 + i, i % 2 == 0)?;
        let potential = Potential::build(cfg.potential.clone(), &basis, 2)?;
        let traj = simulate(&basis, &cfg)?;
        for k in ks {
            let k_norm = potential.wkinf_norm(k as usize).unwrap();
            c_hat = c_hat.max(calibrate_gronwall(&basis, &traj, k, k_norm, &cfg.control)?);
        }
    }
    let mut worst = f64::INFINITY;
    let mut pass = true;
    for i in 0..20 {
        let cfg = gronwall_run(&mut rng, 400 + i, i % 3 == 0)?;
        let potential = Potential::build(cfg.potential.clone(), &basis, 2)?;
        let traj = simulate(&basis, &cfg)?;
        for k in ks {
            let k_norm = potential.wkinf_norm(k as usize).unwrap();
            let check = gronwall_check(&basis, &traj, k, k_norm, &cfg.control, c_hat)?;
            pass &= check.margin >= 0.0;
            worst = worst.min(check.margin);
        }
    }
    Ok((
        pass,
        format!("calibrated c = {c_hat:.4}; min margin {worst:.3e} over 20 fresh runs, k in {{0, 2}}"),
    ))
}

fn kato_plateau() -> Outcome {
    let basis = HermiteBasis::new(1, 320, 2)?;
    let modes: Vec<usize> = (0..=256).collect();
    let window = (-2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI);
    let points = kato_scan(&basis, &modes, 0.45, window, 32)?;
    let max = points.iter().map(|p| p.functional).fold(0.0, f64::max);
    let at16 = points[16].functional;
    let growth = points[256].comparison / points[0].comparison;
    Ok((
        max <= 3.0 * at16 && growth > 10.0,
        format!("max functional {max:.4} vs 3 x {at16:.4}; comparison growth {growth:.2}x"),
    ))
}

fn smoothing_residual() -> Outcome {
    let beta = 0.4;
    let basis = HermiteBasis::new(1, 64, 2)?;
    let free = SimConfig {
        n_modes: 64,
        initial_state: InitialState::Random { decay: 1.0 },
        record_times: uniform_times(1.0, 20),
        ..Default::default()
    };
    let traj = simulate(&basis, &free)?;
    let idle = smoothing_residual_series(&basis, &traj, 0, beta)?
        .iter()
        .map(|p| p.1)
        .fold(0.0, f64::max);

    let basis = HermiteBasis::new(1, 256, 2)?;
    let mut caps = Vec::new();
    for k0 in [32usize, 64, 128] {
        let h = SpectralField::basis_state(1, 256, &[k0])?;
        let scale = sobolev_norm(&basis, &h, beta)?;
        let mut cap = 0.0_f64;
        for stream in 0..6 {
            let norm = if stream == 0 { 1.0 } else { 0.5 + 0.1 * stream as f64 };
            let cfg = SimConfig {
                n_modes: 256,
                initial_state: InitialState::Eigenstate { mode: vec![k0] },
                control: seeded_control(1.0, 10, norm, 99, stream)?,
                record_times: uniform_times(1.0, 10),
                ..Default::default()
            };
            let traj = simulate(&basis, &cfg)?;
            for (_, r) in smoothing_residual_series(&basis, &traj, 0, beta)? {
                cap = cap.max(r / scale);
            }
        }
        caps.push(cap);
    }
    Ok((
        idle <= 1e-11 && caps[2] <= 2.0 * caps[0],
        format!(
            "u=0 residual {idle:.1e}; cap(32)={:.4} cap(64)={:.4} cap(128)={:.4}",
            caps[0], caps[1], caps[2]
        ),
    ))
}

fn weak_continuity() -> Outcome {
    let n_list = [1u32, 2, 4, 8, 16, 32, 64];
    let mut pass = true;
    let mut details = Vec::new();
    for sigma in [Nonlinearity::Linear, Nonlinearity::Defocusing] {
        let mut curves = Vec::new();
        for dt in [1e-3, 5e-4] {
            let cfg = SimConfig {
                n_modes: 64,
                sigma,
                dt,
                initial_state: InitialState::Coherent {
                    position: vec![1.0],
                    momentum: vec![0.0],
                },
                potential: PotentialSpec::gaussian_bump(1.0, 1.0),
                control: ControlSignal::piecewise_constant(1.0, vec![0.5, -0.25, 0.75, 0.25])?,
                ..Default::default()
            };
            let basis = cfg.basis()?;
            curves.push(weak_limit_experiment(&basis, &cfg, &n_list, 1.0, 0.0)?);
        }
        let mut change = 0.0_f64;
        for (a, b) in curves[0].iter().zip(&curves[1]) {
            change = change.max((a.1 - b.1).abs() / b.1);
        }
        for c in &curves {
            pass &= c[6].1 <= c[0].1 / 4.0;
        }
        pass &= change <= 0.2;
        details.push(format!(
            "σ={}: err(1)={:.3e} err(64)={:.3e} max dt-halving change {:.2e}",
            sigma.sigma(),
            curves[1][0].1,
            curves[1][6].1,
            change
        ));
    }
    Ok((pass, details.join("; ")))
}

fn compactness_proxy() -> Outcome {
    let low = mode_cutoff(1, 16);
    let high = mode_cutoff(1, 48);
    let spec = AttainableSpec {
        n_samples: 64,
        control_norm: 1.0,
        intervals: 10,
        k: 0,
        beta: 0.4,
        cutoffs: vec![low, high],
        seed: 11,
    };
    let mut sups = Vec::new();
    for n in [64, 128] {
        let template = SimConfig {
            n_modes: n,
            initial_state: InitialState::Coherent {
                position: vec![3.0],
                momentum: vec![0.0],
            },
            potential: PotentialSpec::gaussian_bump(1.0, 1.0),
            ..Default::default()
        };
        let basis = template.basis()?;
        let profiles = attainable_ensemble(&basis, &template, &spec)?;
        sups.push((sup_tail(&profiles, 0), sup_tail(&profiles, 1)));
    }
    let (lo64, hi64) = sups[0];
    let (lo128, hi128) = sups[1];
    let within = |a: f64, b: f64| a <= 2.0 * b && b <= 2.0 * a;
    Ok((
        hi64 <= 0.05 * lo64 && within(lo64, lo128) && within(hi64, hi128),
        format!("N=64: tail(Λ={low})={lo64:.3e} tail(Λ={high})={hi64:.3e}; N=128: {lo128:.3e}, {hi128:.3e}"),
    ))
}

fn run_cli(config: &Path, out: &Path) -> Result<std::process::Output, Box<dyn Error>> {
    Ok(Command::new(env!("CARGO_BIN_EXE_gpe"))
        .arg("run")
        .arg("--config")
        .arg(config)
        .arg("--output-override")
        .arg(out)
        .output()?)
}

fn sorted_files(dir: &Path) -> Result<Vec<PathBuf>, Box<dyn Error>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    files.sort();
    Ok(files)
}

fn cli_determinism() -> Outcome {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let scratch = tempfile::tempdir()?;
    let mut problems = Vec::new();
    let configs = sorted_files(&root.join("configs"))?;
    for config in &configs {
        let stem = config.file_stem().unwrap().to_string_lossy().to_string();
        let a = scratch.path().join(format!("{stem}_a"));
        let b = scratch.path().join(format!("{stem}_b"));
        for dir in [&a, &b] {
            let out = run_cli(config, dir)?;
            if out.status.code() != Some(0) {
                problems.push(format!("{stem} exited {:?}", out.status.code()));
            }
        }
        let (fa, fb) = (sorted_files(&a)?, sorted_files(&b)?);
        let names = |v: &[PathBuf]| v.iter().map(|p| p.file_name().unwrap().to_owned()).collect::<Vec<_>>();
        if fa.is_empty() || names(&fa) != names(&fb) {
            problems.push(format!("{stem}: output file sets differ"));
            continue;
        }
        for (x, y) in fa.iter().zip(&fb) {
            if fs::read(x)? != fs::read(y)? {
                problems.push(format!("{stem}: {} differs", x.display()));
            }
        }
    }
    let malformed = sorted_files(&root.join("tests/fixtures/malformed"))?;
    for config in &malformed {
        let out = run_cli(config, &scratch.path().join("malformed"))?;
        if out.status.code() != Some(2) {
            problems.push(format!("{} exited {:?}", config.display(), out.status.code()));
        }
    }
    let detail = format!(
        "{} configs byte-identical across two runs, {} malformed configs exit 2",
        configs.len(),
        malformed.len()
    );
    if problems.is_empty() {
        Ok((true, detail))
    } else {
        Ok((false, format!("{detail}; problems: {}", problems.join("; "))))
    }
}
