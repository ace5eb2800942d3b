use gpe_core::diagnostics::random_control;
use gpe_core::dynamics::*;
use gpe_core::spectral::free_propagate;
use gpe_core::SpectralField;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bump_cfg(sigma: Nonlinearity, control: ControlSignal) -> SimConfig {
    SimConfig {
        sigma,
        n_modes: 64,
        dt: 1e-3,
        control,
        potential: PotentialSpec::gaussian_bump(1.0, 1.0),
        initial_state: InitialState::Coherent {
            position: vec![1.0],
            momentum: vec![0.5],
        },
        ..Default::default()
    }
}

#[test]
fn strang_step_without_forcing_is_free_flow() {
    let cfg = SimConfig {
        initial_state: InitialState::Random { decay: 1.0 },
        ..Default::default()
    };
    let basis = cfg.basis().unwrap();
    let psi0 = cfg.initial_state.build(&basis, 4).unwrap();
    let potential = Potential::build(cfg.potential.clone(), &basis, 1).unwrap();
    let prop = Propagator::new(&basis, &potential, &cfg.control, 0.0);
    let stepped = prop.strang_step(&psi0, 0.0, 0.01).unwrap();
    let free = free_propagate(&basis, &psi0, 0.01).unwrap();
    assert!(stepped.max_abs_diff(&free) < 1e-15);
}

#[test]
fn strang_step_preserves_mass() {
    let u = ControlSignal::piecewise_constant(1.0, vec![3.0]).unwrap();
    let cfg = bump_cfg(Nonlinearity::Defocusing, u);
    let basis = cfg.basis().unwrap();
    let psi0 = cfg.initial_state.build(&basis, 0).unwrap();
    let potential = Potential::build(cfg.potential.clone(), &basis, 1).unwrap();
    let prop = Propagator::new(&basis, &potential, &cfg.control, 1.0);
    let out = prop.strang_step(&psi0, 0.0, 0.01).unwrap();
    assert!((out.norm_l2() - 1.0).abs() < 1e-12);
}

#[test]
fn bilinear_run_conserves_mass() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let u = random_control(&mut rng, 1.0, 16, 1.0).unwrap();
    let cfg = bump_cfg(Nonlinearity::Linear, u);
    let basis = cfg.basis().unwrap();
    let traj = simulate(&basis, &cfg).unwrap();
    assert!((traj.records[1].l2 - traj.records[0].l2).abs() < 1e-10);
}

#[test]
fn defocusing_free_run_conserves_energy() {
    let cfg = bump_cfg(Nonlinearity::Defocusing, ControlSignal::zero(1.0));
    let basis = cfg.basis().unwrap();
    let traj = simulate(&basis, &cfg).unwrap();
    let (e0, e1) = (traj.records[0].energy, traj.records[1].energy);
    assert!((e1 - e0).abs() <= 10.0 * cfg.dt * cfg.dt * e0, "{e0} {e1}");
}

#[test]
fn picard_agrees_with_fine_strang() {
    for sigma in [Nonlinearity::Linear, Nonlinearity::Defocusing] {
        let u = ControlSignal::piecewise_constant(0.1, vec![0.5, -0.3, 0.8, 0.1]).unwrap();
        let mut cfg = bump_cfg(sigma, u);
        cfg.t_final = 0.1;
        cfg.dt = 1e-4;
        cfg.n_modes = 32;
        let basis = cfg.basis().unwrap();
        let strang = simulate(&basis, &cfg).unwrap();
        let picard = picard_solve(&basis, &cfg, 0.1).unwrap();
        let diff = picard.final_state().sub(strang.final_state()).norm_l2();
        assert!(diff < 1e-6, "{sigma:?}: {diff}");
        assert!(picard.max_ratio() < 1.0);
    }
}

#[test]
fn picard_integrator_matches_strang_through_windows() {
    let u = ControlSignal::sampled(0.3, vec![0.0, 1.0, -0.5, 0.2]).unwrap();
    let mut cfg = bump_cfg(Nonlinearity::Linear, u);
    cfg.t_final = 0.3;
    cfg.dt = 5e-4;
    cfg.n_modes = 24;
    let basis = cfg.basis().unwrap();
    let strang = simulate(&basis, &cfg).unwrap();
    cfg.integrator = Integrator::Picard;
    let picard = simulate(&basis, &cfg).unwrap();
    let diff = picard.final_state().sub(strang.final_state()).norm_l2();
    assert!(diff < 1e-6, "{diff}");
}

#[test]
fn runs_are_deterministic() {
    let cfg = SimConfig {
        initial_state: InitialState::Random { decay: 2.0 },
        sigma: Nonlinearity::Defocusing,
        control: ControlSignal::piecewise_constant(1.0, vec![1.0, -1.0]).unwrap(),
        dt: 1e-2,
        seed: 77,
        ..Default::default()
    };
    let basis = cfg.basis().unwrap();
    let a = simulate(&basis, &cfg).unwrap();
    let b = simulate(&basis, &cfg).unwrap();
    assert_eq!(a.records, b.records);
}

#[test]
fn three_dimensional_run() {
    let cfg = SimConfig {
        dim: 3,
        n_modes: 16,
        dt: 1e-2,
        t_final: 0.2,
        sigma: Nonlinearity::Defocusing,
        control: ControlSignal::piecewise_constant(0.2, vec![1.0]).unwrap(),
        potential: PotentialSpec::gaussian_bump(1.0, 1.5).with_center(vec![0.5, 0.0, 0.0]),
        initial_state: InitialState::Coherent {
            position: vec![0.3, 0.0, -0.2],
            momentum: vec![0.0; 3],
        },
        ..Default::default()
    };
    let basis = cfg.basis().unwrap();
    let traj = simulate(&basis, &cfg).unwrap();
    assert!((traj.records[1].l2 - traj.records[0].l2).abs() < 1e-10);
    let h = SpectralField::basis_state(3, 8, &[1, 0, 2]).unwrap();
    assert_eq!(h.coeffs()[64 + 2].re, 1.0);
}
