//! Browser bindings for three interactive views: density evolution under a
//! constant control, the Kato functional scan, and the weak-limit curve.
//!
//! Each export returns a flat `Float64Array`; the layouts are documented on
//! the pure-Rust functions, which are also what the native tests exercise.

use gpe_core::diagnostics::{kato_scan, weak_limit_experiment};
use gpe_core::dynamics::{
    simulate, uniform_times, ControlSignal, InitialState, Nonlinearity, PotentialSpec, SimConfig,
};
use gpe_core::HermiteBasis;
use wasm_bindgen::prelude::*;

/// Half-width of the plotted interval `[-X_MAX, X_MAX]`.
pub const X_MAX: f64 = 8.0;
const MAX_MODES: usize = 256;
const MAX_KATO_K: usize = 384;

fn nonlinearity(sigma: i32) -> Result<Nonlinearity, String> {
    Nonlinearity::try_from(sigma as i64).map_err(|e| e.to_string())
}

fn demo_config(n_modes: usize, sigma: i32, control: f64, x0: f64, t_final: f64) -> Result<SimConfig, String> {
    if !(2..=MAX_MODES).contains(&n_modes) {
        return Err(format!("n_modes must lie in 2..={MAX_MODES}"));
    }
    if !(t_final > 0.0 && t_final <= 20.0) {
        return Err("t_final must lie in (0, 20]".into());
    }
    Ok(SimConfig {
        n_modes,
        sigma: nonlinearity(sigma)?,
        t_final,
        dt: (t_final / 2000.0).min(1e-2),
        initial_state: InitialState::Coherent {
            position: vec![x0],
            momentum: vec![0.0],
        },
        potential: PotentialSpec::gaussian_bump(1.0, 1.0),
        control: ControlSignal::piecewise_constant(t_final, vec![control]).map_err(|e| e.to_string())?,
        sobolev_orders: Vec::new(),
        ..Default::default()
    })
}

/// `|ψ(t, x)|²` on `points` equispaced `x ∈ [-X_MAX, X_MAX]` at `frames + 1`
/// equispaced times; row-major, one row per frame.
pub fn density_frames(
    n_modes: usize,
    sigma: i32,
    control: f64,
    x0: f64,
    t_final: f64,
    frames: usize,
    points: usize,
) -> Result<Vec<f64>, String> {
    if frames == 0 || frames > 400 || !(2..=1024).contains(&points) {
        return Err("frames must lie in 1..=400 and points in 2..=1024".into());
    }
    let mut cfg = demo_config(n_modes, sigma, control, x0, t_final)?;
    cfg.record_times = uniform_times(t_final, frames);
    let basis = cfg.basis().map_err(|e| e.to_string())?;
    let traj = simulate(&basis, &cfg).map_err(|e| e.to_string())?;
    let axis: Vec<f64> = (0..points)
        .map(|j| -X_MAX + 2.0 * X_MAX * j as f64 / (points - 1) as f64)
        .collect();
    let mut out = Vec::with_capacity((frames + 1) * points);
    for rec in &traj.records {
        let values = basis.synthesize_on(&rec.state, &axis).map_err(|e| e.to_string())?;
        out.extend(values.iter().map(|v| v.norm_sqr()));
    }
    Ok(out)
}

/// Kato functional of `h_k` for `k = 0..=k_max` followed by the comparison
/// norms `(2k+1)^β`: `2 (k_max + 1)` values.
pub fn kato_curve(beta: f64, k_max: usize) -> Result<Vec<f64>, String> {
    if k_max > MAX_KATO_K {
        return Err(format!("k_max must not exceed {MAX_KATO_K}"));
    }
    if !(beta > 0.0 && beta < 0.5) {
        return Err("beta must lie in (0, 1/2)".into());
    }
    let basis = HermiteBasis::new(1, k_max + 64, 2).map_err(|e| e.to_string())?;
    let modes: Vec<usize> = (0..=k_max).collect();
    let window = (-2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI);
    let points = kato_scan(&basis, &modes, beta, window, 32).map_err(|e| e.to_string())?;
    Ok(points
        .iter()
        .map(|p| p.functional)
        .chain(points.iter().map(|p| p.comparison))
        .collect())
}

/// `(n, err(n))` pairs for `n = 1, 2, 4, …, ≤ n_max`, flattened.
pub fn weak_limit_curve(sigma: i32, amplitude: f64, n_max: u32) -> Result<Vec<f64>, String> {
    if !(1..=256).contains(&n_max) {
        return Err("n_max must lie in 1..=256".into());
    }
    let mut cfg = demo_config(64, sigma, 0.5, 1.0, 1.0)?;
    cfg.dt = 1e-3;
    let basis = cfg.basis().map_err(|e| e.to_string())?;
    let n_list: Vec<u32> = std::iter::successors(Some(1u32), |n| Some(n * 2))
        .take_while(|&n| n <= n_max)
        .collect();
    let errs = weak_limit_experiment(&basis, &cfg, &n_list, amplitude, 0.0).map_err(|e| e.to_string())?;
    Ok(errs.iter().flat_map(|&(n, e)| [n as f64, e]).collect())
}

#[wasm_bindgen(js_name = densityFrames)]
pub fn density_frames_js(
    n_modes: usize,
    sigma: i32,
    control: f64,
    x0: f64,
    t_final: f64,
    frames: usize,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    density_frames(n_modes, sigma, control, x0, t_final, frames, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = katoCurve)]
pub fn kato_curve_js(beta: f64, k_max: usize) -> Result<Vec<f64>, JsError> {
    kato_curve(beta, k_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = weakLimitCurve)]
pub fn weak_limit_curve_js(sigma: i32, amplitude: f64, n_max: u32) -> Result<Vec<f64>, JsError> {
    weak_limit_curve(sigma, amplitude, n_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = xMax)]
pub fn x_max() -> f64 {
    X_MAX
}
