use super::residual::slope;
use crate::dynamics::{simulate, SimConfig};
use crate::error::{Error, Result};
use crate::hermite::HermiteBasis;
use crate::parallel;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub dts: Vec<f64>,
    /// `‖ψ_dt(T) - ψ_ref(T)‖_{L²}` per step size.
    pub errors: Vec<f64>,
    pub reference_dt: f64,
    /// Least-squares slope of `log error` against `log dt`.
    pub order: f64,
}

/// Self-convergence of the configured integrator against a run at
/// `min(dts) / refine`.
pub fn self_convergence(
    basis: &HermiteBasis,
    cfg: &SimConfig,
    dts: &[f64],
    refine: usize,
) -> Result<ConvergenceReport> {
    if dts.len() < 2 {
        return Err(Error::param("dts", "need at least two step sizes"));
    }
    if refine < 2 {
        return Err(Error::param("refine", "must be at least 2"));
    }
    let reference_dt = dts.iter().copied().fold(f64::INFINITY, f64::min) / refine as f64;
    let mut all = dts.to_vec();
    all.push(reference_dt);
    let finals = parallel::map(&all, |&dt| {
        let mut c = cfg.clone();
        c.dt = dt;
        c.record_times = vec![c.t_final];
        simulate(basis, &c).map(|t| t.final_state().clone())
    });
    let mut finals = finals.into_iter().collect::<Result<Vec<_>>>()?;
    let reference = finals.pop().expect("reference run");
    let errors: Vec<f64> = finals.iter().map(|f| f.sub(&reference).norm_l2()).collect();
    let points: Vec<(f64, f64)> = dts.iter().zip(&errors).map(|(d, e)| (d.ln(), e.ln())).collect();
    let order = slope(&points).unwrap_or(f64::NAN);
    Ok(ConvergenceReport {
        dts: dts.to_vec(),
        errors,
        reference_dt,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{ControlSignal, InitialState, Nonlinearity};

    #[test]
    fn strang_is_second_order() {
        let cfg = SimConfig {
            sigma: Nonlinearity::Defocusing,
            n_modes: 24,
            t_final: 0.5,
            control: ControlSignal::piecewise_constant(0.5, vec![1.0, -1.0]).unwrap(),
            initial_state: InitialState::Coherent {
                position: vec![1.0],
                momentum: vec![0.0],
            },
            ..Default::default()
        };
        let basis = cfg.basis().unwrap();
        let rep = self_convergence(&basis, &cfg, &[0.02, 0.01, 0.005], 8).unwrap();
        assert!((rep.order - 2.0).abs() < 0.2, "{rep:?}");
    }
}
