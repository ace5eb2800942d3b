//! Scalar control laws `u(t)` on `[0, T]`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum ControlKind {
    Zero,
    /// `values[j]` on `[jΔ, (j+1)Δ)` with `Δ = T / len`.
    PiecewiseConstant(Vec<f64>),
    /// Samples at `t_j = j T / (len - 1)`, linearly interpolated.
    Sampled(Vec<f64>),
    /// `base(t) + amplitude · sin(2π n t / T)`.
    SinusoidPerturbed {
        base: Box<ControlSignal>,
        amplitude: f64,
        frequency: u32,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControlSignal {
    horizon: f64,
    kind: ControlKind,
}

impl ControlSignal {
    pub fn zero(horizon: f64) -> Self {
        Self {
            horizon,
            kind: ControlKind::Zero,
        }
    }

    pub fn piecewise_constant(horizon: f64, values: Vec<f64>) -> Result<Self> {
        check_horizon(horizon)?;
        if values.is_empty() {
            return Err(Error::param("control.values", "need at least one value"));
        }
        check_finite(&values)?;
        Ok(Self {
            horizon,
            kind: ControlKind::PiecewiseConstant(values),
        })
    }

    pub fn sampled(horizon: f64, values: Vec<f64>) -> Result<Self> {
        check_horizon(horizon)?;
        if values.len() < 2 {
            return Err(Error::param("control.values", "need at least two samples"));
        }
        check_finite(&values)?;
        Ok(Self {
            horizon,
            kind: ControlKind::Sampled(values),
        })
    }

    pub fn sinusoid_perturbed(base: ControlSignal, amplitude: f64, frequency: u32) -> Result<Self> {
        if !amplitude.is_finite() {
            return Err(Error::param("control.amplitude", "must be finite"));
        }
        if frequency == 0 {
            return Err(Error::param("control.frequency", "must be positive"));
        }
        Ok(Self {
            horizon: base.horizon,
            kind: ControlKind::SinusoidPerturbed {
                base: Box::new(base),
                amplitude,
                frequency,
            },
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn kind(&self) -> &ControlKind {
        &self.kind
    }

    pub fn is_zero(&self) -> bool {
        match &self.kind {
            ControlKind::Zero => true,
            ControlKind::PiecewiseConstant(v) | ControlKind::Sampled(v) => v.iter().all(|&x| x == 0.0),
            ControlKind::SinusoidPerturbed { base, amplitude, .. } => *amplitude == 0.0 && base.is_zero(),
        }
    }

    /// `u(t)`, with `t` clamped to `[0, T]`.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.horizon);
        match &self.kind {
            ControlKind::Zero => 0.0,
            ControlKind::PiecewiseConstant(values) => values[self.cell(t, values.len())],
            ControlKind::Sampled(values) => {
                let segs = values.len() - 1;
                let pos = t / self.horizon * segs as f64;
                let j = (pos.floor() as usize).min(segs - 1);
                let frac = pos - j as f64;
                values[j] + frac * (values[j + 1] - values[j])
            }
            ControlKind::SinusoidPerturbed {
                base,
                amplitude,
                frequency,
            } => base.eval(t) + amplitude * (self.omega(*frequency) * t).sin(),
        }
    }

    fn cell(&self, t: f64, len: usize) -> usize {
        let width = self.horizon / len as f64;
        ((t / width).floor() as usize).min(len - 1)
    }

    fn omega(&self, frequency: u32) -> f64 {
        2.0 * PI * frequency as f64 / self.horizon
    }

    /// `∫_a^b u(s) ds`, exact for every kind.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b < a {
            return -self.integral(b, a);
        }
        let a = a.clamp(0.0, self.horizon);
        let b = b.clamp(0.0, self.horizon);
        if b <= a {
            return 0.0;
        }
        match &self.kind {
            ControlKind::Zero => 0.0,
            ControlKind::PiecewiseConstant(values) => {
                let width = self.horizon / values.len() as f64;
                let (ja, jb) = (self.cell(a, values.len()), self.cell(b, values.len()));
                if ja == jb {
                    return values[ja] * (b - a);
                }
                let mut total = values[ja] * ((ja + 1) as f64 * width - a);
                for v in &values[ja + 1..jb] {
                    total += v * width;
                }
                total + values[jb] * (b - jb as f64 * width)
            }
            ControlKind::Sampled(values) => {
                let segs = values.len() - 1;
                let width = self.horizon / segs as f64;
                let ja = ((a / width).floor() as usize).min(segs - 1);
                let jb = ((b / width).floor() as usize).min(segs - 1);
                let mut total = 0.0;
                for j in ja..=jb {
                    let lo = a.max(j as f64 * width);
                    let hi = b.min((j + 1) as f64 * width);
                    if hi > lo {
                        total += 0.5 * (hi - lo) * (self.eval(lo) + self.eval(hi));
                    }
                }
                total
            }
            ControlKind::SinusoidPerturbed {
                base,
                amplitude,
                frequency,
            } => {
                let w = self.omega(*frequency);
                base.integral(a, b) + amplitude * ((w * a).cos() - (w * b).cos()) / w
            }
        }
    }

    /// `‖u‖_{L^r([a, b])}`; exact for piecewise-constant signals, composite
    /// Simpson on a fine grid otherwise.
    pub fn lr_norm(&self, r: f64, a: f64, b: f64) -> Result<f64> {
        if !(r >= 1.0) || !r.is_finite() {
            return Err(Error::param("r", format!("must be finite and >= 1 (got {r})")));
        }
        let a = a.clamp(0.0, self.horizon);
        let b = b.clamp(0.0, self.horizon);
        if b <= a {
            return Ok(0.0);
        }
        let total = match &self.kind {
            ControlKind::Zero => 0.0,
            ControlKind::PiecewiseConstant(values) => {
                let width = self.horizon / values.len() as f64;
                values
                    .iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let lo = a.max(j as f64 * width);
                        let hi = b.min((j + 1) as f64 * width);
                        if hi > lo {
                            v.abs().powf(r) * (hi - lo)
                        } else {
                            0.0
                        }
                    })
                    .sum()
            }
            _ => {
                let panels = self.quadrature_panels(b - a);
                let h = (b - a) / panels as f64;
                let f = |t: f64| self.eval(t).abs().powf(r);
                let mut s = f(a) + f(b);
                for j in 1..panels {
                    s += if j % 2 == 1 { 4.0 } else { 2.0 } * f(a + h * j as f64);
                }
                s * h / 3.0
            }
        };
        Ok(total.powf(1.0 / r))
    }

    fn quadrature_panels(&self, span: f64) -> usize {
        let features = match &self.kind {
            ControlKind::Sampled(v) => v.len(),
            ControlKind::SinusoidPerturbed { base, frequency, .. } => {
                (*frequency as usize).max(base.quadrature_panels(self.horizon) / 64)
            }
            ControlKind::PiecewiseConstant(v) => v.len(),
            ControlKind::Zero => 1,
        };
        let panels = (64.0 * features as f64 * span / self.horizon).ceil() as usize;
        2 * panels.max(64)
    }

    /// `∫_0^t |u(s)| ds`.
    pub fn l1_up_to(&self, t: f64) -> f64 {
        self.lr_norm(1.0, 0.0, t).expect("r = 1 is valid")
    }

    /// Same control with values multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let kind = match &self.kind {
            ControlKind::Zero => ControlKind::Zero,
            ControlKind::PiecewiseConstant(v) => ControlKind::PiecewiseConstant(v.iter().map(|x| x * factor).collect()),
            ControlKind::Sampled(v) => ControlKind::Sampled(v.iter().map(|x| x * factor).collect()),
            ControlKind::SinusoidPerturbed {
                base,
                amplitude,
                frequency,
            } => ControlKind::SinusoidPerturbed {
                base: Box::new(base.scaled(factor)),
                amplitude: amplitude * factor,
                frequency: *frequency,
            },
        };
        Self {
            horizon: self.horizon,
            kind,
        }
    }
}

fn check_horizon(horizon: f64) -> Result<()> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::param("t_final", format!("must be positive (got {horizon})")));
    }
    Ok(())
}

fn check_finite(values: &[f64]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("control.values", "must be finite"));
    }
    Ok(())
}
