use crate::error::{Error, Result};
use crate::numerics::{vec_norm, VecNorm, Vector};

/// Number of uniform sample points used by the admissibility check.
pub const ADMISSIBILITY_GRID: usize = 10_000;
const ADMISSIBILITY_SLACK: f64 = 1e-12;

/// Time-parameterized input on `[0, t_f]`.
///
/// All shapes carry one value per channel. Means and energies are computed in
/// closed form; no shape needs numerical quadrature.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSignal {
    Constant(Vector),
    /// `a_i sin(ω_i t + φ_i)` per channel.
    Sinusoid {
        amplitude: Vector,
        omega: Vector,
        phase: Vector,
    },
    /// `a_i e^{-k t}`.
    ExponentialDecay {
        amplitude: Vector,
        rate: f64,
    },
    /// Constant with entries in `{-1, 0, +1}`.
    SignConstant(Vector),
    /// `values[i]` on `[breakpoints[i], breakpoints[i+1])`; the last value holds
    /// until the end of the horizon.
    PiecewiseConstant {
        breakpoints: Vec<f64>,
        values: Vec<Vector>,
    },
}

impl InputSignal {
    pub fn constant(values: &[f64]) -> Self {
        Self::Constant(Vector::from_column_slice(values))
    }

    /// Same sinusoid on every channel.
    pub fn sinusoid(dim: usize, amplitude: f64, omega: f64, phase: f64) -> Self {
        Self::Sinusoid {
            amplitude: Vector::from_element(dim, amplitude),
            omega: Vector::from_element(dim, omega),
            phase: Vector::from_element(dim, phase),
        }
    }

    pub fn exponential_decay(dim: usize, amplitude: f64, rate: f64) -> Self {
        Self::ExponentialDecay {
            amplitude: Vector::from_element(dim, amplitude),
            rate,
        }
    }

    pub fn piecewise(breakpoints: Vec<f64>, values: Vec<Vector>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::Argument(
                "piecewise signal needs one value per breakpoint".into(),
            ));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::Argument("first breakpoint must be 0".into()));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Argument(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        let dim = values[0].len();
        if values.iter().any(|v| v.len() != dim) {
            return Err(Error::Dimension("piecewise values differ in length".into()));
        }
        Ok(Self::PiecewiseConstant {
            breakpoints,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Constant(c) | Self::SignConstant(c) => c.len(),
            Self::Sinusoid { amplitude, .. } => amplitude.len(),
            Self::ExponentialDecay { amplitude, .. } => amplitude.len(),
            Self::PiecewiseConstant { values, .. } => values[0].len(),
        }
    }

    pub fn eval(&self, t: f64) -> Vector {
        match self {
            Self::Constant(c) | Self::SignConstant(c) => c.clone(),
            Self::Sinusoid {
                amplitude,
                omega,
                phase,
            } => Vector::from_iterator(
                amplitude.len(),
                (0..amplitude.len()).map(|i| amplitude[i] * (omega[i] * t + phase[i]).sin()),
            ),
            Self::ExponentialDecay { amplitude, rate } => amplitude * (-rate * t).exp(),
            Self::PiecewiseConstant {
                breakpoints,
                values,
            } => {
                let idx = breakpoints.partition_point(|&b| b <= t).saturating_sub(1);
                values[idx].clone()
            }
        }
    }

    /// Interior points of `(0, t_f)` where the signal jumps.
    pub fn discontinuities(&self, t_f: f64) -> Vec<f64> {
        match self {
            Self::PiecewiseConstant { breakpoints, .. } => breakpoints
                .iter()
                .copied()
                .filter(|&b| b > 0.0 && b < t_f)
                .collect(),
            _ => Vec::new(),
        }
    }

    /// `(1/t_f) ∫₀^{t_f} u(t) dt`.
    pub fn mean(&self, t_f: f64) -> Vector {
        match self {
            Self::Constant(c) | Self::SignConstant(c) => c.clone(),
            Self::Sinusoid {
                amplitude,
                omega,
                phase,
            } => Vector::from_iterator(
                amplitude.len(),
                (0..amplitude.len()).map(|i| {
                    let (a, w, p) = (amplitude[i], omega[i], phase[i]);
                    if w == 0.0 {
                        a * p.sin()
                    } else {
                        a * (p.cos() - (w * t_f + p).cos()) / (w * t_f)
                    }
                }),
            ),
            Self::ExponentialDecay { amplitude, rate } => {
                if *rate == 0.0 {
                    amplitude.clone()
                } else {
                    amplitude * (-(-rate * t_f).exp_m1() / (rate * t_f))
                }
            }
            Self::PiecewiseConstant { .. } => {
                let mut acc = Vector::zeros(self.dim());
                for (span, value) in self.pieces(t_f) {
                    acc += value * span;
                }
                acc / t_f
            }
        }
    }

    /// `∫₀^{t_f} ‖u(t)‖₂² dt`.
    pub fn energy(&self, t_f: f64) -> f64 {
        match self {
            Self::Constant(c) | Self::SignConstant(c) => t_f * c.norm_squared(),
            Self::Sinusoid {
                amplitude,
                omega,
                phase,
            } => (0..amplitude.len())
                .map(|i| {
                    let (a, w, p) = (amplitude[i], omega[i], phase[i]);
                    if w == 0.0 {
                        a * a * p.sin().powi(2) * t_f
                    } else {
                        let osc = ((2.0 * (w * t_f + p)).sin() - (2.0 * p).sin()) / (4.0 * w);
                        a * a * (0.5 * t_f - osc)
                    }
                })
                .sum(),
            Self::ExponentialDecay { amplitude, rate } => {
                let sq = amplitude.norm_squared();
                if *rate == 0.0 {
                    sq * t_f
                } else {
                    sq * (-(-2.0 * rate * t_f).exp_m1() / (2.0 * rate))
                }
            }
            Self::PiecewiseConstant { .. } => self
                .pieces(t_f)
                .map(|(span, value)| span * value.norm_squared())
                .sum(),
        }
    }

    fn pieces(&self, t_f: f64) -> impl Iterator<Item = (f64, &Vector)> + '_ {
        let (breakpoints, values) = match self {
            Self::PiecewiseConstant {
                breakpoints,
                values,
            } => (breakpoints.as_slice(), values.as_slice()),
            _ => (&[][..], &[][..]),
        };
        (0..breakpoints.len()).filter_map(move |i| {
            let start = breakpoints[i];
            let end = breakpoints
                .get(i + 1)
                .copied()
                .unwrap_or(f64::INFINITY)
                .min(t_f);
            (end > start).then(|| (end - start, &values[i]))
        })
    }

    /// Largest ‖u(t)‖∞ over a uniform grid of `points` samples on `[0, t_f]`.
    pub fn sampled_sup_norm(&self, t_f: f64, points: usize) -> f64 {
        let points = points.max(2);
        (0..points)
            .map(|k| {
                let t = t_f * k as f64 / (points - 1) as f64;
                vec_norm(&self.eval(t), VecNorm::Inf)
            })
            .fold(0.0, f64::max)
    }

    pub fn check_admissible(&self, t_f: f64) -> Result<()> {
        let norm = self.sampled_sup_norm(t_f, ADMISSIBILITY_GRID);
        if norm > 1.0 + ADMISSIBILITY_SLACK {
            return Err(Error::Inadmissible { norm });
        }
        Ok(())
    }
}

pub fn signal_mean(u: &InputSignal, t_f: f64) -> Vector {
    u.mean(t_f)
}

pub fn signal_energy(u: &InputSignal, t_f: f64) -> f64 {
    u.energy(t_f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_mean_and_energy() {
        let u = InputSignal::constant(&[1.0]);
        assert_eq!(u.mean(3.0)[0], 1.0);
        assert_eq!(u.energy(3.0), 3.0);
    }

    #[test]
    fn full_period_sinusoid_has_zero_mean() {
        let t_f = 1.7;
        let u = InputSignal::sinusoid(2, 1.0, 2.0 * PI / t_f, 0.0);
        let m = u.mean(t_f);
        assert!(m.amax() < 1e-15);
    }

    #[test]
    fn sine_energy_over_two_pi() {
        let u = InputSignal::sinusoid(1, 1.0, 1.0, 0.0);
        assert!((u.energy(2.0 * PI) - PI).abs() < 1e-14);
    }

    #[test]
    fn exponential_decay_mean() {
        let (a, k, t_f) = (0.7, 2.5, 1.3);
        let u = InputSignal::exponential_decay(1, a, k);
        let expect = a * (1.0 - (-k * t_f).exp()) / (k * t_f);
        assert!((u.mean(t_f)[0] - expect).abs() < 1e-15);
    }

    #[test]
    fn piecewise_unit_steps() {
        let u = InputSignal::piecewise(
            vec![0.0, 1.0],
            vec![Vector::from_element(1, 1.0), Vector::from_element(1, -1.0)],
        )
        .unwrap();
        assert!((u.energy(2.0) - 2.0).abs() < 1e-15);
        assert!(u.mean(2.0)[0].abs() < 1e-15);
        assert_eq!(u.eval(0.999)[0], 1.0);
        assert_eq!(u.eval(1.0)[0], -1.0);
        assert_eq!(u.discontinuities(2.0), vec![1.0]);
        // horizon shorter than the second piece
        assert!((u.energy(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn piecewise_rejects_bad_breakpoints() {
        let v = || Vector::from_element(1, 0.0);
        assert!(InputSignal::piecewise(vec![0.5], vec![v()]).is_err());
        assert!(InputSignal::piecewise(vec![0.0, 0.0], vec![v(), v()]).is_err());
        assert!(InputSignal::piecewise(vec![0.0], vec![]).is_err());
    }

    #[test]
    fn admissibility() {
        assert!(InputSignal::sinusoid(3, 1.0, 20.0, 0.3)
            .check_admissible(1.0)
            .is_ok());
        assert!(InputSignal::constant(&[0.2, -1.5])
            .check_admissible(1.0)
            .is_err());
    }
}
