//! Fixed-step integration, uncontrolled-input signal families, and
//! brute-force oracles for the driftless closed forms.

use crate::error::{Error, Result};
use crate::model::{ControlSystem, InputSignal};
use crate::numerics::{induced_norm, vec_norm, InducedNorm, Matrix, VecNorm, Vector};

/// Default number of integration steps over the horizon.
pub const DEFAULT_STEPS: usize = 1_000;

/// Relative tolerance of the step-doubling gate.
pub const CONVERGENCE_TOL: f64 = 1e-6;

pub fn default_dt(t_f: f64) -> f64 {
    t_f / DEFAULT_STEPS as f64
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Uniform grid `0, dt, …, t_f`.
    pub times: Vec<f64>,
    pub states: Vec<Vector>,
    pub terminal_state: Vector,
    /// `‖x_dt(t_f) - x_{dt/2}(t_f)‖∞`.
    pub step_doubling_gap: f64,
}

/// Classical RK4 at step `dt`, checked against a half-step run.
///
/// Steps containing a jump of a piecewise-constant signal are split at the
/// jump so that each RK4 stage sees a smooth input.
pub fn integrate(
    system: &ControlSystem,
    u: &InputSignal,
    x0: &Vector,
    t_f: f64,
    dt: f64,
) -> Result<Trajectory> {
    let mut traj = integrate_fixed(system, u, x0, t_f, dt)?;
    let fine = integrate_fixed(system, u, x0, t_f, dt / 2.0)?;
    let gap = vec_norm(&(&traj.terminal_state - &fine.terminal_state), VecNorm::Inf);
    let allowed = CONVERGENCE_TOL * vec_norm(&fine.terminal_state, VecNorm::Inf).max(1.0);
    if gap > allowed {
        return Err(Error::Integration {
            time: t_f,
            reason: format!("step-doubling gap {gap:.3e} exceeds {allowed:.3e}; reduce dt"),
        });
    }
    traj.step_doubling_gap = gap;
    Ok(traj)
}

/// Single RK4 pass without the convergence gate; `step_doubling_gap` is NaN.
pub fn integrate_fixed(
    system: &ControlSystem,
    u: &InputSignal,
    x0: &Vector,
    t_f: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0 && t_f > 0.0) {
        return Err(Error::Argument(format!(
            "need dt > 0 and t_f > 0, got dt = {dt}, t_f = {t_f}"
        )));
    }
    let ratio = t_f / dt;
    let steps = ratio.round();
    if (ratio - steps).abs() > 1e-9 * ratio.max(1.0) || steps < 1.0 {
        return Err(Error::Argument(format!(
            "t_f / dt = {ratio} is not an integer"
        )));
    }
    if x0.len() != system.state_dim() || u.dim() != system.input_dim() {
        return Err(Error::Dimension(format!(
            "x0 has {} states and u has {} channels; system is {}x{}",
            x0.len(),
            u.dim(),
            system.state_dim(),
            system.input_dim()
        )));
    }
    let steps = steps as usize;
    let jumps = u.discontinuities(t_f);
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut x = x0.clone();
    times.push(0.0);
    states.push(x.clone());
    for k in 0..steps {
        let t0 = k as f64 * dt;
        let t1 = if k + 1 == steps {
            t_f
        } else {
            (k + 1) as f64 * dt
        };
        let mut t = t0;
        for &j in jumps.iter().filter(|&&j| j > t0 && j < t1) {
            x = rk4_step(system, u, &x, t, j - t);
            t = j;
        }
        x = rk4_step(system, u, &x, t, t1 - t);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Integration {
                time: t1,
                reason: "state became non-finite".into(),
            });
        }
        times.push(t1);
        states.push(x.clone());
    }
    Ok(Trajectory {
        times,
        terminal_state: x,
        states,
        step_doubling_gap: f64::NAN,
    })
}

fn rk4_step(system: &ControlSystem, u: &InputSignal, x: &Vector, t: f64, h: f64) -> Vector {
    // Piecewise-constant inputs are constant on every sub-step; sampling the
    // midpoint keeps the end stage from reading the value after a jump.
    let held = matches!(u, InputSignal::PiecewiseConstant { .. }).then(|| u.eval(t + h / 2.0));
    let f = |t: f64, x: &Vector| match &held {
        Some(v) => system.rhs(x, v),
        None => system.rhs(x, &u.eval(t)),
    };
    let k1 = f(t, x);
    let k2 = f(t + h / 2.0, &(x + &k1 * (h / 2.0)));
    let k3 = f(t + h / 2.0, &(x + &k2 * (h / 2.0)));
    let k4 = f(t + h, &(x + &k3 * h));
    x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Signal families applied to the uncontrolled inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Number of channels per signal.
    pub dim: usize,
    /// Amplitude shared by the sinusoids and decays.
    pub amplitude: f64,
    pub omegas: Vec<f64>,
    pub constants: Vec<f64>,
    pub decay_rates: Vec<f64>,
    /// Appends `SignConstant(worst_sign)` when set.
    pub worst_sign: Option<Vector>,
}

impl SweepSpec {
    /// Sinusoids at 1, 5, 20 rad/s, constants ±0.5 and ±1, decays at rates 1
    /// and 5, and the worst-case sign constant (all ones when `None`).
    pub fn standard(dim: usize, worst_sign: Option<Vector>) -> Self {
        Self {
            dim,
            amplitude: 1.0,
            omegas: vec![1.0, 5.0, 20.0],
            constants: vec![0.5, -0.5, 1.0, -1.0],
            decay_rates: vec![1.0, 5.0],
            worst_sign: Some(worst_sign.unwrap_or_else(|| Vector::from_element(dim, 1.0))),
        }
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            amplitude: 1.0,
            omegas: Vec::new(),
            constants: Vec::new(),
            decay_rates: Vec::new(),
            worst_sign: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedSignal {
    pub name: String,
    pub signal: InputSignal,
}

/// Expands a spec into its ordered list of signals: sinusoids, constants,
/// decays, then the worst-case sign constant.
pub fn signal_sweep(spec: &SweepSpec) -> Result<Vec<NamedSignal>> {
    if spec.dim == 0 {
        return Err(Error::Sweep("signals need at least one channel".into()));
    }
    let too_large = |a: f64| a.is_nan() || a.abs() > 1.0;
    if (!spec.omegas.is_empty() || !spec.decay_rates.is_empty()) && too_large(spec.amplitude) {
        return Err(Error::Sweep(format!(
            "amplitude {} exceeds 1",
            spec.amplitude
        )));
    }
    if let Some(c) = spec.constants.iter().find(|c| too_large(**c)) {
        return Err(Error::Sweep(format!("constant {c} exceeds 1")));
    }
    if let Some(s) = &spec.worst_sign {
        if s.len() != spec.dim || s.iter().any(|x| ![-1.0, 0.0, 1.0].contains(x)) {
            return Err(Error::Sweep(
                "worst sign must hold one entry of -1, 0, 1 per channel".into(),
            ));
        }
    }
    let (d, a) = (spec.dim, spec.amplitude);
    let mut out = Vec::new();
    for &w in &spec.omegas {
        out.push(NamedSignal {
            name: format!("sin_w{w}"),
            signal: InputSignal::sinusoid(d, a, w, 0.0),
        });
    }
    for &c in &spec.constants {
        out.push(NamedSignal {
            name: format!("const_{c:+}"),
            signal: InputSignal::Constant(Vector::from_element(d, c)),
        });
    }
    for &k in &spec.decay_rates {
        out.push(NamedSignal {
            name: format!("decay_k{k}"),
            signal: InputSignal::exponential_decay(d, a, k),
        });
    }
    if let Some(s) = &spec.worst_sign {
        out.push(NamedSignal {
            name: "worst_sign".into(),
            signal: InputSignal::SignConstant(s.clone()),
        });
    }
    if out.is_empty() {
        return Err(Error::Sweep("spec produces no signals".into()));
    }
    Ok(out)
}

/// Lowest-energy constant control on a grid over `[-1, 1]^{m+p}` reaching the
/// target of `ẋ = B u` within `t_f · h · ‖B‖∞`.
#[derive(Debug, Clone)]
pub struct GridMinimum {
    pub energy: f64,
    pub control: Vector,
    pub residual_tol: f64,
}

pub fn brute_force_constant_min(
    b: &Matrix,
    x_tilde: &Vector,
    t_f: f64,
    grid_step: f64,
) -> Result<GridMinimum> {
    let (n, m) = b.shape();
    if m > 3 {
        return Err(Error::Argument(format!(
            "grid search limited to 3 inputs, got {m}"
        )));
    }
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(Error::Argument(format!(
            "grid step must lie in (0, 1], got {grid_step}"
        )));
    }
    if x_tilde.len() != n {
        return Err(Error::Dimension("x̃ does not match B".into()));
    }
    let tol = t_f * grid_step * induced_norm(b, InducedNorm::Inf);
    let per_axis = (2.0 / grid_step).round() as usize + 1;
    let value = |k: usize| (-1.0 + k as f64 * grid_step).min(1.0);
    let total = per_axis.pow(m as u32);

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut u = vec![0.0; m];
    for idx in 0..total {
        let mut rest = idx;
        for slot in u.iter_mut() {
            *slot = value(rest % per_axis);
            rest /= per_axis;
        }
        let energy = t_f * u.iter().map(|x| x * x).sum::<f64>();
        if best.as_ref().is_some_and(|(e, _)| energy >= *e) {
            continue;
        }
        let hits = (0..n).all(|i| {
            let bu: f64 = (0..m).map(|j| b[(i, j)] * u[j]).sum();
            (x_tilde[i] + t_f * bu).abs() <= tol
        });
        if hits {
            best = Some((energy, u.clone()));
        }
    }
    let (energy, control) = best.ok_or(Error::Unreachable)?;
    Ok(GridMinimum {
        energy,
        control: Vector::from_vec(control),
        residual_tol: tol,
    })
}

pub const OPT_TF_RANGE: (f64, f64) = (1e-3, 1e3);

/// Golden-section minimizer of the driftless malfunctioning energy over
/// `t_f ∈ [1e-3, 1e3]`, searched in `ln t_f`.
pub fn brute_force_opt_tf(
    b_c: &Matrix,
    b_uc: &Matrix,
    x_tilde: &Vector,
    u_uc_mean: &Vector,
) -> Result<f64> {
    let bcp = crate::numerics::pinv(b_c);
    let a = &bcp * x_tilde;
    let g = &bcp * (b_uc * u_uc_mean);
    let (aa, ag, gg) = (a.norm_squared(), a.dot(&g), g.norm_squared());
    let energy = |t: f64| aa / t + 2.0 * ag + t * gg;
    let (lo, hi) = (OPT_TF_RANGE.0.ln(), OPT_TF_RANGE.1.ln());
    let s = golden_section_min(|s| energy(s.exp()), lo, hi, 1e-10);
    if s - lo < 1e-6 || hi - s < 1e-6 {
        return Err(Error::FlatObjective(s.exp()));
    }
    Ok(s.exp())
}

/// Minimizer of a unimodal `f` on `[lo, hi]` to absolute tolerance `tol`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - invphi * (hi - lo);
    let mut d = lo + invphi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}
