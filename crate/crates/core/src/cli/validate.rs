//! Seeded invariant suites behind `resil validate`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::driftless;
use crate::model::{builtins, InputSignal, LoadedModel};
use crate::nonlinear::{self, box_vertices, empirical_v, v_bound_at, v_bound_on_ball, Operators};
use crate::numerics::{has_full_row_rank, pinv, vec_norm, Matrix, VecNorm, Vector};
use crate::simulate::{default_dt, signal_sweep, SweepSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn pick(self, quick: usize, full: usize) -> usize {
        match self {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checks: usize,
    /// Up to five failure descriptions, plus the total count.
    pub failures: Vec<String>,
    pub failure_count: usize,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            failures: Vec::new(),
            failure_count: 0,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < 5 {
                self.failures.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} checks", self.name, self.checks)?;
        if self.failure_count > 0 {
            write!(f, ", {} failed", self.failure_count)?;
        }
        write!(f, ")")?;
        for msg in &self.failures {
            write!(f, "\n  {msg}")?;
        }
        Ok(())
    }
}

/// Runs every suite; `dt` overrides the integrator step for the Grönwall suite.
pub fn run_all(seed: u64, level: Level, dt: Option<f64>) -> Vec<SuiteResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut models: Vec<LoadedModel> = builtins::all().into_iter().map(|(_, m)| m).collect();
    if level == Level::Full {
        models.push(builtins::admire_wind(0.5));
        models.push(builtins::admire_wind(2.0));
    }
    let horizons: &[f64] = match level {
        Level::Quick => &[1.0],
        Level::Full => &[0.1, 0.5, 1.0],
    };
    vec![
        penrose(&mut rng, level.pick(50, 500)),
        jensen(&mut rng, level.pick(200, 1000)),
        gronwall(&models, horizons, dt),
        dominance(&mut rng, level.pick(200, 2000)),
        reduction(&mut rng, level.pick(30, 100)),
        achievability(&mut rng, level.pick(50, 200)),
        box_check(&mut rng, level.pick(50, 200)),
    ]
}

pub(crate) fn uniform_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, scale: f64) -> Matrix {
    Matrix::from_fn(r, c, |_, _| rng.random_range(-scale..=scale))
}

pub(crate) fn uniform_vector(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vector {
    Vector::from_fn(n, |_, _| rng.random_range(-scale..=scale))
}

/// Random `B = [B_c B_uc]` with full-row-rank `B_c`.
pub(crate) fn random_split(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    p: usize,
) -> (Matrix, Matrix, Matrix) {
    loop {
        let b_c = uniform_matrix(rng, n, m, 2.0);
        if !has_full_row_rank(&b_c, 1e-8)
            || b_c.clone().svd(false, false).singular_values.min() < 0.1
        {
            continue;
        }
        let b_uc = uniform_matrix(rng, n, p, 2.0);
        let mut b = Matrix::zeros(n, m + p);
        b.columns_mut(0, m).copy_from(&b_c);
        b.columns_mut(m, p).copy_from(&b_uc);
        return (b, b_c, b_uc);
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// The four Penrose identities on random, possibly rank-deficient matrices.
pub fn penrose(rng: &mut ChaCha8Rng, count: usize) -> SuiteResult {
    let mut s = SuiteResult::new("penrose");
    for _ in 0..count {
        let (r, c) = (rng.random_range(1..=8), rng.random_range(1..=8));
        let m = if rng.random_bool(0.3) {
            let k = rng.random_range(1..=r.min(c));
            uniform_matrix(rng, r, k, 1.0) * uniform_matrix(rng, k, c, 1.0)
        } else {
            uniform_matrix(rng, r, c, 1.0)
        };
        let mp = pinv(&m);
        let scale = |x: &Matrix| x.norm().max(1.0);
        let errs = [
            (&m * &mp * &m - &m).norm() / scale(&m),
            (&mp * &m * &mp - &mp).norm() / scale(&mp),
            (&m * &mp - (&m * &mp).transpose()).norm(),
            (&mp * &m - (&mp * &m).transpose()).norm(),
        ];
        let worst = errs.iter().copied().fold(0.0, f64::max);
        s.check(worst <= 1e-9, || {
            format!("{r}x{c} matrix: Penrose residual {worst:.3e}")
        });
    }
    s
}

pub(crate) fn random_signal(rng: &mut ChaCha8Rng, dim: usize, t_f: f64) -> InputSignal {
    match rng.random_range(0..4) {
        0 => InputSignal::Constant(uniform_vector(rng, dim, 1.0)),
        1 => InputSignal::Sinusoid {
            amplitude: uniform_vector(rng, dim, 1.0),
            omega: Vector::from_fn(dim, |_, _| rng.random_range(0.0..30.0)),
            phase: Vector::from_fn(dim, |_, _| rng.random_range(0.0..std::f64::consts::TAU)),
        },
        2 => InputSignal::ExponentialDecay {
            amplitude: uniform_vector(rng, dim, 1.0),
            rate: rng.random_range(0.0..10.0),
        },
        _ => {
            let pieces = rng.random_range(1..=5);
            let mut cuts: Vec<f64> = (1..pieces).map(|_| rng.random_range(0.0..t_f)).collect();
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            cuts.retain(|c| *c > 0.0);
            let breakpoints: Vec<f64> = std::iter::once(0.0).chain(cuts).collect();
            let values = breakpoints
                .iter()
                .map(|_| uniform_vector(rng, dim, 1.0))
                .collect();
            InputSignal::piecewise(breakpoints, values).expect("increasing breakpoints")
        }
    }
}

/// Energy of an admissible signal is at least `t_f ‖mean‖²`, with equality
/// for constants.
pub fn jensen(rng: &mut ChaCha8Rng, count: usize) -> SuiteResult {
    let mut s = SuiteResult::new("jensen");
    for _ in 0..count {
        let dim = rng.random_range(1..=3);
        let t_f = rng.random_range(0.1..10.0);
        let u = random_signal(rng, dim, t_f);
        let (energy, lower) = (u.energy(t_f), t_f * u.mean(t_f).norm_squared());
        s.check(energy >= lower - 1e-9, || {
            format!("{u:?} on [0, {t_f}]: energy {energy} below t_f‖mean‖² = {lower}")
        });
        if matches!(u, InputSignal::Constant(_)) {
            s.check((energy - lower).abs() <= 1e-9, || {
                format!("constant signal: energy {energy} differs from {lower}")
            });
        }
    }
    s
}

/// `‖v‖∞ ≤ v̄ + 1e-6` for the standard signal families applied to every input
/// channel of each model, at its task's initial state.
pub fn gronwall(models: &[LoadedModel], horizons: &[f64], dt: Option<f64>) -> SuiteResult {
    let mut s = SuiteResult::new("gronwall");
    for model in models {
        let dim = model.partition.b.ncols();
        let signals = match signal_sweep(&SweepSpec::standard(dim, None)) {
            Ok(sigs) => sigs,
            Err(e) => {
                s.check(false, || e.to_string());
                continue;
            }
        };
        for &t_f in horizons {
            let bound = v_bound_at(&model.system, &model.task.x0, t_f).v_bar;
            let step = dt.unwrap_or_else(|| default_dt(t_f));
            for sig in &signals {
                match empirical_v(
                    &model.system,
                    &model.partition,
                    &model.task.x0,
                    &sig.signal,
                    t_f,
                    step,
                ) {
                    Ok(v) => {
                        let norm = vec_norm(&v, VecNorm::Inf);
                        s.check(norm <= bound + 1e-6, || {
                            format!(
                                "{:?} with {} at t_f = {t_f}: ‖v‖∞ = {norm:.6e} > v̄ = {bound:.6e}",
                                model.system.kind(),
                                sig.name
                            )
                        });
                    }
                    Err(e) => s.check(false, || format!("{} at t_f = {t_f}: {e}", sig.name)),
                }
            }
        }
    }
    s
}

/// Total minus nominal energy stays below the resilience bound for random
/// displacements, gaps and uncontrolled inputs on the builtin models and on
/// random driftless splits.
pub fn dominance(rng: &mut ChaCha8Rng, count: usize) -> SuiteResult {
    let mut s = SuiteResult::new("dominance");
    let models: Vec<LoadedModel> = builtins::all().into_iter().map(|(_, m)| m).collect();
    for k in 0..count {
        let (ops, system, x_tg, random_model) = if k % 2 == 0 {
            let m = &models[k / 2 % models.len()];
            (
                Operators::from_partition(&m.partition).expect("builtin split"),
                Some(&m.system),
                m.task.x_tg.clone(),
                false,
            )
        } else {
            let n = rng.random_range(1..=3);
            let m = rng.random_range(n..=n + 2);
            let p = rng.random_range(1..=2);
            let (b, b_c, b_uc) = random_split(rng, n, m, p);
            (
                Operators::new(&b, &b_c, &b_uc).expect("random split"),
                None,
                Vector::zeros(n),
                true,
            )
        };
        let n = ops.state_dim();
        let p = ops.uncontrolled();
        let t_f = rng.random_range(0.1..10.0);
        let radius = 10f64.powf(rng.random_range(-1.0..2.0));
        let v_bar = system.map_or(0.0, |sys| v_bound_on_ball(sys, &x_tg, radius, t_f).v_bar);
        let mut dir = uniform_vector(rng, n, 1.0);
        if dir.norm() == 0.0 {
            dir[0] = 1.0;
        }
        let x = &dir / dir.norm() * radius * rng.random_range(0.0..=1.0);
        let v = uniform_vector(rng, n, v_bar);
        let u = random_signal(rng, p, t_f);
        let mean = u.mean(t_f);
        if vec_norm(&mean, VecNorm::Inf) > 1.0 {
            continue;
        }
        let bound = if p == 1 {
            ops.resilience_bound_1act(t_f, radius, v_bar)
                .expect("p = 1")
        } else {
            ops.resilience_bound_general(t_f, radius, v_bar)
        };
        let gap = ops
            .malfunctioning_energy(&x, t_f, &v, &mean)
            .expect("admissible mean")
            + u.energy(t_f)
            - ops.nominal_energy(&x, t_f, &v);
        s.check(gap <= bound + 1e-9 * bound.abs().max(1.0), || {
            format!(
                "{} n={n} p={p} t_f={t_f:.3} R={radius:.3}: gap {gap:.6e} > bound {bound:.6e}",
                if random_model {
                    "random split"
                } else {
                    "builtin"
                }
            )
        });
    }
    s
}

/// With zero drift and `v = 0` every approximate form equals its driftless
/// counterpart.
pub fn reduction(rng: &mut ChaCha8Rng, count: usize) -> SuiteResult {
    let mut s = SuiteResult::new("reduction");
    for _ in 0..count {
        let n = rng.random_range(1..=4);
        let m = rng.random_range(n..=n + 2);
        let p = rng.random_range(1..=3);
        let (b, b_c, b_uc) = random_split(rng, n, m, p);
        let x = uniform_vector(rng, n, 3.0);
        let t_f = rng.random_range(0.1..10.0);
        let radius = rng.random_range(0.0..10.0);
        let u = uniform_vector(rng, p, 1.0);
        let zero = Vector::zeros(n);
        let mut pairs = vec![
            (
                "nominal",
                nonlinear::nominal_energy_approx(&b, &x, t_f, &zero),
                driftless::nominal_energy_driftless(&b, &x, t_f).energy,
            ),
            (
                "malfunctioning",
                nonlinear::malfunctioning_energy_approx(&b_c, &b_uc, &x, t_f, &zero, &u).unwrap(),
                driftless::malfunctioning_energy_driftless(&b_c, &b_uc, &x, t_f, &u).unwrap(),
            ),
            (
                "worst-case bound",
                nonlinear::worst_case_total_bound(&b_c, &b_uc, &x, t_f, &zero).unwrap(),
                driftless::worst_case_total_bound_driftless(&b_c, &b_uc, &x, t_f).unwrap(),
            ),
            (
                "v_bound",
                nonlinear::v_bound(0.0, 0.0, 0.0, 1.0, t_f).v_bar,
                0.0,
            ),
        ];
        if p == 1 {
            pairs.push((
                "worst-case exact",
                nonlinear::worst_case_total_1act(&b_c, &b_uc, &x, t_f, &zero)
                    .unwrap()
                    .energy,
                driftless::worst_case_total_exact_1act(&b_c, &b_uc, &x, t_f)
                    .unwrap()
                    .energy,
            ));
            pairs.push((
                "resilience bound",
                nonlinear::resilience_bound_1act(&b, &b_c, &b_uc, t_f, radius, 0.0, n).unwrap(),
                driftless::resilience_bound_driftless(&b, &b_c, &b_uc, t_f, radius).unwrap(),
            ));
        }
        for (name, a, d) in pairs {
            s.check(rel_close(a, d, 1e-12), || {
                format!("{name}: approximate {a:.17e} vs driftless {d:.17e}")
            });
        }
    }
    s
}

/// For scalar one-state, two-input systems the resilience bound is attained
/// by `x̃ = ±R` and a constant `u_uc = ±1`.
pub fn achievability(rng: &mut ChaCha8Rng, count: usize) -> SuiteResult {
    let mut s = SuiteResult::new("achievability");
    for k in 0..count {
        let (bc, buc, t_f, radius) = if k == 0 {
            (1.0, 1.0, 1.0, 1.0)
        } else {
            let mag = |rng: &mut ChaCha8Rng| {
                let m = rng.random_range(0.2..2.0);
                if rng.random_bool(0.5) {
                    m
                } else {
                    -m
                }
            };
            (
                mag(rng),
                mag(rng),
                rng.random_range(0.2..5.0),
                rng.random_range(0.1..5.0),
            )
        };
        let b = Matrix::from_row_slice(1, 2, &[bc, buc]);
        let b_c = Matrix::from_element(1, 1, bc);
        let b_uc = Matrix::from_element(1, 1, buc);
        let bound = driftless::resilience_bound_driftless(&b, &b_c, &b_uc, t_f, radius).unwrap();
        let sup = enumerated_scalar_gap(&b, &b_c, &b_uc, t_f, radius);
        s.check(rel_close(sup, bound, 1e-9), || {
            format!("b_c={bc:.3} b_uc={buc:.3}: enumerated {sup:.12e} vs bound {bound:.12e}")
        });
    }
    s
}

/// `max over x̃ ∈ {±R}, u ∈ {±1}` of malfunctioning plus uncontrolled minus
/// nominal energy.
pub fn enumerated_scalar_gap(
    b: &Matrix,
    b_c: &Matrix,
    b_uc: &Matrix,
    t_f: f64,
    radius: f64,
) -> f64 {
    let mut sup = f64::NEG_INFINITY;
    for xs in [radius, -radius] {
        let x = Vector::from_element(1, xs);
        let e_n = driftless::nominal_energy_driftless(b, &x, t_f).energy;
        for us in [1.0, -1.0] {
            let u = Vector::from_element(1, us);
            let e_m = driftless::malfunctioning_energy_driftless(b_c, b_uc, &x, t_f, &u).unwrap();
            sup = sup.max(e_m + t_f - e_n);
        }
    }
    sup
}

/// Nominal box feasibility by enumerating the vertices of the `v̄` box.
pub fn enumerate_nominal(b: &Matrix, x_tilde: &Vector, t_f: f64, v_bar: f64) -> bool {
    let bp = pinv(b);
    box_vertices(x_tilde.len(), v_bar)
        .iter()
        .all(|v| vec_norm(&(&bp * (v - x_tilde)), VecNorm::Inf) <= t_f)
}

/// Malfunctioning box feasibility by enumerating both boxes.
pub fn enumerate_malfunctioning(
    b_c: &Matrix,
    b_uc: &Matrix,
    x_tilde: &Vector,
    t_f: f64,
    v_bar: f64,
) -> bool {
    let bcp = pinv(b_c);
    let us = box_vertices(b_uc.ncols(), 1.0);
    box_vertices(x_tilde.len(), v_bar).iter().all(|v| {
        us.iter().all(|u| {
            let w = v - x_tilde - b_uc * u * t_f;
            vec_norm(&(&bcp * w), VecNorm::Inf) <= t_f
        })
    })
}

/// Closed-form box feasibility agrees with vertex enumeration.
pub fn box_check(rng: &mut ChaCha8Rng, count: usize) -> SuiteResult {
    let mut s = SuiteResult::new("box-feasibility");
    for _ in 0..count {
        let n = rng.random_range(1..=6);
        let m = rng.random_range(n..=n + 2);
        let p = rng.random_range(1..=3);
        let (b, b_c, mut b_uc) = random_split(rng, n, m, p);
        b_uc *= rng.random_range(0.0..0.5);
        let x = uniform_vector(rng, n, 2.0);
        let v_bar = rng.random_range(0.0..0.5);
        let reach = vec_norm(&(pinv(&b) * &x), VecNorm::Inf);
        let t_f = reach * rng.random_range(0.5..3.0) + rng.random_range(0.0..0.5);
        let closed = nonlinear::feasibility_nominal(&b, &x, t_f, v_bar);
        let enumerated = enumerate_nominal(&b, &x, t_f, v_bar);
        s.check(closed == enumerated, || {
            format!("nominal n={n}: closed form {closed}, enumeration {enumerated}")
        });
        let closed = nonlinear::feasibility_malfunctioning(&b_c, &b_uc, &x, t_f, v_bar);
        let enumerated = enumerate_malfunctioning(&b_c, &b_uc, &x, t_f, v_bar);
        s.check(closed == enumerated, || {
            format!("malfunctioning n={n} p={p}: closed form {closed}, enumeration {enumerated}")
        });
    }
    s
}
