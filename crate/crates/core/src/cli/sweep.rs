//! Radius sweeps: worst-case gaps, per-signal gaps and resilience bounds on a
//! log-spaced grid of `R`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{resilience_bound, worst_total};
use crate::error::{Error, Result};
use crate::model::{fmt_f64, LoadedModel, SystemKind};
use crate::nonlinear::{v_bound_on_ball, v_candidates, Operators};
use crate::numerics::Vector;
use crate::simulate::{signal_sweep, NamedSignal, SweepSpec};

/// Directions on the unit sphere used when `n ≥ 3`.
pub const DEFAULT_DIRECTIONS: usize = 400;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub t_f: f64,
    /// Ignored for `n = 2`, which always uses a 1° grid.
    pub directions: usize,
    /// Seeds the random directions for `n ≥ 4`.
    pub seed: u64,
}

impl SweepConfig {
    pub fn new(r_min: f64, r_max: f64, points: usize, t_f: f64) -> Self {
        Self {
            r_min,
            r_max,
            points,
            t_f,
            directions: DEFAULT_DIRECTIONS,
            seed: 0,
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_max >= self.r_min && self.r_max.is_finite()) {
            return Err(Error::Argument(format!(
                "need 0 < r-min ≤ r-max, got {} and {}",
                self.r_min, self.r_max
            )));
        }
        if self.points < 2 {
            return Err(Error::Argument(format!(
                "points must be at least 2, got {}",
                self.points
            )));
        }
        if !(self.t_f > 0.0 && self.t_f.is_finite()) {
            return Err(Error::Argument(format!(
                "t_f must be positive, got {}",
                self.t_f
            )));
        }
        if self.directions == 0 {
            return Err(Error::Argument("directions must be positive".into()));
        }
        Ok(())
    }
}

/// One radius of a sweep. Energies are taken at the direction and `v`
/// maximizing `gap`.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub radius: f64,
    /// Nominal and malfunctioning mean controls fit the unit box in every
    /// sampled direction.
    pub feasible: bool,
    pub e_nominal: f64,
    pub e_worst_total: f64,
    /// `e_worst_total - e_nominal`, maximized over directions and `v`.
    pub gap: f64,
    pub r_a_bound: f64,
    pub v_bar: f64,
    /// Total energy (malfunctioning plus uncontrolled) of each signal at the
    /// maximizing direction and `v`.
    pub signal_totals: Vec<f64>,
    /// `total - nominal` of each signal, maximized over directions and `v`.
    pub signal_gaps: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub signal_names: Vec<String>,
    pub rows: Vec<SweepRow>,
}

pub fn log_space(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|k| match k {
            0 => lo,
            k if k + 1 == points => hi,
            k => (a + (b - a) * k as f64 / (points - 1) as f64).exp(),
        })
        .collect()
}

/// Unit directions: 1° steps for `n = 2`, a Fibonacci lattice for `n = 3`,
/// seeded Gaussian samples otherwise.
pub fn directions(n: usize, count: usize, seed: u64) -> Vec<Vector> {
    match n {
        1 => vec![Vector::from_element(1, 1.0), Vector::from_element(1, -1.0)],
        2 => (0..360)
            .map(|k| {
                let th = (k as f64).to_radians();
                Vector::from_vec(vec![th.cos(), th.sin()])
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let th = golden * k as f64;
                    Vector::from_vec(vec![r * th.cos(), r * th.sin(), z])
                })
                .collect()
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    let v = Vector::from_iterator(n, (0..n).map(|_| gaussian(&mut rng)));
                    let norm = v.norm();
                    v / norm
                })
                .collect()
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::EPSILON..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// The standard signal families on the uncontrolled channels.
pub fn uncontrolled_signals(model: &LoadedModel) -> Result<Vec<NamedSignal>> {
    signal_sweep(&SweepSpec::standard(model.partition.uncontrolled(), None))
}

pub fn run_sweep(model: &LoadedModel, config: &SweepConfig) -> Result<SweepTable> {
    config.check()?;
    let signals = uncontrolled_signals(model)?;
    let ops = Operators::from_partition(&model.partition)?;
    let n = model.partition.state_dim();
    let dirs = directions(n, config.directions, config.seed);
    let rows = log_space(config.r_min, config.r_max, config.points)
        .into_iter()
        .map(|r| sweep_row(model, &ops, &signals, &dirs, config.t_f, r))
        .collect::<Result<_>>()?;
    Ok(SweepTable {
        signal_names: signals.into_iter().map(|s| s.name).collect(),
        rows,
    })
}

/// The row for a single radius.
pub fn sweep_row(
    model: &LoadedModel,
    ops: &Operators,
    signals: &[NamedSignal],
    dirs: &[Vector],
    t_f: f64,
    radius: f64,
) -> Result<SweepRow> {
    let v_bar = match model.system.kind() {
        SystemKind::Driftless => 0.0,
        _ => v_bound_on_ball(&model.system, &model.task.x_tg, radius, t_f).v_bar,
    };
    let n = model.partition.state_dim();
    let vs = v_candidates(n, v_bar);
    let means: Vec<(Vector, f64)> = signals
        .iter()
        .map(|s| (s.signal.mean(t_f), s.signal.energy(t_f)))
        .collect();

    let mut feasible = true;
    let mut best: Option<(f64, f64, f64, Vector, Vector)> = None;
    let mut signal_gaps = vec![f64::NEG_INFINITY; signals.len()];
    for d in dirs {
        let x = d * radius;
        feasible &=
            ops.feasible_nominal(&x, t_f, v_bar) && ops.feasible_malfunctioning(&x, t_f, v_bar);
        for v in &vs {
            let e_n = ops.nominal_energy(&x, t_f, v);
            let e_w = worst_total(ops, &x, t_f, v);
            if best.as_ref().is_none_or(|b| e_w - e_n > b.0) {
                best = Some((e_w - e_n, e_n, e_w, x.clone(), v.clone()));
            }
            for (k, (mean, energy)) in means.iter().enumerate() {
                let total = ops.malfunctioning_energy(&x, t_f, v, mean)? + energy;
                signal_gaps[k] = signal_gaps[k].max(total - e_n);
            }
        }
    }
    let (gap, e_nominal, e_worst_total, x, v) =
        best.ok_or_else(|| Error::Argument("no sweep directions".into()))?;
    let signal_totals = means
        .iter()
        .map(|(mean, energy)| Ok(ops.malfunctioning_energy(&x, t_f, &v, mean)? + energy))
        .collect::<Result<_>>()?;
    Ok(SweepRow {
        radius,
        feasible,
        e_nominal,
        e_worst_total,
        gap,
        r_a_bound: resilience_bound(ops, t_f, radius, v_bar),
        v_bar,
        signal_totals,
        signal_gaps,
    })
}

impl SweepTable {
    pub fn header(&self) -> Vec<String> {
        let mut cols: Vec<String> = [
            "R",
            "feasible",
            "e_nominal",
            "e_worst_total",
            "gap",
            "r_a_bound",
            "v_bar",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        cols.extend(self.signal_names.iter().map(|s| format!("total_{s}")));
        cols.extend(self.signal_names.iter().map(|s| format!("gap_{s}")));
        cols
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header().join(",");
        out.push('\n');
        for row in &self.rows {
            let mut fields = vec![fmt_f64(row.radius), row.feasible.to_string()];
            fields.extend(
                [
                    row.e_nominal,
                    row.e_worst_total,
                    row.gap,
                    row.r_a_bound,
                    row.v_bar,
                ]
                .into_iter()
                .chain(row.signal_totals.iter().copied())
                .chain(row.signal_gaps.iter().copied())
                .map(fmt_f64),
            );
            let _ = writeln!(out, "{}", fields.join(","));
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Rows where the worst-case gap or any signal gap exceeds the bound.
    pub fn dominance_violations(&self, slack: f64) -> Vec<(f64, String)> {
        let mut out = Vec::new();
        for row in &self.rows {
            let limit = row.r_a_bound + slack * row.r_a_bound.abs().max(1.0);
            if row.gap > limit {
                out.push((row.radius, "worst_total".to_string()));
            }
            for (name, g) in self.signal_names.iter().zip(&row.signal_gaps) {
                if *g > limit {
                    out.push((row.radius, name.clone()));
                }
            }
        }
        out
    }
}
