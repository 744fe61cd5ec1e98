use crate::driftless::feasibility_driftless;
use crate::error::Result;
use crate::model::{Classification, EnergyReport, LoadedModel, Quantity, SystemKind};
use crate::nonlinear::{v_bound_at, v_bound_on_ball, v_candidates, Operators};
use crate::numerics::{sign, Vector};

/// Worst-case uncontrolled constant for a given `v`.
///
/// One lost actuator gets the exact maximizer; several get the sign pattern
/// of the cross term, which maximizes the linear part of the energy.
pub(crate) fn worst_forcing(ops: &Operators, x_tilde: &Vector, v: &Vector) -> (Vector, bool) {
    let beta = &ops.cross * (x_tilde - v);
    let degenerate = beta.iter().any(|b| *b == 0.0);
    let u = beta.map(|b| if sign(b) == 0.0 { 1.0 } else { sign(b) });
    (u, degenerate)
}

/// Worst-case total for one `v`: exact for `p = 1`, the spectral bound
/// otherwise.
pub(crate) fn worst_total(ops: &Operators, x_tilde: &Vector, t_f: f64, v: &Vector) -> f64 {
    match ops.worst_case_total_1act(x_tilde, t_f, v) {
        Ok(w) => w.energy,
        Err(_) => ops.worst_case_total_bound(x_tilde, t_f, v),
    }
}

pub(crate) fn resilience_bound(ops: &Operators, t_f: f64, radius: f64, v_bar: f64) -> f64 {
    ops.resilience_bound_1act(t_f, radius, v_bar)
        .unwrap_or_else(|_| ops.resilience_bound_general(t_f, radius, v_bar))
}

/// Full report for a model's task, optionally overriding `t_f` and `R`.
///
/// `v` is chosen among zero and the `v̄`-box vertices to maximize the
/// worst-case total energy; `r_a_bound` uses the `v̄` valid on the whole ball.
pub fn energy_report(
    model: &LoadedModel,
    t_f: Option<f64>,
    radius: Option<f64>,
) -> Result<EnergyReport> {
    let task = &model.task;
    let t_f = t_f.unwrap_or(task.t_f);
    let radius = radius
        .or(task.radius)
        .unwrap_or_else(|| task.x_tilde.norm());
    let part = &model.partition;
    let ops = Operators::from_partition(part)?;
    let x = &task.x_tilde;
    let exactness = model.system.kind().exactness();
    let n = part.state_dim();

    let v_bar = match model.system.kind() {
        SystemKind::Driftless => 0.0,
        _ => v_bound_at(&model.system, &task.x0, t_f).v_bar,
    };
    let v = v_candidates(n, v_bar)
        .into_iter()
        .map(|v| (worst_total(&ops, x, t_f, &v), v))
        .fold(None, |best: Option<(f64, Vector)>, cand| match best {
            Some(b) if b.0 >= cand.0 => Some(b),
            _ => Some(cand),
        })
        .map(|(_, v)| v)
        .expect("at least the zero candidate");

    let (u_uc, degenerate) = worst_forcing(&ops, x, &v);
    let e_nominal = ops.nominal_energy(x, t_f, &v);
    let e_malf = ops.malfunctioning_energy(x, t_f, &v, &u_uc)?;
    let e_total = e_malf + t_f * u_uc.norm_squared();
    let single = part.uncontrolled() == 1;
    let e_worst = worst_total(&ops, x, t_f, &v);
    let ball_v_bar = match model.system.kind() {
        SystemKind::Driftless => 0.0,
        _ => v_bound_on_ball(&model.system, &task.x_tg, radius, t_f).v_bar,
    };

    Ok(EnergyReport {
        t_f,
        radius,
        v_bar,
        v: v.clone(),
        u_uc,
        worst_sign_degenerate: degenerate,
        e_nominal: Quantity {
            value: e_nominal,
            class: Classification::equality(exactness),
        },
        e_malfunctioning: Quantity {
            value: e_malf,
            class: Classification::equality(exactness),
        },
        e_total: Quantity {
            value: e_total,
            class: Classification::equality(exactness),
        },
        e_worst_total: Quantity {
            value: e_worst,
            class: if single {
                Classification::equality(exactness)
            } else {
                Classification::upper_bound(exactness)
            },
        },
        r_a_bound: Quantity {
            value: resilience_bound(&ops, t_f, radius, ball_v_bar),
            class: Classification::upper_bound(exactness),
        },
        feasible_driftless: feasibility_driftless(&part.b, x, t_f),
        feasible_nominal: ops.feasible_nominal(x, t_f, v_bar),
        feasible_malfunctioning: ops.feasible_malfunctioning(x, t_f, v_bar),
    })
}
