//! Domain types: dynamics, actuator partitions, reach tasks, input signals
//! and energy reports, plus the JSON model loader.

mod file;
mod signal;
mod system;

pub mod builtins;

use std::fmt;

pub use file::{load_model, parse_model, KindTag, LoadedModel, ModelFile, TaskSpec, WindSpec};
pub use signal::{signal_energy, signal_mean, InputSignal, ADMISSIBILITY_GRID};
pub use system::{
    ActuatorPartition, ControlSystem, ReachTask, SystemKind, WindTerm, FULL_ROW_RANK_TOL,
};

use crate::numerics::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    Approximate,
}

/// Whether a reported quantity is an equality or an upper bound, and whether
/// it relies on the mean-value energy approximation.
///
/// Every driftless expression is exact; every expression for systems with
/// drift is approximate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    ExactEquality,
    ExactUpperBound,
    ApproximateEquality,
    ApproximateUpperBound,
}

impl Classification {
    pub fn equality(exactness: Exactness) -> Self {
        match exactness {
            Exactness::Exact => Self::ExactEquality,
            Exactness::Approximate => Self::ApproximateEquality,
        }
    }

    pub fn upper_bound(exactness: Exactness) -> Self {
        match exactness {
            Exactness::Exact => Self::ExactUpperBound,
            Exactness::Approximate => Self::ApproximateUpperBound,
        }
    }

    pub fn exactness(self) -> Exactness {
        match self {
            Self::ExactEquality | Self::ExactUpperBound => Exactness::Exact,
            _ => Exactness::Approximate,
        }
    }

    pub fn is_upper_bound(self) -> bool {
        matches!(self, Self::ExactUpperBound | Self::ApproximateUpperBound)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::ExactEquality => "exact-equality",
            Self::ExactUpperBound => "exact-upper-bound",
            Self::ApproximateEquality => "approximate-equality",
            Self::ApproximateUpperBound => "approximate-upper-bound",
        }
    }
}

impl SystemKind {
    pub fn exactness(self) -> Exactness {
        match self {
            SystemKind::Driftless => Exactness::Exact,
            _ => Exactness::Approximate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub class: Classification,
}

/// Energies for one reach task under one actuator split.
#[derive(Debug, Clone)]
pub struct EnergyReport {
    pub t_f: f64,
    pub radius: f64,
    pub v_bar: f64,
    /// Response gap used for the energy expressions.
    pub v: Vector,
    /// Constant uncontrolled input used for `e_malfunctioning` / `e_total`.
    pub u_uc: Vector,
    pub worst_sign_degenerate: bool,
    pub e_nominal: Quantity,
    pub e_malfunctioning: Quantity,
    pub e_total: Quantity,
    pub e_worst_total: Quantity,
    pub r_a_bound: Quantity,
    /// `t_f ≥ ‖B†x̃‖∞`.
    pub feasible_driftless: bool,
    /// Nominal mean control inside the unit box for every admissible `v`.
    pub feasible_nominal: bool,
    /// Controlled mean inside the unit box for every admissible `v` and `ū_uc`.
    pub feasible_malfunctioning: bool,
}

impl EnergyReport {
    pub fn key_values(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("t_f".to_string(), fmt_f64(self.t_f)),
            ("R".to_string(), fmt_f64(self.radius)),
            ("v_bar".to_string(), fmt_f64(self.v_bar)),
            ("v".to_string(), fmt_vec(&self.v)),
            ("u_uc".to_string(), fmt_vec(&self.u_uc)),
            (
                "worst_sign_degenerate".to_string(),
                self.worst_sign_degenerate.to_string(),
            ),
        ];
        for (name, q) in [
            ("e_nominal", &self.e_nominal),
            ("e_malfunctioning", &self.e_malfunctioning),
            ("e_total", &self.e_total),
            ("e_worst_total", &self.e_worst_total),
            ("r_a_bound", &self.r_a_bound),
        ] {
            out.push((name.to_string(), fmt_f64(q.value)));
            out.push((format!("{name}_class"), q.class.as_str().to_string()));
        }
        out.push((
            "feasible_driftless".into(),
            self.feasible_driftless.to_string(),
        ));
        out.push(("feasible_nominal".into(), self.feasible_nominal.to_string()));
        out.push((
            "feasible_malfunctioning".into(),
            self.feasible_malfunctioning.to_string(),
        ));
        out
    }
}

impl fmt::Display for EnergyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.key_values() {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// 17 significant digits, `.` decimal separator.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

fn fmt_vec(v: &Vector) -> String {
    let parts: Vec<String> = v.iter().map(|x| fmt_f64(*x)).collect();
    format!("[{}]", parts.join(","))
}
