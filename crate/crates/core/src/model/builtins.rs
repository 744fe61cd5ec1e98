//! Reference systems: a planar underwater robot (driftless), the ADMIRE
//! fighter jet roll/pitch/yaw-rate subsystem (linear), and ADMIRE with a
//! sinusoidal wind term (nonlinear).
//!
//! The bundled files under `models/` describe exactly these systems.

use super::{ActuatorPartition, ControlSystem, LoadedModel, ReachTask, WindTerm};
use crate::numerics::{Matrix, Vector};

pub fn robot_input_matrix() -> Matrix {
    Matrix::from_row_slice(2, 3, &[2.0, 1.0, 1.0, 0.2, -1.0, 1.0])
}

pub fn admire_drift_matrix() -> Matrix {
    Matrix::from_row_slice(
        3,
        3,
        &[
            -0.9967, 0.0, 0.6176, 0.0, -0.5057, 0.0, -0.0939, 0.0, -0.2127,
        ],
    )
}

pub fn admire_input_matrix() -> Matrix {
    Matrix::from_row_slice(
        3,
        4,
        &[
            0.0, -4.2423, 4.2423, 1.4871, //
            1.6532, -1.2735, -1.2735, 0.0024, //
            0.0, -0.2805, 0.2805, -0.8823,
        ],
    )
}

/// Third thruster lost; `t_f = 10`, `x0 = (1, 1)`, `R = 100`.
pub fn underwater_robot() -> LoadedModel {
    let system = ControlSystem::driftless(robot_input_matrix());
    let task = ReachTask::new(
        Vector::from_vec(vec![1.0, 1.0]),
        Vector::zeros(2),
        10.0,
        Some(100.0),
    )
    .expect("valid task");
    assemble(system, task, &[2])
}

fn admire_task() -> ReachTask {
    ReachTask::new(
        Vector::from_vec(vec![0.4, -0.3, 0.2]),
        Vector::zeros(3),
        1.0,
        Some(1.0),
    )
    .expect("valid task")
}

/// Canard lost; `t_f = 1`, `R = 1`.
pub fn admire_linear() -> LoadedModel {
    let system =
        ControlSystem::linear(admire_drift_matrix(), admire_input_matrix()).expect("square drift");
    assemble(system, admire_task(), &[0])
}

/// ADMIRE plus wind of amplitude `c`; `D_f = ‖A‖∞ + |c|`.
pub fn admire_wind(amplitude: f64) -> LoadedModel {
    let system = ControlSystem::nonlinear(
        Some(admire_drift_matrix()),
        WindTerm::Admire { amplitude },
        admire_input_matrix(),
    )
    .expect("consistent dimensions");
    assemble(system, admire_task(), &[0])
}

/// Every builtin system, labelled.
pub fn all() -> Vec<(&'static str, LoadedModel)> {
    vec![
        ("underwater_robot", underwater_robot()),
        ("admire_linear", admire_linear()),
        ("admire_wind", admire_wind(1.0)),
    ]
}

fn assemble(system: ControlSystem, task: ReachTask, uncontrolled: &[usize]) -> LoadedModel {
    let partition = ActuatorPartition::new(&system, &task.x0, uncontrolled).expect("full row rank");
    LoadedModel {
        system,
        partition,
        task,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{induced_norm, InducedNorm};

    #[test]
    fn admire_drift_norm() {
        let a = admire_drift_matrix();
        assert!((induced_norm(&a, InducedNorm::Inf) - 1.6143).abs() < 1e-12);
        assert!((admire_wind(1.0).system.lipschitz_f - 2.6143).abs() < 1e-12);
    }
}
