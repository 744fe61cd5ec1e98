//! JSON model definition files.
//!
//! ```json
//! {
//!   "kind": "linear",
//!   "A": [[-0.9967, 0, 0.6176], [0, -0.5057, 0], [-0.0939, 0, -0.2127]],
//!   "B": [[0, -4.2423, 4.2423, 1.4871], [1.6532, -1.2735, -1.2735, 0.0024], [0, -0.2805, 0.2805, -0.8823]],
//!   "D_f": 1.6143,
//!   "D_g": 0,
//!   "uncontrolled_indices": [0],
//!   "task": { "x0": [0.4, -0.3, 0.2], "x_tg": [0, 0, 0], "t_f": 1, "R": 1 }
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::system::{ActuatorPartition, ControlSystem, ReachTask, SystemKind, WindTerm};
use crate::error::{Error, Result};
use crate::numerics::{Matrix, Vector};

pub const LIPSCHITZ_SAMPLES: usize = 1_000;
const LIPSCHITZ_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindTag {
    Driftless,
    Linear,
    Nonlinear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindSpec {
    pub family: String,
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub x0: Vec<f64>,
    pub x_tg: Vec<f64>,
    pub t_f: f64,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub kind: KindTag,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<f64>>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wind: Option<WindSpec>,
    #[serde(rename = "D_f")]
    pub d_f: f64,
    #[serde(rename = "D_g")]
    pub d_g: f64,
    pub uncontrolled_indices: Vec<usize>,
    pub task: TaskSpec,
}

/// A validated model: dynamics, the actuator split at `x0`, and the task.
#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub system: ControlSystem,
    pub partition: ActuatorPartition,
    pub task: ReachTask,
}

fn matrix_from_rows(rows: &[Vec<f64>], name: &str) -> Result<Matrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 {
        return Err(Error::Validation(format!("{name} must be non-empty")));
    }
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::Validation(format!("{name} rows differ in length")));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Validation(format!("{name} has non-finite entries")));
    }
    Ok(Matrix::from_row_iterator(
        r,
        c,
        rows.iter().flatten().copied(),
    ))
}

impl ModelFile {
    pub fn into_model(self) -> Result<LoadedModel> {
        let b = matrix_from_rows(&self.b, "B")?;
        let n = b.nrows();
        let a = self
            .a
            .as_deref()
            .map(|rows| matrix_from_rows(rows, "A"))
            .transpose()?;
        let wind = self
            .wind
            .as_ref()
            .map(|w| match w.family.as_str() {
                "admire_wind" => Ok(WindTerm::Admire {
                    amplitude: w.amplitude,
                }),
                other => Err(Error::Validation(format!("unknown wind family `{other}`"))),
            })
            .transpose()?;

        let system = match self.kind {
            KindTag::Driftless => {
                if a.is_some() || wind.is_some() {
                    return Err(Error::Validation(
                        "driftless model must not carry `A` or `wind`".into(),
                    ));
                }
                ControlSystem::driftless(b)
            }
            KindTag::Linear => {
                if wind.is_some() {
                    return Err(Error::Validation(
                        "linear model must not carry `wind`".into(),
                    ));
                }
                let a = a.ok_or_else(|| Error::Validation("linear model requires `A`".into()))?;
                ControlSystem::linear(a, b)?
            }
            KindTag::Nonlinear => {
                let wind = wind
                    .ok_or_else(|| Error::Validation("nonlinear model requires `wind`".into()))?;
                ControlSystem::nonlinear(a, wind, b)?
            }
        }
        .with_lipschitz(self.d_f, self.d_g);
        system.validate()?;
        debug_assert_eq!(
            system.kind() == SystemKind::Driftless,
            self.kind == KindTag::Driftless
        );

        let task = ReachTask::new(
            Vector::from_vec(self.task.x0),
            Vector::from_vec(self.task.x_tg),
            self.task.t_f,
            self.task.radius,
        )?;
        if task.x0.len() != n {
            return Err(Error::Dimension(format!(
                "task has {} states, B has {n} rows",
                task.x0.len()
            )));
        }

        let half_width = self.task.radius.unwrap_or(task.x_tilde.norm()).max(1.0);
        system.check_lipschitz(&task.x0, half_width, LIPSCHITZ_SAMPLES, LIPSCHITZ_SEED)?;

        let partition = ActuatorPartition::new(&system, &task.x0, &self.uncontrolled_indices)?;
        Ok(LoadedModel {
            system,
            partition,
            task,
        })
    }
}

pub fn parse_model(text: &str) -> Result<LoadedModel> {
    let file: ModelFile = serde_json::from_str(text)?;
    file.into_model()
}

pub fn load_model(path: impl AsRef<Path>) -> Result<LoadedModel> {
    let text = std::fs::read_to_string(path)?;
    parse_model(&text)
}
