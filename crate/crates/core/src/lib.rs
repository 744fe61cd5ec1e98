//! Energetic resilience of control systems that lose authority over some of
//! their actuators.
//!
//! A system `ẋ = f(x) + g(x) u` has its inputs split into controlled `u_c` and
//! uncontrolled `u_uc` channels, `B = g(x0) = [B_c B_uc]`. The crate computes
//! the minimum energy to reach a target nominally and under malfunction, the
//! worst case over admissible uncontrolled inputs (`‖u_uc(t)‖∞ ≤ 1`), and upper
//! bounds on the extra energy over all initial states within a radius `R` of
//! the target.
//!
//! * [`driftless`]: exact closed forms for `ẋ = B u`.
//! * [`nonlinear`]: the Grönwall bound on the response gap and the
//!   approximate forms for Lipschitz dynamics.
//! * [`simulate`]: RK4 integration, uncontrolled signal families and
//!   brute-force oracles.
//! * [`cli`]: reports, CSV sweeps and the invariant validation suite behind
//!   the `resil` binary.

pub mod cli;
pub mod driftless;
pub mod error;
pub mod model;
pub mod nonlinear;
pub mod numerics;
pub mod simulate;

pub use error::{Error, Result};
pub use model::{
    builtins, load_model, parse_model, ActuatorPartition, Classification, ControlSystem,
    EnergyReport, Exactness, InputSignal, LoadedModel, ReachTask, SystemKind, WindTerm,
};
pub use numerics::{Matrix, Vector};
