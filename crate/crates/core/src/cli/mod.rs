//! Command-line front end: single reports, radius sweeps and validation.
//!
//! Exit codes are 0 on success, 1 when an invariant fails and 2 for bad
//! input. `RESIL_DT` overrides the integrator step of the validation suite.

pub mod report;
pub mod sweep;
pub mod validate;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use report::energy_report;
pub use sweep::{log_space, run_sweep, SweepConfig, SweepRow, SweepTable};
pub use validate::{Level, SuiteResult};

use crate::driftless::{malfunctioning_energy_driftless, optimal_final_time};
use crate::error::{Error, Result};
use crate::model::{fmt_f64, load_model, Classification, LoadedModel};
use crate::nonlinear::Operators;
use crate::numerics::Vector;
use crate::simulate::brute_force_opt_tf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const DT_ENV: &str = "RESIL_DT";

#[derive(Debug, Parser)]
#[command(
    name = "resil",
    version,
    about = "Energetic resilience under loss of actuator authority"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energies, worst case and resilience bound for the model's task.
    Energy {
        model: PathBuf,
        #[arg(long = "tf")]
        tf: Option<f64>,
    },
    /// Resilience bound over the ball of radius R, with the sampled gap.
    Resilience {
        model: PathBuf,
        #[arg(long = "R")]
        radius: f64,
        #[arg(long = "tf")]
        tf: Option<f64>,
    },
    /// Horizon minimizing the malfunctioning energy for a constant
    /// uncontrolled input.
    OptTf {
        model: PathBuf,
        /// One value per uncontrolled input, comma separated; a single value
        /// applies to all.
        #[arg(long = "uuc", value_delimiter = ',', allow_hyphen_values = true)]
        uuc: Vec<f64>,
    },
    /// Radius sweep written as CSV.
    Sweep {
        model: PathBuf,
        #[arg(long = "r-min")]
        r_min: f64,
        #[arg(long = "r-max")]
        r_max: f64,
        #[arg(long)]
        points: usize,
        #[arg(long = "tf")]
        tf: f64,
        #[arg(long)]
        out: PathBuf,
        /// Sphere directions for three or more states.
        #[arg(long, default_value_t = sweep::DEFAULT_DIRECTIONS)]
        directions: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Invariant suites over all modules.
    Validate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = LevelArg::Full)]
        level: LevelArg,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Quick,
    Full,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Self {
        match l {
            LevelArg::Quick => Level::Quick,
            LevelArg::Full => Level::Full,
        }
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn dt_override() -> Result<Option<f64>> {
    match std::env::var(DT_ENV) {
        Ok(s) => {
            let dt: f64 = s
                .trim()
                .parse()
                .map_err(|_| Error::Argument(format!("{DT_ENV} = {s:?} is not a number")))?;
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::Argument(format!(
                    "{DT_ENV} must be positive, got {dt}"
                )));
            }
            Ok(Some(dt))
        }
        Err(_) => Ok(None),
    }
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Argument(format!("{name} must be positive, got {x}")))
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Energy { model, tf } => {
            let tf = tf.map(|t| positive("--tf", t)).transpose()?;
            let model = load_model(model)?;
            write!(out, "{}", energy_report(&model, tf, None)?)?;
            Ok(EXIT_OK)
        }
        Command::Resilience { model, radius, tf } => {
            if !(radius >= 0.0 && radius.is_finite()) {
                return Err(Error::Argument(format!(
                    "--R must be non-negative, got {radius}"
                )));
            }
            let tf = tf.map(|t| positive("--tf", t)).transpose()?;
            let model = load_model(model)?;
            resilience(&model, radius, tf, out)
        }
        Command::OptTf { model, uuc } => {
            let model = load_model(model)?;
            opt_tf(&model, &uuc, out)
        }
        Command::Sweep {
            model,
            r_min,
            r_max,
            points,
            tf,
            out: path,
            directions,
            seed,
        } => {
            let model = load_model(model)?;
            let config = SweepConfig {
                directions,
                seed,
                ..SweepConfig::new(r_min, r_max, points, tf)
            };
            let table = run_sweep(&model, &config)?;
            table.write_csv(&path)?;
            let violations = table.dominance_violations(1e-9);
            writeln!(out, "rows={}", table.rows.len())?;
            writeln!(out, "out={}", path.display())?;
            writeln!(out, "dominance_violations={}", violations.len())?;
            for (r, name) in &violations {
                writeln!(out, "violation R={} column={name}", fmt_f64(*r))?;
            }
            Ok(if violations.is_empty() {
                EXIT_OK
            } else {
                EXIT_INVARIANT
            })
        }
        Command::Validate { seed, level } => {
            let dt = dt_override()?;
            let results = validate::run_all(seed, level.into(), dt);
            for r in &results {
                writeln!(out, "{r}")?;
            }
            let failed: Vec<&str> = results
                .iter()
                .filter(|r| !r.passed())
                .map(|r| r.name)
                .collect();
            if failed.is_empty() {
                writeln!(out, "all {} suites passed", results.len())?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "failed suites: {}", failed.join(", "))?;
                Ok(EXIT_INVARIANT)
            }
        }
    }
}

fn resilience(
    model: &LoadedModel,
    radius: f64,
    tf: Option<f64>,
    out: &mut dyn Write,
) -> Result<i32> {
    let t_f = tf.unwrap_or(model.task.t_f);
    let ops = Operators::from_partition(&model.partition)?;
    let signals = sweep::uncontrolled_signals(model)?;
    let n = model.partition.state_dim();
    let dirs = sweep::directions(n, sweep::DEFAULT_DIRECTIONS, 0);
    let row = sweep::sweep_row(model, &ops, &signals, &dirs, t_f, radius)?;
    let class = Classification::upper_bound(model.system.kind().exactness());
    writeln!(out, "t_f={}", fmt_f64(t_f))?;
    writeln!(out, "R={}", fmt_f64(radius))?;
    writeln!(out, "v_bar={}", fmt_f64(row.v_bar))?;
    writeln!(out, "r_a_bound={}", fmt_f64(row.r_a_bound))?;
    writeln!(out, "r_a_bound_class={}", class.as_str())?;
    writeln!(out, "gap_sampled={}", fmt_f64(row.gap))?;
    writeln!(out, "feasible={}", row.feasible)?;
    if row.gap > row.r_a_bound + 1e-9 * row.r_a_bound.abs().max(1.0) {
        writeln!(out, "dominance_violation=true")?;
        return Ok(EXIT_INVARIANT);
    }
    Ok(EXIT_OK)
}

fn opt_tf(model: &LoadedModel, uuc: &[f64], out: &mut dyn Write) -> Result<i32> {
    let part = &model.partition;
    let p = part.uncontrolled();
    let u = match uuc.len() {
        1 => Vector::from_element(p, uuc[0]),
        k if k == p => Vector::from_column_slice(uuc),
        k => {
            return Err(Error::Argument(format!(
                "--uuc takes 1 or {p} values, got {k}"
            )))
        }
    };
    let t_star = optimal_final_time(&part.b_c, &part.b_uc, &model.task.x_tilde, &u)?;
    let energy =
        malfunctioning_energy_driftless(&part.b_c, &part.b_uc, &model.task.x_tilde, t_star, &u)?;
    let class = Classification::equality(model.system.kind().exactness());
    writeln!(out, "t_opt={}", fmt_f64(t_star))?;
    writeln!(out, "t_opt_class={}", class.as_str())?;
    writeln!(out, "e_malfunctioning_at_t_opt={}", fmt_f64(energy))?;
    match brute_force_opt_tf(&part.b_c, &part.b_uc, &model.task.x_tilde, &u) {
        Ok(t) => writeln!(out, "t_opt_golden_section={}", fmt_f64(t))?,
        Err(e) => writeln!(out, "t_opt_golden_section=unavailable ({e})")?,
    }
    Ok(EXIT_OK)
}
