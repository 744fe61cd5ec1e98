//! Aircraft with a nonlinear wind disturbance: Grönwall bound on the
//! deviation from the driftless surrogate, and the resulting energy report.
//!
//! Run with `cargo run --example admire_wind`.

use resilience::builtins;
use resilience::cli::report::energy_report;
use resilience::model::InputSignal;
use resilience::nonlinear::{empirical_v, v_bound_at};
use resilience::numerics::{vec_norm, VecNorm};
use resilience::simulate::default_dt;

fn main() -> resilience::Result<()> {
    let model = builtins::admire_wind(1.0);
    let x0 = &model.task.x0;
    for t_f in [0.1, 0.5, 1.0] {
        let bound = v_bound_at(&model.system, x0, t_f);
        let u = InputSignal::sinusoid(model.partition.b.ncols(), 1.0, 5.0, 0.0);
        let v = empirical_v(
            &model.system,
            &model.partition,
            x0,
            &u,
            t_f,
            default_dt(t_f),
        )?;
        println!(
            "t_f = {t_f:<4} ‖v‖∞ = {:.6e}  v̄ = {:.6e}",
            vec_norm(&v, VecNorm::Inf),
            bound.v_bar
        );
    }

    let report = energy_report(&model, Some(1.0), Some(1.0))?;
    println!();
    for (key, value) in report.key_values() {
        println!("{key:>28} = {value}");
    }
    Ok(())
}
