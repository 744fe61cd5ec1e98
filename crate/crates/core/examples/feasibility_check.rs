//! Box feasibility of the mean controls, closed form against vertex
//! enumeration, over initial offsets and horizons.
//!
//! Run with `cargo run --example feasibility_check`.

use resilience::builtins;
use resilience::cli::validate::{enumerate_malfunctioning, enumerate_nominal};
use resilience::model::ActuatorPartition;
use resilience::nonlinear::{v_bound_at, Operators};

fn main() -> resilience::Result<()> {
    let base = builtins::admire_linear();
    let x_tg = &base.task.x_tg;
    println!(
        "{:>7} {:>6} {:>12} {:>8} {:>8}",
        "scale", "t_f", "v̄", "nominal", "malf"
    );
    for scale in [1.0, 0.1, 0.01] {
        let x0 = x_tg + (&base.task.x0 - x_tg) * scale;
        let part = ActuatorPartition::new(&base.system, &x0, &base.partition.uncontrolled_indices)?;
        let ops = Operators::from_partition(&part)?;
        let x = &x0 - x_tg;
        for t_f in [1.0, 0.5, 0.25, 0.1, 0.05] {
            let v_bar = v_bound_at(&base.system, &x0, t_f).v_bar;
            let nominal = ops.feasible_nominal(&x, t_f, v_bar);
            let malf = ops.feasible_malfunctioning(&x, t_f, v_bar);
            assert_eq!(nominal, enumerate_nominal(&part.b, &x, t_f, v_bar));
            assert_eq!(
                malf,
                enumerate_malfunctioning(&part.b_c, &part.b_uc, &x, t_f, v_bar)
            );
            println!("{scale:>7} {t_f:>6} {v_bar:>12.4e} {nominal:>8} {malf:>8}");
        }
    }
    Ok(())
}
