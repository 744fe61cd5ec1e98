//! How the resilience bound grows with the wind amplitude.
//!
//! Run with `cargo run --example wind_sensitivity`.

use resilience::builtins;
use resilience::nonlinear::{v_bound_on_ball, Operators};

fn main() -> resilience::Result<()> {
    let (t_f, radius) = (1.0, 1.0);
    println!("{:>6} {:>10} {:>14} {:>14}", "c", "D_f", "v̄", "bound");
    for c in [0.0, 0.5, 1.0, 2.0, 4.0] {
        let model = builtins::admire_wind(c);
        let ops = Operators::from_partition(&model.partition)?;
        let v_bar = v_bound_on_ball(&model.system, &model.task.x_tg, radius, t_f).v_bar;
        let bound = ops.resilience_bound_1act(t_f, radius, v_bar)?;
        println!(
            "{c:>6.2} {:>10.4} {v_bar:>14.6e} {bound:>14.6e}",
            model.system.lipschitz_f
        );
    }
    Ok(())
}
