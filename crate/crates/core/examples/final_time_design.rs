//! Choosing the final time that minimizes controlled energy under a known
//! constant uncontrolled input, checked against a golden-section search.
//!
//! Run with `cargo run --example final_time_design`.

use resilience::builtins;
use resilience::driftless::{malfunctioning_energy_driftless, optimal_final_time};
use resilience::numerics::Vector;
use resilience::simulate::brute_force_opt_tf;

fn main() -> resilience::Result<()> {
    let model = builtins::underwater_robot();
    let (b_c, b_uc) = (&model.partition.b_c, &model.partition.b_uc);
    let x = &model.task.x_tilde;
    for level in [0.25, 0.5, 1.0, -1.0] {
        let u = Vector::from_element(1, level);
        let t = optimal_final_time(b_c, b_uc, x, &u)?;
        let search = brute_force_opt_tf(b_c, b_uc, x, &u)?;
        let e = malfunctioning_energy_driftless(b_c, b_uc, x, t, &u)?;
        println!("ū = {level:+.2}: t* = {t:.8}, search {search:.8}, energy {e:.6e}");
    }
    Ok(())
}
