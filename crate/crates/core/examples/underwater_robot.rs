//! Energies of a planar robot with three thrusters after losing the third.
//!
//! Run with `cargo run --example underwater_robot`.

use resilience::builtins;
use resilience::cli::report::energy_report;
use resilience::driftless::{optimal_final_time, worst_case_total_exact_1act};

fn main() -> resilience::Result<()> {
    let model = builtins::underwater_robot();
    let report = energy_report(&model, None, None)?;
    for (key, value) in report.key_values() {
        println!("{key:>28} = {value}");
    }

    let part = &model.partition;
    let x = &model.task.x_tilde;
    let worst = worst_case_total_exact_1act(&part.b_c, &part.b_uc, x, model.task.t_f)?;
    println!(
        "\nworst uncontrolled thrust: constant {:+}",
        worst.forcing()
    );
    let t = optimal_final_time(
        &part.b_c,
        &part.b_uc,
        x,
        &resilience::Vector::from_element(1, worst.forcing()),
    )?;
    println!("cheapest final time under that thrust: {t:.6}");
    Ok(())
}
