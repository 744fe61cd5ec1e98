//! Linearized aircraft with one stuck control surface: energy gap against a
//! sweep of uncontrolled inputs.
//!
//! Run with `cargo run --example admire_linear`.

use resilience::builtins;
use resilience::cli::sweep::{run_sweep, SweepConfig};

fn main() -> resilience::Result<()> {
    let model = builtins::admire_linear();
    let table = run_sweep(&model, &SweepConfig::new(0.1, 10.0, 8, 1.0))?;
    println!(
        "{:>10} {:>14} {:>14} {:>14}",
        "R", "worst gap", "bound", "v̄"
    );
    for row in &table.rows {
        println!(
            "{:>10.4} {:>14.6e} {:>14.6e} {:>14.6e}",
            row.radius, row.gap, row.r_a_bound, row.v_bar
        );
    }
    let violations = table.dominance_violations(0.0);
    println!("\nsignals checked: {}", table.signal_names.join(", "));
    println!("bound violations: {}", violations.len());
    Ok(())
}
