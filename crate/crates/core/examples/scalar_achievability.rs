//! A scalar system where the resilience bound is attained exactly.
//!
//! Run with `cargo run --example scalar_achievability`.

use resilience::cli::validate::enumerated_scalar_gap;
use resilience::driftless::resilience_bound_driftless;
use resilience::numerics::Matrix;

fn main() -> resilience::Result<()> {
    let b = Matrix::from_row_slice(1, 2, &[1.0, 1.0]);
    let one = Matrix::from_element(1, 1, 1.0);
    for (t_f, radius) in [(1.0, 1.0), (2.0, 1.0), (1.0, 3.0), (0.5, 0.2)] {
        let bound = resilience_bound_driftless(&b, &one, &one, t_f, radius)?;
        let sup = enumerated_scalar_gap(&b, &one, &one, t_f, radius);
        println!("t_f = {t_f}, R = {radius}: bound {bound:.12}, attained {sup:.12}");
    }
    Ok(())
}
