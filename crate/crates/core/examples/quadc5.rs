//! Exact and 50-digit verification of the Quad-C5 qutrit construction.

use ctxgap::algebra::verify_quadc5_construction;

fn main() -> Result<(), ctxgap::algebra::AlgebraError> {
    let r = verify_quadc5_construction(50)?;
    for c in &r.checks {
        println!("{:<24} exact {:<5} residual {:.1e}", c.name, c.exact, c.residual);
    }
    println!("p(λ) = {}", r.charpoly);
    println!("λ_max = {}", r.lambda_max);
    println!("all passed {}", r.all_passed);
    Ok(())
}
