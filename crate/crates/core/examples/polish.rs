//! Newton refinement of the SDP optimality conditions to 100 digits.

use ctxgap::graph::named;
use ctxgap::theta::{lovasz_theta, polish_theta, SolveSettings};

fn main() -> Result<(), ctxgap::theta::ThetaError> {
    let g = named::quad_c5();
    let c = lovasz_theta(&g, &SolveSettings::high_accuracy())?;
    let p = polish_theta(&g, &c, 100)?;
    println!("double   {:.15}", c.theta);
    println!("polished {}", p.theta);
    for (k, r) in p.residual_history.iter().enumerate() {
        println!("  step {k}: residual {r:.1e}");
    }
    Ok(())
}
