//! Lovász theta with its primal-dual certificate, checked independently.

use ctxgap::graph::named;
use ctxgap::theta::{lovasz_theta, verify_certificate, SolveSettings, Thresholds};

fn main() -> Result<(), ctxgap::theta::ThetaError> {
    for (name, g) in [("C5", named::c5()), ("C7", named::c7()), ("Quad-C5", named::quad_c5())] {
        let c = lovasz_theta(&g, &SolveSettings::high_accuracy())?;
        let rep = verify_certificate(&c, &g, &Thresholds::uniform(1e-7))?;
        println!("{name:<8} theta {:.12}  {} iterations  certificate {}", c.theta, c.iterations, rep.passed);
        for k in &rep.checks {
            println!("    {:<13} {:+.2e}", k.name, k.value);
        }
    }
    Ok(())
}
