//! Dimension-restricted quantum value of Quad-C5 in three and four dimensions.

use ctxgap::eta::{optimize_eta, verify_orthrep, EtaSettings};
use ctxgap::graph::named;

fn main() -> Result<(), ctxgap::eta::EtaError> {
    let g = named::quad_c5();
    for d in [3, 4] {
        let r = optimize_eta(&g, &EtaSettings::new(d, 100, 0))?;
        let check = verify_orthrep(&r.best, &g, 1e-10)?;
        println!(
            "d={d}  lambda_max {:.10}  orth {:.1e}  feasible {}/{}  verified {}",
            r.best.lambda_max,
            r.best.orth_error,
            r.feasible_restarts(),
            r.restart_lambdas.len(),
            check.passed
        );
    }
    Ok(())
}
