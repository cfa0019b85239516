//! Qutrit or two-qubit indication for the six leading 8-vertex graphs.

use ctxgap::alpha::alpha_clique;
use ctxgap::eta::{classify_dimension, DEFAULT_RESTARTS};
use ctxgap::graph::{g6_encode, named};

fn main() -> Result<(), ctxgap::eta::EtaError> {
    for k in 1..=6 {
        let g = named::top6(k);
        let c = classify_dimension(&g, alpha_clique(&g).alpha, DEFAULT_RESTARTS, 0)?;
        println!(
            "{k} {:<8} eta3 >= {:.6}  eta4 >= {:.6}  {:?}",
            g6_encode(&g),
            c.eta3_lb,
            c.eta4_lb,
            c.d_star_indication
        );
    }
    Ok(())
}
