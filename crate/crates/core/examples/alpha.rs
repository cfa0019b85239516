//! Independence numbers by subset enumeration and by maximum clique of the complement.

use ctxgap::alpha::{alpha_bruteforce, alpha_clique};
use ctxgap::graph::named;
use ctxgap::Graph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graphs = [
        ("C5", named::c5()),
        ("C7", named::c7()),
        ("Quad-C5", named::quad_c5()),
        ("Wagner", named::wagner()),
        ("K8", Graph::complete(8)?),
    ];
    for (name, g) in graphs {
        let brute = alpha_bruteforce(&g)?;
        let clique = alpha_clique(&g);
        assert_eq!(brute.witness, clique.witness);
        println!("{name:<8} alpha {}  witness {:?}", clique.alpha, clique.witness_vertices());
    }
    Ok(())
}
