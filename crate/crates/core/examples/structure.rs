//! Hubs, induced pentagons and the golden-ratio spectrum of Quad-C5.

use ctxgap::graph::named;
use ctxgap::pipeline::structure_report;

fn main() {
    let s = structure_report(&named::quad_c5());
    println!("degrees {:?}  hubs {:?}  K22 {:?}", s.degree_sequence, s.hubs, s.hub_k22);
    for p in &s.pentagons {
        println!("pentagon {p:?}");
    }
    println!("uniform edge multiplicity {:?}", s.uniform_multiplicity);
    for e in &s.spectrum {
        println!("{:+.6} x{}  {}", e.value, e.multiplicity, e.closed_form());
    }
    println!("{} eigenvalues in Q(sqrt 5)", s.golden_count);
}
