//! Counts non-isomorphic graphs for n = 1..=8 and round-trips them through graph6.

use ctxgap::graph::{enumerate_graphs, g6_decode, g6_encode};
use ctxgap::pipeline::{connected_count, graph_count};

fn main() -> Result<(), ctxgap::GraphError> {
    println!("{:>2} {:>6} {:>9}", "n", "all", "connected");
    for n in 1..=8 {
        let graphs = enumerate_graphs(n)?;
        let connected = graphs.iter().filter(|g| g.is_connected()).count();
        assert_eq!(Some(graphs.len()), graph_count(n));
        assert_eq!(Some(connected), connected_count(n));
        for g in &graphs {
            assert_eq!(&g6_decode(&g6_encode(g))?, g);
        }
        println!("{n:>2} {:>6} {connected:>9}", graphs.len());
    }
    Ok(())
}
