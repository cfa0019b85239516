use rayon::prelude::*;

use super::{canonical_key, CanonicalKey, Graph, GraphError};

pub const MAX_ENUM_N: usize = 8;

/// One representative per isomorphism class on `n` vertices, sorted by
/// canonical key. Each class on `n - 1` vertices is extended by every
/// neighbor set of a new vertex and the results are deduplicated by key.
pub fn enumerate_graphs(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n == 0 || n > MAX_ENUM_N {
        return Err(GraphError::EnumRange(n));
    }
    let mut level: Vec<CanonicalKey> = vec![canonical_key(&Graph::empty(1)?)?];
    for m in 2..=n {
        let prev: Vec<Graph> = level.iter().map(CanonicalKey::to_graph).collect();
        let mut keys: Vec<CanonicalKey> = prev
            .par_iter()
            .flat_map_iter(|g| {
                let g = *g;
                (0u32..1 << (m - 1)).map(move |nbrs| {
                    let mut h = Graph::empty(m).expect("m <= 8");
                    for (a, b) in g.edges() {
                        h.add_edge(a, b).expect("in range");
                    }
                    let mut s = nbrs;
                    while s != 0 {
                        let v = s.trailing_zeros() as usize;
                        h.add_edge(v, m - 1).expect("in range");
                        s &= s - 1;
                    }
                    canonical_key(&h).expect("m <= 8")
                })
            })
            .collect();
        keys.par_sort_unstable();
        keys.dedup();
        level = keys;
    }
    Ok(level.iter().map(CanonicalKey::to_graph).collect())
}
