//! Reference graphs used throughout the reproduction tables.

use super::Graph;

/// The ten-edge eight-vertex gap maximizer, graph6 `GCQb`o`.
pub const QUAD_C5_EDGES: [(usize, usize); 10] =
    [(0, 3), (0, 5), (1, 4), (1, 6), (2, 5), (2, 6), (2, 7), (3, 6), (3, 7), (4, 7)];

/// C8 plus the four long diagonals.
pub const WAGNER_EDGES: [(usize, usize); 12] = [
    (0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (0, 7), (0, 4), (1, 5), (2, 6), (3, 7),
];

/// Edge lists of the six highest-gap connected eight-vertex graphs, in the
/// published rank order.
pub const TOP6_EDGES: [&[(usize, usize)]; 6] = [
    &QUAD_C5_EDGES,
    &[(0, 3), (0, 5), (1, 4), (1, 5), (1, 7), (2, 5), (2, 6), (2, 7), (3, 6), (3, 7), (4, 6)],
    &WAGNER_EDGES,
    &[(0, 3), (0, 5), (0, 7), (1, 4), (1, 6), (2, 5), (2, 6), (2, 7), (3, 6), (3, 7), (4, 7)],
    &[(0, 3), (0, 5), (1, 4), (1, 5), (1, 6), (2, 5), (2, 6), (2, 7), (3, 6), (3, 7), (4, 7), (5, 7)],
    &[(0, 3), (0, 4), (0, 7), (1, 4), (1, 5), (2, 5), (2, 6), (2, 7), (3, 6), (4, 7)],
];

pub fn quad_c5() -> Graph {
    Graph::from_edges(8, &QUAD_C5_EDGES).expect("static edge list")
}

pub fn wagner() -> Graph {
    Graph::from_edges(8, &WAGNER_EDGES).expect("static edge list")
}

/// Graph of published rank `rank` (1-based, 1..=6).
pub fn top6(rank: usize) -> Graph {
    Graph::from_edges(8, TOP6_EDGES[rank - 1]).expect("static edge list")
}

pub fn c5() -> Graph {
    Graph::cycle(5).expect("n = 5")
}

pub fn c7() -> Graph {
    Graph::cycle(7).expect("n = 7")
}
