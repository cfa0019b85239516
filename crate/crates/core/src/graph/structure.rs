use std::collections::BTreeMap;

use serde::Serialize;

use super::Graph;
use crate::algebra::jacobi_eigen;

/// Induced five-cycles and how many of them contain each edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PentagonCover {
    /// Vertex sets, each sorted ascending; list sorted lexicographically.
    pub pentagons: Vec<[usize; 5]>,
    pub edge_multiplicity: BTreeMap<(usize, usize), usize>,
}

impl PentagonCover {
    /// Common multiplicity when every edge lies in the same number of pentagons.
    pub fn uniform_multiplicity(&self) -> Option<usize> {
        let mut it = self.edge_multiplicity.values();
        let first = *it.next()?;
        it.all(|&m| m == first).then_some(first)
    }
}

pub fn induced_pentagons(g: &Graph) -> PentagonCover {
    let n = g.n();
    let mut pentagons = Vec::new();
    let mut edge_multiplicity: BTreeMap<(usize, usize), usize> =
        g.edges().into_iter().map(|e| (e, 0)).collect();
    if n >= 5 {
        let mut idx = [0usize, 1, 2, 3, 4];
        loop {
            let set: u32 = idx.iter().fold(0, |s, &v| s | 1 << v);
            let is_cycle = idx.iter().all(|&v| (g.neighbors(v) & set).count_ones() == 2)
                && g.induced(set).map(|h| h.is_connected()).unwrap_or(false);
            if is_cycle {
                pentagons.push(idx);
                for (a, &u) in idx.iter().enumerate() {
                    for &v in &idx[a + 1..] {
                        if g.has_edge(u, v) {
                            *edge_multiplicity.get_mut(&(u, v)).expect("edge") += 1;
                        }
                    }
                }
            }
            // next 5-combination in lexicographic order
            let mut k = 5;
            loop {
                if k == 0 {
                    return PentagonCover { pentagons, edge_multiplicity };
                }
                k -= 1;
                if idx[k] < n - 5 + k {
                    break;
                }
            }
            idx[k] += 1;
            for t in k + 1..5 {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }
    PentagonCover { pentagons, edge_multiplicity }
}

/// Ascending.
pub fn degree_sequence(g: &Graph) -> Vec<usize> {
    let mut d: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    d.sort_unstable();
    d
}

/// Eigenvalues of the adjacency matrix, descending.
pub fn adjacency_spectrum(g: &Graph) -> Vec<f64> {
    let a = nalgebra::DMatrix::from_fn(g.n(), g.n(), |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
    jacobi_eigen(&a).expect("adjacency is symmetric").values
}
