//! Simple undirected graphs on at most 32 vertices.
//!
//! Adjacency is one `u32` bitset per vertex. All operations are pure and the
//! type is `Copy`, so graphs can be passed freely between worker threads.

mod canon;
mod enumerate;
mod g6;
pub mod named;
mod structure;

pub use canon::{canonical_key, canonical_form, CanonicalKey, MAX_CANON_N};
pub use enumerate::{enumerate_graphs, MAX_ENUM_N};
pub use g6::{g6_decode, g6_encode, read_g6_file, write_g6_file};
pub use structure::{adjacency_spectrum, degree_sequence, induced_pentagons, PentagonCover};

use thiserror::Error;

/// Largest supported vertex count.
pub const MAX_N: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count {0} outside 1..={MAX_N}")]
    VertexCount(usize),
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph6: empty input")]
    EmptyInput,
    #[error("graph6: byte {byte:#04x} at offset {offset} is outside [63, 126]")]
    ByteOutOfRange { offset: usize, byte: u8 },
    #[error("graph6: long or sparse6 format at offset {offset} is not supported")]
    UnsupportedFormat { offset: usize },
    #[error("graph6: expected {expected} data bytes for n = {n}, found {found} (offset {offset})")]
    Truncated { n: usize, expected: usize, found: usize, offset: usize },
    #[error("graph6: trailing garbage starting at offset {offset}")]
    TrailingGarbage { offset: usize },
    #[error("graph6: nonzero padding bits in final byte at offset {offset}")]
    NonzeroPadding { offset: usize },
    #[error("graph6 file {path}, line {line}: {source}")]
    FileLine { path: String, line: usize, source: Box<GraphError> },
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("canonicalization is exhaustive and limited to n <= {MAX_CANON_N}, got {0}")]
    TooLargeForCanon(usize),
    #[error("enumeration supports 1 <= n <= {MAX_ENUM_N}, got {0}")]
    EnumRange(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: [u32; MAX_N],
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_N {
            return Err(GraphError::VertexCount(n));
        }
        Ok(Graph { n, adj: [0; MAX_N] })
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        let full = low_mask(n);
        for v in 0..n {
            g.adj[v] = full & !(1 << v);
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        if n >= 3 {
            for v in 0..n {
                g.add_edge(v, (v + 1) % n)?;
            }
        } else if n == 2 {
            g.add_edge(0, 1)?;
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Neighbor set of `v` as a bitset.
    pub fn neighbors(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.adj[a] >> b & 1 == 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        self.adj[a] |= 1 << b;
        self.adj[b] |= 1 << a;
        Ok(())
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        self.adj[a] &= !(1 << b);
        self.adj[b] &= !(1 << a);
        Ok(())
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::VertexOutOfRange { v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj[..self.n].iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            let mut row = self.adj[i] & !low_mask(i + 1);
            while row != 0 {
                let j = row.trailing_zeros() as usize;
                out.push((i, j));
                row &= row - 1;
            }
        }
        out
    }

    pub fn complement(&self) -> Graph {
        let full = low_mask(self.n);
        let mut g = *self;
        for v in 0..self.n {
            g.adj[v] = !self.adj[v] & full & !(1 << v);
        }
        g
    }

    /// BFS reachability from vertex 0.
    pub fn is_connected(&self) -> bool {
        let full = low_mask(self.n);
        let mut seen = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                next |= self.adj[v];
                f &= f - 1;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen & full == full
    }

    /// True when no two vertices of `set` are adjacent.
    pub fn is_independent(&self, set: u32) -> bool {
        let mut s = set;
        while s != 0 {
            let v = s.trailing_zeros() as usize;
            if self.adj[v] & set != 0 {
                return false;
            }
            s &= s - 1;
        }
        true
    }

    /// Graph with vertex `v` of `self` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(self.n)?;
        for (a, b) in self.edges() {
            g.add_edge(perm[a], perm[b])?;
        }
        Ok(g)
    }

    /// Subgraph induced by the vertex set `set`, relabeled in increasing order.
    pub fn induced(&self, set: u32) -> Result<Graph, GraphError> {
        let verts: Vec<usize> = (0..self.n).filter(|&v| set >> v & 1 == 1).collect();
        let mut g = Graph::empty(verts.len())?;
        for (a, &va) in verts.iter().enumerate() {
            for (b, &vb) in verts.iter().enumerate().skip(a + 1) {
                if self.has_edge(va, vb) {
                    g.add_edge(a, b)?;
                }
            }
        }
        Ok(g)
    }

    /// Disjoint union with `other` placed on vertices `self.n()..`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(self.n + other.n)?;
        for (a, b) in self.edges() {
            g.add_edge(a, b)?;
        }
        for (a, b) in other.edges() {
            g.add_edge(a + self.n, b + self.n)?;
        }
        Ok(g)
    }

    /// Dense 0/1 adjacency matrix, row-major.
    pub fn adjacency_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| if self.has_edge(i, j) { 1.0 } else { 0.0 }).collect())
            .collect()
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

pub(crate) fn low_mask(k: usize) -> u32 {
    if k >= 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}
