//! Exhaustive canonical labeling for small graphs.
//!
//! The key is the lexicographically smallest upper-triangle word (graph6 bit
//! order, first bit most significant) over all vertex orderings that respect
//! an isomorphism-invariant color refinement. Because the refinement is
//! invariant, the restricted minimum is still a complete invariant.

use super::{Graph, GraphError};

/// Largest `n` accepted by [`canonical_key`].
pub const MAX_CANON_N: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    pub n: u8,
    pub bits: u64,
}

impl CanonicalKey {
    /// The graph whose upper-triangle word is `bits`.
    pub fn to_graph(&self) -> Graph {
        let n = self.n as usize;
        let total = n * (n - 1) / 2;
        let mut g = Graph::empty(n).expect("key has valid n");
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if self.bits >> (total - 1 - k) & 1 == 1 {
                    g.add_edge(i, j).expect("in range");
                }
                k += 1;
            }
        }
        g
    }
}

pub fn canonical_key(g: &Graph) -> Result<CanonicalKey, GraphError> {
    let n = g.n();
    if n > MAX_CANON_N {
        return Err(GraphError::TooLargeForCanon(n));
    }
    let colors = refine(g);
    let mut search = Search::new(g, &colors);
    search.run();
    Ok(CanonicalKey { n: n as u8, bits: search.best })
}

/// Canonical representative of the isomorphism class of `g`.
pub fn canonical_form(g: &Graph) -> Result<Graph, GraphError> {
    Ok(canonical_key(g)?.to_graph())
}

/// Stable color refinement starting from degrees. Colors are dense ranks of
/// sorted signatures, so they depend only on the isomorphism class.
fn refine(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut colors: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    colors = rank(&colors.iter().map(|&c| vec![c]).collect::<Vec<_>>());
    loop {
        let sigs: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                let mut s: Vec<usize> = (0..n).filter(|&u| g.has_edge(u, v)).map(|u| colors[u]).collect();
                s.sort_unstable();
                s.insert(0, colors[v]);
                s
            })
            .collect();
        let next = rank(&sigs);
        let before = colors.iter().max().copied().unwrap_or(0);
        let after = next.iter().max().copied().unwrap_or(0);
        colors = next;
        if after == before {
            return colors;
        }
    }
}

fn rank(sigs: &[Vec<usize>]) -> Vec<usize> {
    let mut distinct: Vec<&Vec<usize>> = sigs.iter().collect();
    distinct.sort();
    distinct.dedup();
    sigs.iter().map(|s| distinct.binary_search(&s).expect("present")).collect()
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    /// `slot_color[p]` is the color class that position `p` must draw from.
    slot_color: Vec<usize>,
    colors: &'a [usize],
    order: Vec<usize>,
    used: u32,
    best: u64,
    have_best: bool,
    total_bits: usize,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, colors: &'a [usize]) -> Self {
        let n = g.n();
        let mut slot_color = colors.to_vec();
        slot_color.sort_unstable();
        Search {
            g,
            n,
            slot_color,
            colors,
            order: Vec::with_capacity(n),
            used: 0,
            best: u64::MAX,
            have_best: false,
            total_bits: n * (n - 1) / 2,
        }
    }

    fn run(&mut self) {
        if self.n <= 1 {
            self.best = 0;
            return;
        }
        self.descend(0, 0);
    }

    /// `prefix` holds the bits of columns `1..depth` in order.
    fn descend(&mut self, depth: usize, prefix: u64) {
        if depth == self.n {
            if !self.have_best || prefix < self.best {
                self.best = prefix;
                self.have_best = true;
            }
            return;
        }
        let want = self.slot_color[depth];
        let bits_after = self.total_bits - depth * (depth + 1) / 2;
        for v in 0..self.n {
            if self.used >> v & 1 == 1 || self.colors[v] != want {
                continue;
            }
            let mut p = prefix;
            for &u in &self.order {
                p = p << 1 | self.g.has_edge(u, v) as u64;
            }
            if self.have_best && p > self.best >> bits_after {
                continue;
            }
            self.order.push(v);
            self.used |= 1 << v;
            self.descend(depth + 1, p);
            self.used &= !(1 << v);
            self.order.pop();
        }
    }
}
