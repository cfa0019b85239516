//! Exact independence number, by subset enumeration and by maximum-clique
//! branch and bound on the complement.

use serde::Serialize;

use crate::graph::Graph;

/// Largest `n` for the 2^n subset loop.
pub const MAX_BRUTEFORCE_N: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlphaError {
    #[error("subset enumeration needs n <= {MAX_BRUTEFORCE_N}, got {0}")]
    TooLarge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaMethod {
    SubsetBruteforce,
    CliqueComplement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaResult {
    pub alpha: usize,
    /// Bitset of a maximum independent set; the lexicographically smallest one.
    pub witness: u32,
    pub method: AlphaMethod,
}

impl AlphaResult {
    pub fn witness_vertices(&self) -> Vec<usize> {
        (0..32).filter(|&v| self.witness >> v & 1 == 1).collect()
    }
}

/// Sorted vertex lists compare lexicographically; on bitsets that is the
/// reversed-bit comparison. Returns true if `a` precedes `b`.
fn lex_less(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}

pub fn alpha_bruteforce(g: &Graph) -> Result<AlphaResult, AlphaError> {
    let n = g.n();
    if n > MAX_BRUTEFORCE_N {
        return Err(AlphaError::TooLarge(n));
    }
    let mut best = 0u32;
    let mut best_size = 0u32;
    for s in 0u32..1 << n {
        let size = s.count_ones();
        if size < best_size {
            continue;
        }
        let independent = (0..n).all(|v| s >> v & 1 == 0 || g.neighbors(v) & s == 0);
        if independent && (size > best_size || lex_less(s, best)) {
            best = s;
            best_size = size;
        }
    }
    Ok(AlphaResult { alpha: best_size as usize, witness: best, method: AlphaMethod::SubsetBruteforce })
}

pub fn alpha_clique(g: &Graph) -> AlphaResult {
    let h = g.complement();
    let n = h.n();
    let rows: Vec<u32> = (0..n).map(|v| h.neighbors(v)).collect();
    let all = crate::graph::low_mask(n);
    let alpha = max_clique_size(&rows, all);
    // Lexicographically smallest maximum clique: commit vertices in index
    // order whenever the rest can still be completed.
    let mut chosen = 0u32;
    let mut cand = all;
    let mut need = alpha;
    for v in 0..n {
        if need == 0 {
            break;
        }
        if cand >> v & 1 == 0 {
            continue;
        }
        let rest = cand & rows[v] & !low_mask_upto(v);
        if 1 + max_clique_size(&rows, rest) >= need {
            chosen |= 1 << v;
            cand = rest;
            need -= 1;
        } else {
            cand &= !(1 << v);
        }
    }
    AlphaResult { alpha, witness: chosen, method: AlphaMethod::CliqueComplement }
}

fn low_mask_upto(v: usize) -> u32 {
    if v >= 31 {
        u32::MAX
    } else {
        (1u32 << (v + 1)) - 1
    }
}

fn max_clique_size(rows: &[u32], cand: u32) -> usize {
    let mut best = 0;
    expand(rows, 0, cand, &mut best);
    best
}

/// Branch and bound with greedy coloring bounds. Vertices within the candidate
/// set are colored in descending-degree order; a branch is cut when the color
/// count cannot beat the incumbent.
fn expand(rows: &[u32], size: usize, cand: u32, best: &mut usize) {
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    let (order, colors) = color_sort(rows, cand);
    let mut cand = cand;
    for k in (0..order.len()).rev() {
        if size + colors[k] <= *best {
            return;
        }
        let v = order[k];
        expand(rows, size + 1, cand & rows[v], best);
        cand &= !(1 << v);
    }
}

/// Returns vertices with nondecreasing color numbers (1-based).
fn color_sort(rows: &[u32], cand: u32) -> (Vec<usize>, Vec<usize>) {
    let mut verts: Vec<usize> = (0..32).filter(|&v| cand >> v & 1 == 1).collect();
    verts.sort_by_key(|&v| (std::cmp::Reverse((rows[v] & cand).count_ones()), v));
    let mut classes: Vec<u32> = Vec::new();
    for &v in &verts {
        match classes.iter_mut().find(|c| **c & rows[v] == 0) {
            Some(c) => *c |= 1 << v,
            None => classes.push(1 << v),
        }
    }
    let mut order = Vec::with_capacity(verts.len());
    let mut colors = Vec::with_capacity(verts.len());
    for (k, &class) in classes.iter().enumerate() {
        for &v in &verts {
            if class >> v & 1 == 1 {
                order.push(v);
                colors.push(k + 1);
            }
        }
    }
    (order, colors)
}
