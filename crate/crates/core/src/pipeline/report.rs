use serde::Serialize;

use super::{GapRecord, PipelineError, RefinedRecord};
use crate::alpha::alpha_clique;
use crate::eta::{classify_dimension, DStar};
use crate::graph::{adjacency_spectrum, degree_sequence, induced_pentagons, named, Graph};
use crate::theta::{lovasz_theta, verify_certificate, SolveSettings, Thresholds};

pub fn render_ranking(records: &[GapRecord]) -> String {
    let mut out = format!(
        "{:>4} {:<10} {:>5} {:>5} {:>8} {:>8} {:>8}\n",
        "rank", "g6", "edges", "alpha", "theta", "delta", "ratio"
    );
    for (i, r) in records.iter().enumerate() {
        out += &format!(
            "{:>4} {:<10} {:>5} {:>5} {:>8.5} {:>8.5} {:>8.5}\n",
            i + 1,
            r.g6,
            r.edge_count,
            r.alpha,
            r.theta,
            r.delta,
            r.ratio
        );
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificationRow {
    pub rank: usize,
    pub g6: String,
    pub theta: f64,
    pub r_p: f64,
    pub r_edge: f64,
    pub lambda_min_x: f64,
    pub r_d: f64,
    pub lambda_min_s: f64,
    pub passed: bool,
    pub failed: Vec<&'static str>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificationTable {
    pub thresholds: Thresholds,
    pub rows: Vec<CertificationRow>,
    pub all_passed: bool,
}

/// Re-verifies the certificates of ranks 1..=k from the primal and dual
/// variables alone.
pub fn certify_top(refined: &[RefinedRecord], k: usize, t: &Thresholds) -> Result<CertificationTable, PipelineError> {
    let rows = (1..=k)
        .map(|rank| {
            let r = refined.iter().find(|r| r.rank == rank).ok_or(PipelineError::MissingCertificate(rank))?;
            let g = crate::graph::g6_decode(&r.record.g6)?;
            let rep = verify_certificate(&r.certificate, &g, t)?;
            let value = |name: &str| rep.checks.iter().find(|c| c.name == name).map_or(f64::NAN, |c| c.value);
            Ok(CertificationRow {
                rank,
                g6: r.record.g6.clone(),
                theta: rep.theta,
                r_p: value("r_p"),
                r_edge: value("r_edge"),
                lambda_min_x: value("lambda_min_X"),
                r_d: value("r_d"),
                lambda_min_s: value("lambda_min_S"),
                passed: rep.passed,
                failed: rep.failed(),
            })
        })
        .collect::<Result<Vec<_>, PipelineError>>()?;
    let all_passed = rows.iter().all(|r| r.passed);
    Ok(CertificationTable { thresholds: *t, rows, all_passed })
}

pub fn render_certification(t: &CertificationTable) -> String {
    let mut out = format!(
        "{:>4} {:<10} {:>8} {:>10} {:>10} {:>10} {:>10} {:>10} {}\n",
        "rank", "g6", "theta", "r_p", "r_edge", "lmin(X)", "r_d", "lmin(S)", "status"
    );
    for r in &t.rows {
        out += &format!(
            "{:>4} {:<10} {:>8.5} {:>+10.1e} {:>+10.1e} {:>+10.1e} {:>+10.1e} {:>+10.1e} {}\n",
            r.rank,
            r.g6,
            r.theta,
            r.r_p,
            r.r_edge,
            r.lambda_min_x,
            r.r_d,
            r.lambda_min_s,
            if r.passed { "pass".to_string() } else { format!("FAIL {}", r.failed.join(",")) }
        );
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyRow {
    pub label: String,
    pub n: usize,
    pub alpha: usize,
    pub theta: f64,
    pub delta: f64,
    pub eta3_lb: f64,
    pub d_star: DStar,
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchyTable {
    pub rows: Vec<HierarchyRow>,
    /// Δ strictly increases down the table.
    pub ordered: bool,
    pub min_margin: f64,
}

/// α, θ, Δ and the indicated d* for C5, C7, Wagner and Quad-C5.
pub fn hierarchy_report(restarts: usize, seed: u64) -> Result<HierarchyTable, PipelineError> {
    let graphs = [("C5", named::c5()), ("C7", named::c7()), ("Wagner", named::wagner()), ("Quad-C5", named::quad_c5())];
    let rows = graphs
        .into_iter()
        .map(|(label, g)| {
            let alpha = alpha_clique(&g).alpha;
            let theta = lovasz_theta(&g, &SolveSettings::high_accuracy())?.theta;
            let class = classify_dimension(&g, alpha, restarts, seed)?;
            Ok(HierarchyRow {
                label: label.into(),
                n: g.n(),
                alpha,
                theta,
                delta: theta - alpha as f64,
                eta3_lb: class.eta3_lb,
                d_star: class.d_star_indication,
            })
        })
        .collect::<Result<Vec<_>, PipelineError>>()?;
    let margins: Vec<f64> = rows.windows(2).map(|w| w[1].delta - w[0].delta).collect();
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(HierarchyTable { ordered: min_margin > 0.0, min_margin, rows })
}

pub fn d_star_label(d: DStar) -> &'static str {
    match d {
        DStar::QutritWitness => "3",
        DStar::IndicatedTwoQubit => "4†",
        DStar::Undetermined => "?",
    }
}

pub fn render_hierarchy(t: &HierarchyTable) -> String {
    let mut out = format!("{:<8} {:>2} {:>5} {:>8} {:>8} {:>3}\n", "graph", "n", "alpha", "theta", "delta", "d*");
    for r in &t.rows {
        out += &format!(
            "{:<8} {:>2} {:>5} {:>8.5} {:>8.5} {:>3}\n",
            r.label,
            r.n,
            r.alpha,
            r.theta,
            r.delta,
            d_star_label(r.d_star)
        );
    }
    out
}

/// An adjacency eigenvalue with multiplicity, and its (a, b) with
/// λ = (a + b√5)/2 when it lies in Q(√5).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub value: f64,
    pub multiplicity: usize,
    pub golden: Option<(i64, i64)>,
}

impl SpectrumEntry {
    /// `(a ± b√5)/2` in lowest terms, or `-` when untagged.
    pub fn closed_form(&self) -> String {
        let Some((a, b)) = self.golden else { return "-".into() };
        let halve = a % 2 == 0 && b % 2 == 0;
        let (p, q) = if halve { (a / 2, b / 2) } else { (a, b) };
        let root = if q.abs() == 1 { "√5".to_string() } else { format!("{}√5", q.abs()) };
        let term = match (p, q) {
            (p, 0) => p.to_string(),
            (0, q) => format!("{}{root}", if q < 0 { "-" } else { "" }),
            (p, q) => format!("{p} {} {root}", if q < 0 { '-' } else { '+' }),
        };
        match (halve, q) {
            (true, _) => term,
            (false, 0) => format!("{term}/2"),
            (false, _) => format!("({term})/2"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub n: usize,
    pub edges: usize,
    /// Ascending.
    pub degree_sequence: Vec<usize>,
    pub regular: Option<usize>,
    /// Vertices of above-average degree; empty for regular graphs.
    pub hubs: Vec<usize>,
    pub leaves: Vec<usize>,
    /// Bipartition when the hubs induce K_{2,2}.
    pub hub_k22: Option<([usize; 2], [usize; 2])>,
    pub pentagons: Vec<[usize; 5]>,
    /// (u, v, number of induced pentagons through uv).
    pub edge_multiplicity: Vec<(usize, usize, usize)>,
    pub uniform_multiplicity: Option<usize>,
    /// Descending.
    pub spectrum: Vec<SpectrumEntry>,
    /// Eigenvalues in Q(√5), counted with multiplicity.
    pub golden_count: usize,
}

const GOLDEN_TOL: f64 = 1e-9;
const GOLDEN_MAX_B: i64 = 20;
const MULTIPLICITY_TOL: f64 = 1e-6;

/// Smallest |b| with 2λ − b√5 within tolerance of an integer a.
fn golden_tag(lambda: f64) -> Option<(i64, i64)> {
    let s5 = 5f64.sqrt();
    (0..=GOLDEN_MAX_B).flat_map(|b| [b, -b]).find_map(|b| {
        let rest = 2.0 * lambda - b as f64 * s5;
        let a = rest.round();
        ((rest - a).abs() <= 2.0 * GOLDEN_TOL).then_some((a as i64, b))
    })
}

fn k22(g: &Graph, hubs: &[usize]) -> Option<([usize; 2], [usize; 2])> {
    if hubs.len() != 4 {
        return None;
    }
    let a = hubs[0];
    let side: Vec<usize> = hubs[1..].iter().copied().filter(|&v| !g.has_edge(a, v)).collect();
    let [b] = side[..] else { return None };
    let others: Vec<usize> = hubs.iter().copied().filter(|&v| v != a && v != b).collect();
    let (x, y) = (others[0], others[1]);
    let ok = !g.has_edge(a, b)
        && !g.has_edge(x, y)
        && [a, b].iter().all(|&u| g.has_edge(u, x) && g.has_edge(u, y));
    ok.then_some(([a, b], [x, y]))
}

pub fn structure_report(g: &Graph) -> StructureReport {
    let n = g.n();
    let degrees = degree_sequence(g);
    let regular = (degrees.first() == degrees.last()).then(|| degrees[0]);
    let twice_mean = 2 * g.edge_count();
    let (hubs, leaves): (Vec<usize>, Vec<usize>) = if regular.is_some() {
        (Vec::new(), (0..n).collect())
    } else {
        (0..n).partition(|&v| g.degree(v) * n > twice_mean)
    };
    let hub_k22 = k22(g, &hubs);
    let cover = induced_pentagons(g);
    let uniform_multiplicity = cover.uniform_multiplicity();

    let mut spectrum: Vec<SpectrumEntry> = Vec::new();
    for v in adjacency_spectrum(g) {
        match spectrum.last_mut() {
            Some(e) if (e.value - v).abs() < MULTIPLICITY_TOL => e.multiplicity += 1,
            _ => spectrum.push(SpectrumEntry { value: v, multiplicity: 1, golden: golden_tag(v) }),
        }
    }
    let golden_count = spectrum.iter().filter(|e| e.golden.is_some()).map(|e| e.multiplicity).sum();

    StructureReport {
        n,
        edges: g.edge_count(),
        degree_sequence: degrees,
        regular,
        hubs,
        leaves,
        hub_k22,
        pentagons: cover.pentagons,
        edge_multiplicity: cover.edge_multiplicity.into_iter().map(|((u, v), m)| (u, v, m)).collect(),
        uniform_multiplicity,
        spectrum,
        golden_count,
    }
}
