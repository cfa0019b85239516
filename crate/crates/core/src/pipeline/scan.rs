use rayon::prelude::*;
use serde::Serialize;

use super::{rank_records, GapRecord, PipelineError, ScanConfig, Source};
use crate::alpha::alpha_clique;
use crate::graph::{enumerate_graphs, g6_decode, read_g6_file, Graph};
use crate::theta::{
    lovasz_theta, repeated_solve_interval, verify_certificate, CertificateReport, SolveSettings, ThetaCertificate,
    ThetaError, ThetaInterval, Thresholds,
};

/// Non-isomorphic graphs on n = 0..=8 vertices.
const ALL_COUNTS: [usize; 9] = [1, 1, 2, 4, 11, 34, 156, 1044, 12346];
/// Connected ones.
const CONNECTED_COUNTS: [usize; 9] = [1, 1, 1, 2, 6, 21, 112, 853, 11117];

pub fn graph_count(n: usize) -> Option<usize> {
    ALL_COUNTS.get(n).copied()
}

pub fn connected_count(n: usize) -> Option<usize> {
    CONNECTED_COUNTS.get(n).copied()
}

/// How a graph6 file's size compares with the known class counts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountCheck {
    pub n: usize,
    pub found: usize,
    pub expected_all: usize,
    pub expected_connected: usize,
    pub matches: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Bulk,
    Refine,
    Interval,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanFailure {
    pub g6: String,
    pub stage: Stage,
    pub message: String,
    pub non_convergence: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinedRecord {
    /// Final 1-based rank.
    pub rank: usize,
    pub record: GapRecord,
    pub bulk_theta: f64,
    pub certificate: ThetaCertificate,
    pub report: CertificateReport,
    pub interval: Option<ThetaInterval>,
    pub flagged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub graphs_read: usize,
    pub scanned: usize,
    pub count_check: Option<CountCheck>,
    /// Every scanned graph, ranked.
    pub records: Vec<GapRecord>,
    /// Refined graphs in rank order.
    pub refined: Vec<RefinedRecord>,
    pub failures: Vec<ScanFailure>,
    /// Records with θ below α by more than 1e-7.
    pub sandwich_violations: Vec<String>,
}

impl ScanReport {
    pub fn top(&self, k: usize) -> &[GapRecord] {
        &self.records[..k.min(self.records.len())]
    }

    pub fn graph(&self, rank: usize) -> Result<Graph, PipelineError> {
        let r = self.records.get(rank - 1).ok_or(PipelineError::MissingCertificate(rank))?;
        Ok(g6_decode(&r.g6)?)
    }

    /// True when nothing was flagged, nothing failed and the sources agree.
    pub fn clean(&self) -> bool {
        self.failures.is_empty()
            && self.sandwich_violations.is_empty()
            && self.refined.iter().all(|r| !r.flagged)
            && self.count_check.as_ref().is_none_or(|c| c.matches)
    }

    /// 0 when clean, 4 if any solve failed to converge, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.failures.iter().any(|f| f.non_convergence) {
            4
        } else if self.clean() {
            0
        } else {
            2
        }
    }
}

/// Runs `f` on a pool of `jobs` threads, or on the global pool.
pub fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, PipelineError> {
    match jobs {
        None => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .map_err(|e| PipelineError::Pool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Reads or enumerates the graphs named by `source`, with the count check for
/// files whose graphs all share one n ≤ 8.
pub fn load_graphs(source: &Source) -> Result<(Vec<Graph>, Option<CountCheck>), PipelineError> {
    match source {
        Source::Enumerate(n) => Ok((enumerate_graphs(*n)?, None)),
        Source::G6File(path) => {
            let graphs = read_g6_file(path)?;
            let check = graphs.first().map(Graph::n).filter(|&n| graphs.iter().all(|g| g.n() == n)).and_then(|n| {
                let expected_all = graph_count(n)?;
                let expected_connected = connected_count(n)?;
                let found = graphs.len();
                let matches = found == expected_all || found == expected_connected;
                Some(CountCheck { n, found, expected_all, expected_connected, matches })
            });
            Ok((graphs, check))
        }
    }
}

fn failure(g: &Graph, stage: Stage, e: &ThetaError) -> ScanFailure {
    ScanFailure {
        g6: crate::graph::g6_encode(g),
        stage,
        message: e.to_string(),
        non_convergence: matches!(e, ThetaError::NonConvergence { .. }),
    }
}

struct Refined {
    cert: ThetaCertificate,
    report: CertificateReport,
    interval: Option<ThetaInterval>,
    failures: Vec<ScanFailure>,
}

fn refine(g: &Graph, cfg: &ScanConfig) -> Result<Refined, ScanFailure> {
    let s = SolveSettings::high_accuracy().with_tolerance(cfg.refine_tolerance);
    let cert = lovasz_theta(g, &s).map_err(|e| failure(g, Stage::Refine, &e))?;
    let report = verify_certificate(&cert, g, &Thresholds::uniform(cfg.certificate_threshold))
        .map_err(|e| failure(g, Stage::Refine, &e))?;
    let mut failures = Vec::new();
    let interval = if cfg.repeat_runs >= 2 {
        repeated_solve_interval(g, cfg.repeat_runs, &s, cfg.seed)
            .map_err(|e| failures.push(failure(g, Stage::Interval, &e)))
            .ok()
    } else {
        None
    };
    Ok(Refined { cert, report, interval, failures })
}

/// Bulk α and θ for every graph, high-accuracy re-solve of the top
/// `refine_top_k`, then the final ranking. Output order depends only on the
/// configuration.
pub fn scan(cfg: &ScanConfig) -> Result<ScanReport, PipelineError> {
    cfg.validate()?;
    let (graphs, count_check) = load_graphs(&cfg.source)?;
    let graphs_read = graphs.len();
    let graphs: Vec<Graph> = graphs.into_iter().filter(|g| !cfg.connected_only || g.is_connected()).collect();
    let bulk = SolveSettings::bulk().with_tolerance(cfg.bulk_tolerance);

    with_pool(cfg.jobs, || {
        let solved: Vec<Result<(Graph, usize, f64), ScanFailure>> = graphs
            .par_iter()
            .map(|g| {
                let alpha = alpha_clique(g).alpha;
                let cert = lovasz_theta(g, &bulk).map_err(|e| failure(g, Stage::Bulk, &e))?;
                Ok((*g, alpha, cert.theta))
            })
            .collect();
        let mut failures = Vec::new();
        let mut rows = Vec::with_capacity(solved.len());
        for s in solved {
            match s {
                Ok((g, alpha, theta)) => rows.push((GapRecord::new(&g, alpha, theta), g)),
                Err(f) => failures.push(f),
            }
        }
        rows.sort_by(|a, b| super::rank_order(&a.0, &b.0, cfg.rank_by));

        let k = cfg.refine_top_k.min(rows.len());
        let refined: Vec<Result<Refined, ScanFailure>> = rows[..k].par_iter().map(|(_, g)| refine(g, cfg)).collect();
        let mut extra = Vec::new();
        for ((rec, g), r) in rows[..k].iter_mut().zip(refined) {
            match r {
                Ok(r) => {
                    let bulk_theta = rec.theta;
                    *rec = GapRecord::new(g, rec.alpha, r.cert.theta);
                    failures.extend(r.failures);
                    let flagged = !r.report.passed;
                    extra.push(RefinedRecord {
                        rank: 0,
                        record: rec.clone(),
                        bulk_theta,
                        certificate: r.cert,
                        report: r.report,
                        interval: r.interval,
                        flagged,
                    });
                }
                Err(f) => failures.push(f),
            }
        }

        let mut records: Vec<GapRecord> = rows.into_iter().map(|(r, _)| r).collect();
        rank_records(&mut records, cfg.rank_by);
        for r in &mut extra {
            r.rank = 1 + records.iter().position(|x| x.g6 == r.record.g6).expect("refined record is ranked");
        }
        extra.sort_by_key(|r| r.rank);
        let sandwich_violations =
            records.iter().filter(|r| r.delta < -1e-7).map(|r| r.g6.clone()).collect();

        ScanReport {
            config: cfg.clone(),
            graphs_read,
            scanned: graphs.len(),
            count_check,
            records,
            refined: extra,
            failures,
            sandwich_violations,
        }
    })
}
