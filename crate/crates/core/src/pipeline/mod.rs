//! End-to-end reproduction: scan, refine, certify, report, persist.

mod persist;
mod report;
mod scan;
mod verify;

use std::cmp::Ordering;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use persist::{read_csv, to_csv_string, write_csv, write_json};
pub use report::{
    certify_top, hierarchy_report, render_certification, render_hierarchy, render_ranking, structure_report,
    CertificationRow, CertificationTable, HierarchyRow, HierarchyTable, SpectrumEntry, StructureReport,
};
pub use scan::{
    connected_count, graph_count, load_graphs, scan, with_pool, CountCheck, RefinedRecord, ScanFailure, ScanReport,
    Stage,
};
pub use verify::{
    match_published_top10, published_rank, verify_all, NamedCheck, VerifySummary, PUBLISHED_DIMENSION_CLASSES,
    PUBLISHED_TOP10,
};

use crate::algebra::AlgebraError;
use crate::eta::EtaError;
use crate::graph::{g6_encode, Graph, GraphError};
use crate::noise::NoiseError;
use crate::theta::ThetaError;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("csv: {0}")]
    Csv(String),
    #[error("json: {0}")]
    Json(String),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Eta(#[from] EtaError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error("no refined certificate for rank {0}")]
    MissingCertificate(usize),
    #[error("worker pool: {0}")]
    Pool(String),
}

impl PipelineError {
    /// 3 for bad input, 4 for solver non-convergence, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Graph(_)
            | PipelineError::Config(_)
            | PipelineError::Io { .. }
            | PipelineError::Algebra(
                AlgebraError::Parse(_)
                | AlgebraError::Undetectable { .. }
                | AlgebraError::DegreeRange(_)
                | AlgebraError::PrecisionTooLow { .. },
            ) => 3,
            PipelineError::Theta(ThetaError::NonConvergence { .. })
            | PipelineError::Eta(EtaError::Infeasible { .. })
            | PipelineError::Noise(NoiseError::Theta(ThetaError::NonConvergence { .. })) => 4,
            _ => 2,
        }
    }
}

/// One row of a ranking table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub g6: String,
    pub n: usize,
    #[serde(rename = "edges")]
    pub edge_count: usize,
    pub alpha: usize,
    pub theta: f64,
    pub delta: f64,
    pub ratio: f64,
}

impl GapRecord {
    pub fn new(g: &Graph, alpha: usize, theta: f64) -> Self {
        GapRecord {
            g6: g6_encode(g),
            n: g.n(),
            edge_count: g.edge_count(),
            alpha,
            theta,
            delta: theta - alpha as f64,
            ratio: theta / alpha as f64,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankBy {
    #[default]
    Delta,
    Ratio,
}

/// Values equal after rounding to this many units are ties.
const TIE_QUANTUM: f64 = 1e-6;

fn quantize(v: f64) -> i64 {
    (v / TIE_QUANTUM).round() as i64
}

/// Primary key descending, then fewer edges, then g6.
pub fn rank_order(a: &GapRecord, b: &GapRecord, by: RankBy) -> Ordering {
    let key = |r: &GapRecord| match by {
        RankBy::Delta => (quantize(r.delta), 0),
        RankBy::Ratio => (quantize(r.ratio), quantize(r.delta)),
    };
    key(b).cmp(&key(a)).then(a.edge_count.cmp(&b.edge_count)).then_with(|| a.g6.cmp(&b.g6))
}

pub fn rank_records(records: &mut [GapRecord], by: RankBy) {
    records.sort_by(|a, b| rank_order(a, b, by));
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    G6File(PathBuf),
    Enumerate(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub source: Source,
    pub connected_only: bool,
    pub bulk_tolerance: f64,
    pub refine_top_k: usize,
    pub refine_tolerance: f64,
    /// Jittered high-accuracy solves per refined graph; below 2 disables
    /// intervals.
    pub repeat_runs: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Magnitude bound on every certificate residual of a refined solve.
    pub certificate_threshold: f64,
    pub rank_by: RankBy,
    /// Writes `PREFIX.csv` and `PREFIX.json` when set.
    pub output_prefix: Option<PathBuf>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            source: Source::Enumerate(8),
            connected_only: true,
            bulk_tolerance: 1e-8,
            refine_top_k: 50,
            refine_tolerance: 1e-10,
            repeat_runs: 5,
            seed: 0,
            jobs: None,
            certificate_threshold: 1e-7,
            rank_by: RankBy::Delta,
            output_prefix: None,
        }
    }
}

impl ScanConfig {
    pub fn enumerate(n: usize) -> Self {
        ScanConfig { source: Source::Enumerate(n), ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: &str| Err(PipelineError::Config(m.to_string()));
        if self.refine_top_k == 0 {
            return bad("refine_top_k must be at least 1");
        }
        for (name, t) in [
            ("bulk_tolerance", self.bulk_tolerance),
            ("refine_tolerance", self.refine_tolerance),
            ("certificate_threshold", self.certificate_threshold),
        ] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(PipelineError::Config(format!("{name} must be positive, got {t}")));
            }
        }
        if self.jobs == Some(0) {
            return bad("jobs must be at least 1");
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        let cfg: ScanConfig = toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use proptest::prelude::*;

    fn rec(g6: &str, edges: usize, alpha: usize, theta: f64) -> GapRecord {
        GapRecord {
            g6: g6.into(),
            n: 8,
            edge_count: edges,
            alpha,
            theta,
            delta: theta - alpha as f64,
            ratio: theta / alpha as f64,
        }
    }

    #[test]
    fn record_fields() {
        let r = GapRecord::new(&named::c5(), 2, 5f64.sqrt());
        assert_eq!(r.g6, "Dhc");
        assert_eq!((r.n, r.edge_count), (5, 5));
        assert!((r.delta - 0.2360679774997898).abs() < 1e-15);
        assert!((r.ratio - 1.118033988749895).abs() < 1e-15);
    }

    #[test]
    fn ties_break_on_edges_then_g6() {
        let mut v = vec![
            rec("B", 12, 3, 3.3722813),
            rec("C", 10, 3, 3.3722810),
            rec("A", 11, 3, 3.3722812),
            rec("D", 10, 3, 3.46784),
            rec("E", 10, 2, 2.9),
        ];
        rank_records(&mut v, RankBy::Delta);
        let order: Vec<&str> = v.iter().map(|r| r.g6.as_str()).collect();
        assert_eq!(order, ["E", "D", "C", "A", "B"]);
        rank_records(&mut v, RankBy::Ratio);
        assert_eq!(v[0].g6, "E");
    }

    #[test]
    fn config_round_trip_and_validation() {
        let cfg = ScanConfig::from_toml("source = { enumerate = 7 }\nrefine_top_k = 10\njobs = 2\n").unwrap();
        assert_eq!(cfg.source, Source::Enumerate(7));
        assert_eq!(cfg.refine_top_k, 10);
        assert_eq!(cfg.bulk_tolerance, 1e-8);
        let g6 = ScanConfig::from_toml("[source]\ng6-file = \"graphs8.g6\"\n").unwrap();
        assert_eq!(g6.source, Source::G6File("graphs8.g6".into()));
        assert!(ScanConfig::from_toml("refine_top_k = 0").is_err());
        assert!(ScanConfig::from_toml("bulk_tolerance = -1.0").is_err());
        assert!(ScanConfig::from_toml("bogus = 1").is_err());
        let text = toml::to_string(&ScanConfig::default()).unwrap();
        assert_eq!(ScanConfig::from_toml(&text).unwrap(), ScanConfig::default());
    }

    proptest! {
        #[test]
        fn ranking_is_a_total_order(thetas in proptest::collection::vec((2.0f64..4.0, 8usize..20), 1..30)) {
            let mut v: Vec<GapRecord> = thetas
                .iter()
                .enumerate()
                .map(|(i, &(t, e))| rec(&format!("g{i:03}"), e, 3, t))
                .collect();
            rank_records(&mut v, RankBy::Delta);
            for w in v.windows(2) {
                prop_assert_ne!(rank_order(&w[0], &w[1], RankBy::Delta), Ordering::Greater);
                prop_assert!(quantize(w[0].delta) >= quantize(w[1].delta));
            }
        }
    }
}
