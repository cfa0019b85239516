use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ctxgap::algebra::{pslq_candidates, pslq_find, residual_test, verify_quadc5_construction, BigReal, PslqSettings};
use ctxgap::alpha::{alpha_bruteforce, alpha_clique};
use ctxgap::eta::{classify_dimension, optimize_eta, verify_orthrep, EtaSettings, DEFAULT_RESTARTS};
use ctxgap::graph::{enumerate_graphs, g6_decode, write_g6_file, Graph};
use ctxgap::noise::{noise_table, published_inputs, render_noise_table};
use ctxgap::pipeline::{
    render_ranking, scan, structure_report, verify_all, write_csv, write_json, PipelineError, RankBy, ScanConfig,
    Source,
};
use ctxgap::theta::{lovasz_theta, polish_theta, verify_certificate, SolveSettings, Thresholds};

#[derive(Parser)]
#[command(name = "ctxgap", version, about = "Contextuality-gap search on small exclusivity graphs")]
struct Cli {
    /// TOML scan configuration; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "CTXGAP_JOBS")]
    jobs: Option<usize>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write all non-isomorphic graphs on n vertices as graph6.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        connected: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Bulk-solve, refine the top candidates and rank by gap.
    Scan(ScanArgs),
    /// Lovász theta with its primal-dual certificate.
    Theta {
        graph: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Newton-polish θ to this many digits.
        #[arg(long)]
        polish: Option<u32>,
    },
    /// Independence number by both methods.
    Alpha { graph: String },
    /// Best λ_max of a d-dimensional orthogonal representation.
    Eta {
        graph: String,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Qutrit or two-qubit indication from η₃ and η₄.
    Classify {
        graph: String,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Degrees, hubs, induced pentagons and the tagged spectrum.
    Structure { graph: String },
    /// Critical visibilities under depolarizing noise.
    Noise {
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Integer polynomial of degree ≤ 4 annihilating VALUE.
    Pslq {
        value: String,
        /// Significant digits of VALUE to trust; defaults to those written.
        #[arg(long)]
        digits: Option<u32>,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Precision scale for the residual test.
        #[arg(long, default_value_t = 1e-15)]
        eps: f64,
        /// Report the relation found at every degree, not only the lowest.
        #[arg(long)]
        all_degrees: bool,
    },
    /// Check the golden-ratio qutrit construction for Quad-C5.
    VerifyQuadc5 {
        #[arg(long, default_value_t = 50)]
        digits: u32,
    },
    /// Run every reproduction check and write a summary.
    VerifyAll {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScanArgs {
    /// Read graphs from a graph6 file.
    #[arg(long, conflicts_with = "n")]
    g6: Option<PathBuf>,
    /// Enumerate all graphs on n vertices (default 8).
    #[arg(long)]
    n: Option<usize>,
    /// Connected graphs only (the default).
    #[arg(long, conflicts_with = "all")]
    connected: bool,
    /// Include disconnected graphs.
    #[arg(long)]
    all: bool,
    /// Graphs to refine at high accuracy.
    #[arg(long)]
    top: Option<usize>,
    /// Bulk-pass tolerance.
    #[arg(long)]
    bulk_tol: Option<f64>,
    /// Refinement tolerance.
    #[arg(long)]
    refine_tol: Option<f64>,
    /// Jittered solves per refined graph for the θ interval.
    #[arg(long)]
    repeat: Option<usize>,
    /// Seed for the jittered solves.
    #[arg(long)]
    seed: Option<u64>,
    /// Primary ranking key.
    #[arg(long, value_enum)]
    rank_by: Option<RankArg>,
    /// Rows to print.
    #[arg(long, default_value_t = 10)]
    show: usize,
    /// Writes PREFIX.csv and PREFIX.json.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RankArg {
    Delta,
    Ratio,
}

fn graph_arg(s: &str) -> Result<Graph, PipelineError> {
    Ok(g6_decode(s.trim())?)
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> Result<(), PipelineError> {
    if json {
        println!("{}", serde_json::to_string_pretty(value).map_err(|e| PipelineError::Json(e.to_string()))?);
    } else {
        print!("{}", text());
    }
    Ok(())
}

fn scan_config(cli: &Cli, a: &ScanArgs) -> Result<ScanConfig, PipelineError> {
    let mut cfg = match &cli.config {
        Some(p) => ScanConfig::from_toml(
            &std::fs::read_to_string(p)
                .map_err(|e| PipelineError::Io { path: p.display().to_string(), message: e.to_string() })?,
        )?,
        None => ScanConfig::default(),
    };
    if let Some(p) = &a.g6 {
        cfg.source = Source::G6File(p.clone());
    }
    if let Some(n) = a.n {
        cfg.source = Source::Enumerate(n);
    }
    if a.connected {
        cfg.connected_only = true;
    }
    if a.all {
        cfg.connected_only = false;
    }
    cfg.refine_top_k = a.top.unwrap_or(cfg.refine_top_k);
    cfg.bulk_tolerance = a.bulk_tol.unwrap_or(cfg.bulk_tolerance);
    cfg.refine_tolerance = a.refine_tol.unwrap_or(cfg.refine_tolerance);
    cfg.repeat_runs = a.repeat.unwrap_or(cfg.repeat_runs);
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    cfg.jobs = cli.jobs.or(cfg.jobs);
    if let Some(r) = a.rank_by {
        cfg.rank_by = match r {
            RankArg::Delta => RankBy::Delta,
            RankArg::Ratio => RankBy::Ratio,
        };
    }
    if a.output.is_some() {
        cfg.output_prefix = a.output.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<i32, PipelineError> {
    match &cli.command {
        Command::Enumerate { n, connected, output } => {
            let graphs: Vec<Graph> = enumerate_graphs(*n)?.into_iter().filter(|g| !connected || g.is_connected()).collect();
            write_g6_file(output, &graphs)?;
            eprintln!("wrote {} graphs to {}", graphs.len(), output.display());
            Ok(0)
        }
        Command::Scan(a) => {
            let cfg = scan_config(cli, a)?;
            let t = std::time::Instant::now();
            let rep = scan(&cfg)?;
            if let Some(prefix) = &cfg.output_prefix {
                write_csv(&prefix.with_extension("csv"), &rep.records)?;
                write_json(&prefix.with_extension("json"), &rep)?;
            }
            emit(cli.json, &rep.top(a.show), || render_ranking(rep.top(a.show)))?;
            eprintln!("{} graphs read, {} scanned in {:.1?}", rep.graphs_read, rep.scanned, t.elapsed());
            if let Some(c) = rep.count_check.as_ref().filter(|c| !c.matches) {
                eprintln!(
                    "count check: {} graphs on {} vertices, expected {} or {} connected",
                    c.found, c.n, c.expected_all, c.expected_connected
                );
            }
            for f in &rep.failures {
                eprintln!("failure {} ({:?}): {}", f.g6, f.stage, f.message);
            }
            for r in rep.refined.iter().filter(|r| r.flagged) {
                eprintln!("flagged rank {} {}: {}", r.rank, r.record.g6, r.report.failed().join(","));
            }
            Ok(rep.exit_code())
        }
        Command::Theta { graph, tol, polish } => {
            let g = graph_arg(graph)?;
            let c = lovasz_theta(&g, &SolveSettings::high_accuracy().with_tolerance(*tol))?;
            let rep = verify_certificate(&c, &g, &Thresholds::uniform(1e-7))?;
            let polished = polish.map(|d| polish_theta(&g, &c, d)).transpose()?;
            #[derive(Serialize)]
            struct Out<'a> {
                certificate: &'a ctxgap::theta::ThetaCertificate,
                report: &'a ctxgap::theta::CertificateReport,
                polished: Option<&'a ctxgap::theta::PolishedTheta>,
            }
            emit(cli.json, &Out { certificate: &c, report: &rep, polished: polished.as_ref() }, || {
                let mut s = format!("theta {:.12}  ({} iterations)\n", c.theta, c.iterations);
                for k in &rep.checks {
                    s += &format!("  {:<13} {:+.2e}  {}\n", k.name, k.value, if k.passed { "ok" } else { "FAIL" });
                }
                if let Some(p) = &polished {
                    s += &format!("polished {}\n", p.theta);
                }
                s
            })?;
            Ok(if rep.passed { 0 } else { 2 })
        }
        Command::Alpha { graph } => {
            let g = graph_arg(graph)?;
            let c = alpha_clique(&g);
            let b = alpha_bruteforce(&g).ok();
            let agree = b.is_none_or(|b| b.alpha == c.alpha);
            emit(cli.json, &(c, b), || {
                format!(
                    "alpha {}  witness {:?}{}\n",
                    c.alpha,
                    c.witness_vertices(),
                    if agree { "" } else { "  (brute force disagrees)" }
                )
            })?;
            Ok(if agree { 0 } else { 2 })
        }
        Command::Eta { graph, d, restarts, seed } => {
            let g = graph_arg(graph)?;
            let r = optimize_eta(&g, &EtaSettings::new(*d, *restarts, *seed))?;
            let rep = verify_orthrep(&r.best, &g, 1e-10)?;
            emit(cli.json, &r, || {
                let mut s = format!(
                    "eta_{d} >= {:.12}  orth {:.1e}  norm {:.1e}  ({} of {} restarts feasible, best #{})\n",
                    r.best.lambda_max,
                    r.best.orth_error,
                    r.best.norm_error,
                    r.feasible_restarts(),
                    restarts,
                    r.best_restart
                );
                for i in 0..r.best.n {
                    let v: Vec<String> = r.best.vector(i).iter().map(|x| format!("{x:+.9}")).collect();
                    s += &format!("  v{i} [{}]\n", v.join(", "));
                }
                s
            })?;
            Ok(if rep.passed { 0 } else { 2 })
        }
        Command::Classify { graph, restarts, seed } => {
            let g = graph_arg(graph)?;
            let alpha = alpha_clique(&g).alpha;
            let c = classify_dimension(&g, alpha, *restarts, *seed)?;
            emit(cli.json, &c, || {
                format!(
                    "alpha {alpha}  eta3 >= {:.6}  eta4 >= {:.6}  all d=3 restarts at alpha: {}  d*: {:?}\n",
                    c.eta3_lb, c.eta4_lb, c.all_restarts_at_alpha_d3, c.d_star_indication
                )
            })?;
            Ok(0)
        }
        Command::Structure { graph } => {
            let g = graph_arg(graph)?;
            let s = structure_report(&g);
            emit(cli.json, &s, || {
                let mut out = format!(
                    "n {}  edges {}  degrees {:?}\nhubs {:?}  K22 on hubs {:?}\n{} induced pentagons, uniform edge multiplicity {:?}\n",
                    s.n,
                    s.edges,
                    s.degree_sequence,
                    s.hubs,
                    s.hub_k22,
                    s.pentagons.len(),
                    s.uniform_multiplicity
                );
                for e in &s.spectrum {
                    out += &format!("  {:+.6} x{}  {}\n", e.value, e.multiplicity, e.closed_form());
                }
                out
            })?;
            Ok(0)
        }
        Command::Noise { restarts, seed } => {
            let rows = noise_table(&published_inputs(*restarts, *seed))?;
            emit(cli.json, &rows, || render_noise_table(&rows))?;
            Ok(0)
        }
        Command::Pslq { value, digits, max_degree, eps, all_degrees } => {
            let written = value.trim_start_matches(['-', '+']).chars().filter(|c| c.is_ascii_digit()).count();
            let x = BigReal::parse(value, digits.unwrap_or(written as u32))?;
            let settings = PslqSettings::default();
            if *all_degrees {
                let c = pslq_candidates(&x, *max_degree, *eps, &settings)?;
                emit(cli.json, &c, || {
                    c.iter()
                        .map(|c| match (&c.polynomial, c.residual) {
                            (Some(p), Some(r)) => format!("k={}  {p}  r = {r:.3}\n", c.degree),
                            _ => format!("k={}  none\n", c.degree),
                        })
                        .collect()
                })?;
            } else {
                let p = pslq_find(&x, *max_degree, &settings)?;
                let r = p.as_ref().map(|p| residual_test(p, &x, *eps)).transpose()?;
                let out = (p.as_ref().map(|p| p.to_string()), r);
                emit(cli.json, &out, || match (&out.0, r) {
                    (Some(p), Some(r)) => format!("{p}  r = {r:.3}{}\n", if r < 1.0 { "" } else { "  (rejected)" }),
                    _ => "no relation within the coefficient bound\n".into(),
                })?;
            }
            Ok(0)
        }
        Command::VerifyQuadc5 { digits } => {
            let r = verify_quadc5_construction(*digits)?;
            emit(cli.json, &r, || {
                let mut s = format!("{} digits, threshold {:.0e}\n", r.digits, r.threshold);
                for c in &r.checks {
                    s += &format!("  {:<28} {:.1e} exact={} {}\n", c.name, c.residual, c.exact, if c.passed { "ok" } else { "FAIL" });
                }
                s += &format!("p(λ) = {}\nλ_max = {}\n", r.charpoly, r.lambda_max);
                s
            })?;
            Ok(if r.all_passed { 0 } else { 2 })
        }
        Command::VerifyAll { seed, output } => {
            let t = std::time::Instant::now();
            let s = verify_all(*seed, cli.jobs)?;
            if let Some(p) = output {
                write_json(p, &s)?;
            }
            emit(cli.json, &s, || {
                s.checks
                    .iter()
                    .map(|c| format!("{} {:<20} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
                    .collect()
            })?;
            eprintln!("finished in {:.1?}", t.elapsed());
            let failed = s.failures();
            if !failed.is_empty() {
                eprintln!("failed: {}", failed.join(", "));
            }
            Ok(s.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
