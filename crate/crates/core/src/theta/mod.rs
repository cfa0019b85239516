//! Lovász theta by a dense primal–dual interior point method.
//!
//! Primal: max ⟨J, X⟩ s.t. Tr X = 1, X_ij = 0 on edges, X ⪰ 0.
//! Dual:   min y s.t. S = yI + Σ z_ij B_ij − J ⪰ 0.

mod certificate;
mod ipm;
mod newton;

use serde::{Deserialize, Serialize};

pub use certificate::{verify_certificate, CertificateReport, ResidualCheck, Thresholds};
pub use ipm::lovasz_theta;
pub use newton::{polish_theta, PolishedTheta};

use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pass {
    Bulk,
    HighAccuracy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveSettings {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub pass: Pass,
    /// Seeded diagonal jitter applied to the starting X; `None` for the plain
    /// start `X = I/n`.
    pub jitter_seed: Option<u64>,
}

impl SolveSettings {
    /// Screening tier. 1e-8 rather than 1e-6 so that the primal objective,
    /// a lower bound, stays within 1e-7 of α on integral-θ graphs.
    pub fn bulk() -> Self {
        SolveSettings { tolerance: 1e-8, max_iterations: 100, pass: Pass::Bulk, jitter_seed: None }
    }

    pub fn high_accuracy() -> Self {
        SolveSettings { tolerance: 1e-10, max_iterations: 200, pass: Pass::HighAccuracy, jitter_seed: None }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }
}

impl Default for SolveSettings {
    fn default() -> Self {
        Self::high_accuracy()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeMultiplier {
    pub edge: (usize, usize),
    pub z: f64,
}

/// Primal–dual pair with its residuals. Residuals are signed: `r_p = Tr X − 1`,
/// `r_edge` is the edge entry of largest magnitude, `r_d = y − θ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaCertificate {
    pub n: usize,
    pub theta: f64,
    pub y: f64,
    pub r_p: f64,
    pub r_edge: f64,
    #[serde(rename = "lambda_min_X")]
    pub lambda_min_x: f64,
    pub r_d: f64,
    #[serde(rename = "lambda_min_S")]
    pub lambda_min_s: f64,
    /// Row-major.
    #[serde(rename = "X")]
    pub x: Vec<f64>,
    pub z: Vec<EdgeMultiplier>,
    pub iterations: usize,
    pub pass: Pass,
}

impl ThetaCertificate {
    pub fn x_entry(&self, i: usize, j: usize) -> f64 {
        self.x[i * self.n + j]
    }

    /// Largest residual magnitude.
    pub fn max_residual(&self) -> f64 {
        [self.r_p, self.r_edge, self.lambda_min_x, self.r_d, self.lambda_min_s]
            .iter()
            .fold(0.0f64, |m, r| m.max(r.abs()))
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ThetaError {
    #[error("invalid solver settings: {0}")]
    Settings(String),
    #[error("no convergence after {iterations} iterations (best max residual {:.3e})", best.max_residual())]
    NonConvergence { iterations: usize, best: Box<ThetaCertificate> },
    #[error("numerical breakdown: {0}")]
    Breakdown(String),
    #[error("certificate is for {cert} vertices, graph has {graph}")]
    DimensionMismatch { cert: usize, graph: usize },
    #[error("certificate multiplier on ({0}, {1}) is not a graph edge")]
    EdgeMismatch(usize, usize),
    #[error("repeated solves need at least 2 runs, got {0}")]
    TooFewRuns(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaInterval {
    pub lower: f64,
    pub upper: f64,
    pub half_width: f64,
}

/// Range of θ over `runs` solves from independently jittered starting points.
pub fn repeated_solve_interval(g: &Graph, runs: usize, s: &SolveSettings, seed: u64) -> Result<ThetaInterval, ThetaError> {
    use rayon::prelude::*;
    if runs < 2 {
        return Err(ThetaError::TooFewRuns(runs));
    }
    let thetas: Vec<f64> = (0..runs)
        .into_par_iter()
        .map(|k| {
            let mut sk = s.clone();
            sk.jitter_seed = Some(seed.wrapping_add(k as u64));
            lovasz_theta(g, &sk).map(|c| c.theta)
        })
        .collect::<Result<_, _>>()?;
    let lower = thetas.iter().copied().fold(f64::INFINITY, f64::min);
    let upper = thetas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ThetaInterval { lower, upper, half_width: (upper - lower) / 2.0 })
}
