//! Lower bounds on the dimension-restricted quantum value η_d by multi-restart
//! optimization over real orthogonal representations, and the witness
//! dimension classification built on them.

mod optimize;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use optimize::{top_eigen, Problem};

/// Largest |λ_max − α| counted as "at α".
pub const AT_ALPHA_TOL: f64 = 1e-7;
/// η_d must exceed α by this much to count as an advantage.
pub const ADVANTAGE_MARGIN: f64 = 1e-6;
pub const DEFAULT_RESTARTS: usize = 300;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EtaError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("at least one restart is required")]
    NoRestarts,
    #[error("all {restarts} restarts infeasible in dimension {d}")]
    Infeasible { d: usize, restarts: usize },
    #[error("representation has {got} vectors of length {len}, expected {n} of length {d}")]
    DimensionMismatch { got: usize, len: usize, n: usize, d: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PenaltyWeights {
    pub w_perp: f64,
    pub w_lambda: f64,
    pub w_norm: f64,
}

impl Default for PenaltyWeights {
    fn default() -> Self {
        PenaltyWeights { w_perp: 50_000.0, w_lambda: 0.3, w_norm: 5_000.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaSettings {
    pub d: usize,
    pub restarts: usize,
    pub seed: u64,
    pub weights: PenaltyWeights,
    /// Restarts whose orthogonality or norm error exceeds this are dropped.
    pub feasibility_tol: f64,
}

impl EtaSettings {
    pub fn new(d: usize, restarts: usize, seed: u64) -> Self {
        EtaSettings { d, restarts, seed, weights: PenaltyWeights::default(), feasibility_tol: 1e-10 }
    }
}

/// Unit vectors in R^d, one per vertex, with M = Σ v_i v_iᵀ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthRep {
    pub n: usize,
    pub d: usize,
    /// Row-major, vertex i at `[i*d, (i+1)*d)`.
    pub vectors: Vec<f64>,
    pub lambda_max: f64,
    pub orth_error: f64,
    pub norm_error: f64,
}

impl OrthRep {
    /// Normalizes the given vectors and measures them against `edges`.
    pub fn from_vectors(d: usize, mut vectors: Vec<f64>, edges: &[(usize, usize)]) -> Self {
        for v in vectors.chunks_mut(d) {
            let l = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if l > 0.0 {
                v.iter_mut().for_each(|x| *x /= l);
            }
        }
        let (orth_error, norm_error) = errors(&vectors, d, edges);
        let (lambda_max, _) = top_eigen(&vectors, d);
        OrthRep { n: vectors.len() / d, d, vectors, lambda_max, orth_error, norm_error }
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.d..(i + 1) * self.d]
    }

    /// The same vectors with `extra` zero coordinates appended.
    pub fn embed(&self, extra: usize) -> OrthRep {
        let d = self.d + extra;
        let vectors = self.vectors.chunks(self.d).flat_map(|v| v.iter().copied().chain(std::iter::repeat_n(0.0, extra))).collect();
        OrthRep { d, vectors, ..self.clone() }
    }
}

fn errors(vectors: &[f64], d: usize, edges: &[(usize, usize)]) -> (f64, f64) {
    let v = |i: usize| &vectors[i * d..(i + 1) * d];
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let orth = edges.iter().map(|&(i, j)| dot(v(i), v(j)).abs()).fold(0.0, f64::max);
    let norm = vectors.chunks(d).map(|x| (dot(x, x).sqrt() - 1.0).abs()).fold(0.0, f64::max);
    (orth, norm)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaResult {
    pub best: OrthRep,
    pub best_restart: usize,
    /// λ_max per restart, `None` where the restart was infeasible.
    pub restart_lambdas: Vec<Option<f64>>,
}

impl EtaResult {
    pub fn feasible_restarts(&self) -> usize {
        self.restart_lambdas.iter().flatten().count()
    }

    /// Every restart feasible and within `tol` of `alpha`.
    pub fn all_at(&self, alpha: f64, tol: f64) -> bool {
        self.restart_lambdas.iter().all(|l| l.is_some_and(|l| (l - alpha).abs() <= tol))
    }
}

/// Best representation over seeded restarts. Restarts run in parallel and the
/// reduction keeps the largest λ_max, lowest restart index on ties.
pub fn optimize_eta(g: &Graph, s: &EtaSettings) -> Result<EtaResult, EtaError> {
    if s.d == 0 {
        return Err(EtaError::ZeroDimension);
    }
    if s.restarts == 0 {
        return Err(EtaError::NoRestarts);
    }
    let problem = Problem { n: g.n(), d: s.d, edges: g.edges() };
    let reps: Vec<Option<OrthRep>> = (0..s.restarts)
        .into_par_iter()
        .map(|k| problem.restart(s.weights, s.seed, k as u64, s.feasibility_tol))
        .collect();
    let mut best: Option<(usize, &OrthRep)> = None;
    for (k, r) in reps.iter().enumerate() {
        if let Some(r) = r {
            if best.is_none_or(|(_, b)| r.lambda_max > b.lambda_max) {
                best = Some((k, r));
            }
        }
    }
    let (best_restart, best) = best.ok_or(EtaError::Infeasible { d: s.d, restarts: s.restarts })?;
    Ok(EtaResult {
        best: best.clone(),
        best_restart,
        restart_lambdas: reps.iter().map(|r| r.as_ref().map(|r| r.lambda_max)).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrthRepReport {
    pub orth_error: f64,
    pub norm_error: f64,
    pub lambda_max: f64,
    /// |recomputed λ_max − declared λ_max|.
    pub lambda_drift: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Recomputes norms, edge inner products and λ_max from the raw vectors.
pub fn verify_orthrep(r: &OrthRep, g: &Graph, tol: f64) -> Result<OrthRepReport, EtaError> {
    if r.d == 0 || r.vectors.len() != g.n() * r.d {
        return Err(EtaError::DimensionMismatch { got: r.vectors.len() / r.d.max(1), len: r.d, n: g.n(), d: r.d });
    }
    let (orth_error, norm_error) = errors(&r.vectors, r.d, &g.edges());
    let (lambda_max, _) = top_eigen(&r.vectors, r.d);
    let lambda_drift = (lambda_max - r.lambda_max).abs();
    Ok(OrthRepReport {
        orth_error,
        norm_error,
        lambda_max,
        lambda_drift,
        tolerance: tol,
        passed: orth_error <= tol && norm_error <= tol && lambda_drift <= 1e-10,
    })
}

/// Projects approximate vectors (e.g. a rounded table) onto the exact
/// constraint set of `g` without changing λ_max beyond the rounding.
pub fn polish_orthrep(g: &Graph, d: usize, vectors: Vec<f64>) -> Result<OrthRep, EtaError> {
    if d == 0 || vectors.len() != g.n() * d {
        return Err(EtaError::DimensionMismatch { got: vectors.len() / d.max(1), len: d, n: g.n(), d });
    }
    let problem = Problem { n: g.n(), d, edges: g.edges() };
    let mut x = vectors;
    if !problem.project(&mut x) {
        return Err(EtaError::Infeasible { d, restarts: 1 });
    }
    Ok(OrthRep::from_vectors(d, x, &problem.edges))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DStar {
    /// d* = 3, confirmed by η₃ > α.
    QutritWitness,
    /// d* = 4, numerically indicated: all d = 3 restarts stay at α.
    IndicatedTwoQubit,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionClass {
    pub eta3_lb: f64,
    pub eta4_lb: f64,
    pub restarts: usize,
    pub all_restarts_at_alpha_d3: bool,
    pub d_star_indication: DStar,
}

pub fn classify_dimension(g: &Graph, alpha: usize, restarts: usize, seed: u64) -> Result<DimensionClass, EtaError> {
    let a = alpha as f64;
    let d3 = optimize_eta(g, &EtaSettings::new(3, restarts, seed))?;
    let d4 = optimize_eta(g, &EtaSettings::new(4, restarts, seed))?;
    let eta3_lb = d3.best.lambda_max;
    let eta4_lb = d4.best.lambda_max;
    let all_restarts_at_alpha_d3 = d3.all_at(a, AT_ALPHA_TOL);
    let d_star_indication = if eta3_lb > a + ADVANTAGE_MARGIN {
        DStar::QutritWitness
    } else if all_restarts_at_alpha_d3 && eta4_lb > a + ADVANTAGE_MARGIN {
        DStar::IndicatedTwoQubit
    } else {
        DStar::Undetermined
    };
    Ok(DimensionClass { eta3_lb, eta4_lb, restarts, all_restarts_at_alpha_d3, d_star_indication })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    /// Six-decimal vectors for Quad-C5 in R^3.
    const TABLE: [[f64; 3]; 8] = [
        [-0.327925, -0.827319, 0.456080],
        [0.591738, 0.502702, 0.630188],
        [0.265430, -0.544016, -0.795986],
        [0.265430, -0.544016, -0.795986],
        [-0.676200, 0.735118, 0.048537],
        [0.906649, -0.139967, 0.397992],
        [-0.072902, 0.811912, -0.579210],
        [0.710727, 0.668271, -0.219730],
    ];

    #[test]
    fn triangle_standard_basis() {
        let k3 = Graph::complete(3).unwrap();
        let r = OrthRep::from_vectors(3, vec![1., 0., 0., 0., 1., 0., 0., 0., 1.], &k3.edges());
        let rep = verify_orthrep(&r, &k3, 1e-12).unwrap();
        assert!(rep.passed);
        assert!((rep.lambda_max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stretched_vector_fails_norm() {
        let k3 = Graph::complete(3).unwrap();
        let mut r = OrthRep::from_vectors(3, vec![1., 0., 0., 0., 1., 0., 0., 0., 1.], &k3.edges());
        r.vectors[0] = 2.0;
        let rep = verify_orthrep(&r, &k3, 1e-10).unwrap();
        assert!(!rep.passed);
        assert!((rep.norm_error - 1.0).abs() < 1e-12);
        assert_eq!(rep.orth_error, 0.0);
    }

    #[test]
    fn vector_count_mismatch() {
        let r = OrthRep::from_vectors(3, vec![1., 0., 0.], &[]);
        assert!(matches!(verify_orthrep(&r, &named::c5(), 1e-10), Err(EtaError::DimensionMismatch { .. })));
    }

    #[test]
    fn printed_table_is_feasible_to_rounding_and_polishes() {
        let g = named::quad_c5();
        let flat: Vec<f64> = TABLE.iter().flatten().copied().collect();
        let raw = OrthRep::from_vectors(3, flat.clone(), &g.edges());
        assert!(raw.orth_error < 5e-6, "{}", raw.orth_error);
        let polished = polish_orthrep(&g, 3, flat).unwrap();
        let rep = verify_orthrep(&polished, &g, 2.5e-14).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!((rep.lambda_max - 3.236068).abs() < 1e-6);
        // coincident vectors are allowed on non-adjacent vertices
        assert_eq!(polished.vector(2), polished.vector(3));
    }

    #[test]
    fn one_dimension_with_an_edge_is_infeasible() {
        let g = Graph::complete(2).unwrap();
        assert_eq!(optimize_eta(&g, &EtaSettings::new(1, 4, 0)), Err(EtaError::Infeasible { d: 1, restarts: 4 }));
    }

    #[test]
    fn bad_arguments() {
        assert_eq!(optimize_eta(&named::c5(), &EtaSettings::new(0, 4, 0)), Err(EtaError::ZeroDimension));
        assert_eq!(optimize_eta(&named::c5(), &EtaSettings::new(3, 0, 0)), Err(EtaError::NoRestarts));
    }

    #[test]
    fn pentagon_in_three_dimensions_reaches_theta() {
        let r = optimize_eta(&named::c5(), &EtaSettings::new(3, 8, 1)).unwrap();
        assert!((r.best.lambda_max - 5f64.sqrt()).abs() < 1e-9);
        assert!(r.best.orth_error < 1e-12);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let s = EtaSettings::new(3, 6, 42);
        let a = optimize_eta(&named::wagner(), &s).unwrap();
        let b = optimize_eta(&named::wagner(), &s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn handle_state_attains_lambda_max() {
        let r = optimize_eta(&named::quad_c5(), &EtaSettings::new(3, 4, 3)).unwrap().best;
        let (lam, psi) = top_eigen(&r.vectors, 3);
        let at_psi: f64 = r.vectors.chunks(3).map(|v| v.iter().zip(&psi).map(|(a, b)| a * b).sum::<f64>().powi(2)).sum();
        assert!((at_psi - lam).abs() < 1e-10);
        let m = crate::algebra::jacobi_eigen(&nalgebra::DMatrix::from_fn(3, 3, |a, b| {
            r.vectors.chunks(3).map(|v| v[a] * v[b]).sum()
        }))
        .unwrap();
        assert!((m.max() - r.lambda_max).abs() < 1e-10);
    }

    #[test]
    fn embedding_keeps_lambda() {
        let g = named::c5();
        let r = optimize_eta(&g, &EtaSettings::new(3, 4, 5)).unwrap().best;
        let e = r.embed(2);
        let rep = verify_orthrep(&e, &g, 1e-12).unwrap();
        assert!(rep.passed);
        assert!((rep.lambda_max - r.lambda_max).abs() < 1e-12);
    }
}
