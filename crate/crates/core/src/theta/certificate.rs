//! Independent re-validation of a theta certificate.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{ThetaCertificate, ThetaError};
use crate::algebra::jacobi_eigen;
use crate::graph::Graph;

/// Per-residual magnitude bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    pub r_p: f64,
    pub r_edge: f64,
    pub lambda_min_x: f64,
    pub r_d: f64,
    pub lambda_min_s: f64,
}

impl Thresholds {
    pub fn uniform(t: f64) -> Self {
        Thresholds { r_p: t, r_edge: t, lambda_min_x: t, r_d: t, lambda_min_s: t }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualCheck {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub theta: f64,
    pub checks: Vec<ResidualCheck>,
    /// Largest difference between recomputed and certificate-reported values.
    pub self_check: f64,
    pub passed: bool,
}

impl CertificateReport {
    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }
}

fn lambda_min(m: &DMatrix<f64>) -> Result<f64, ThetaError> {
    let s = (m + m.transpose()) * 0.5;
    jacobi_eigen(&s).map(|e| e.min()).map_err(|e| ThetaError::Breakdown(e.to_string()))
}

/// Recomputes all five residuals from X, y and z alone.
pub fn verify_certificate(c: &ThetaCertificate, g: &Graph, t: &Thresholds) -> Result<CertificateReport, ThetaError> {
    let n = g.n();
    if c.n != n || c.x.len() != n * n {
        return Err(ThetaError::DimensionMismatch { cert: c.n, graph: n });
    }
    let x = DMatrix::from_row_slice(n, n, &c.x);
    let theta = x.sum();
    let r_p = x.trace() - 1.0;
    let r_edge = g.edges().iter().map(|&(i, j)| x[(i, j)]).fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
    let lambda_min_x = lambda_min(&x)?;
    let r_d = c.y - theta;

    let mut s = DMatrix::from_element(n, n, -1.0);
    for i in 0..n {
        s[(i, i)] += c.y;
    }
    for m in &c.z {
        let (i, j) = m.edge;
        if i >= n || j >= n || !g.has_edge(i, j) {
            return Err(ThetaError::EdgeMismatch(i, j));
        }
        s[(i, j)] += m.z;
        s[(j, i)] += m.z;
    }
    let lambda_min_s = lambda_min(&s)?;

    let values = [
        ("r_p", r_p, t.r_p, c.r_p),
        ("r_edge", r_edge, t.r_edge, c.r_edge),
        ("lambda_min_X", lambda_min_x, t.lambda_min_x, c.lambda_min_x),
        ("r_d", r_d, t.r_d, c.r_d),
        ("lambda_min_S", lambda_min_s, t.lambda_min_s, c.lambda_min_s),
    ];
    let self_check = values.iter().map(|v| (v.1 - v.3).abs()).fold((theta - c.theta).abs(), f64::max);
    let checks: Vec<ResidualCheck> = values
        .iter()
        .map(|&(name, value, threshold, _)| ResidualCheck { name, value, threshold, passed: value.abs() <= threshold })
        .collect();
    let passed = checks.iter().all(|c| c.passed);
    Ok(CertificateReport { theta, checks, self_check, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use crate::theta::{lovasz_theta, Pass, SolveSettings};

    #[test]
    fn solver_certificate_passes_and_self_checks() {
        let g = named::quad_c5();
        let c = lovasz_theta(&g, &SolveSettings::high_accuracy()).unwrap();
        let rep = verify_certificate(&c, &g, &Thresholds::uniform(1e-7)).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!(rep.self_check <= 1e-12);
    }

    #[test]
    fn feasible_but_suboptimal_flags_gap() {
        let n = 8;
        let g = Graph::empty(n).unwrap();
        let x: Vec<f64> = (0..n * n).map(|k| if k / n == k % n { 1.0 / n as f64 } else { 0.0 }).collect();
        let c = ThetaCertificate {
            n,
            theta: 1.0,
            y: n as f64,
            r_p: 0.0,
            r_edge: 0.0,
            lambda_min_x: 1.0 / n as f64,
            r_d: n as f64 - 1.0,
            lambda_min_s: 0.0,
            x,
            z: vec![],
            iterations: 0,
            pass: Pass::Bulk,
        };
        let rep = verify_certificate(&c, &g, &Thresholds::uniform(1e-7)).unwrap();
        assert!((rep.theta - 1.0).abs() < 1e-15);
        assert!(rep.failed().contains(&"r_d"));
        assert!(!rep.failed().contains(&"r_p"));
    }

    #[test]
    fn perturbed_edge_entry_fails() {
        let g = named::c5();
        let mut c = lovasz_theta(&g, &SolveSettings::high_accuracy()).unwrap();
        let (i, j) = g.edges()[0];
        c.x[i * 5 + j] += 1e-3;
        c.x[j * 5 + i] += 1e-3;
        let rep = verify_certificate(&c, &g, &Thresholds::uniform(1e-7)).unwrap();
        assert!(rep.failed().contains(&"r_edge"));
    }

    #[test]
    fn dimension_mismatch() {
        let c = lovasz_theta(&named::c5(), &SolveSettings::bulk()).unwrap();
        assert!(matches!(
            verify_certificate(&c, &named::c7(), &Thresholds::uniform(1e-7)),
            Err(ThetaError::DimensionMismatch { .. })
        ));
    }
}
