//! Nesterov–Todd search direction with Mehrotra predictor–corrector.
//!
//! Constraint operators: A_0 = I (b_0 = 1) and A_e = B_e (b_e = 0) for every
//! edge e. Dual multipliers are u = (y, z_e). Each iteration factors the NT
//! scaling R with Rᵀ X R = R⁻¹ S R⁻ᵀ = Λ diagonal and works in the scaled
//! space, where the complementarity equation decouples entrywise.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EdgeMultiplier, SolveSettings, ThetaCertificate, ThetaError};
use crate::algebra::jacobi_eigen;
use crate::graph::Graph;

const BOUNDARY_FRACTION: f64 = 0.98;
const JITTER: f64 = 1e-6;

pub fn lovasz_theta(g: &Graph, s: &SolveSettings) -> Result<ThetaCertificate, ThetaError> {
    if !(s.tolerance > 0.0) {
        return Err(ThetaError::Settings(format!("tolerance must be positive, got {}", s.tolerance)));
    }
    if s.max_iterations == 0 {
        return Err(ThetaError::Settings("max_iterations must be positive".into()));
    }
    Solver::new(g, s).run()
}

struct Solver<'a> {
    n: usize,
    edges: Vec<(usize, usize)>,
    s: &'a SolveSettings,
    x: DMatrix<f64>,
    u: DVector<f64>,
}

/// Cholesky when M is numerically definite, pivoted LU otherwise.
enum SchurFactor {
    Chol(Cholesky<f64, nalgebra::Dyn>),
    Lu(nalgebra::linalg::FullPivLU<f64, nalgebra::Dyn, nalgebra::Dyn>),
}

impl SchurFactor {
    fn new(m: DMatrix<f64>) -> Self {
        match Cholesky::new(m.clone()) {
            Some(c) => SchurFactor::Chol(c),
            None => SchurFactor::Lu(m.full_piv_lu()),
        }
    }

    fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        match self {
            SchurFactor::Chol(c) => c.solve(b),
            SchurFactor::Lu(lu) => lu.solve(b).unwrap_or_else(|| DVector::zeros(b.len())),
        }
    }
}

/// NT scaling: `r` maps X to Λ via rᵀ X r, `rti = r⁻ᵀ` maps S via rtiᵀ S rti.
struct Scaling {
    r: DMatrix<f64>,
    rti: DMatrix<f64>,
    lambda: DVector<f64>,
}

impl Scaling {
    fn new(x: &DMatrix<f64>, s: &DMatrix<f64>) -> Option<Self> {
        let lx = Cholesky::new(x.clone())?.l();
        let ls = Cholesky::new(s.clone())?.l();
        let svd = (lx.transpose() * &ls).svd(true, true);
        let u = svd.u?;
        let v = svd.v_t?.transpose();
        let lambda = svd.singular_values;
        if lambda.iter().any(|&l| !(l > 0.0)) {
            return None;
        }
        let isq = DMatrix::from_diagonal(&lambda.map(|l| 1.0 / l.sqrt()));
        Some(Scaling { r: ls * v * &isq, rti: lx * u * isq, lambda })
    }
}

fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn min_eig(m: &DMatrix<f64>) -> Result<f64, ThetaError> {
    jacobi_eigen(&sym(m)).map(|e| e.min()).map_err(|e| ThetaError::Breakdown(e.to_string()))
}

/// Largest step in (0, 1] keeping diag(λ) + t·d positive definite, scaled by
/// `fraction`.
fn max_step(lambda: &DVector<f64>, d: &DMatrix<f64>, fraction: f64) -> Result<f64, ThetaError> {
    let n = lambda.len();
    let w = DMatrix::from_fn(n, n, |i, j| d[(i, j)] / (lambda[i] * lambda[j]).sqrt());
    let lam = min_eig(&w)?;
    Ok(if lam >= 0.0 { 1.0 } else { (-fraction / lam).min(1.0) })
}

struct Direction {
    dx: DMatrix<f64>,
    du: DVector<f64>,
    /// Scaled primal and dual steps.
    dxt: DMatrix<f64>,
    dst: DMatrix<f64>,
}

impl<'a> Solver<'a> {
    fn new(g: &Graph, s: &'a SolveSettings) -> Self {
        let n = g.n();
        let mut x = DMatrix::identity(n, n) / n as f64;
        if let Some(seed) = s.jitter_seed {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..n {
                x[(i, i)] *= 1.0 + rng.gen_range(-JITTER..JITTER);
            }
            let tr = x.trace();
            x /= tr;
        }
        let edges = g.edges();
        let mut u = DVector::zeros(1 + edges.len());
        // y = n makes nI − J singular; one unit above is strictly feasible.
        u[0] = n as f64 + 1.0;
        Solver { n, edges, s, x, u }
    }

    /// Σ u_k A_k, without the −J term.
    fn adjoint(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::identity(self.n, self.n) * u[0];
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            m[(i, j)] += u[k + 1];
            m[(j, i)] += u[k + 1];
        }
        m
    }

    fn slack(&self, u: &DVector<f64>) -> DMatrix<f64> {
        self.adjoint(u).add_scalar(-1.0)
    }

    fn apply_a(&self, y: &DMatrix<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(1 + self.edges.len());
        out[0] = y.trace();
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            out[k + 1] = y[(i, j)] + y[(j, i)];
        }
        out
    }

    fn b(&self) -> DVector<f64> {
        let mut b = DVector::zeros(1 + self.edges.len());
        b[0] = 1.0;
        b
    }

    /// M_kl = Tr(A_k W A_l W) with W = rti rtiᵀ.
    fn schur(&self, w: &DMatrix<f64>) -> DMatrix<f64> {
        let m = 1 + self.edges.len();
        let mut out = DMatrix::zeros(m, m);
        let w2 = w * w;
        out[(0, 0)] = w.norm_squared();
        for (a, &(i, j)) in self.edges.iter().enumerate() {
            let v = 2.0 * w2[(i, j)];
            out[(0, a + 1)] = v;
            out[(a + 1, 0)] = v;
            for (b, &(k, l)) in self.edges.iter().enumerate().skip(a) {
                let v = 2.0 * (w[(j, k)] * w[(i, l)] + w[(j, l)] * w[(i, k)]);
                out[(a + 1, b + 1)] = v;
                out[(b + 1, a + 1)] = v;
            }
        }
        out
    }

    /// Direction for the scaled complementarity target `rc`, so that
    /// Λ(ΔX̃ + ΔS̃) + (ΔX̃ + ΔS̃)Λ = rc.
    fn direction(&self, sc: &Scaling, mf: &SchurFactor, rp: &DVector<f64>, rc: &DMatrix<f64>) -> Direction {
        let n = self.n;
        let l = &sc.lambda;
        let t = DMatrix::from_fn(n, n, |i, j| rc[(i, j)] / (l[i] + l[j]));
        let rhs = self.apply_a(&(&sc.rti * &t * sc.rti.transpose())) - rp;
        let du = mf.solve(&rhs);
        let dst = sym(&(sc.rti.transpose() * self.adjoint(&du) * &sc.rti));
        let mut dx = sym(&(&sc.rti * (&t - &dst) * sc.rti.transpose()));
        self.project(&mut dx, rp);
        let dxt = sym(&(sc.r.transpose() * &dx * &sc.r));
        Direction { dx, du, dxt, dst }
    }

    /// Makes A(dx) = rp exactly. A Aᵀ is diagonal (n for the trace, 2 for each
    /// edge), so the orthogonal correction is explicit; without it rounding in
    /// the Schur solve lets primal feasibility drift once X is ill-conditioned.
    fn project(&self, dx: &mut DMatrix<f64>, rp: &DVector<f64>) {
        let shift = (rp[0] - dx.trace()) / self.n as f64;
        for i in 0..self.n {
            dx[(i, i)] += shift;
        }
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            let v = rp[k + 1] / 2.0;
            dx[(i, j)] = v;
            dx[(j, i)] = v;
        }
    }

    fn certificate(&self, x: &DMatrix<f64>, u: &DVector<f64>, iterations: usize) -> Result<ThetaCertificate, ThetaError> {
        let n = self.n;
        let theta = x.sum();
        let r_edge = self.edges.iter().map(|&(i, j)| x[(i, j)]).fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        Ok(ThetaCertificate {
            n,
            theta,
            y: u[0],
            r_p: x.trace() - 1.0,
            r_edge,
            lambda_min_x: min_eig(x)?,
            r_d: u[0] - theta,
            lambda_min_s: min_eig(&self.slack(u))?,
            x: (0..n * n).map(|k| x[(k / n, k % n)]).collect(),
            z: self.edges.iter().enumerate().map(|(k, &e)| EdgeMultiplier { edge: e, z: u[k + 1] }).collect(),
            iterations,
            pass: self.s.pass,
        })
    }

    fn converged(&self, c: &ThetaCertificate, tol: f64) -> bool {
        c.r_p.abs() <= tol
            && c.r_edge.abs() <= tol
            && c.r_d.abs() <= tol
            && c.lambda_min_x >= -tol
            && c.lambda_min_s >= -tol
    }

    fn run(mut self) -> Result<ThetaCertificate, ThetaError> {
        let tol = self.s.tolerance;
        let n = self.n;
        let b = self.b();
        let mut best = self.certificate(&self.x, &self.u, 0)?;
        for it in 1..=self.s.max_iterations {
            let smat = self.slack(&self.u);
            let Some(sc) = Scaling::new(&self.x, &smat) else { break };
            let rp = &b - self.apply_a(&self.x);
            let mu = sc.lambda.norm_squared() / n as f64;
            let w = &sc.rti * sc.rti.transpose();
            let mf = SchurFactor::new(sym(&self.schur(&w)));
            let lam = DMatrix::from_diagonal(&sc.lambda);

            // predictor
            let lam2 = &lam * &lam;
            let aff = self.direction(&sc, &mf, &rp, &(&lam2 * -2.0));
            let ap = max_step(&sc.lambda, &aff.dxt, 1.0)?;
            let ad = max_step(&sc.lambda, &aff.dst, 1.0)?;
            let mu_aff = ((&lam + &aff.dxt * ap).component_mul(&(&lam + &aff.dst * ad))).sum() / n as f64;
            let sigma = if mu > 0.0 { (mu_aff / mu).clamp(0.0, 1.0).powi(3) } else { 0.0 };

            // corrector
            let cross = &aff.dxt * &aff.dst;
            let rc = DMatrix::identity(n, n) * (2.0 * sigma * mu) - lam2 * 2.0 - &cross - cross.transpose();
            let d = self.direction(&sc, &mf, &rp, &rc);
            let mut ap = max_step(&sc.lambda, &d.dxt, BOUNDARY_FRACTION)?;
            let mut ad = max_step(&sc.lambda, &d.dst, BOUNDARY_FRACTION)?;

            // short-step fallback if rounding breaks definiteness
            let mut accepted = false;
            for _ in 0..40 {
                let xn = sym(&(&self.x + &d.dx * ap));
                let un = &self.u + &d.du * ad;
                if Cholesky::new(xn.clone()).is_some() && Cholesky::new(self.slack(&un)).is_some() {
                    self.x = xn;
                    self.u = un;
                    accepted = true;
                    break;
                }
                ap *= 0.5;
                ad *= 0.5;
            }
            if !accepted {
                break;
            }

            let cert = self.certificate(&self.x, &self.u, it)?;
            if self.converged(&cert, tol) {
                return Ok(cert);
            }
            if cert.max_residual() < best.max_residual() || best.iterations == 0 {
                best = cert;
            }
        }
        if self.converged(&best, 100.0 * tol) {
            return Ok(best);
        }
        Err(ThetaError::NonConvergence { iterations: self.s.max_iterations, best: Box::new(best) })
    }
}
