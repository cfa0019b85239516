//! Three-phase search for real orthogonal representations with large λ_max.
//!
//! λ_max(Σ v_i v_iᵀ) = max over unit ψ of Σ (ψ·v_i)², so every phase carries
//! a handle vector ψ next to the v_i and the objective stays smooth.

use std::cell::{Cell, RefCell};

use argmin::core::{CostFunction, Error as ArgminError, Executor, Gradient};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::quasinewton::LBFGS;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{OrthRep, PenaltyWeights};
use crate::algebra::jacobi_eigen;

const LBFGS_MEMORY: usize = 7;
const PHASE1_ITERS: u64 = 500;
const PHASE2_ITERS: u64 = 2000;
const SQP_ITERS: usize = 60;
const PROJECT_ITERS: usize = 100;
const PROJECT_TOL: f64 = 1e-15;
const PINV_RCOND: f64 = 1e-12;

pub(super) struct Problem {
    pub n: usize,
    pub d: usize,
    pub edges: Vec<(usize, usize)>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Top eigenpair of `Σ v_i v_iᵀ` for row vectors stored consecutively.
pub(super) fn top_eigen(vectors: &[f64], d: usize) -> (f64, Vec<f64>) {
    let mut m = DMatrix::<f64>::zeros(d, d);
    for v in vectors.chunks(d) {
        for a in 0..d {
            for b in 0..d {
                m[(a, b)] += v[a] * v[b];
            }
        }
    }
    match jacobi_eigen(&m) {
        Ok(e) => (e.max(), e.vectors.column(0).iter().copied().collect()),
        Err(_) => (f64::NAN, vec![0.0; d]),
    }
}

/// Phase 1: Σ_E ⟨ŵ_i|ŵ_j⟩² on directions only.
struct Orthogonality<'a>(&'a Problem);

impl Orthogonality<'_> {
    fn eval(&self, w: &[f64], grad: Option<&mut [f64]>) -> f64 {
        let d = self.0.d;
        let norms: Vec<f64> = w.chunks(d).map(norm).collect();
        let mut f = 0.0;
        let mut g = vec![0.0; w.len()];
        for &(i, j) in &self.0.edges {
            let (wi, wj) = (&w[i * d..(i + 1) * d], &w[j * d..(j + 1) * d]);
            let c = dot(wi, wj) / (norms[i] * norms[j]);
            f += c * c;
            for k in 0..d {
                let (ui, uj) = (wi[k] / norms[i], wj[k] / norms[j]);
                g[i * d + k] += 2.0 * c * (uj - c * ui) / norms[i];
                g[j * d + k] += 2.0 * c * (ui - c * uj) / norms[j];
            }
        }
        if let Some(out) = grad {
            out.copy_from_slice(&g);
        }
        f
    }
}

/// Phase 2: −w_λ Σ(ψ̂·v_i)² + w_⊥ Σ_E (v_i·v_j)² + w_norm Σ(|v_i|² − 1)²,
/// with the handle stored unnormalized after the vectors.
struct Penalized<'a> {
    p: &'a Problem,
    w: PenaltyWeights,
}

impl Penalized<'_> {
    fn eval(&self, x: &[f64], grad: Option<&mut [f64]>) -> f64 {
        let (n, d) = (self.p.n, self.p.d);
        let h = &x[n * d..];
        let hn = norm(h);
        let psi: Vec<f64> = h.iter().map(|v| v / hn).collect();
        let mut f = 0.0;
        let mut g = vec![0.0; x.len()];
        let mut mpsi = vec![0.0; d];
        for i in 0..n {
            let v = &x[i * d..(i + 1) * d];
            let p = dot(&psi, v);
            let q = dot(v, v) - 1.0;
            f += -self.w.w_lambda * p * p + self.w.w_norm * q * q;
            for k in 0..d {
                g[i * d + k] += -2.0 * self.w.w_lambda * p * psi[k] + 4.0 * self.w.w_norm * q * v[k];
                mpsi[k] += p * v[k];
            }
        }
        for &(i, j) in &self.p.edges {
            let (vi, vj) = (&x[i * d..(i + 1) * d], &x[j * d..(j + 1) * d]);
            let c = dot(vi, vj);
            f += self.w.w_perp * c * c;
            for k in 0..d {
                g[i * d + k] += 2.0 * self.w.w_perp * c * vj[k];
                g[j * d + k] += 2.0 * self.w.w_perp * c * vi[k];
            }
        }
        // d/dh of ψ̂ᵀMψ̂ is 2(I − ψ̂ψ̂ᵀ)Mψ̂ / |h|
        let pm = dot(&psi, &mpsi);
        for k in 0..d {
            g[n * d + k] = -self.w.w_lambda * 2.0 * (mpsi[k] - pm * psi[k]) / hn;
        }
        if let Some(out) = grad {
            out.copy_from_slice(&g);
        }
        f
    }
}

trait Objective {
    fn eval(&self, x: &[f64], grad: Option<&mut [f64]>) -> f64;
}

impl Objective for Orthogonality<'_> {
    fn eval(&self, x: &[f64], grad: Option<&mut [f64]>) -> f64 {
        Orthogonality::eval(self, x, grad)
    }
}

impl Objective for Penalized<'_> {
    fn eval(&self, x: &[f64], grad: Option<&mut [f64]>) -> f64 {
        Penalized::eval(self, x, grad)
    }
}

/// Caps objective evaluations and remembers the best point seen. The
/// line search has no iteration limit of its own and can stall on a
/// bracket that never shrinks.
struct Budgeted<'a, P> {
    inner: &'a P,
    left: &'a Cell<u64>,
    best: &'a RefCell<(f64, Vec<f64>)>,
}

impl<P: Objective> Budgeted<'_, P> {
    fn eval(&self, x: &[f64], grad: Option<&mut [f64]>) -> Result<f64, ArgminError> {
        let left = self.left.get();
        if left == 0 {
            return Err(ArgminError::msg("evaluation budget exhausted"));
        }
        self.left.set(left - 1);
        let f = self.inner.eval(x, grad);
        let mut best = self.best.borrow_mut();
        if f < best.0 {
            *best = (f, x.to_vec());
        }
        Ok(f)
    }
}

impl<P: Objective> CostFunction for Budgeted<'_, P> {
    type Param = Vec<f64>;
    type Output = f64;
    fn cost(&self, x: &Vec<f64>) -> Result<f64, ArgminError> {
        self.eval(x, None)
    }
}

impl<P: Objective> Gradient for Budgeted<'_, P> {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;
    fn gradient(&self, x: &Vec<f64>) -> Result<Vec<f64>, ArgminError> {
        let mut g = vec![0.0; x.len()];
        self.eval(x, Some(&mut g))?;
        Ok(g)
    }
}

/// Evaluations allowed per L-BFGS iteration on average.
const EVALS_PER_ITER: u64 = 40;

/// L-BFGS from `x0`, stopping early at `target` cost. Returns the best
/// point evaluated, so an aborted run still keeps its progress.
fn lbfgs<P: Objective>(problem: &P, x0: Vec<f64>, iters: u64, target: f64) -> Vec<f64> {
    let best = RefCell::new((problem.eval(&x0, None), x0.clone()));
    let Ok(solver) = LBFGS::new(MoreThuenteLineSearch::new(), LBFGS_MEMORY).with_tolerance_grad(1e-13) else {
        return x0;
    };
    let left = Cell::new(iters * EVALS_PER_ITER);
    let wrapped = Budgeted { inner: problem, left: &left, best: &best };
    let _ = Executor::new(wrapped, solver).configure(|s| s.param(x0).max_iters(iters).target_cost(target)).run();
    best.into_inner().1
}

fn pinv_solve(a: DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let svd = a.svd(true, true);
    let eps = PINV_RCOND * svd.singular_values.max();
    svd.solve(b, eps).ok()
}

impl Problem {
    /// Constraints on the vector block: |v_i|² − 1 for each vertex, then
    /// v_i·v_j for each edge.
    fn constraints(&self, x: &[f64]) -> DVector<f64> {
        let d = self.d;
        let v = |i: usize| &x[i * d..(i + 1) * d];
        let mut c = DVector::zeros(self.n + self.edges.len());
        for i in 0..self.n {
            c[i] = dot(v(i), v(i)) - 1.0;
        }
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            c[self.n + k] = dot(v(i), v(j));
        }
        c
    }

    fn jacobian(&self, x: &[f64], cols: usize) -> DMatrix<f64> {
        let d = self.d;
        let mut jac = DMatrix::zeros(self.n + self.edges.len(), cols);
        for i in 0..self.n {
            for k in 0..d {
                jac[(i, i * d + k)] = 2.0 * x[i * d + k];
            }
        }
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            for k in 0..d {
                jac[(self.n + e, i * d + k)] = x[j * d + k];
                jac[(self.n + e, j * d + k)] = x[i * d + k];
            }
        }
        jac
    }

    /// Gauss–Newton projection of the vector block onto the constraint set.
    /// Returns false if it stalls above the tolerance.
    pub(super) fn project(&self, x: &mut [f64]) -> bool {
        let nd = self.n * self.d;
        for _ in 0..PROJECT_ITERS {
            let c = self.constraints(x);
            if c.amax() <= PROJECT_TOL {
                return true;
            }
            let Some(dx) = pinv_solve(self.jacobian(x, nd), &(-c)) else { return false };
            for (xi, di) in x[..nd].iter_mut().zip(dx.iter()) {
                *xi += di;
            }
        }
        self.constraints(x).amax() <= 1e-13
    }

    /// Projects, then sets the handle to the top eigenvector.
    fn settle(&self, x: &mut Vec<f64>) -> Option<f64> {
        let nd = self.n * self.d;
        if !self.project(x) {
            return None;
        }
        let (lam, psi) = top_eigen(&x[..nd], self.d);
        x.truncate(nd);
        x.extend(psi);
        lam.is_finite().then_some(lam)
    }

    /// Phase 3: Newton steps on the KKT system of max Σ(ψ·v_i)² subject to
    /// the exact constraints and |ψ|² = 1, with a pseudo-inverse for rank
    /// deficient constraint sets and monotone acceptance on exact λ_max.
    fn refine(&self, mut x: Vec<f64>) -> Option<(Vec<f64>, f64)> {
        let (n, d) = (self.n, self.d);
        let nd = n * d;
        let dim = nd + d;
        let mut lam = self.settle(&mut x)?;
        for _ in 0..SQP_ITERS {
            let psi = &x[nd..];
            let m_c = n + self.edges.len() + 1;
            let mut jac = DMatrix::zeros(m_c, dim);
            jac.view_mut((0, 0), (m_c - 1, dim)).copy_from(&self.jacobian(&x, dim));
            for k in 0..d {
                jac[(m_c - 1, nd + k)] = 2.0 * psi[k];
            }
            let mut c = DVector::zeros(m_c);
            c.rows_mut(0, m_c - 1).copy_from(&self.constraints(&x));
            c[m_c - 1] = dot(psi, psi) - 1.0;

            let mut grad = DVector::zeros(dim);
            let mut hess = DMatrix::zeros(dim, dim);
            let mut mmat = DMatrix::<f64>::zeros(d, d);
            for i in 0..n {
                let v = &x[i * d..(i + 1) * d];
                let p = dot(psi, v);
                for a in 0..d {
                    grad[i * d + a] = 2.0 * p * psi[a];
                    grad[nd + a] += 2.0 * p * v[a];
                    for b in 0..d {
                        hess[(i * d + a, i * d + b)] = 2.0 * psi[a] * psi[b];
                        let cross = 2.0 * psi[a] * v[b] + if a == b { 2.0 * p } else { 0.0 };
                        hess[(i * d + a, nd + b)] = cross;
                        hess[(nd + b, i * d + a)] = cross;
                        mmat[(a, b)] += v[a] * v[b];
                    }
                }
            }
            for a in 0..d {
                for b in 0..d {
                    hess[(nd + a, nd + b)] = 2.0 * mmat[(a, b)];
                }
            }
            let mu = pinv_solve(jac.transpose(), &grad)?;
            // Hessian of the Lagrangian f − Σ μ_k c_k
            for i in 0..n {
                for a in 0..d {
                    hess[(i * d + a, i * d + a)] -= 2.0 * mu[i];
                }
            }
            for (e, &(i, j)) in self.edges.iter().enumerate() {
                for a in 0..d {
                    hess[(i * d + a, j * d + a)] -= mu[n + e];
                    hess[(j * d + a, i * d + a)] -= mu[n + e];
                }
            }
            for a in 0..d {
                hess[(nd + a, nd + a)] -= 2.0 * mu[m_c - 1];
            }
            let mut kkt = DMatrix::zeros(dim + m_c, dim + m_c);
            kkt.view_mut((0, 0), (dim, dim)).copy_from(&hess);
            kkt.view_mut((0, dim), (dim, m_c)).copy_from(&(-jac.transpose()));
            kkt.view_mut((dim, 0), (m_c, dim)).copy_from(&jac);
            let mut rhs = DVector::zeros(dim + m_c);
            rhs.rows_mut(0, dim).copy_from(&(-(grad - jac.transpose() * &mu)));
            rhs.rows_mut(dim, m_c).copy_from(&(-c));
            let Some(step) = pinv_solve(kkt, &rhs) else { break };
            let dx = step.rows(0, dim);
            if dx.amax() < 1e-13 {
                break;
            }
            let mut accepted = false;
            let mut t = 1.0;
            for _ in 0..12 {
                let mut trial: Vec<f64> = x.iter().zip(dx.iter()).map(|(a, b)| a + t * b).collect();
                if let Some(l) = self.settle(&mut trial) {
                    if l >= lam - 1e-15 {
                        let gain = l - lam;
                        x = trial;
                        lam = l;
                        accepted = gain > 1e-15;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        x.truncate(nd);
        Some((x, lam))
    }

    /// One restart. `None` if the final vectors are not feasible to `tol`.
    pub(super) fn restart(&self, weights: PenaltyWeights, seed: u64, stream: u64, tol: f64) -> Option<OrthRep> {
        let (n, d) = (self.n, self.d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let w0: Vec<f64> = (0..n * d).map(|_| StandardNormal.sample(&mut rng)).collect();

        let w = lbfgs(&Orthogonality(self), w0, PHASE1_ITERS, 1e-28);
        let mut x: Vec<f64> = w
            .chunks(d)
            .flat_map(|c| {
                let l = norm(c);
                c.iter().map(move |v| v / l).collect::<Vec<_>>()
            })
            .collect();
        let (_, psi) = top_eigen(&x, d);
        x.extend(psi);

        let x = lbfgs(&Penalized { p: self, w: weights }, x, PHASE2_ITERS, f64::NEG_INFINITY);
        let (v, _) = self.refine(x)?;
        let rep = OrthRep::from_vectors(d, v, &self.edges);
        (rep.orth_error <= tol && rep.norm_error <= tol).then_some(rep)
    }
}
