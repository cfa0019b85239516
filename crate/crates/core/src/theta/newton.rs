//! Extended-precision polish of an optimal primal–dual pair.
//!
//! Newton's method on A(X) = b, (XS + SX)/2 = 0 with S = yI + Σ z B − J,
//! carried out in BigReal. At a strictly complementary, nondegenerate optimum
//! the Jacobian is nonsingular and convergence is quadratic from the double
//! precision certificate.

use serde::Serialize;

use super::{ThetaCertificate, ThetaError};
use crate::algebra::BigReal;
use crate::graph::Graph;

const MAX_NEWTON: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct PolishedTheta {
    pub digits: u32,
    #[serde(serialize_with = "as_decimal")]
    pub theta: BigReal,
    /// |y − ⟨J, X⟩| at the final iterate.
    pub gap: f64,
    /// Max-norm of the KKT residual after each Newton step.
    pub residual_history: Vec<f64>,
}

fn as_decimal<S: serde::Serializer>(x: &BigReal, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

struct System<'a> {
    n: usize,
    edges: &'a [(usize, usize)],
    digits: u32,
}

type Mat = Vec<Vec<BigReal>>;

impl System<'_> {
    fn zero(&self) -> BigReal {
        BigReal::zero(self.digits)
    }

    fn sym_index(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|i| (i..self.n).map(move |j| (i, j))).collect()
    }

    fn unknowns(&self) -> usize {
        self.n * (self.n + 1) / 2 + 1 + self.edges.len()
    }

    /// Unpacks (upper triangle of X, y, z).
    fn split(&self, w: &[BigReal]) -> (Mat, Mat) {
        let n = self.n;
        let mut x = vec![vec![self.zero(); n]; n];
        for (k, (i, j)) in self.sym_index().into_iter().enumerate() {
            x[i][j] = w[k].clone();
            x[j][i] = w[k].clone();
        }
        let off = n * (n + 1) / 2;
        let mut s = vec![vec![self.zero(); n]; n];
        for (i, row) in s.iter_mut().enumerate() {
            row[i] = w[off].clone();
        }
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            s[i][j] = w[off + 1 + k].clone();
            s[j][i] = w[off + 1 + k].clone();
        }
        (x, s)
    }

    fn matmul(&self, a: &Mat, b: &Mat) -> Mat {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(self.zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect())
            .collect()
    }

    /// The KKT residual at `w`, or with `dir` its derivative along `dir`.
    fn eval(&self, w: &[BigReal], dir: Option<&[BigReal]>) -> Vec<BigReal> {
        let one = BigReal::from_i64(1, self.digits);
        let (x, mut s) = self.split(w);
        for row in s.iter_mut() {
            for v in row.iter_mut() {
                *v = &*v - &one;
            }
        }
        let mut out = Vec::with_capacity(self.unknowns());
        match dir {
            None => {
                let tr = (0..self.n).fold(self.zero(), |a, i| a + &x[i][i]);
                out.push(tr - &one);
                for &(i, j) in self.edges {
                    out.push(&x[i][j] + &x[j][i]);
                }
                let xs = self.matmul(&x, &s);
                for (i, j) in self.sym_index() {
                    out.push(&xs[i][j] + &xs[j][i]);
                }
            }
            Some(d) => {
                let (dx, ds) = self.split(d);
                let tr = (0..self.n).fold(self.zero(), |a, i| a + &dx[i][i]);
                out.push(tr);
                for &(i, j) in self.edges {
                    out.push(&dx[i][j] + &dx[j][i]);
                }
                let a = self.matmul(&dx, &s);
                let b = self.matmul(&x, &ds);
                for (i, j) in self.sym_index() {
                    out.push(&(&a[i][j] + &a[j][i]) + &(&b[i][j] + &b[j][i]));
                }
            }
        }
        out
    }
}

fn max_abs(v: &[BigReal]) -> f64 {
    v.iter().map(|x| x.abs().to_f64()).fold(0.0, f64::max)
}

/// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<BigReal>>, mut b: Vec<BigReal>) -> Option<Vec<BigReal>> {
    let m = b.len();
    for col in 0..m {
        let piv = (col..m).max_by(|&p, &q| a[p][col].abs().cmp(&a[q][col].abs()))?;
        if a[piv][col].is_zero() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..m {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..m {
                let t = &f * &a[col][c];
                a[r][c] = &a[r][c] - &t;
            }
            let t = &f * &b[col];
            b[r] = &b[r] - &t;
        }
    }
    let mut x = vec![BigReal::zero(b[0].digits()); m];
    for r in (0..m).rev() {
        let s = (r + 1..m).fold(b[r].clone(), |acc, c| acc - &a[r][c] * &x[c]);
        x[r] = &s / &a[r][r];
    }
    Some(x)
}

/// Refines a converged certificate to `digits` decimal digits. Fails with
/// `Breakdown` if the Jacobian is singular or Newton stalls, which happens
/// when the optimum is not strictly complementary.
pub fn polish_theta(g: &Graph, c: &ThetaCertificate, digits: u32) -> Result<PolishedTheta, ThetaError> {
    if c.n != g.n() {
        return Err(ThetaError::DimensionMismatch { cert: c.n, graph: g.n() });
    }
    let edges = g.edges();
    let work = digits + 10;
    let sys = System { n: g.n(), edges: &edges, digits: work };
    let n = sys.n;
    let mut w: Vec<BigReal> = sys.sym_index().iter().map(|&(i, j)| BigReal::from_f64(c.x_entry(i, j), work)).collect();
    w.push(BigReal::from_f64(c.y, work));
    for (k, &e) in edges.iter().enumerate() {
        let z = c.z.get(k).filter(|m| m.edge == e).ok_or(ThetaError::EdgeMismatch(e.0, e.1))?;
        w.push(BigReal::from_f64(z.z, work));
    }
    let m = sys.unknowns();
    let target = 10f64.powi(-(digits as i32));
    let mut history = Vec::new();
    for _ in 0..MAX_NEWTON {
        let f = sys.eval(&w, None);
        let res = max_abs(&f);
        if res < target {
            break;
        }
        history.push(res);
        // columns of the Jacobian are directional derivatives along unit vectors
        let mut jac = vec![vec![sys.zero(); m]; m];
        for k in 0..m {
            let mut e = vec![sys.zero(); m];
            e[k] = BigReal::from_i64(1, work);
            for (r, v) in sys.eval(&w, Some(&e)).into_iter().enumerate() {
                jac[r][k] = v;
            }
        }
        let rhs: Vec<BigReal> = f.iter().map(|v| -v).collect();
        let dw = solve(jac, rhs).ok_or_else(|| ThetaError::Breakdown("singular KKT Jacobian".into()))?;
        for (a, d) in w.iter_mut().zip(&dw) {
            *a = &*a + d;
        }
    }
    let f = sys.eval(&w, None);
    let res = max_abs(&f);
    history.push(res);
    if !(res < target) {
        return Err(ThetaError::Breakdown(format!("Newton polish stalled at residual {res:.3e}")));
    }
    let (x, _) = sys.split(&w);
    let theta = x.iter().flatten().fold(sys.zero(), |a, v| a + v);
    let y = &w[n * (n + 1) / 2];
    let gap = (y - &theta).abs().to_f64();
    Ok(PolishedTheta { digits, theta: theta.with_digits(digits), gap, residual_history: history })
}
