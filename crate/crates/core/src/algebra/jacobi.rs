//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use nalgebra::DMatrix;

use super::AlgebraError;

/// Eigen-decomposition `A = V diag(values) Vᵀ`, values descending, columns of
/// `vectors` orthonormal and ordered to match.
#[derive(Clone, Debug)]
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl SymEigen {
    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }
}

const MAX_SWEEPS: usize = 100;

pub fn jacobi_eigen(a: &DMatrix<f64>) -> Result<SymEigen, AlgebraError> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(AlgebraError::NotSquare { rows: n, cols: a.ncols() });
    }
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for i in 0..n {
        for j in i + 1..n {
            let d = (a[(i, j)] - a[(j, i)]).abs();
            if d > 1e-12 * scale.max(1.0) {
                return Err(AlgebraError::Asymmetric { i, j, diff: d });
            }
        }
    }
    let mut m = a.clone();
    // symmetrize exactly
    for i in 0..n {
        for j in i + 1..n {
            let s = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = s;
            m[(j, i)] = s;
        }
    }
    let mut v = DMatrix::<f64>::identity(n, n);

    for sweep in 0..MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].powi(2)).sum();
        let diag: f64 = (0..n).map(|i| m[(i, i)].powi(2)).sum();
        if off.sqrt() <= f64::EPSILON * 1e-3 * (diag + off).sqrt() || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let g = 100.0 * apq.abs();
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn max_abs(m: &DMatrix<f64>) -> f64 {
        m.iter().fold(0.0f64, |a, x| a.max(x.abs()))
    }

    #[test]
    fn diagonal() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 1.0, 2.0]));
        let e = jacobi_eigen(&a).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn asymmetric_rejected() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(jacobi_eigen(&a), Err(AlgebraError::Asymmetric { .. })));
    }

    #[test]
    fn golden_adjacency() {
        let g = crate::graph::named::quad_c5();
        let a = DMatrix::from_fn(8, 8, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((jacobi_eigen(&a).unwrap().max() - (1.0 + phi)).abs() < 1e-12);
    }

    fn arb_sym() -> impl Strategy<Value = DMatrix<f64>> {
        (1usize..=9).prop_flat_map(|n| {
            proptest::collection::vec(-5.0f64..5.0, n * n).prop_map(move |xs| {
                let m = DMatrix::from_vec(n, n, xs);
                (&m + m.transpose()) * 0.5
            })
        })
    }

    proptest! {
        #[test]
        fn reconstructs_and_orthonormal(a in arb_sym()) {
            let n = a.nrows();
            let e = jacobi_eigen(&a).unwrap();
            let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(e.values.clone()));
            let recon = &e.vectors * lam * e.vectors.transpose();
            let scale = max_abs(&a).max(1e-300);
            prop_assert!(max_abs(&(recon - &a)) <= 1e-12 * scale.max(1.0));
            let vtv = e.vectors.transpose() * &e.vectors;
            prop_assert!(max_abs(&(vtv - DMatrix::identity(n, n))) <= 1e-12);
            prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            let tr: f64 = a.trace();
            let sum: f64 = e.values.iter().sum();
            prop_assert!((tr - sum).abs() <= 1e-10 * (1.0 + tr.abs()));
            let det = a.clone().determinant();
            let prod: f64 = e.values.iter().product();
            prop_assert!((det - prod).abs() <= 1e-10 * (1.0 + det.abs()));
        }
    }
}
