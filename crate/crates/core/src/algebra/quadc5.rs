//! Verification of the golden-ratio qutrit representation of Quad-C5.
//!
//! Every check runs twice: numerically in BigReal at the requested precision,
//! and exactly in Q(ω). A check passes when the numeric residual is below the
//! threshold and the exact identity holds.

use serde::Serialize;

use super::{AlgebraError, BigReal, GoldenQuartic};
use crate::graph::named::QUAD_C5_EDGES;

const MIN_DIGITS: u32 = 50;

#[derive(Clone, Debug, Serialize)]
pub struct QuadC5Check {
    pub name: String,
    pub residual: f64,
    pub exact: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct QuadC5Report {
    pub digits: u32,
    pub threshold: f64,
    pub checks: Vec<QuadC5Check>,
    /// `p(λ) = det(λI − M)` with coefficients split as `a + b√5`.
    pub charpoly: String,
    pub lambda_max: String,
    pub double_root: f64,
    pub max_residual: f64,
    pub all_passed: bool,
}

impl QuadC5Report {
    pub fn check(&self, name: &str) -> Option<&QuadC5Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

type Vec3<T> = [T; 3];
type Mat3<T> = [[T; 3]; 3];

fn residual_f64(x: &BigReal) -> f64 {
    let l = x.log10_abs();
    if l == f64::NEG_INFINITY {
        0.0
    } else {
        10f64.powf(l)
    }
}

fn numeric_vectors(digits: u32) -> Result<Vec<Vec3<BigReal>>, AlgebraError> {
    let r = |v: i64| BigReal::from_i64(v, digits);
    let phi = (r(1) + r(5).sqrt()?) / r(2);
    let inv = phi.recip();
    let inv_half = inv.sqrt()?;
    let inv_3half = &inv * &inv_half;
    let e0 = [r(1), r(0), r(0)];
    let e1 = [r(0), r(1), r(0)];
    let e2 = [r(0), r(0), r(1)];
    Ok(vec![
        e0.clone(),
        [r(0), inv_half.clone(), inv.clone()],
        e2.clone(),
        e2,
        [-&inv, -&inv_3half, inv.clone()],
        e1,
        e0,
        [-&inv, inv_half, r(0)],
    ])
}

fn exact_vectors() -> Vec<Vec3<GoldenQuartic>> {
    let z = GoldenQuartic::zero;
    let o = GoldenQuartic::one;
    let inv = GoldenQuartic::from_ints([-1, 0, 1, 0]);
    let inv_half = GoldenQuartic::from_ints([0, -1, 0, 1]);
    let inv_3half = &inv * &inv_half;
    vec![
        [o(), z(), z()],
        [z(), inv_half.clone(), inv.clone()],
        [z(), z(), o()],
        [z(), z(), o()],
        [-&inv, -&inv_3half, inv.clone()],
        [z(), o(), z()],
        [o(), z(), z()],
        [-&inv, inv_half, z()],
    ]
}

/// Minimal ring interface shared by the numeric and exact passes.
trait Ring: Clone {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
}

impl Ring for BigReal {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

impl Ring for GoldenQuartic {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
}

fn dot<T: Ring>(a: &Vec3<T>, b: &Vec3<T>, zero: &T) -> T {
    (0..3).fold(zero.clone(), |acc, k| acc.add(&a[k].mul(&b[k])))
}

fn gram_sum<T: Ring>(vs: &[Vec3<T>], zero: &T) -> Mat3<T> {
    let mut m: Mat3<T> = std::array::from_fn(|_| std::array::from_fn(|_| zero.clone()));
    for v in vs {
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = m[i][j].add(&v[i].mul(&v[j]));
            }
        }
    }
    m
}

/// `(trace, sum of principal 2×2 minors, determinant)`, so that
/// `det(λI − M) = λ³ − c2 λ² + c1 λ − c0`.
fn charpoly<T: Ring>(m: &Mat3<T>) -> (T, T, T) {
    let tr = m[0][0].add(&m[1][1]).add(&m[2][2]);
    let minor = |a: usize, b: usize| m[a][a].mul(&m[b][b]).sub(&m[a][b].mul(&m[b][a]));
    let c1 = minor(0, 1).add(&minor(0, 2)).add(&minor(1, 2));
    let det = m[0][0]
        .mul(&m[1][1].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][1])))
        .sub(&m[0][1].mul(&m[1][0].mul(&m[2][2]).sub(&m[1][2].mul(&m[2][0]))))
        .add(&m[0][2].mul(&m[1][0].mul(&m[2][1]).sub(&m[1][1].mul(&m[2][0]))));
    (tr, c1, det)
}

/// `(a + 2b, 2ab + b², ab²)`: the same triple for `(λ − a)(λ − b)²`.
fn factored<T: Ring>(a: &T, b: &T) -> (T, T, T) {
    let ab = a.mul(b);
    (a.add(b).add(b), ab.add(&ab).add(&b.mul(b)), ab.mul(b))
}

fn mat_vec<T: Ring>(m: &Mat3<T>, v: &Vec3<T>, zero: &T) -> Vec3<T> {
    std::array::from_fn(|i| dot(&m[i], v, zero))
}

fn split_string(x: &GoldenQuartic) -> String {
    use num_traits::{Signed, Zero};
    match x.sqrt5_split() {
        Some((a, b)) if b.is_zero() => format!("{a}"),
        Some((a, b)) if a.is_zero() => format!("{b}√5"),
        Some((a, b)) => format!("({a} {} {}√5)", if b.is_negative() { "-" } else { "+" }, b.abs()),
        None => format!("({x})"),
    }
}

pub fn verify_quadc5_construction(digits: u32) -> Result<QuadC5Report, AlgebraError> {
    if digits < MIN_DIGITS {
        return Err(AlgebraError::PrecisionTooLow { digits, min: MIN_DIGITS });
    }
    let threshold = 1e-30f64.min(10f64.powi(-(digits as i32 - 20)));
    let r = |v: i64| BigReal::from_i64(v, digits);
    let zero = r(0);
    let qz = GoldenQuartic::zero();
    let nv = numeric_vectors(digits)?;
    let ev = exact_vectors();
    let mut checks = Vec::new();
    let mut push = |name: String, res: BigReal, exact: bool| {
        let residual = residual_f64(&res);
        checks.push(QuadC5Check { name, residual, exact, passed: exact && residual <= threshold });
    };

    for i in 0..8 {
        let res = (dot(&nv[i], &nv[i], &zero) - r(1)).abs();
        let exact = dot(&ev[i], &ev[i], &qz) == GoldenQuartic::one();
        push(format!("unit_norm_v{i}"), res, exact);
    }
    for &(i, j) in &QUAD_C5_EDGES {
        let res = dot(&nv[i], &nv[j], &zero).abs();
        let exact = dot(&ev[i], &ev[j], &qz).is_zero();
        push(format!("orthogonal_v{i}_v{j}"), res, exact);
    }

    let nm = gram_sum(&nv, &zero);
    let em = gram_sum(&ev, &qz);
    let (ntr, nc1, ndet) = charpoly(&nm);
    let (etr, ec1, edet) = charpoly(&em);
    push("gram_sum_trace".into(), (&ntr - &r(8)).abs(), etr == GoldenQuartic::int(8));

    // Published coefficients: λ³ − 8λ² + (31/2 + 5√5/2)λ + 4 − 10√5.
    let s5 = r(5).sqrt()?;
    let want_c1 = (r(31) + &r(5) * &s5) / r(2);
    let want_det = &r(10) * &s5 - r(4);
    let res = (&nc1 - &want_c1).abs().max((&ndet - &want_det).abs());
    let half = |n: i64| num_rational::BigRational::new(n.into(), 2.into());
    let exact = ec1.sqrt5_split() == Some((half(31), half(5))) && edet.sqrt5_split() == Some((half(-8), half(20)));
    push("charpoly_coefficients".into(), res, exact);

    let n_lmax = &r(1) + &s5;
    let e_lmax = &GoldenQuartic::one() + &GoldenQuartic::sqrt5();
    let p_at = |x: &BigReal| -> BigReal {
        let x2 = x * x;
        &(&(&(&x2 * x) - &(&ntr * &x2)) + &(&nc1 * x)) - &ndet
    };
    let ep_at = |x: &GoldenQuartic| -> GoldenQuartic {
        let x2 = x * x;
        &(&(&(&x2 * x) - &(&etr * &x2)) + &(&ec1 * x)) - &edet
    };
    push("charpoly_root".into(), p_at(&n_lmax).abs(), ep_at(&e_lmax).is_zero());

    let n_b = (r(7) - s5.clone()) / r(2);
    let e_b = &(&GoldenQuartic::int(7) - &GoldenQuartic::sqrt5()) * &GoldenQuartic::rational(half(1));
    let (f2, f1, f0) = factored(&n_lmax, &n_b);
    let res = (&f2 - &ntr).abs().max((&f1 - &nc1).abs()).max((&f0 - &ndet).abs());
    let (g2, g1, g0) = factored(&e_lmax, &e_b);
    push("factorization".into(), res, g2 == etr && g1 == ec1 && g0 == edet);

    // ψ★ = 5^{-1/4} (−1, √(√5 − 2), 1); exactly, the unnormalized (−1, ω⁻³, 1).
    let scale = s5.sqrt()?.recip();
    let psi = [-&scale, &(&s5 - &r(2)).sqrt()? * &scale, scale.clone()];
    let winv = GoldenQuartic::omega().inverse()?;
    let epsi = [-&GoldenQuartic::one(), &(&winv * &winv) * &winv, GoldenQuartic::one()];
    let mpsi = mat_vec(&nm, &psi, &zero);
    let res = (0..3).map(|k| (&mpsi[k] - &(&n_lmax * &psi[k])).abs()).max().expect("3 entries");
    let empsi = mat_vec(&em, &epsi, &qz);
    let exact = (0..3).all(|k| empsi[k] == &e_lmax * &epsi[k]);
    push("eigenvector".into(), res.max((dot(&psi, &psi, &zero) - r(1)).abs()), exact);

    let sum = nv.iter().fold(zero.clone(), |acc, v| {
        let o = dot(&psi, v, &zero);
        &acc + &(&o * &o)
    });
    let esum = ev.iter().fold(qz.clone(), |acc, v| {
        let o = dot(&epsi, v, &qz);
        &acc + &(&o * &o)
    });
    let enorm = dot(&epsi, &epsi, &qz);
    push("handle_state_sum".into(), (&sum - &n_lmax).abs(), esum == &e_lmax * &enorm);

    let max_residual = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
    let all_passed = checks.iter().all(|c| c.passed);
    let charpoly = format!("λ³ - {}λ² + {}λ + {}", split_string(&etr), split_string(&ec1), split_string(&-&edet));
    Ok(QuadC5Report {
        digits,
        threshold,
        checks,
        charpoly,
        lambda_max: n_lmax.to_decimal(digits),
        double_root: n_b.to_f64(),
        max_residual,
        all_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass_at_fifty_digits() {
        let rep = verify_quadc5_construction(50).unwrap();
        assert_eq!(rep.checks.len(), 8 + 10 + 6);
        for c in &rep.checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(rep.max_residual <= 1e-30);
        assert!((rep.double_root - 2.381966011250105).abs() < 1e-12);
        assert!(rep.lambda_max.starts_with("3.2360679774997896964"));
    }

    #[test]
    fn residuals_shrink_with_precision() {
        let lo = verify_quadc5_construction(50).unwrap();
        let hi = verify_quadc5_construction(100).unwrap();
        assert!(hi.max_residual < lo.max_residual * 1e-30 || hi.max_residual == 0.0);
    }

    #[test]
    fn rejects_low_precision() {
        assert!(matches!(verify_quadc5_construction(30), Err(AlgebraError::PrecisionTooLow { .. })));
    }

    #[test]
    fn charpoly_split_display() {
        let rep = verify_quadc5_construction(50).unwrap();
        assert!(rep.charpoly.contains("(31/2 + 5/2√5)"), "{}", rep.charpoly);
    }
}
