//! PSLQ integer-relation search in fixed-point arithmetic, polynomial
//! identification on top of it, and the derivative-scaled residual test.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{AlgebraError, BigReal};

/// Integer polynomial `c[0] + c[1] x + … + c[k] x^k`, content 1, leading
/// coefficient positive.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    /// Normalizes and drops trailing zeros. Fails on the zero polynomial.
    pub fn new(coeffs: Vec<i64>) -> Result<Self, AlgebraError> {
        let mut c = coeffs;
        while c.last() == Some(&0) {
            c.pop();
        }
        if c.is_empty() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let g = c.iter().fold(0i64, |g, &x| g.gcd(&x));
        let sign = if *c.last().expect("nonempty") < 0 { -1 } else { 1 };
        Ok(IntPolynomial { coeffs: c.iter().map(|&x| sign * x / g).collect() })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Ascending coefficients.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn height(&self) -> i64 {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &BigReal) -> BigReal {
        let d = x.digits();
        self.coeffs.iter().rev().fold(BigReal::zero(d), |acc, &c| &(&acc * x) + &BigReal::from_i64(c, d))
    }

    pub fn derivative_eval(&self, x: &BigReal) -> BigReal {
        let d = x.digits();
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(BigReal::zero(d), |acc, (k, &c)| &(&acc * x) + &BigReal::from_i64(c * k as i64, d))
    }
}

impl fmt::Display for IntPolynomial {
    /// Degree-descending, e.g. `x^2 - 2x - 4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mag = c.abs();
            let sign = match (first, c < 0) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let coef = if mag == 1 && k > 0 { String::new() } else { mag.to_string() };
            let var = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            write!(f, "{sign}{coef}{var}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

#[derive(Clone, Debug)]
pub struct PslqSettings {
    /// Relations with any |coefficient| above this are not reported.
    pub coeff_bound: i64,
    pub max_steps: usize,
    /// Working digits as a multiple of the input digits.
    pub precision_factor: f64,
}

impl Default for PslqSettings {
    fn default() -> Self {
        PslqSettings { coeff_bound: 1_000_000, max_steps: 10_000, precision_factor: 1.2 }
    }
}

/// Outcome of a single PSLQ run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    Found(Vec<BigInt>),
    /// The proven lower bound on any relation norm exceeded the coefficient bound.
    NoneWithinBound,
}

/// Searches integer vectors `c` with `Σ c_i x_i ≈ 0`.
///
/// Fixed-point PSLQ with `bits` working bits; the detection threshold is
/// 2^(-3/4 · input bits).
pub fn pslq(xs: &[BigReal], settings: &PslqSettings) -> Result<Relation, AlgebraError> {
    let n = xs.len();
    if n < 2 {
        return Err(AlgebraError::PslqTooShort);
    }
    let input_digits = xs.iter().map(BigReal::digits).max().unwrap_or(0);
    let input_bits = (f64::from(input_digits) * std::f64::consts::LOG2_10) as u32;
    if input_bits < 40 {
        return Err(AlgebraError::Undetectable { digits: input_digits });
    }
    let work_digits = (f64::from(input_digits) * settings.precision_factor).ceil() as u32;
    let prec = (f64::from(work_digits) * std::f64::consts::LOG2_10).ceil() as u32 + 60;
    let one = || BigInt::one() << prec;
    let tol = BigInt::one() << (prec - input_bits * 3 / 4);
    let fx = |v: &BigReal| -> BigInt { v.to_fixed(prec) };

    let x: Vec<BigInt> = std::iter::once(BigInt::zero()).chain(xs.iter().map(fx)).collect();
    let minx = x[1..].iter().map(|v| v.abs()).min().expect("n >= 2");
    if minx.is_zero() {
        let idx = x[1..].iter().position(|v| v.is_zero()).expect("zero present");
        let mut rel = vec![BigInt::zero(); n];
        rel[idx] = BigInt::one();
        return Ok(Relation::Found(rel));
    }
    if minx < &tol / 100 {
        return Err(AlgebraError::Undetectable { digits: input_digits });
    }

    let sqrt_fixed = |v: &BigInt| -> BigInt { (v << prec).sqrt() };
    let round_fixed = |v: &BigInt| -> BigInt {
        let half = BigInt::one() << (prec - 1);
        ((v + half) >> prec) << prec
    };
    let g = sqrt_fixed(&((BigInt::from(4) << prec) / 3));

    let idx = |i: usize, j: usize| i * (n + 1) + j;
    let size = (n + 1) * (n + 1);
    let mut a = vec![BigInt::zero(); size];
    let mut b = vec![BigInt::zero(); size];
    let mut h = vec![BigInt::zero(); size];
    for i in 1..=n {
        a[idx(i, i)] = one();
        b[idx(i, i)] = one();
    }

    let mut s = vec![BigInt::zero(); n + 1];
    for k in 1..=n {
        let t: BigInt = (k..=n).map(|j| (&x[j] * &x[j]) >> prec).sum();
        s[k] = sqrt_fixed(&t);
    }
    let t = s[1].clone();
    let mut y = x.clone();
    for k in 1..=n {
        y[k] = (&x[k] << prec).div_floor(&t);
        s[k] = (&s[k] << prec).div_floor(&t);
    }
    for i in 1..=n {
        if i < n && !s[i].is_zero() {
            h[idx(i, i)] = (&s[i + 1] << prec).div_floor(&s[i]);
        }
        for j in 1..i {
            let sjj1 = &s[j] * &s[j + 1];
            if !sjj1.is_zero() {
                h[idx(i, j)] = ((-(&y[i] * &y[j])) << prec).div_floor(&sjj1);
            }
        }
    }
    for i in 2..=n {
        for j in (1..i).rev() {
            if h[idx(j, j)].is_zero() {
                continue;
            }
            let t = round_fixed(&(&h[idx(i, j)] << prec).div_floor(&h[idx(j, j)]));
            y[j] = &y[j] + ((&t * &y[i]) >> prec);
            for k in 1..=j {
                h[idx(i, k)] = &h[idx(i, k)] - ((&t * &h[idx(j, k)]) >> prec);
            }
            for k in 1..=n {
                a[idx(i, k)] = &a[idx(i, k)] - ((&t * &a[idx(j, k)]) >> prec);
                b[idx(k, j)] = &b[idx(k, j)] + ((&t * &b[idx(k, i)]) >> prec);
            }
        }
    }

    let bound = BigInt::from(settings.coeff_bound);
    for _ in 0..settings.max_steps {
        let mut m = 0usize;
        let mut szmax = BigInt::from(-1);
        let mut gpow = g.clone();
        for i in 1..n {
            let sz = (&gpow * h[idx(i, i)].abs()) >> (prec * i as u32);
            if sz > szmax {
                m = i;
                szmax = sz;
            }
            gpow *= &g;
        }
        y.swap(m, m + 1);
        for i in 1..=n {
            h.swap(idx(m, i), idx(m + 1, i));
            a.swap(idx(m, i), idx(m + 1, i));
            b.swap(idx(i, m), idx(i, m + 1));
        }
        if m + 2 <= n {
            let t0 = sqrt_fixed(&((&h[idx(m, m)] * &h[idx(m, m)] + &h[idx(m, m + 1)] * &h[idx(m, m + 1)]) >> prec));
            if t0.is_zero() {
                break;
            }
            let t1 = (&h[idx(m, m)] << prec).div_floor(&t0);
            let t2 = (&h[idx(m, m + 1)] << prec).div_floor(&t0);
            for i in m..=n {
                let t3 = h[idx(i, m)].clone();
                let t4 = h[idx(i, m + 1)].clone();
                h[idx(i, m)] = (&t1 * &t3 + &t2 * &t4) >> prec;
                h[idx(i, m + 1)] = (-(&t2 * &t3) + &t1 * &t4) >> prec;
            }
        }
        'outer: for i in m + 1..=n {
            for j in (1..=(i - 1).min(m + 1)).rev() {
                if h[idx(j, j)].is_zero() {
                    break 'outer;
                }
                let t = round_fixed(&(&h[idx(i, j)] << prec).div_floor(&h[idx(j, j)]));
                y[j] = &y[j] + ((&t * &y[i]) >> prec);
                for k in 1..=j {
                    h[idx(i, k)] = &h[idx(i, k)] - ((&t * &h[idx(j, k)]) >> prec);
                }
                for k in 1..=n {
                    a[idx(i, k)] = &a[idx(i, k)] - ((&t * &a[idx(j, k)]) >> prec);
                    b[idx(k, j)] = &b[idx(k, j)] + ((&t * &b[idx(k, i)]) >> prec);
                }
            }
        }
        for i in 1..=n {
            if y[i].abs() < tol {
                let rel: Vec<BigInt> = (1..=n).map(|j| round_fixed(&b[idx(j, i)]) >> prec).collect();
                if rel.iter().all(|c| c.abs() < bound) {
                    return Ok(Relation::Found(rel));
                }
            }
        }
        let recnorm = h.iter().map(|v| v.abs()).max().unwrap_or_default();
        if !recnorm.is_zero() {
            let norm = ((BigInt::one() << (2 * prec)) / recnorm) >> prec;
            if norm / 100 >= bound {
                return Ok(Relation::NoneWithinBound);
            }
        }
    }
    Err(AlgebraError::PslqNoConvergence { steps: settings.max_steps })
}

/// Lowest-degree integer polynomial (degree ≤ `max_degree`) annihilating `x`
/// to working precision, or `None` when no relation within the coefficient
/// bound exists at any degree.
pub fn pslq_find(x: &BigReal, max_degree: usize, settings: &PslqSettings) -> Result<Option<IntPolynomial>, AlgebraError> {
    if !(1..=4).contains(&max_degree) {
        return Err(AlgebraError::DegreeRange(max_degree));
    }
    for k in 1..=max_degree {
        let powers: Vec<BigReal> = (0..=k).map(|i| x.powi(i as u32)).collect();
        if let Relation::Found(rel) = pslq(&powers, settings)? {
            let coeffs: Vec<i64> = rel.iter().map(|c| c.to_i64().expect("bounded by coeff_bound")).collect();
            if coeffs[k] == 0 {
                continue;
            }
            return Ok(Some(IntPolynomial::new(coeffs)?));
        }
    }
    Ok(None)
}

/// One PSLQ run at a fixed degree, with the residual of its relation.
#[derive(Clone, Debug, Serialize)]
pub struct Candidate {
    pub degree: usize,
    #[serde(serialize_with = "as_string")]
    pub polynomial: Option<IntPolynomial>,
    pub residual: Option<f64>,
}

fn as_string<S: serde::Serializer>(p: &Option<IntPolynomial>, s: S) -> Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.serialize_str(&p.to_string()),
        None => s.serialize_none(),
    }
}

/// Runs PSLQ separately at each degree 1..=`max_degree` and scores every
/// relation found with `residual_test` at `x` and `eps`. Unlike `pslq_find`
/// this keeps going after the first hit, so spurious low-degree relations
/// and higher-degree ones are both visible.
pub fn pslq_candidates(x: &BigReal, max_degree: usize, eps: f64, settings: &PslqSettings) -> Result<Vec<Candidate>, AlgebraError> {
    if !(1..=4).contains(&max_degree) {
        return Err(AlgebraError::DegreeRange(max_degree));
    }
    (1..=max_degree)
        .map(|k| {
            let powers: Vec<BigReal> = (0..=k).map(|i| x.powi(i as u32)).collect();
            let polynomial = match pslq(&powers, settings)? {
                Relation::Found(rel) => {
                    let coeffs: Vec<i64> = rel.iter().map(|c| c.to_i64().expect("bounded by coeff_bound")).collect();
                    if coeffs[k] == 0 { None } else { Some(IntPolynomial::new(coeffs)?) }
                }
                Relation::NoneWithinBound => None,
            };
            let residual = polynomial.as_ref().map(|p| residual_test(p, x, eps)).transpose()?;
            Ok(Candidate { degree: k, polynomial, residual })
        })
        .collect()
}

/// `|P(x)| / (|P'(x)| · eps)`; values far below 1 indicate a genuine relation.
pub fn residual_test(p: &IntPolynomial, x: &BigReal, eps: f64) -> Result<f64, AlgebraError> {
    let dp = p.derivative_eval(x);
    if dp.is_zero() || dp.abs().log10_abs() < -f64::from(x.digits()) + 5.0 {
        return Err(AlgebraError::VanishingDerivative);
    }
    let ratio = &p.eval(x).abs() / &dp.abs();
    let l = ratio.log10_abs() - eps.log10();
    Ok(if l == f64::NEG_INFINITY { 0.0 } else { 10f64.powf(l) })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ETA3_50: &str = "3.2360679774997896964091736687312762354406183596115";

    #[test]
    fn golden_eta_relation() {
        let x = BigReal::parse(ETA3_50, 50).unwrap();
        let p = pslq_find(&x, 4, &PslqSettings::default()).unwrap().unwrap();
        assert_eq!(p.coeffs(), &[-4, -2, 1]);
        assert_eq!(p.to_string(), "x^2 - 2x - 4");
        let r = residual_test(&p, &x, 1e-15).unwrap();
        assert!(r < 1e-30, "r = {r}");
    }

    #[test]
    fn sqrt2_and_rational() {
        let s2 = BigReal::from_i64(2, 50).sqrt().unwrap();
        let p = pslq_find(&s2, 4, &PslqSettings::default()).unwrap().unwrap();
        assert_eq!(p.to_string(), "x^2 - 2");
        let half = BigReal::parse("0.5", 50).unwrap();
        let p = pslq_find(&half, 4, &PslqSettings::default()).unwrap().unwrap();
        assert_eq!(p.to_string(), "2x - 1");
    }

    #[test]
    fn transcendental_has_no_small_relation() {
        // pi to 50 digits: no integer polynomial of degree <= 4 with |c| <= 1e6.
        let pi = BigReal::parse("3.14159265358979323846264338327950288419716939937510", 50).unwrap();
        assert_eq!(pslq_find(&pi, 4, &PslqSettings::default()).unwrap(), None);
    }

    #[test]
    fn residual_at_double_precision_value() {
        // Oracle: mpmath at 50 digits gives r = 0.10864230407365011 for the
        // f64 nearest to 1 + sqrt(5).
        let x = BigReal::from_f64(1.0 + 5f64.sqrt(), 50);
        let p = IntPolynomial::new(vec![-4, -2, 1]).unwrap();
        let r = residual_test(&p, &x, 1e-15).unwrap();
        assert!((r - 0.10864230407365011).abs() < 1e-9, "r = {r}");
    }

    #[test]
    fn residual_edge_cases() {
        let p = IntPolynomial::new(vec![-1, 1]).unwrap();
        assert_eq!(residual_test(&p, &BigReal::from_i64(1, 50), 1e-15).unwrap(), 0.0);
        let sq = IntPolynomial::new(vec![0, 0, 1]).unwrap();
        assert_eq!(residual_test(&sq, &BigReal::zero(50), 1e-15), Err(AlgebraError::VanishingDerivative));
    }

    #[test]
    fn normalization() {
        let p = IntPolynomial::new(vec![8, 4, -2, 0]).unwrap();
        assert_eq!(p.coeffs(), &[-4, -2, 1]);
        assert_eq!(p.degree(), 2);
        assert!(IntPolynomial::new(vec![0, 0]).is_err());
        assert_eq!(IntPolynomial::new(vec![3, -1, 0, 1]).unwrap().to_string(), "x^3 - x + 3");
    }

    #[test]
    fn rejects_degree_out_of_range() {
        let x = BigReal::from_i64(2, 50);
        assert_eq!(pslq_find(&x, 5, &PslqSettings::default()), Err(AlgebraError::DegreeRange(5)));
        assert_eq!(pslq_find(&x, 0, &PslqSettings::default()), Err(AlgebraError::DegreeRange(0)));
    }

    #[test]
    fn fifteen_digit_screen() {
        // Oracle: mpmath.pslq at 15 dps on (1, x, x^2) with maxcoeff 1e6.
        let x = BigReal::parse("3.23606797749979", 15).unwrap();
        let c = pslq_candidates(&x, 2, 1e-15, &PslqSettings::default()).unwrap();
        assert!(c[0].polynomial.is_none());
        assert_eq!(c[1].polynomial.as_ref().unwrap().to_string(), "x^2 - 2x - 4");
        assert!((c[1].residual.unwrap() - 0.304).abs() < 1e-3);
    }

    #[test]
    fn low_precision_input_is_undetectable() {
        let x = BigReal::parse("3.14159", 10).unwrap();
        assert!(matches!(pslq_find(&x, 2, &PslqSettings::default()), Err(AlgebraError::Undetectable { .. })));
    }
}
