//! Exact arithmetic in the quartic field Q(ω), ω = √φ, ω⁴ = ω² + 1.
//!
//! Every coordinate of the golden-ratio qutrit construction lives here:
//! φ = ω², φ⁻¹ = ω² − 1, φ⁻¹ᐟ² = ω³ − ω, √5 = 2ω² − 1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{AlgebraError, BigReal};

/// `c[0] + c[1] ω + c[2] ω² + c[3] ω³`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GoldenQuartic {
    c: [BigRational; 4],
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl GoldenQuartic {
    pub fn new(c: [BigRational; 4]) -> Self {
        GoldenQuartic { c }
    }

    pub fn from_ints(c: [i64; 4]) -> Self {
        GoldenQuartic { c: c.map(q) }
    }

    pub fn rational(r: BigRational) -> Self {
        GoldenQuartic { c: [r, q(0), q(0), q(0)] }
    }

    pub fn int(n: i64) -> Self {
        Self::from_ints([n, 0, 0, 0])
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn omega() -> Self {
        Self::from_ints([0, 1, 0, 0])
    }

    pub fn phi() -> Self {
        Self::from_ints([0, 0, 1, 0])
    }

    pub fn sqrt5() -> Self {
        Self::from_ints([-1, 0, 2, 0])
    }

    pub fn coeffs(&self) -> &[BigRational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// `(a, b)` with `self = a + b√5`, when `self` lies in Q(√5).
    pub fn sqrt5_split(&self) -> Option<(BigRational, BigRational)> {
        if !self.c[1].is_zero() || !self.c[3].is_zero() {
            return None;
        }
        // a + c φ = a + c/2 + (c/2) √5
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        Some((&self.c[0] + &self.c[2] * &half, &self.c[2] * &half))
    }

    /// Multiplicative inverse by solving the 4×4 multiplication system.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::FieldDivisionByZero);
        }
        // Column k of the matrix is self * ω^k.
        let mut cols = Vec::with_capacity(4);
        let mut basis = Self::one();
        for _ in 0..4 {
            cols.push((self * &basis).c);
            basis = &basis * &Self::omega();
        }
        let mut m: Vec<Vec<BigRational>> =
            (0..4).map(|r| (0..4).map(|k| cols[k][r].clone()).chain([if r == 0 { q(1) } else { q(0) }]).collect()).collect();
        for col in 0..4 {
            let piv = (col..4).find(|&r| !m[r][col].is_zero()).ok_or(AlgebraError::FieldDivisionByZero)?;
            m.swap(col, piv);
            let p = m[col][col].clone();
            for v in m[col].iter_mut() {
                *v = &*v / &p;
            }
            for r in 0..4 {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    let pivot_row = m[col].clone();
                    for (v, pv) in m[r].iter_mut().zip(pivot_row) {
                        *v = &*v - &f * pv;
                    }
                }
            }
        }
        Ok(GoldenQuartic { c: [m[0][4].clone(), m[1][4].clone(), m[2][4].clone(), m[3][4].clone()] })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        Ok(self * &rhs.inverse()?)
    }

    /// Numeric value at `digits` decimal digits.
    pub fn to_bigreal(&self, digits: u32) -> BigReal {
        let five = BigReal::from_i64(5, digits);
        let phi = (BigReal::from_i64(1, digits) + five.sqrt().expect("positive")) / BigReal::from_i64(2, digits);
        let omega = phi.sqrt().expect("positive");
        let mut acc = BigReal::zero(digits);
        let mut pow = BigReal::from_i64(1, digits);
        for c in &self.c {
            let num = BigReal::from_bigint(c.numer(), digits);
            let den = BigReal::from_bigint(c.denom(), digits);
            acc = &acc + &(&(&num / &den) * &pow);
            pow = &pow * &omega;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.to_bigreal(30).to_f64()
    }
}

impl Add for &GoldenQuartic {
    type Output = GoldenQuartic;
    fn add(self, rhs: &GoldenQuartic) -> GoldenQuartic {
        GoldenQuartic { c: std::array::from_fn(|k| &self.c[k] + &rhs.c[k]) }
    }
}

impl Sub for &GoldenQuartic {
    type Output = GoldenQuartic;
    fn sub(self, rhs: &GoldenQuartic) -> GoldenQuartic {
        GoldenQuartic { c: std::array::from_fn(|k| &self.c[k] - &rhs.c[k]) }
    }
}

impl Neg for &GoldenQuartic {
    type Output = GoldenQuartic;
    fn neg(self) -> GoldenQuartic {
        GoldenQuartic { c: std::array::from_fn(|k| -&self.c[k]) }
    }
}

impl Mul for &GoldenQuartic {
    type Output = GoldenQuartic;
    fn mul(self, rhs: &GoldenQuartic) -> GoldenQuartic {
        let mut prod: Vec<BigRational> = vec![q(0); 7];
        for i in 0..4 {
            for j in 0..4 {
                prod[i + j] = &prod[i + j] + &self.c[i] * &rhs.c[j];
            }
        }
        // reduce with ω^k = ω^(k-2) + ω^(k-4), highest first
        for k in (4..7).rev() {
            let top = std::mem::replace(&mut prod[k], q(0));
            prod[k - 2] = &prod[k - 2] + &top;
            prod[k - 4] = &prod[k - 4] + &top;
        }
        GoldenQuartic { c: [prod[0].clone(), prod[1].clone(), prod[2].clone(), prod[3].clone()] }
    }
}

impl fmt::Debug for GoldenQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GoldenQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((a, b)) = self.sqrt5_split() {
            return write!(f, "{a} + {b}√5");
        }
        let names = ["", "ω", "ω²", "ω³"];
        let mut parts = Vec::new();
        for (c, name) in self.c.iter().zip(names) {
            if !c.is_zero() {
                let sign = if c.is_negative() { "-" } else { "+" };
                parts.push(format!("{sign} {}{name}", c.abs()));
            }
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(parts.join(" ").trim_start_matches("+ "))
    }
}
