//! Fixed-point arbitrary-precision reals.
//!
//! A value is `mant / 2^bits`. All operands in one expression should share a
//! precision; mixed precisions are aligned to the finer one.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgebraError;

/// Extra binary digits carried beyond the declared decimal precision.
const GUARD_BITS: u32 = 24;

/// Number of bits needed for `digits` decimal digits plus guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

#[derive(Clone, PartialEq, Eq)]
pub struct BigReal {
    mant: BigInt,
    bits: u32,
    digits: u32,
}

impl BigReal {
    pub fn zero(digits: u32) -> Self {
        BigReal { mant: BigInt::zero(), bits: bits_for_digits(digits), digits }
    }

    pub fn from_i64(v: i64, digits: u32) -> Self {
        let bits = bits_for_digits(digits);
        BigReal { mant: BigInt::from(v) << bits, bits, digits }
    }

    pub fn from_bigint(v: &BigInt, digits: u32) -> Self {
        let bits = bits_for_digits(digits);
        BigReal { mant: v << bits, bits, digits }
    }

    /// `num / den`.
    pub fn from_ratio(num: i64, den: i64, digits: u32) -> Self {
        Self::from_i64(num, digits) / Self::from_i64(den, digits)
    }

    /// Exact binary value of an `f64`, rounded to this precision.
    pub fn from_f64(v: f64, digits: u32) -> Self {
        let bits = bits_for_digits(digits);
        if v == 0.0 || !v.is_finite() {
            return Self::zero(digits);
        }
        let (m, e) = decompose(v);
        let mut mant = BigInt::from(m);
        let shift = i64::from(bits) + e;
        mant = if shift >= 0 { mant << shift as u32 } else { round_shr(&mant, (-shift) as u32) };
        BigReal { mant, bits, digits }
    }

    /// Parses `[-]digits[.digits][e[-]exp]`.
    pub fn parse(s: &str, digits: u32) -> Result<Self, AlgebraError> {
        let bad = || AlgebraError::Parse(s.to_string());
        let t = s.trim();
        let (body, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let (neg, body) = match body.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, body.strip_prefix('+').unwrap_or(body)),
        };
        let (int_part, frac_part) = match body.find('.') {
            Some(i) => (&body[..i], &body[i + 1..]),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let all = format!("{int_part}{frac_part}");
        let n = BigInt::parse_bytes(all.as_bytes(), 10).unwrap_or_default();
        let dec_exp = exp - frac_part.len() as i64;
        let bits = bits_for_digits(digits);
        let mut mant = n << bits;
        if dec_exp >= 0 {
            mant *= BigInt::from(10).pow(dec_exp as u32);
        } else {
            let d = BigInt::from(10).pow((-dec_exp) as u32);
            mant = round_div(&mant, &d);
        }
        if neg {
            mant = -mant;
        }
        Ok(BigReal { mant, bits, digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Same value carried at a different precision.
    pub fn with_digits(&self, digits: u32) -> Self {
        let bits = bits_for_digits(digits);
        let mant = match bits.cmp(&self.bits) {
            Ordering::Equal => self.mant.clone(),
            Ordering::Greater => &self.mant << (bits - self.bits),
            Ordering::Less => round_shr(&self.mant, self.bits - bits),
        };
        BigReal { mant, bits, digits }
    }

    /// Rounds to `sig` significant decimal digits, keeping the working precision.
    pub fn truncate_significant(&self, sig: u32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mag = self.abs().to_f64().log10().floor() as i64;
        let scale = sig as i64 - 1 - mag;
        let ten = BigReal::from_i64(10, self.digits);
        let factor = ten.powi(scale.unsigned_abs() as u32);
        let scaled = if scale >= 0 { self * &factor } else { self / &factor };
        let rounded = BigReal::from_bigint(&scaled.round(), self.digits);
        if scale >= 0 {
            &rounded / &factor
        } else {
            &rounded * &factor
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigReal { mant: self.mant.abs(), ..self.clone() }
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        // keep the top 64 significant bits, then scale
        let shift = (self.mant.bits() as i64 - 64).max(0);
        let top = round_shr(&self.mant, shift as u32).to_f64().unwrap_or(f64::NAN);
        let e = shift - i64::from(self.bits);
        let e = e.clamp(-2200, 2200) as i32;
        top * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }

    /// `round(self · 2^bits)`.
    pub fn to_fixed(&self, bits: u32) -> BigInt {
        if bits >= self.bits {
            &self.mant << (bits - self.bits)
        } else {
            round_shr(&self.mant, self.bits - bits)
        }
    }

    /// Nearest integer, ties away from zero.
    pub fn round(&self) -> BigInt {
        round_shr(&self.mant, self.bits)
    }

    pub fn sqrt(&self) -> Result<Self, AlgebraError> {
        if self.mant.is_negative() {
            return Err(AlgebraError::NegativeSqrt);
        }
        let mant = (&self.mant << self.bits).sqrt();
        Ok(BigReal { mant, bits: self.bits, digits: self.digits })
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = BigReal { mant: BigInt::one() << self.bits, bits: self.bits, digits: self.digits };
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn recip(&self) -> Self {
        BigReal::from_i64(1, self.digits).with_bits(self.bits) / self
    }

    fn with_bits(mut self, bits: u32) -> Self {
        if bits > self.bits {
            self.mant <<= bits - self.bits;
        } else {
            self.mant = round_shr(&self.mant, self.bits - bits);
        }
        self.bits = bits;
        self
    }

    /// Decimal rendering with `decimals` digits after the point.
    pub fn to_decimal(&self, decimals: u32) -> String {
        let scaled = round_shr(&(&self.mant * BigInt::from(10).pow(decimals)), self.bits);
        let neg = scaled.is_negative();
        let s = scaled.abs().to_string();
        let d = decimals as usize;
        let s = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
        let (ip, fp) = s.split_at(s.len() - d);
        let sign = if neg { "-" } else { "" };
        if d == 0 {
            format!("{sign}{ip}")
        } else {
            format!("{sign}{ip}.{fp}")
        }
    }

    /// Base-10 exponent of the magnitude, `-inf` for zero. Works below f64 range.
    pub fn log10_abs(&self) -> f64 {
        if self.mant.is_zero() {
            return f64::NEG_INFINITY;
        }
        let nbits = self.mant.bits() as i64;
        let shift = (nbits - 60).max(0);
        let top = (self.mant.abs() >> shift as u32).to_f64().unwrap_or(f64::NAN);
        top.log10() + (shift - i64::from(self.bits)) as f64 * std::f64::consts::LOG10_2
    }

    fn align(a: &BigReal, b: &BigReal) -> (BigInt, BigInt, u32, u32) {
        let digits = a.digits.max(b.digits);
        match a.bits.cmp(&b.bits) {
            Ordering::Equal => (a.mant.clone(), b.mant.clone(), a.bits, digits),
            Ordering::Greater => (a.mant.clone(), &b.mant << (a.bits - b.bits), a.bits, digits),
            Ordering::Less => (&a.mant << (b.bits - a.bits), b.mant.clone(), b.bits, digits),
        }
    }
}

/// `(m, e)` with `v = m * 2^e`.
fn decompose(v: f64) -> (i64, i64) {
    let bits = v.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & 0xf_ffff_ffff_ffff) as i64;
    if exp == 0 {
        (sign * frac, -1074)
    } else {
        (sign * (frac | 1 << 52), exp - 1075)
    }
}

fn round_shr(m: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return m.clone();
    }
    let half = BigInt::one() << (k - 1);
    if m.is_negative() {
        -((-m + half) >> k)
    } else {
        (m + half) >> k
    }
}

fn round_div(a: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(d);
    if (&r << 1u32) >= *d {
        q + 1
    } else {
        q
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({})", self.to_decimal(self.digits))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().map(|p| p as u32).unwrap_or(self.digits);
        f.write_str(&self.to_decimal(d))
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigReal {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _, _) = BigReal::align(self, other);
        a.cmp(&b)
    }
}

impl<'a> Add<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn add(self, rhs: &BigReal) -> BigReal {
        let (a, b, bits, digits) = BigReal::align(self, rhs);
        BigReal { mant: a + b, bits, digits }
    }
}

impl<'a> Sub<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn sub(self, rhs: &BigReal) -> BigReal {
        let (a, b, bits, digits) = BigReal::align(self, rhs);
        BigReal { mant: a - b, bits, digits }
    }
}

impl<'a> Mul<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn mul(self, rhs: &BigReal) -> BigReal {
        let (a, b, bits, digits) = BigReal::align(self, rhs);
        BigReal { mant: round_shr(&(a * b), bits), bits, digits }
    }
}

impl<'a> Div<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn div(self, rhs: &BigReal) -> BigReal {
        let (a, b, bits, digits) = BigReal::align(self, rhs);
        assert!(!b.is_zero(), "BigReal division by zero");
        BigReal { mant: round_div_signed(&(a << bits), &b), bits, digits }
    }
}

fn round_div_signed(a: &BigInt, b: &BigInt) -> BigInt {
    let neg = (a.sign() == Sign::Minus) != (b.sign() == Sign::Minus);
    let q = round_div(&a.abs(), &b.abs());
    if neg {
        -q
    } else {
        q
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal { mant: -&self.mant, ..self.clone() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: BigReal) -> BigReal { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, rhs: &BigReal) -> BigReal { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT5_60: &str = "2.236067977499789696409173668731276235440618359611525724270897";

    #[test]
    fn sqrt5_to_fifty_digits() {
        let five = BigReal::from_i64(5, 50);
        let s = five.sqrt().unwrap();
        assert_eq!(s.to_decimal(50), "2.23606797749978969640917366873127623544061835961153");
        let r = BigReal::parse(SQRT5_60, 50).unwrap();
        assert!((&s - &r).abs().log10_abs() < -50.0);
    }

    #[test]
    fn parse_and_render() {
        let x = BigReal::parse("-0.125", 30).unwrap();
        assert_eq!(x.to_f64(), -0.125);
        assert_eq!(x.to_decimal(4), "-0.1250");
        assert_eq!(BigReal::parse("1.5e2", 20).unwrap().to_f64(), 150.0);
        assert_eq!(BigReal::parse("25e-2", 20).unwrap().to_f64(), 0.25);
        assert!(BigReal::parse("1.2.3", 20).is_err());
        assert!(BigReal::parse("", 20).is_err());
        assert!(BigReal::parse("abc", 20).is_err());
    }

    #[test]
    fn f64_round_trip() {
        for v in [1.0, -3.25, 0.1, 1e-10, 12345.678, std::f64::consts::PI] {
            assert_eq!(BigReal::from_f64(v, 40).to_f64(), v);
        }
    }

    #[test]
    fn arithmetic_identities() {
        let d = 60;
        let phi = (BigReal::from_i64(1, d) + BigReal::from_i64(5, d).sqrt().unwrap()) / BigReal::from_i64(2, d);
        let one = BigReal::from_i64(1, d);
        // phi^-1 + phi^-2 = 1, 2 phi + 1 = phi^3
        let lhs = phi.recip() + phi.powi(2).recip();
        assert!((&lhs - &one).abs().log10_abs() < -58.0);
        let lhs2 = &(&phi + &phi) + &one;
        assert!((&lhs2 - &phi.powi(3)).abs().log10_abs() < -58.0);
        assert!(BigReal::from_i64(-1, d).sqrt().is_err());
    }

    #[test]
    fn truncation_to_significant_digits() {
        let x = BigReal::parse("3.4678437298402791234", 40).unwrap();
        assert_eq!(x.truncate_significant(15).to_decimal(16), "3.4678437298402800");
        let y = BigReal::parse("-0.00012345678", 40).unwrap();
        assert_eq!(y.truncate_significant(3).to_decimal(8), "-0.00012300");
    }

    #[test]
    fn ordering_and_rounding() {
        let a = BigReal::parse("2.5", 20).unwrap();
        let b = BigReal::parse("-2.5", 20).unwrap();
        assert!(b < a);
        assert_eq!(a.round(), BigInt::from(3));
        assert_eq!(b.round(), BigInt::from(-3));
        assert_eq!(BigReal::parse("2.4999", 20).unwrap().round(), BigInt::from(2));
    }
}
