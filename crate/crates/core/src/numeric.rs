//! High-precision real numbers used at the boundary where exact values meet
//! transcendental functions (`exp`, `log10`).
//!
//! [`Real`] is a thin wrapper around [`astro_float::BigFloat`] carrying its
//! working precision in bits. Constants caches are kept per thread.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::Rational;
use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Default number of significant decimal digits.
pub const DEFAULT_DIGITS: usize = 50;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working precision, stated in significant decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    digits: usize,
}

impl Precision {
    pub fn digits(digits: usize) -> Self {
        Self { digits: digits.max(1) }
    }

    pub fn decimal_digits(&self) -> usize {
        self.digits
    }

    /// Mantissa bits, including 64 guard bits.
    pub fn bits(&self) -> usize {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::digits(DEFAULT_DIGITS)
    }
}

#[derive(Clone)]
pub struct Real {
    value: BigFloat,
    bits: usize,
}

impl Real {
    pub fn zero(prec: Precision) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: Precision) -> Self {
        let bits = prec.bits();
        Self { value: BigFloat::from_i64(v, bits), bits }
    }

    pub fn from_f64(v: f64, prec: Precision) -> Self {
        let bits = prec.bits();
        Self { value: BigFloat::from_f64(v, bits), bits }
    }

    pub fn from_bigint(v: &BigInt, prec: Precision) -> Self {
        let bits = prec.bits();
        let value = match v.to_i64() {
            Some(small) => BigFloat::from_i64(small, bits),
            None => with_consts(|cc| BigFloat::parse(&v.to_string(), Radix::Dec, bits, RM, cc)),
        };
        Self { value, bits }
    }

    pub fn from_rational(r: &Rational, prec: Precision) -> Self {
        let num = Self::from_bigint(r.numer(), prec);
        if r.denom().is_one() {
            return num;
        }
        num / Self::from_bigint(r.denom(), prec)
    }

    /// Parses a decimal literal such as `-1.25e-3`.
    pub fn parse(s: &str, prec: Precision) -> Result<Self> {
        let r = parse_rational(s)?;
        Ok(Self::from_rational(&r, prec))
    }

    pub fn precision(&self) -> Precision {
        Precision::digits(((self.bits.saturating_sub(64)) as f64 / std::f64::consts::LOG2_10).floor() as usize)
    }

    pub fn exp(&self) -> Self {
        let value = with_consts(|cc| self.value.exp(self.bits, RM, cc));
        Self { value, bits: self.bits }
    }

    pub fn log10(&self) -> Self {
        let value = with_consts(|cc| self.value.log10(self.bits, RM, cc));
        Self { value, bits: self.bits }
    }

    pub fn ln(&self) -> Self {
        let value = with_consts(|cc| self.value.ln(self.bits, RM, cc));
        Self { value, bits: self.bits }
    }

    pub fn sqrt(&self) -> Self {
        Self { value: self.value.sqrt(self.bits, RM), bits: self.bits }
    }

    pub fn abs(&self) -> Self {
        Self { value: self.value.abs(), bits: self.bits }
    }

    pub fn powi(&self, n: usize) -> Self {
        let mut acc = Self::from_i64(1, self.precision_for_ops());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative() && !self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.value.is_nan() && !self.value.is_inf()
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Rendering through the decimal string keeps this independent of
        // internal mantissa layout.
        let s = self.to_sci_string(20);
        s.parse().unwrap_or(f64::NAN)
    }

    /// Exact rational value of a decimal rendering with `digits` significant digits.
    pub fn to_rational(&self, digits: usize) -> Rational {
        parse_rational(&self.to_sci_string(digits)).expect("scientific rendering is parseable")
    }

    /// Scientific notation with exactly `digits` significant digits, e.g. `4.9787e-2`.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.value.is_nan() {
            return "nan".into();
        }
        if self.value.is_inf() {
            return if self.value.is_negative() { "-inf".into() } else { "inf".into() };
        }
        if self.value.is_zero() {
            let mut s = String::from("0");
            if digits > 1 {
                s.push('.');
                s.push_str(&"0".repeat(digits - 1));
            }
            s.push_str("e0");
            return s;
        }
        let raw = with_consts(|cc| self.value.format(Radix::Dec, RM, cc)).expect("decimal formatting");
        round_sci(&raw, digits.max(1))
    }

    /// Fixed-point rendering with `decimals` digits after the point.
    pub fn to_fixed_string(&self, decimals: usize) -> String {
        let scale = BigInt::from(10u32).pow(decimals as u32);
        let r = self.to_rational(self.precision().decimal_digits().max(decimals + 20));
        let scaled = r * Rational::from_integer(scale.clone());
        let rounded = round_half_away(&scaled);
        let neg = rounded.is_negative();
        let (int, frac) = rounded.abs().div_rem(&scale);
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        s.push_str(&int.to_string());
        if decimals > 0 {
            let f = frac.to_string();
            s.push('.');
            s.push_str(&"0".repeat(decimals - f.len()));
            s.push_str(&f);
        }
        s
    }

    fn precision_for_ops(&self) -> Precision {
        self.precision()
    }

    fn bin(&self, other: &Self, f: impl FnOnce(&BigFloat, &BigFloat, usize) -> BigFloat) -> Self {
        let bits = self.bits.max(other.bits);
        Self { value: f(&self.value, &other.value, bits), bits }
    }
}

fn round_half_away(r: &Rational) -> BigInt {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if r.is_negative() {
        -(-r + half).floor().to_integer()
    } else {
        (r + half).floor().to_integer()
    }
}

/// Rounds an astro-float decimal rendering (`d.ddd…e±x`) to `digits` digits.
fn round_sci(raw: &str, digits: usize) -> String {
    let (sign, body) = match raw.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", raw),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let point = mant.find('.').unwrap_or(mant.len());
    let mut all: Vec<u8> = mant.bytes().filter(|b| b.is_ascii_digit()).map(|b| b - b'0').collect();
    // exponent of the first digit
    let mut e10 = exp + point as i64 - 1;
    let lead = all.iter().take_while(|&&d| d == 0).count();
    all.drain(..lead);
    e10 -= lead as i64;
    if all.is_empty() {
        all.push(0);
    }
    let round_up = all.get(digits).is_some_and(|&d| d >= 5);
    all.resize(digits, 0);
    if round_up {
        let mut i = digits;
        loop {
            if i == 0 {
                all.insert(0, 1);
                all.truncate(digits);
                e10 += 1;
                break;
            }
            i -= 1;
            if all[i] == 9 {
                all[i] = 0;
            } else {
                all[i] += 1;
                break;
            }
        }
    }
    let mut s = String::from(sign);
    s.push((b'0' + all[0]) as char);
    if digits > 1 {
        s.push('.');
        s.extend(all[1..].iter().map(|d| (b'0' + d) as char));
    }
    s.push('e');
    s.push_str(&e10.to_string());
    s
}

/// Parses `p/q`, an integer, or a decimal literal with optional exponent into
/// an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if s.contains('/') {
        let r = Rational::from_str(s).map_err(|_| bad())?;
        return Ok(r);
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = match mant.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n = if digits.is_empty() { BigInt::zero() } else { BigInt::from_str(&digits).map_err(|_| bad())? };
    let e = exp - frac.len() as i64;
    let ten = BigInt::from(10u32);
    let mut r =
        if e >= 0 { Rational::from_integer(n * ten.pow(e as u32)) } else { Rational::new(n, ten.pow((-e) as u32)) };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Smallest-denominator rational within `tol` of `x`, found from the
/// continued-fraction convergents of `x`.
pub fn simplest_within(x: &Rational, tol: &Rational) -> Rational {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    loop {
        let a = rest.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        let approx = Rational::new(h2.clone(), k2.clone());
        if (&approx - x).abs() <= *tol {
            return approx;
        }
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            return approx;
        }
        rest = frac.recip();
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(self.precision().decimal_digits()))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(self.precision().decimal_digits()))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! real_binop {
    ($tr:ident, $method:ident, $call:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                self.bin(rhs, |a, b, p| a.$call(b, p, RM))
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { value: self.value.neg(), bits: self.bits }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        self.clone().neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn exp_minus_three() {
        let v = Real::from_i64(-3, p()).exp();
        assert_eq!(v.to_sci_string(9), "4.97870684e-2");
    }

    #[test]
    fn rounding_carries_into_exponent() {
        assert_eq!(round_sci("9.9996e3", 4), "1.000e4");
        assert_eq!(round_sci("-1.23449e-7", 4), "-1.234e-7");
        assert_eq!(round_sci("0.00125e0", 2), "1.3e-3");
    }

    #[test]
    fn fixed_rendering() {
        let v = Real::from_rational(&Rational::new(9.into(), 14.into()), p());
        assert_eq!(v.to_fixed_string(5), "0.64286");
        assert_eq!(v.to_fixed_string(12), "0.642857142857");
        assert_eq!((-v).to_fixed_string(3), "-0.643");
    }

    #[test]
    fn parses_decimal_and_fraction_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), Rational::new(3.into(), 4.into()));
        assert_eq!(parse_rational("-0.125").unwrap(), Rational::new((-1).into(), 8.into()));
        assert_eq!(parse_rational("2.5e2").unwrap(), Rational::from_integer(250.into()));
        assert_eq!(parse_rational("7").unwrap(), Rational::from_integer(7.into()));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn continued_fraction_recovers_simple_fraction() {
        let x = parse_rational("0.64285714285714285714").unwrap();
        let tol = parse_rational("1e-15").unwrap();
        assert_eq!(simplest_within(&x, &tol), Rational::new(9.into(), 14.into()));
    }

    #[test]
    fn rational_roundtrip_through_real() {
        let r = Rational::new(1.into(), 3.into());
        let back = Real::from_rational(&r, p()).to_rational(30);
        assert!((back - r).abs() < parse_rational("1e-29").unwrap());
    }
}
