//! Binary floating point with an arbitrary-length mantissa, and complex
//! numbers built from it.
//!
//! A [`BigFloat`] is `m * 2^e` with `|m| < 2^prec`. Every operation rounds
//! to nearest at the larger precision of its operands.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Bits of mantissa used for `digits` decimal digits.
pub fn digits_to_bits(digits: u32) -> u32 {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

#[derive(Clone, Debug)]
pub struct BigFloat {
    m: BigInt,
    e: i64,
    prec: u32,
}

fn round_shift(mag: BigUint, shift: u64) -> BigUint {
    if shift == 0 {
        return mag;
    }
    let half = BigUint::one() << (shift - 1);
    (mag + half) >> shift
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat { m: BigInt::zero(), e: 0, prec }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_parts(BigInt::from(n), 0, prec)
    }

    fn from_parts(m: BigInt, e: i64, prec: u32) -> Self {
        let mut x = BigFloat { m, e, prec };
        x.normalize();
        x
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::from_parts(self.m.clone(), self.e, prec)
    }

    fn normalize(&mut self) {
        if self.m.is_zero() {
            self.e = 0;
            return;
        }
        let bits = self.m.bits();
        if bits > self.prec as u64 {
            let shift = bits - self.prec as u64;
            let (sign, mag) = std::mem::take(&mut self.m).into_parts();
            let mut mag = round_shift(mag, shift);
            let mut e = self.e + shift as i64;
            if mag.bits() > self.prec as u64 {
                mag >>= 1u32;
                e += 1;
            }
            self.m = BigInt::from_biguint(sign, mag);
            self.e = e;
        }
        // strip trailing zero bits so equal values share a representation
        let tz = self.m.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.m >>= tz;
            self.e += tz as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    /// Exponent of the leading bit, i.e. floor(log2 |x|); `None` for zero.
    pub fn top(&self) -> Option<i64> {
        if self.m.is_zero() {
            None
        } else {
            Some(self.e + self.m.bits() as i64 - 1)
        }
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "non-finite value cannot become a BigFloat");
        if x == 0.0 {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = bits >> 63;
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        let m = if sign == 1 {
            -BigInt::from(mant)
        } else {
            BigInt::from(mant)
        };
        Self::from_parts(m, e, prec)
    }

    pub fn to_f64(&self) -> f64 {
        if self.m.is_zero() {
            return 0.0;
        }
        let bits = self.m.bits();
        let (m, e) = if bits > 64 {
            let s = bits - 64;
            (&self.m >> s, self.e + s as i64)
        } else {
            (self.m.clone(), self.e)
        };
        let mf = m.to_f64().unwrap_or(0.0);
        ldexp(mf, e)
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let n = r.numer();
        let d = r.denom();
        if n.is_zero() {
            return Self::zero(prec);
        }
        let k = prec as i64 + d.bits() as i64 - n.bits() as i64 + 2;
        let (num, den) = if k >= 0 {
            (n << (k as u64), d.clone())
        } else {
            (n.clone(), d << ((-k) as u64))
        };
        let (q, rem) = num.div_rem(&den);
        // fold the remainder into a sticky bit so rounding stays correct
        let q = (q << 1u32) + if rem.is_zero() { BigInt::zero() } else { BigInt::from(n.signum()) };
        Self::from_parts(q, -k - 1, prec)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.e >= 0 {
            BigRational::from_integer(&self.m << (self.e as u64))
        } else {
            BigRational::new(self.m.clone(), BigInt::one() << ((-self.e) as u64))
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat { m: self.m.abs(), e: self.e, prec: self.prec }
    }

    fn add_impl(&self, other: &Self, negate_other: bool) -> Self {
        let prec = self.prec.max(other.prec);
        let om = if negate_other { -&other.m } else { other.m.clone() };
        if other.m.is_zero() {
            return self.with_prec(prec);
        }
        if self.m.is_zero() {
            return Self::from_parts(om, other.e, prec);
        }
        let ta = self.top().unwrap();
        let tb = other.top().unwrap();
        let gap = prec as i64 + 4;
        if ta - tb > gap {
            return self.with_prec(prec);
        }
        if tb - ta > gap {
            return Self::from_parts(om, other.e, prec);
        }
        let e = self.e.min(other.e);
        let a = &self.m << ((self.e - e) as u64);
        let b = om << ((other.e - e) as u64);
        Self::from_parts(a + b, e, prec)
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        Self::from_parts(&self.m * &other.m, self.e + other.e, self.prec.max(other.prec))
    }

    pub fn div_ref(&self, other: &Self) -> Self {
        assert!(!other.m.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(other.prec);
        if self.m.is_zero() {
            return Self::zero(prec);
        }
        let k = prec as i64 + other.m.bits() as i64 - self.m.bits() as i64 + 2;
        let k = k.max(0);
        let num = &self.m << (k as u64);
        let (q, rem) = num.div_rem(&other.m);
        let sticky = if rem.is_zero() { BigInt::zero() } else { q.signum() };
        let q = (q << 1u32) + sticky;
        Self::from_parts(q, self.e - other.e - k - 1, prec)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        if self.m.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let r = self.to_rational().abs();
        let l10 = (self.top().unwrap() as f64) * std::f64::consts::LOG10_2;
        let mut exp10 = l10.floor() as i64;
        let scaled = |ex: i64| -> BigInt {
            let p = digits as i64 - 1 - ex;
            let v = if p >= 0 {
                &r * BigRational::from_integer(num_traits::pow(BigInt::from(10), p as usize))
            } else {
                &r / BigRational::from_integer(num_traits::pow(BigInt::from(10), (-p) as usize))
            };
            v.round().to_integer()
        };
        let mut s = scaled(exp10);
        let limit = num_traits::pow(BigInt::from(10), digits as usize);
        while s >= limit {
            exp10 += 1;
            s = scaled(exp10);
        }
        while s < &limit / BigInt::from(10) {
            exp10 -= 1;
            s = scaled(exp10);
        }
        let ds = s.to_string();
        let sign = if self.m.is_negative() { "-" } else { "" };
        let (head, tail) = ds.split_at(1);
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            format!("{sign}{head}e{exp10}")
        } else {
            format!("{sign}{head}.{tail}e{exp10}")
        }
    }
}

fn ldexp(x: f64, e: i64) -> f64 {
    if e > 2000 {
        return x * f64::INFINITY;
    }
    if e < -2200 {
        return 0.0;
    }
    let mut r = x;
    let mut e = e;
    while e > 1000 {
        r *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        r *= 2f64.powi(-1000);
        e += 1000;
    }
    r * 2f64.powi(e as i32)
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && (self.m.is_zero() || self.e == other.e)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let d = self.add_impl(other, true);
        Some(match d.m.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        })
    }
}

impl Add for BigFloat {
    type Output = BigFloat;
    fn add(self, o: BigFloat) -> BigFloat {
        self.add_impl(&o, false)
    }
}

impl Sub for BigFloat {
    type Output = BigFloat;
    fn sub(self, o: BigFloat) -> BigFloat {
        self.add_impl(&o, true)
    }
}

impl Mul for BigFloat {
    type Output = BigFloat;
    fn mul(self, o: BigFloat) -> BigFloat {
        self.mul_ref(&o)
    }
}

impl Div for BigFloat {
    type Output = BigFloat;
    fn div(self, o: BigFloat) -> BigFloat {
        self.div_ref(&o)
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat { m: -self.m, e: self.e, prec: self.prec }
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec.saturating_sub(16)) as f64 / std::f64::consts::LOG2_10).floor() as u32;
        write!(f, "{}", self.to_decimal(digits.max(1)))
    }
}

/// Complex number with [`BigFloat`] parts.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex { re: BigFloat::zero(prec), im: BigFloat::zero(prec) }
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        BigComplex { re: BigFloat::from_i64(n, prec), im: BigFloat::zero(prec) }
    }

    pub fn from_f64_pair(re: f64, im: f64, prec: u32) -> Self {
        BigComplex { re: BigFloat::from_f64(re, prec), im: BigFloat::from_f64(im, prec) }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        BigComplex { re: BigFloat::from_rational(r, prec), im: BigFloat::zero(prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec.max(self.im.prec)
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex { re: self.re.with_prec(prec), im: self.im.with_prec(prec) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Modulus as f64, computed without overflowing the f64 range
    /// for moderately large or small parts.
    pub fn abs_f64(&self) -> f64 {
        let tr = self.re.top();
        let ti = self.im.top();
        let t = match (tr, ti) {
            (None, None) => return 0.0,
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.max(b),
        };
        let shift = -t;
        let sr = scale_f64(&self.re, shift);
        let si = scale_f64(&self.im, shift);
        ldexp(sr.hypot(si), t)
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re.mul_ref(&self.re).add_impl(&self.im.mul_ref(&self.im), false)
    }
}

fn scale_f64(x: &BigFloat, shift: i64) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    BigFloat { m: x.m.clone(), e: x.e + shift, prec: x.prec }.to_f64()
}

impl Add for BigComplex {
    type Output = BigComplex;
    fn add(self, o: BigComplex) -> BigComplex {
        BigComplex { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for BigComplex {
    type Output = BigComplex;
    fn sub(self, o: BigComplex) -> BigComplex {
        BigComplex { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for BigComplex {
    type Output = BigComplex;
    fn mul(self, o: BigComplex) -> BigComplex {
        let re = self.re.mul_ref(&o.re).add_impl(&self.im.mul_ref(&o.im), true);
        let im = self.re.mul_ref(&o.im).add_impl(&self.im.mul_ref(&o.re), false);
        BigComplex { re, im }
    }
}

impl Div for BigComplex {
    type Output = BigComplex;
    fn div(self, o: BigComplex) -> BigComplex {
        if o.im.is_zero() {
            return BigComplex { re: self.re.div_ref(&o.re), im: self.im.div_ref(&o.re) };
        }
        let d = o.norm_sqr();
        let n = self * o.conj();
        BigComplex { re: n.re.div_ref(&d), im: n.im.div_ref(&d) }
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.im.is_negative() {
            write!(f, "{} - {}i", self.re, self.im.abs())
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_roundtrip_is_close() {
        let p = digits_to_bits(50);
        let x = BigFloat::from_rational(&rat(2, 3), p);
        let back = x.to_rational();
        let err = (back - rat(2, 3)).abs();
        assert!(err < rat(1, 1) / BigRational::from_integer(num_traits::pow(BigInt::from(10), 50)));
    }

    #[test]
    fn decimal_rendering() {
        let p = digits_to_bits(50);
        let x = BigFloat::from_rational(&rat(2, 3), p);
        assert_eq!(x.to_decimal(10), "6.666666667e-1");
        assert_eq!(BigFloat::from_i64(1000, p).to_decimal(5), "1e3");
        assert_eq!(BigFloat::from_i64(-25, p).to_decimal(5), "-2.5e1");
    }

    #[test]
    fn arithmetic_matches_f64() {
        let p = digits_to_bits(30);
        let a = BigFloat::from_f64(1.25, p);
        let b = BigFloat::from_f64(-0.375, p);
        assert_eq!((a.clone() + b.clone()).to_f64(), 0.875);
        assert_eq!((a.clone() * b.clone()).to_f64(), -0.46875);
        assert!(((a / b).to_f64() + 10.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn cancellation_keeps_exact_difference() {
        let p = digits_to_bits(20);
        let one = BigFloat::from_i64(1, p);
        let tiny = BigFloat::from_rational(&rat(1, 1 << 40), p);
        let d = (one.clone() + tiny.clone()) - one;
        assert_eq!(d, tiny);
    }

    #[test]
    fn complex_division_inverts_multiplication() {
        let p = digits_to_bits(40);
        let a = BigComplex::from_f64_pair(0.3, -1.7, p);
        let b = BigComplex::from_f64_pair(2.1, 0.4, p);
        let c = (a.clone() * b.clone()) / b;
        let err = (c - a).abs_f64();
        assert!(err < 1e-38, "{err}");
    }

    #[test]
    fn abs_of_tiny_values() {
        let p = digits_to_bits(20);
        let x = BigComplex::new(BigFloat::from_f64(3e-200, p), BigFloat::from_f64(4e-200, p));
        let a = x.abs_f64();
        assert!((a / 5e-200 - 1.0).abs() < 1e-14);
    }
}
