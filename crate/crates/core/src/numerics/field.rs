//! The arithmetic interface shared by the three tower levels.

use super::bigfloat::{digits_to_bits, BigComplex};
use super::Scalar;
use crate::error::{Error, Result};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Precision context of the big tower: decimal digits and mantissa bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BigCtx {
    pub digits: u32,
    pub bits: u32,
}

impl BigCtx {
    pub fn new(digits: u32) -> Self {
        BigCtx { digits, bits: digits_to_bits(digits) }
    }
}

pub trait Field:
    Clone
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Ctx: Clone + Copy + Debug + Send + Sync;
    const EXACT: bool;

    fn ctx(&self) -> Self::Ctx;
    fn from_i64(n: i64, ctx: Self::Ctx) -> Self;
    fn from_rational(r: &BigRational, ctx: Self::Ctx) -> Self;
    fn from_scalar(s: &Scalar, ctx: Self::Ctx) -> Result<Self>;
    fn to_scalar(&self) -> Scalar;
    /// Literal zero test.
    fn is_exact_zero(&self) -> bool;
    fn abs_f64(&self) -> f64;
    /// Relative size below which a difference is rounding noise
    /// (zero in the exact tower).
    fn snap_eps(&self) -> f64;

    fn zero_in(ctx: Self::Ctx) -> Self {
        Self::from_i64(0, ctx)
    }

    fn one_in(ctx: Self::Ctx) -> Self {
        Self::from_i64(1, ctx)
    }

    fn zero_like(&self) -> Self {
        Self::zero_in(self.ctx())
    }

    fn one_like(&self) -> Self {
        Self::one_in(self.ctx())
    }

    fn int_like(&self, n: i64) -> Self {
        Self::from_i64(n, self.ctx())
    }

    fn powi(&self, n: i64) -> Self {
        if n < 0 {
            return self.one_like() / self.powi(-n);
        }
        let mut base = self.clone();
        let mut acc = self.one_like();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Equality: literal in the exact tower, relative `rel` otherwise.
    fn near(&self, other: &Self, rel: f64) -> bool {
        if Self::EXACT {
            return (self.clone() - other.clone()).is_exact_zero();
        }
        let d = (self.clone() - other.clone()).abs_f64();
        d <= rel * self.abs_f64().max(other.abs_f64())
    }
}

impl Field for Complex64 {
    type Ctx = ();
    const EXACT: bool = false;

    fn ctx(&self) {}

    fn from_i64(n: i64, _: ()) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn from_rational(r: &BigRational, _: ()) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn from_scalar(s: &Scalar, _: ()) -> Result<Self> {
        Ok(match s {
            Scalar::Double(c) => *c,
            Scalar::Big(b, _) => {
                let (re, im) = b.to_f64_pair();
                Complex64::new(re, im)
            }
            Scalar::Exact(r) => Self::from_rational(r, ()),
        })
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Double(*self)
    }

    fn is_exact_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn abs_f64(&self) -> f64 {
        self.norm()
    }

    fn snap_eps(&self) -> f64 {
        8.0 * f64::EPSILON
    }
}

impl Field for BigComplex {
    type Ctx = BigCtx;
    const EXACT: bool = false;

    fn ctx(&self) -> BigCtx {
        let bits = self.prec();
        let digits = ((bits.saturating_sub(16)) as f64 / std::f64::consts::LOG2_10).floor() as u32;
        BigCtx { digits, bits }
    }

    fn from_i64(n: i64, ctx: BigCtx) -> Self {
        BigComplex::from_i64(n, ctx.bits)
    }

    fn from_rational(r: &BigRational, ctx: BigCtx) -> Self {
        BigComplex::from_rational(r, ctx.bits)
    }

    fn from_scalar(s: &Scalar, ctx: BigCtx) -> Result<Self> {
        Ok(match s {
            Scalar::Double(c) => BigComplex::from_f64_pair(c.re, c.im, ctx.bits),
            Scalar::Big(b, _) => b.with_prec(ctx.bits.max(b.prec())),
            Scalar::Exact(r) => BigComplex::from_rational(r, ctx.bits),
        })
    }

    fn to_scalar(&self) -> Scalar {
        let ctx = Field::ctx(self);
        Scalar::Big(self.clone(), ctx.digits)
    }

    fn is_exact_zero(&self) -> bool {
        BigComplex::is_zero(self)
    }

    fn abs_f64(&self) -> f64 {
        BigComplex::abs_f64(self)
    }

    fn snap_eps(&self) -> f64 {
        2f64.powi(-(self.prec() as i32) + 16)
    }
}

impl Field for BigRational {
    type Ctx = ();
    const EXACT: bool = true;

    fn ctx(&self) {}

    fn from_i64(n: i64, _: ()) -> Self {
        BigRational::from_integer(n.into())
    }

    fn from_rational(r: &BigRational, _: ()) -> Self {
        r.clone()
    }

    fn from_scalar(s: &Scalar, _: ()) -> Result<Self> {
        match s {
            Scalar::Exact(r) => Ok(r.clone()),
            _ => Err(Error::IllegalDemotion("float value cannot enter the exact tower".into())),
        }
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }

    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn abs_f64(&self) -> f64 {
        rational_to_f64(&self.abs())
    }

    fn snap_eps(&self) -> f64 {
        0.0
    }

    fn one_in(_: ()) -> Self {
        BigRational::one()
    }
}

/// f64 approximation of a rational that survives huge numerators and
/// denominators (plain `to_f64` would give inf/inf).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if Zero::is_zero(r) {
        return 0.0;
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    if nb < 1000 && db < 1000 {
        if let Some(v) = r.to_f64() {
            return v;
        }
    }
    let shift_n = (nb - 64).max(0);
    let shift_d = (db - 64).max(0);
    let n = (r.numer() >> shift_n as u64).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d as u64).to_f64().unwrap_or(1.0);
    let e = shift_n - shift_d;
    let v = n / d;
    if e > 2000 {
        return v.signum() * f64::INFINITY;
    }
    if e < -2200 {
        return 0.0;
    }
    let mut out = v;
    let mut ee = e;
    while ee > 1000 {
        out *= 2f64.powi(1000);
        ee -= 1000;
    }
    while ee < -1000 {
        out *= 2f64.powi(-1000);
        ee += 1000;
    }
    out * 2f64.powi(ee as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn powi_negative_exponent() {
        let x = BigRational::new(BigInt::from(2), BigInt::from(3));
        assert_eq!(x.powi(-2), BigRational::new(BigInt::from(9), BigInt::from(4)));
        let c = Complex64::new(0.5, 0.0);
        assert_eq!(Field::powi(&c, 3), Complex64::new(0.125, 0.0));
    }

    #[test]
    fn huge_rational_magnitude() {
        let big = num_traits::pow(BigInt::from(10), 400);
        let r = BigRational::new(BigInt::from(3), big.clone());
        let v = rational_to_f64(&r);
        assert_eq!(v, 0.0);
        let r = BigRational::new(big.clone() * BigInt::from(3), big * BigInt::from(2));
        assert!((rational_to_f64(&r) - 1.5).abs() < 1e-15);
    }
}
