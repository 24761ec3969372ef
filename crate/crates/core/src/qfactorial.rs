//! q-shifted factorials `(a;q)_k` for integer and infinite `k`.
//!
//! ```text
//! (a;q)_k  = (1-a)(1-aq)...(1-aq^{k-1})          k >= 0
//! (a;q)_-n = 1/((1-a/q)(1-a/q^2)...(1-a/q^n))
//! (a;q)_oo = prod_{j>=0} (1-aq^j)
//! ```
//!
//! Negative indices can produce poles; they are carried as
//! [`Ext::Pole`] and never as floating infinities.

use crate::error::{Error, Result};
use crate::numerics::{Field, Scalar, Tolerance};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A finite value or a pole.
#[derive(Clone, Debug, PartialEq)]
pub enum Ext<F> {
    Finite(F),
    Pole,
}

pub type ExtendedValue = Ext<Scalar>;

impl<F: Field> Ext<F> {
    pub fn is_pole(&self) -> bool {
        matches!(self, Ext::Pole)
    }

    pub fn finite(self) -> Option<F> {
        match self {
            Ext::Finite(x) => Some(x),
            Ext::Pole => None,
        }
    }

    /// 1/Pole = 0 and 1/0 = Pole.
    pub fn reciprocal(&self, ctx: F::Ctx) -> Ext<F> {
        match self {
            Ext::Pole => Ext::Finite(F::zero_in(ctx)),
            Ext::Finite(x) if x.is_exact_zero() => Ext::Pole,
            Ext::Finite(x) => Ext::Finite(F::one_in(ctx) / x.clone()),
        }
    }

    /// Pole times a literal zero is an error.
    pub fn mul(&self, other: &Ext<F>) -> Result<Ext<F>> {
        match (self, other) {
            (Ext::Finite(a), Ext::Finite(b)) => Ok(Ext::Finite(a.clone() * b.clone())),
            (Ext::Pole, Ext::Finite(x)) | (Ext::Finite(x), Ext::Pole) => {
                if x.is_exact_zero() {
                    Err(Error::IndeterminateProduct)
                } else {
                    Ok(Ext::Pole)
                }
            }
            (Ext::Pole, Ext::Pole) => Ok(Ext::Pole),
        }
    }

    pub fn to_scalar(&self) -> ExtendedValue {
        match self {
            Ext::Finite(x) => Ext::Finite(x.to_scalar()),
            Ext::Pole => Ext::Pole,
        }
    }
}

/// Length of a q-shifted factorial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Index {
    Fin(i64),
    Inf,
}

/// Magnitude below which `1 - x` counts as an exact zero.
pub fn snap_eps<F: Field>(x: &F) -> f64 {
    x.snap_eps()
}

/// `1 - x`, snapped to a literal zero when indistinguishable from it.
pub fn one_minus<F: Field>(x: &F, eps: f64) -> F {
    let f = x.one_like() - x.clone();
    if eps > 0.0 && f.abs_f64() <= eps * (1.0 + x.abs_f64()) {
        f.zero_like()
    } else {
        f
    }
}

pub fn check_base<F: Field>(q: &F) -> Result<()> {
    let m = q.abs_f64();
    if q.is_exact_zero() || !(m < 1.0) || !m.is_finite() {
        return Err(Error::InvalidBase(format!("|q| = {m} outside (0,1)")));
    }
    Ok(())
}

/// Finite product `prod_{j=0}^{k-1}(1 - a q^j)` for `k >= 0`.
pub fn qpoch_pos<F: Field>(a: &F, q: &F, k: u64) -> F {
    let eps = snap_eps(a);
    let mut acc = a.one_like();
    let mut x = a.clone();
    for _ in 0..k {
        acc = acc * one_minus(&x, eps);
        x = x * q.clone();
    }
    acc
}

/// `(a;q)_k` for finite `k`; negative `k` may give a pole.
pub fn qpoch_fin<F: Field>(a: &F, q: &F, k: i64) -> Ext<F> {
    if k >= 0 {
        return Ext::Finite(qpoch_pos(a, q, k as u64));
    }
    let qinv = q.one_like() / q.clone();
    let den = qpoch_pos(&(a.clone() * qinv.clone()), &qinv, (-k) as u64);
    Ext::Finite(den).reciprocal(a.ctx())
}

/// Truncation record of an infinite product.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ProductTrunc {
    /// Number of factors multiplied.
    pub terms: usize,
    /// Bound L on |log(remainder)|; the remainder lies in [e^-L, e^L].
    pub log_remainder: f64,
}

/// Truncated `(a;q)_oo`: stop at the first J with |a||q|^J < term_tol/2.
pub fn qpoch_inf<F: Field>(a: &F, q: &F, term_tol: f64) -> Result<(F, ProductTrunc)> {
    if F::EXACT {
        return Err(Error::ExactInfiniteProduct);
    }
    let eps = snap_eps(a);
    let qa = q.abs_f64();
    let mut acc = a.one_like();
    let mut x = a.clone();
    let mut mag = a.abs_f64();
    let mut j = 0usize;
    while mag >= term_tol / 2.0 {
        acc = acc * one_minus(&x, eps);
        if acc.is_exact_zero() {
            return Ok((acc, ProductTrunc { terms: j + 1, log_remainder: 0.0 }));
        }
        x = x * q.clone();
        mag *= qa;
        j += 1;
        if j > 1_000_000 {
            return Err(Error::NonConvergent(j));
        }
    }
    let log_remainder = if mag == 0.0 { 0.0 } else { mag / ((1.0 - qa) * (1.0 - mag)) };
    Ok((acc, ProductTrunc { terms: j, log_remainder }))
}

/// `(a;q)_k` for any index; infinite products use `term_tol`.
pub fn qpoch_with<F: Field>(a: &F, q: &F, k: Index, term_tol: f64) -> Result<Ext<F>> {
    check_base(q)?;
    match k {
        Index::Fin(k) => Ok(qpoch_fin(a, q, k)),
        Index::Inf => Ok(Ext::Finite(qpoch_inf(a, q, term_tol)?.0)),
    }
}

/// Product of `(a_i;q)_k` over a list, with pole propagation.
pub fn qpoch_multi_with<F: Field>(params: &[F], q: &F, k: Index, term_tol: f64) -> Result<Ext<F>> {
    check_base(q)?;
    let mut acc = q.one_like();
    let (mut pole, mut zero) = (false, false);
    for a in params {
        match qpoch_with(a, q, k, term_tol)? {
            Ext::Pole => pole = true,
            Ext::Finite(x) if x.is_exact_zero() => zero = true,
            Ext::Finite(x) => acc = acc * x,
        }
    }
    match (pole, zero) {
        (true, true) => Err(Error::IndeterminateProduct),
        (true, false) => Ok(Ext::Pole),
        (false, true) => Ok(Ext::Finite(q.zero_like())),
        (false, false) => Ok(Ext::Finite(acc)),
    }
}

/// Both sides of `(a;q)_{n+m} = (a;q)_n (aq^n;q)_m`.
pub fn qpoch_split<F: Field>(a: &F, q: &F, n: i64, m: i64) -> Result<(Ext<F>, Ext<F>)> {
    check_base(q)?;
    let lhs = qpoch_fin(a, q, n + m);
    let left = qpoch_fin(a, q, n);
    let shifted = a.clone() * q.powi(n);
    let right = qpoch_fin(&shifted, q, m);
    let rhs = left.mul(&right)?;
    Ok((lhs, rhs))
}

/// `(a;q)_{-n} = 1/(aq^{-n};q)_n`, an independent route to negative indices.
pub fn qpoch_negate<F: Field>(a: &F, q: &F, n: u64) -> Result<F> {
    check_base(q)?;
    let b = a.clone() * q.powi(-(n as i64));
    let d = qpoch_pos(&b, q, n);
    if d.is_exact_zero() {
        return Err(Error::PoleEncountered(format!("(aq^-{n};q)_{n} vanishes")));
    }
    Ok(a.one_like() / d)
}

/// `(x;q)_oo (-x;q)_oo = (x^2;q^2)_oo`, from the square `x2 = x^2`.
pub fn paired_infinite_sq<F: Field>(x2: &F, q: &F, term_tol: f64) -> Result<(F, ProductTrunc)> {
    check_base(q)?;
    qpoch_inf(x2, &(q.clone() * q.clone()), term_tol)
}

pub fn paired_infinite<F: Field>(x: &F, q: &F, term_tol: f64) -> Result<F> {
    Ok(paired_infinite_sq(&(x.clone() * x.clone()), q, term_tol)?.0)
}

/// Rigorous enclosure data for `(a;q)_oo` with rational `a, q`: the exact
/// partial product over the first J factors and a rational bound L with
/// the remainder in [e^-L, e^L]. J is the first index with
/// |a||q|^J <= target.
pub fn qpoch_inf_exact(a: &BigRational, q: &BigRational, target: &BigRational) -> Result<(BigRational, BigRational, usize)> {
    let qa = q.abs();
    if qa.is_zero() || qa >= BigRational::one() {
        return Err(Error::InvalidBase("|q| outside (0,1)".into()));
    }
    let mut acc = BigRational::one();
    let mut x = a.clone();
    let mut j = 0usize;
    while x.abs() > *target {
        acc *= BigRational::one() - &x;
        x *= q;
        j += 1;
        if j > 100_000 {
            return Err(Error::NonConvergent(j));
        }
    }
    let m = x.abs();
    let one = BigRational::one();
    let l = if m.is_zero() { BigRational::zero() } else { &m / ((&one - &qa) * (&one - &m)) };
    Ok((acc, l, j))
}

macro_rules! on_mode {
    ($mode:expr, $F:ident, $ctx:ident => $body:expr) => {
        match $mode {
            $crate::numerics::Mode::ComplexDouble => {
                #[allow(dead_code)]
                type $F = num_complex::Complex64;
                #[allow(unused_variables)]
                let $ctx = ();
                $body
            }
            $crate::numerics::Mode::ComplexBig(p) => {
                #[allow(dead_code)]
                type $F = $crate::numerics::BigComplex;
                #[allow(unused_variables)]
                let $ctx = $crate::numerics::BigCtx::new(p);
                $body
            }
            $crate::numerics::Mode::ExactRational => {
                #[allow(dead_code)]
                type $F = num_rational::BigRational;
                #[allow(unused_variables)]
                let $ctx = ();
                $body
            }
        }
    };
}
pub(crate) use on_mode;

/// [`qpoch_with`] on scalars, with the default tolerance of the common mode.
pub fn qpoch(a: &Scalar, q: &Scalar, k: Index) -> Result<ExtendedValue> {
    let mode = a.mode().join(q.mode());
    let tol = Tolerance::for_mode(mode).term_tol;
    on_mode!(mode, F, ctx => {
        let a = F::from_scalar(a, ctx)?;
        let q = F::from_scalar(q, ctx)?;
        Ok(qpoch_with(&a, &q, k, tol)?.to_scalar())
    })
}

pub fn qpoch_multi(params: &[Scalar], q: &Scalar, k: Index) -> Result<ExtendedValue> {
    let mode = params.iter().fold(q.mode(), |m, p| m.join(p.mode()));
    let tol = Tolerance::for_mode(mode).term_tol;
    on_mode!(mode, F, ctx => {
        let ps = params.iter().map(|p| F::from_scalar(p, ctx)).collect::<Result<Vec<_>>>()?;
        let q = F::from_scalar(q, ctx)?;
        Ok(qpoch_multi_with(&ps, &q, k, tol)?.to_scalar())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn finite_examples() {
        let q = r(1, 2);
        assert_eq!(qpoch_fin(&r(1, 3), &q, 0), Ext::Finite(r(1, 1)));
        assert_eq!(qpoch_fin(&r(1, 3), &q, 2), Ext::Finite(r(5, 9)));
        assert_eq!(qpoch_fin(&r(1, 3), &q, -1), Ext::Finite(r(3, 1)));
        assert_eq!(qpoch_fin(&q, &q, -1), Ext::Pole);
    }

    #[test]
    fn pole_in_double_mode() {
        let q = Complex64::new(0.3, 0.1);
        assert_eq!(qpoch_fin(&q, &q, -1), Ext::Pole);
        assert_eq!(qpoch_fin(&q, &q, -3), Ext::Pole);
    }

    #[test]
    fn multi_examples() {
        let q = r(1, 2);
        let e = qpoch_multi_with::<BigRational>(&[], &q, Index::Fin(3), 0.0).unwrap();
        assert_eq!(e, Ext::Finite(r(1, 1)));
        let e = qpoch_multi_with(&[r(1, 3), r(1, 3)], &q, Index::Fin(2), 0.0).unwrap();
        assert_eq!(e, Ext::Finite(r(25, 81)));
        let e = qpoch_multi_with(&[q.clone()], &q, Index::Fin(-2), 0.0).unwrap();
        assert_eq!(e, Ext::Pole);
    }

    #[test]
    fn pole_times_zero_is_indeterminate() {
        let q = r(1, 2);
        // (q;q)_{-1} is a pole, (2;q)_{-1} = 1/(1-4) is finite
        let e = qpoch_multi_with(&[q.clone(), r(2, 1)], &q, Index::Fin(-1), 0.0).unwrap();
        assert_eq!(e, Ext::Pole);
        let pole: Ext<BigRational> = Ext::Pole;
        assert_eq!(pole.mul(&Ext::Finite(r(0, 1))), Err(Error::IndeterminateProduct));
        assert_eq!(pole.reciprocal(()), Ext::Finite(r(0, 1)));
        assert_eq!(Ext::Finite(r(0, 1)).reciprocal(()), Ext::Pole);
    }

    #[test]
    fn split_examples() {
        let q = r(1, 2);
        let (l, rr) = qpoch_split(&r(1, 3), &q, 1, 1).unwrap();
        assert_eq!(l, Ext::Finite(r(5, 9)));
        assert_eq!(rr, Ext::Finite(r(5, 9)));
        assert_eq!(qpoch_split(&q, &q, -1, 1), Err(Error::IndeterminateProduct));
    }

    #[test]
    fn negate_examples() {
        assert_eq!(qpoch_negate(&r(1, 3), &r(1, 2), 1).unwrap(), r(3, 1));
        assert_eq!(qpoch_negate(&r(2, 1), &r(1, 2), 2).unwrap(), r(1, 21));
        let q = r(2, 7);
        assert_eq!(qpoch_negate(&(&q * &q), &q, 1).unwrap(), r(1, 1) / (r(1, 1) - &q));
    }

    #[test]
    fn exact_infinite_is_refused() {
        assert_eq!(qpoch_with(&r(1, 3), &r(1, 2), Index::Inf, 1e-20), Err(Error::ExactInfiniteProduct));
    }

    /// Euler's pentagonal series as an independent oracle for (x;x)_oo,
    /// and a direct float loop for (1/4;1/4)_oo.
    #[test]
    fn paired_product_value() {
        let q = Complex64::new(0.5, 0.0);
        let x = Complex64::new(0.5, 0.0);
        let v = paired_infinite(&x, &q, 1e-18).unwrap();
        let mut pent = 0.0f64;
        let t = 0.25f64;
        for k in -30i32..=30 {
            let e = (k * (3 * k - 1) / 2) as i32;
            pent += if k % 2 == 0 { 1.0 } else { -1.0 } * t.powi(e);
        }
        assert!((v.re - pent).abs() < 1e-15, "{} vs {}", v.re, pent);
        assert!((v.re - 0.688537537).abs() < 1e-9);
        let direct = qpoch_inf(&x, &q, 1e-18).unwrap().0 * qpoch_inf(&(-x), &q, 1e-18).unwrap().0;
        assert!((v - direct).norm() < 1e-14);
        assert_eq!(paired_infinite(&Complex64::new(0.0, 0.0), &q, 1e-18).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn remainder_bound_holds() {
        let q = Complex64::new(0.6, 0.2);
        let a = Complex64::new(1.3, -0.4);
        let (coarse, tr) = qpoch_inf(&a, &q, 1e-6).unwrap();
        let (fine, _) = qpoch_inf(&a, &q, 1e-17).unwrap();
        let ratio = fine / coarse;
        let l = tr.log_remainder;
        assert!(ratio.ln().norm() <= l * (1.0 + 1e-9), "{} > {}", ratio.ln().norm(), l);
    }

    #[test]
    fn exact_enclosure_contains_float_value() {
        for a in [r(1, 3), r(-7, 2)] {
            let (p, l, j) = qpoch_inf_exact(&a, &r(1, 5), &r(1, 1_000_000_000)).unwrap();
            let (p2, _, j2) = qpoch_inf_exact(&a, &r(1, 5), &r(1, 1_000_000_000_000_000)).unwrap();
            assert!(j > 5 && j2 > j);
            // partial remainder product lies in [e^-L, e^L] within [1-L, 1+L/(1-L)]
            let ratio = &p2 / &p;
            let one = r(1, 1);
            assert!(ratio >= &one - &l);
            assert!(ratio <= &one + &l / (&one - &l));
        }
    }

    #[test]
    fn scalar_wrappers() {
        let v = qpoch(&Scalar::rational(1, 3), &Scalar::rational(1, 2), Index::Fin(2)).unwrap();
        assert_eq!(v, Ext::Finite(Scalar::rational(5, 9)));
        let v = qpoch_multi(&[Scalar::rational(1, 3)], &Scalar::double(0.5, 0.0), Index::Inf).unwrap();
        assert!(matches!(v, Ext::Finite(Scalar::Double(_))));
        assert!(qpoch(&Scalar::rational(1, 3), &Scalar::rational(3, 2), Index::Fin(1)).is_err());
    }
}
