//! Geometric tail certificates.
//!
//! For k >= K the term ratio of a series is majorized by
//!
//! ```text
//! rho(K) = |z| |q|^{K e} prod (1 + |a||q|^K) / prod (1 - |b||q|^K)
//!          * [1/(1 - |q|^{K+1})]                       unilateral only
//!          * (1 + |s||q|^{2K+2}) / (1 - |s||q|^{2K})   very-well-poised only
//! ```
//!
//! so the tail past K is at most |t_K| rho/(1 - rho).

use super::engine::{excess, params, reverse, termination, Series};
use super::{Kind, SeriesSpec};
use crate::error::{Error, Result};
use crate::numerics::parse::rational_from_f64;
use crate::numerics::{rational_to_f64, Field, Mode, Scalar};
use crate::qfactorial::{check_base, on_mode};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `|sum_{k>K} t_k| <= bound`, with `bound = term * rho / (1 - rho)` and
/// `term >= |t_K|`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailCertificate {
    pub k: usize,
    pub rho: BigRational,
    pub term: BigRational,
    pub bound: BigRational,
}

impl TailCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "K": self.k,
            "rho": rational_to_f64(&self.rho),
            "term": rational_to_f64(&self.term),
            "bound": rational_to_f64(&self.bound),
        })
    }
}

/// Magnitudes entering the majorant, already rounded outward.
struct Majorant {
    kind: Kind,
    sigma: Option<BigRational>,
    upper: Vec<BigRational>,
    lower: Vec<BigRational>,
    q: BigRational,
    z: BigRational,
    exponent: i64,
}

impl Majorant {
    /// rho(K), or `None` when a denominator factor is not positive.
    fn rho(&self, k: usize) -> Option<BigRational> {
        let one = BigRational::one();
        let qk = pow(&self.q, k);
        let mut num = self.z.clone();
        let mut den = one.clone();
        if self.exponent < 0 {
            return None;
        }
        num *= pow(&qk, self.exponent as usize);
        for a in &self.upper {
            num *= &one + a * &qk;
        }
        for b in &self.lower {
            let f = &one - b * &qk;
            if !f.is_positive() {
                return None;
            }
            den *= f;
        }
        if self.kind == Kind::Unilateral {
            den *= &one - &qk * &self.q;
        }
        if let Some(s) = &self.sigma {
            let q2k = &qk * &qk;
            let f = &one - s * &q2k;
            if !f.is_positive() {
                return None;
            }
            num *= &one + s * &q2k * &self.q * &self.q;
            den *= f;
        }
        Some(num / den)
    }
}

fn pow(x: &BigRational, n: usize) -> BigRational {
    num_traits::pow(x.clone(), n)
}

/// Outward rational upper bound of a nonnegative float magnitude.
fn upper_mag(x: f64) -> BigRational {
    rational_from_f64(x * (1.0 + 1e-12) + f64::MIN_POSITIVE)
}

fn exact_abs<F: Field>(x: &F) -> BigRational {
    match x.to_scalar() {
        Scalar::Exact(r) => r.abs(),
        other => upper_mag(other.abs_f64()),
    }
}

fn majorant<F: Field>(s: &Series<F>) -> Majorant {
    Majorant {
        kind: s.kind,
        sigma: s.sigma.as_ref().map(exact_abs),
        upper: s.upper.iter().map(exact_abs).collect(),
        lower: s.lower.iter().map(exact_abs).collect(),
        q: exact_abs(&s.q),
        z: exact_abs(&s.z),
        exponent: excess(s.kind, s.upper.len(), s.lower.len()),
    }
}

/// Term `t_k` for k >= 0 computed directly (no recurrence).
fn term_at<F: Field>(s: &Series<F>, k: usize) -> Result<F> {
    let q = &s.q;
    let one = q.one_like();
    let ki = k as i64;
    let mut t = s.z.powi(ki);
    for a in &s.upper {
        t = t * crate::qfactorial::qpoch_pos(a, q, k as u64);
    }
    let mut den = one.clone();
    for b in &s.lower {
        den = den * crate::qfactorial::qpoch_pos(b, q, k as u64);
    }
    if s.kind == Kind::Unilateral {
        den = den * crate::qfactorial::qpoch_pos(q, q, k as u64);
    }
    if den.is_exact_zero() {
        return Err(Error::PoleInTerm(format!("lower factor vanishes at k = {k}")));
    }
    t = t / den;
    let e = excess(s.kind, s.upper.len(), s.lower.len());
    if e != 0 {
        let c2 = ki * (ki - 1) / 2;
        let sign = if k % 2 == 1 && e % 2 != 0 { -one.clone() } else { one.clone() };
        t = t * sign * q.powi(c2 * e);
    }
    if let Some(sg) = &s.sigma {
        t = t * (one.clone() - sg.clone() * q.powi(2 * ki)) / (one - sg.clone());
    }
    Ok(t)
}

/// t_{k+1} from t_k, given q^k and q^{2k}.
fn next_term(s: &Series<BigRational>, t: &BigRational, k: usize, qk: &BigRational, q2k: &BigRational, q2: &BigRational) -> Result<BigRational> {
    if t.is_zero() {
        return Ok(BigRational::zero());
    }
    let one = BigRational::one();
    let mut num = s.z.clone();
    for a in &s.upper {
        num *= &one - a * qk;
    }
    let mut den = one.clone();
    for b in &s.lower {
        den *= &one - b * qk;
    }
    if s.kind == Kind::Unilateral {
        den *= &one - qk * &s.q;
    }
    let e = excess(s.kind, s.upper.len(), s.lower.len());
    if e != 0 {
        num *= Field::powi(&-qk.clone(), e);
    }
    if let Some(sg) = &s.sigma {
        let f = &one - sg * q2k;
        if f.is_zero() {
            return term_at(s, k + 1);
        }
        num *= &one - sg * q2k * q2;
        den *= f;
    }
    if den.is_zero() {
        return Err(Error::PoleInTerm(format!("lower factor vanishes at k = {}", k + 1)));
    }
    Ok(t * num / den)
}

fn certificate<F: Field>(s: &Series<F>, k: usize) -> Result<TailCertificate> {
    check_base(&s.q)?;
    let m = majorant(s);
    let rho = m.rho(k).filter(|r| *r < BigRational::one()).ok_or_else(|| {
        Error::NoContraction(m.rho(k).map_or(f64::INFINITY, |r| rational_to_f64(&r)))
    })?;
    let term = exact_abs(&term_at(s, k)?);
    let bound = &term * &rho / (BigRational::one() - &rho);
    Ok(TailCertificate { k, rho, term, bound })
}

/// Certificate for the forward part (k > K) of a series. Float inputs
/// enter through outward-rounded magnitudes.
pub fn tail_bound(spec: &SeriesSpec, k: usize) -> Result<TailCertificate> {
    on_mode!(spec.mode(), F, ctx => {
        let s = spec.to_field::<F>(ctx)?;
        certificate(&s, k)
    })
}

/// An exact partial sum with a rigorous bound on its distance to the full
/// series value.
#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedSum {
    pub value: BigRational,
    pub bound: BigRational,
    pub certificates: Vec<TailCertificate>,
    pub terms: usize,
}

/// Sum the forward part of an exact series until the tail certificate is
/// at most `eps`.
fn certified_forward(s: &Series<BigRational>, eps: &BigRational, max_terms: usize) -> Result<CertifiedSum> {
    check_base(&s.q)?;
    let up = params(&s.upper, &s.q);
    let lo = params(&s.lower, &s.q);
    let term = termination(Kind::Unilateral, &up, &lo);
    let m = majorant(s);
    let limit = term.above.map_or(max_terms, |n| n as usize + 1);
    let mut sum = BigRational::zero();
    let mut last_rho = None;
    let mut t = term_at(s, 0)?;
    let mut qk = BigRational::one();
    let mut q2k = BigRational::one();
    let q2 = &s.q * &s.q;
    for k in 0..limit {
        sum += &t;
        if term.above.is_some() {
            if k + 1 < limit {
                t = next_term(s, &t, k, &qk, &q2k, &q2)?;
                qk *= &s.q;
                q2k *= &q2;
            }
            continue;
        }
        if let Some(rho) = m.rho(k).filter(|r| *r < BigRational::one()) {
            let tk = t.abs();
            let bound = &tk * &rho / (BigRational::one() - &rho);
            if bound <= *eps {
                let cert = TailCertificate { k, rho, term: tk, bound: bound.clone() };
                return Ok(CertifiedSum { value: sum, bound, certificates: vec![cert], terms: k + 1 });
            }
            last_rho = Some(rational_to_f64(&rho));
        }
        t = next_term(s, &t, k, &qk, &q2k, &q2)?;
        qk *= &s.q;
        q2k *= &q2;
    }
    if term.above.is_some() {
        return Ok(CertifiedSum { value: sum, bound: BigRational::zero(), certificates: vec![], terms: limit });
    }
    Err(Error::NoContraction(last_rho.unwrap_or(f64::INFINITY)))
}

/// Exact partial sum of a rational series (either kind, r = s when
/// bilateral) within `eps` of the true value.
pub fn certified_sum(s: &Series<BigRational>, eps: &BigRational, max_terms: usize) -> Result<CertifiedSum> {
    if !eps.is_positive() {
        return Err(Error::CertificationTooTight("eps must be positive".into()));
    }
    match s.kind {
        Kind::Unilateral => certified_forward(s, eps, max_terms),
        Kind::Bilateral => {
            if s.upper.len() != s.lower.len() {
                return Err(Error::BadShape("certification of a bilateral series needs r = s".into()));
            }
            let half = eps / BigRational::from_integer(2.into());
            let mut fwd = certified_forward(s, &half, max_terms)?;
            let below = termination(Kind::Bilateral, &params(&s.upper, &s.q), &params(&s.lower, &s.q)).below;
            if below == Some(1) {
                return Ok(fwd);
            }
            let Some((rs, t1)) = reverse(s)? else { return Ok(fwd) };
            let scale = t1.abs();
            let target = if scale.is_zero() { half.clone() } else { &half / &scale };
            let bwd = certified_forward(&rs, &target, max_terms)?;
            fwd.value += &t1 * &bwd.value;
            fwd.bound += &scale * &bwd.bound;
            fwd.terms += bwd.terms;
            for mut c in bwd.certificates {
                c.term *= &scale;
                c.bound *= &scale;
                fwd.certificates.push(c);
            }
            Ok(fwd)
        }
    }
}

/// [`certified_sum`] on a spec; all values must be exact.
pub fn certified_spec_sum(spec: &SeriesSpec, eps: &BigRational, max_terms: usize) -> Result<CertifiedSum> {
    if spec.mode() != Mode::ExactRational {
        return Err(Error::IllegalDemotion("certification needs exact rational parameters".into()));
    }
    let s = spec.to_field::<BigRational>(())?;
    certified_sum(&s, eps, max_terms)
}
