//! Certified verification at exact rational points.
//!
//! Every term is enclosed in a rational ball `center ± radius`. Finite
//! factors are exact; an infinite product `(x;q)_oo` is the exact partial
//! product P times a remainder R in [e^-L, e^L], so both it and its
//! reciprocal lie within relative distance L/(1-L) of P (or 1/P). Series
//! carry their tail certificates. Balls are combined exactly and only the
//! final comparison is rounded outward.

use super::{Status, VerificationReport};
use crate::error::{Error, Result};
use crate::identities::eval::{guard_term, series_of, Env};
use crate::identities::{constraints_check, make_env, Descriptor, Factor, Len, Point, SeriesTpl, Term};
use crate::numerics::{rational_to_f64, round_to, Mode, Scalar};
use crate::qfactorial::{qpoch_fin, qpoch_inf_exact, Ext};
use crate::series::{certified_sum, TailCertificate};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

const ROUNDS: usize = 6;
const MAX_TERMS: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
struct Ball {
    c: BigRational,
    r: BigRational,
}

impl Ball {
    fn exact(c: BigRational) -> Self {
        Ball { c, r: BigRational::zero() }
    }

    fn mul(&self, o: &Ball) -> Ball {
        Ball { c: &self.c * &o.c, r: self.c.abs() * &o.r + o.c.abs() * &self.r + &self.r * &o.r }
    }

    fn add(&self, o: &Ball) -> Ball {
        Ball { c: &self.c + &o.c, r: &self.r + &o.r }
    }
}

/// Enclosure of one expanded term.
#[derive(Clone, Debug)]
pub struct TermEnclosure {
    pub side: &'static str,
    pub center: BigRational,
    pub radius: BigRational,
    pub tails: Vec<TailCertificate>,
    pub products: usize,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub eps: BigRational,
    /// Proven upper bound on |LHS - RHS|, rounded outward.
    pub gap_bound: f64,
    pub lhs_radius: BigRational,
    pub rhs_radius: BigRational,
    pub terms: Vec<TermEnclosure>,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        json!({
            "eps": rational_to_f64(&self.eps),
            "gap_bound": self.gap_bound,
            "lhs_radius": rational_to_f64(&self.lhs_radius),
            "rhs_radius": rational_to_f64(&self.rhs_radius),
            "terms": self.terms.iter().map(|t| json!({
                "side": t.side,
                "center": rational_to_f64(&t.center),
                "radius": rational_to_f64(&t.radius),
                "infinite_products": t.products,
                "tails": t.tails.iter().map(TailCertificate::to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn pole(what: &str) -> Error {
    Error::DegeneratePoint(format!("{what} has a pole"))
}

/// Ball for `(x;b)_oo^pow` with relative radius at most about `tau`.
fn infinite(x: &BigRational, b: &BigRational, pow: i32, tau: &BigRational) -> Result<Ball> {
    let one = BigRational::one();
    let target = tau * (&one - b.abs()) / BigRational::from_integer(4.into());
    let (p, l, _) = qpoch_inf_exact(x, b, &target)?;
    if l >= one {
        return Err(Error::NoContraction(rational_to_f64(&l)));
    }
    let rel = &l / (&one - &l);
    if pow < 0 {
        if p.is_zero() {
            return Err(pole("an infinite product in a denominator"));
        }
        let c = one / p;
        Ok(Ball { r: c.abs() * rel, c })
    } else {
        Ok(Ball { r: p.abs() * rel, c: p })
    }
}

fn factor_ball(f: &Factor, env: &Env<BigRational>, tau: &BigRational, products: &mut usize) -> Result<Ball> {
    match f {
        Factor::Poch { arg, base, len, pow } => {
            let x = env.mono(arg)?;
            let b = if *base == 2 { &env.q * &env.q } else { env.q.clone() };
            match len {
                Len::Inf => {
                    *products += 1;
                    infinite(&x, &b, *pow, tau)
                }
                Len::Fin(l) => {
                    let v = match qpoch_fin(&x, &b, l.eval(&env.shape)?) {
                        Ext::Finite(v) => v,
                        Ext::Pole if *pow < 0 => return Ok(Ball::exact(BigRational::zero())),
                        Ext::Pole => return Err(pole("a finite product")),
                    };
                    if *pow < 0 {
                        if v.is_zero() {
                            return Err(pole("a finite product in a denominator"));
                        }
                        Ok(Ball::exact(BigRational::one() / v))
                    } else {
                        Ok(Ball::exact(v))
                    }
                }
            }
        }
        Factor::Pow { base, exp } => {
            let b = env.mono(base)?;
            let e = exp.eval(&env.shape)?;
            if e < 0 && b.is_zero() {
                return Err(pole("a power"));
            }
            Ok(Ball::exact(crate::numerics::Field::powi(&b, e)))
        }
        Factor::Sum { terms, pow } => {
            let mut s = BigRational::zero();
            for t in terms {
                s += env.mono(t)?;
            }
            if *pow < 0 {
                if s.is_zero() {
                    return Err(pole("a sum in a denominator"));
                }
                Ok(Ball::exact(BigRational::one() / s))
            } else {
                Ok(Ball::exact(s))
            }
        }
    }
}

fn term_ball(t: &Term, env: &Env<BigRational>, tau: &BigRational, side: &'static str) -> Result<TermEnclosure> {
    let mut products = 0;
    let mut acc = Ball::exact(BigRational::one());
    for f in &t.factors {
        acc = acc.mul(&factor_ball(f, env, tau, &mut products)?);
    }
    let mut tails = Vec::new();
    if let Some(tpl) = &t.series {
        if !matches!(tpl, SeriesTpl::Std { .. }) {
            return Err(Error::BadShape("certification supports standard series only".into()));
        }
        if !(acc.c.is_zero() && acc.r.is_zero()) {
            let s = series_of(tpl, env)?;
            let scale = acc.c.abs() + &acc.r + BigRational::one();
            let cs = certified_sum(&s, &(tau / scale), MAX_TERMS)?;
            tails = cs.certificates;
            acc = acc.mul(&Ball { c: cs.value, r: cs.bound });
        }
    }
    Ok(TermEnclosure { side, center: acc.c, radius: acc.r, tails, products })
}

fn side_balls(groups: &[crate::identities::Group], env: &Env<BigRational>, tau: &BigRational, side: &'static str, out: &mut Vec<TermEnclosure>) -> Result<Ball> {
    let mut sum = Ball::exact(BigRational::zero());
    for g in groups {
        for t in g.expand()? {
            guard_term(&t, env)?;
            let e = term_ball(&t, env, tau, side)?;
            sum = sum.add(&Ball { c: e.center.clone(), r: e.radius.clone() });
            out.push(e);
        }
    }
    Ok(sum)
}

/// Upper bound in binary64, rounded up.
fn upper_f64(x: &BigRational) -> f64 {
    let f = rational_to_f64(x);
    if f.is_finite() {
        f.next_up()
    } else {
        f
    }
}

fn parse_eps(eps: f64) -> Result<BigRational> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::CertificationTooTight(format!("eps = {eps} must be positive")));
    }
    BigRational::from_float(eps).ok_or_else(|| Error::CertificationTooTight(format!("eps = {eps}")))
}

/// Certify `|LHS - RHS| <= eps` at an exact point. The tolerance of the
/// enclosures is tightened until their total radius is below eps/2 or the
/// round limit is reached.
pub fn certify(desc: &Descriptor, point: &Point, eps: f64) -> Result<VerificationReport> {
    let eps_q = parse_eps(eps)?;
    if point.mode() != Mode::ExactRational {
        return Err(Error::IllegalDemotion("certification needs an exact rational point".into()));
    }
    let mut rep = VerificationReport::bare(desc.id, Mode::ExactRational, eps, Some(point.clone()));
    let cons = constraints_check(desc, point)?;
    if !cons.ok {
        rep.status = Status::ConstraintViolation;
        rep.diagnostics = json!({ "violations": cons.failures().iter().map(|i| i.name.clone()).collect::<Vec<_>>() });
        return Ok(rep);
    }
    let inst = desc.instance(&point.shape)?;
    let env = make_env::<BigRational>(&inst, point, ())?;
    let half = &eps_q / BigRational::from_integer(2.into());
    let mut tau = &eps_q / BigRational::from_integer(64.into());
    for round in 0..ROUNDS {
        let mut terms = Vec::new();
        let l = side_balls(&inst.lhs, &env, &tau, "lhs", &mut terms)?;
        let r = side_balls(&inst.rhs, &env, &tau, "rhs", &mut terms)?;
        let radius = &l.r + &r.r;
        let gap = (&l.c - &r.c).abs() + &radius;
        if radius > half && round + 1 < ROUNDS {
            tau = tau / BigRational::from_integer(BigInt::from(1u64 << 40));
            continue;
        }
        let lower = (&l.c - &r.c).abs() - &radius;
        rep.status = if gap <= eps_q {
            Status::Pass
        } else if lower > eps_q {
            Status::Fail
        } else {
            return Err(Error::CertificationTooTight(format!(
                "enclosure radius {:.3e} does not resolve eps = {eps:e}",
                rational_to_f64(&radius)
            )));
        };
        rep.lhs = Some(round_to(&Scalar::Exact(l.c.clone()), Mode::big()));
        rep.rhs = Some(round_to(&Scalar::Exact(r.c.clone()), Mode::big()));
        rep.abs_residual = Some(rational_to_f64(&(&l.c - &r.c).abs()));
        let den = l.c.abs().max(r.c.abs());
        rep.rel_residual = Some(if den.is_zero() { 0.0 } else { rational_to_f64(&((&l.c - &r.c).abs() / den)) });
        rep.diagnostics = json!({ "rounds": round + 1 });
        rep.certificate = Some(Certificate { eps: eps_q, gap_bound: upper_f64(&gap), lhs_radius: l.r, rhs_radius: r.r, terms });
        return Ok(rep);
    }
    unreachable!("the last round always returns")
}
