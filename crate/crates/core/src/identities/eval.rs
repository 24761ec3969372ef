//! Numeric evaluation of symbolic terms over a tower level.

use super::expr::{Factor, Group, Len, Mono, SeriesTpl, Shape, Term};
use crate::error::{Error, Result};
use crate::numerics::Field;
use crate::qfactorial::{qpoch_fin, qpoch_inf, Ext};
use crate::series::engine::{params, termination};
use crate::series::{eval_series, eval_shifted, Diagnostics, EvalOptions, Kind, Series, Shifted, ShiftedSeries};
use std::collections::BTreeMap;

/// Relative radius of the degenerate-point guard.
pub const GUARD: f64 = 1e-6;

/// Parameter values, shape and base.
#[derive(Clone, Debug)]
pub(crate) struct Env<F: Field> {
    pub vals: BTreeMap<String, F>,
    pub shape: Shape,
    pub q: F,
}

impl<F: Field> Env<F> {
    pub fn mono(&self, m: &Mono) -> Result<F> {
        let mut acc = self.q.powi(m.q.eval(&self.shape)?);
        for (s, k) in &m.pows {
            let v = self.vals.get(s).ok_or_else(|| Error::SymbolMissing(format!("parameter `{s}`")))?;
            if *k < 0 && v.is_exact_zero() {
                return Err(Error::DegeneratePoint(format!("{s} = 0 in a denominator")));
            }
            acc = acc * v.powi(*k as i64);
        }
        Ok(if m.neg { -acc } else { acc })
    }

    fn monos(&self, ms: &[Mono]) -> Result<Vec<F>> {
        ms.iter().map(|m| self.mono(m)).collect()
    }

    fn base(&self, b: u32) -> F {
        if b == 2 {
            self.q.clone() * self.q.clone()
        } else {
            self.q.clone()
        }
    }
}

fn factor<F: Field>(f: &Factor, env: &Env<F>, tol: f64) -> Result<Ext<F>> {
    let ctx = env.q.ctx();
    match f {
        Factor::Poch { arg, base, len, pow } => {
            let x = env.mono(arg)?;
            let b = env.base(*base);
            let v = match len {
                Len::Inf => Ext::Finite(qpoch_inf(&x, &b, tol)?.0),
                Len::Fin(l) => qpoch_fin(&x, &b, l.eval(&env.shape)?),
            };
            Ok(if *pow < 0 { v.reciprocal(ctx) } else { v })
        }
        Factor::Pow { base, exp } => {
            let b = env.mono(base)?;
            let e = exp.eval(&env.shape)?;
            if e < 0 && b.is_exact_zero() {
                return Ok(Ext::Pole);
            }
            Ok(Ext::Finite(b.powi(e)))
        }
        Factor::Sum { terms, pow } => {
            let mut s = F::zero_in(ctx);
            for t in terms {
                s = s + env.mono(t)?;
            }
            let v = Ext::Finite(s);
            Ok(if *pow < 0 { v.reciprocal(ctx) } else { v })
        }
    }
}

pub(crate) fn series_of<F: Field>(tpl: &SeriesTpl, env: &Env<F>) -> Result<Series<F>> {
    let SeriesTpl::Std { kind, sigma, upper, lower, z } = tpl else {
        return Err(Error::BadShape("not a standard series".into()));
    };
    let sigma = sigma.as_ref().map(|s| env.mono(s)).transpose()?;
    let mut up = env.monos(upper)?;
    if *kind == Kind::Unilateral {
        if let Some(s) = &sigma {
            up.insert(0, s.clone());
        }
    }
    Ok(Series { kind: *kind, sigma, upper: up, lower: env.monos(lower)?, q: env.q.clone(), z: env.mono(z)? })
}

fn shifted_of<F: Field>(tpl: &SeriesTpl, env: &Env<F>) -> Result<ShiftedSeries<F>> {
    let SeriesTpl::Shifted { sigma, upper, lower, shifted, z } = tpl else {
        return Err(Error::BadShape("not a shifted series".into()));
    };
    let shifted = shifted
        .iter()
        .map(|s| {
            Ok(Shifted { a: env.mono(&s.arg)?, offset: s.offset.eval(&env.shape)?, step: s.step, power: s.pow })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ShiftedSeries {
        sigma: sigma.as_ref().map(|s| env.mono(s)).transpose()?,
        upper: env.monos(upper)?,
        lower: env.monos(lower)?,
        shifted,
        q: env.q.clone(),
        z: env.mono(z)?,
    })
}

fn eval_tpl<F: Field>(tpl: &SeriesTpl, env: &Env<F>, opts: &EvalOptions) -> Result<(F, Diagnostics)> {
    match tpl {
        SeriesTpl::Std { .. } => eval_series(&series_of(tpl, env)?, opts),
        SeriesTpl::Shifted { .. } => eval_shifted(&shifted_of(tpl, env)?, opts),
    }
}

/// Value of one term; the series is skipped when the prefactor is an
/// exact zero.
pub(crate) fn eval_term<F: Field>(t: &Term, env: &Env<F>, opts: &EvalOptions) -> Result<(F, Option<Diagnostics>)> {
    let mut acc = Ext::Finite(env.q.one_like());
    for f in &t.factors {
        acc = acc.mul(&factor(f, env, opts.term_tol)?)?;
    }
    let pre = match acc {
        Ext::Finite(v) => v,
        Ext::Pole => return Err(Error::PoleEncountered("prefactor has a pole".into())),
    };
    match &t.series {
        None => Ok((pre, None)),
        Some(_) if pre.is_exact_zero() => Ok((pre, None)),
        Some(s) => {
            let (v, d) = eval_tpl(s, env, opts)?;
            Ok((pre * v, Some(d)))
        }
    }
}

/// Sum of all idem-expanded terms of a side.
pub(crate) fn eval_side<F: Field>(groups: &[Group], env: &Env<F>, opts: &EvalOptions) -> Result<(F, Vec<Diagnostics>)> {
    let mut sum = F::zero_in(env.q.ctx());
    let mut diags = Vec::new();
    for g in groups {
        for t in g.expand()? {
            guard_term(&t, env)?;
            let (v, d) = eval_term(&t, env, opts)?;
            sum = sum + v;
            diags.extend(d);
        }
    }
    Ok((sum, diags))
}

fn near_one<F: Field>(y: &F) -> bool {
    let d = (y.one_like() - y.clone()).abs_f64();
    d <= GUARD * y.abs_f64().max(1.0)
}

fn degenerate(what: String) -> Error {
    Error::DegeneratePoint(what)
}

/// Scan `1 - x b^j` for j = from, from + dir, ... (`count` values, or
/// until |x b^j| leaves the band where the factor could vanish).
fn scan<F: Field>(x: &F, b: &F, from: i64, dir: i64, count: Option<i64>, what: &str) -> Result<()> {
    let mut y = x.clone() * b.powi(from);
    let mul = if dir > 0 { b.clone() } else { b.one_like() / b.clone() };
    let limit = count.unwrap_or(20_000).min(20_000);
    for i in 0..limit {
        let m = y.abs_f64();
        if count.is_none() && ((dir > 0 && m < 1e-3) || (dir < 0 && m > 1e3)) {
            return Ok(());
        }
        if !m.is_finite() {
            return Ok(());
        }
        if near_one(&y) {
            return Err(degenerate(format!("{what} vanishes at index {}", from + dir * i)));
        }
        y = y * mul.clone();
    }
    Ok(())
}

/// The degenerate-point guard: no denominator factor of the prefactor or
/// the summand within `GUARD` of zero over the summed range.
pub(crate) fn guard_term<F: Field>(t: &Term, env: &Env<F>) -> Result<()> {
    for f in &t.factors {
        match f {
            Factor::Poch { arg, base, len, pow } => {
                let x = env.mono(arg)?;
                let b = env.base(*base);
                let what = format!("prefactor ({arg}; q^{base})");
                match (len, *pow < 0) {
                    (Len::Inf, true) => scan(&x, &b, 0, 1, None, &what)?,
                    (Len::Fin(l), den) => {
                        let k = l.eval(&env.shape)?;
                        if den && k > 0 {
                            scan(&x, &b, 0, 1, Some(k), &what)?;
                        } else if !den && k < 0 {
                            scan(&x, &b, -1, -1, Some(-k), &what)?;
                        }
                    }
                    (Len::Inf, false) => {}
                }
            }
            Factor::Pow { base, exp } => {
                if exp.eval(&env.shape)? < 0 && env.mono(base)?.abs_f64() == 0.0 {
                    return Err(degenerate(format!("{base} = 0 under a negative power")));
                }
            }
            Factor::Sum { terms, pow } if *pow < 0 => {
                let vals = env.monos(terms)?;
                let scale = vals.iter().map(|v| v.abs_f64()).fold(0.0, f64::max);
                let s = vals.into_iter().fold(F::zero_in(env.q.ctx()), |a, v| a + v);
                if s.abs_f64() <= GUARD * scale {
                    return Err(degenerate("a denominator sum vanishes".into()));
                }
            }
            Factor::Sum { .. } => {}
        }
    }
    let Some(tpl) = &t.series else { return Ok(()) };
    let q = &env.q;
    match tpl {
        SeriesTpl::Std { kind, sigma, .. } => {
            let s = series_of(tpl, env)?;
            if let Some(sg) = sigma {
                if near_one(&env.mono(sg)?) {
                    return Err(degenerate(format!("special parameter {sg} at 1")));
                }
            }
            let up = params(&s.upper, q);
            let lo = params(&s.lower, q);
            let term = termination(*kind, &up, &lo);
            let above = term.above.map(|n| n as i64);
            for b in &s.lower {
                scan(b, q, 0, 1, above, "lower parameter factor")?;
            }
            if *kind == Kind::Bilateral {
                let below = term.below.map(|n| n as i64 - 1);
                for a in &s.upper {
                    scan(a, q, -1, -1, below, "upper parameter factor")?;
                }
            }
        }
        SeriesTpl::Shifted { sigma, lower, .. } => {
            if let Some(sg) = sigma {
                if near_one(&env.mono(sg)?) {
                    return Err(degenerate(format!("special parameter {sg} at 1")));
                }
            }
            for b in env.monos(lower)? {
                scan(&b, q, 0, 1, None, "lower parameter factor")?;
            }
        }
    }
    Ok(())
}

/// True when every series of the term terminates (both directions for
/// bilateral series).
pub(crate) fn term_finite<F: Field>(t: &Term, env: &Env<F>) -> Result<bool> {
    match &t.series {
        None => Ok(true),
        Some(tpl @ SeriesTpl::Std { kind, .. }) => {
            let s = series_of(tpl, env)?;
            let up = params(&s.upper, &env.q);
            let lo = params(&s.lower, &env.q);
            Ok(termination(*kind, &up, &lo).is_finite(*kind))
        }
        Some(SeriesTpl::Shifted { upper, .. }) => {
            let up = params(&env.monos(upper)?, &env.q);
            Ok(termination(Kind::Unilateral, &up, &[]).above.is_some())
        }
    }
}
