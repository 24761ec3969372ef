//! Generic summation over any [`Field`].

use super::{Diagnostics, EvalOptions, Kind, Termination};
use crate::error::{Error, Result};
use crate::numerics::Field;
use crate::qfactorial::{check_base, one_minus};

/// A series over `F`. For the unilateral kind the factor `1/(q;q)_k` is
/// implicit; `sigma` adds the factor `(1 - sigma q^{2k})/(1 - sigma)`.
#[derive(Clone, Debug)]
pub struct Series<F: Field> {
    pub kind: Kind,
    pub sigma: Option<F>,
    pub upper: Vec<F>,
    pub lower: Vec<F>,
    pub q: F,
    pub z: F,
}

/// A parameter with an optional exact q-power: `x = q^j`.
#[derive(Clone, Debug)]
pub(crate) struct Param<F> {
    pub x: F,
    pub qexp: Option<i64>,
}

const QPOW_RANGE: i64 = 64;
const QPOW_REL: f64 = 1e-12;

/// Recognize `x = q^j` for |j| <= 64: literal in the exact tower, relative
/// 1e-12 otherwise.
pub(crate) fn q_power<F: Field>(x: &F, q: &F) -> Option<i64> {
    if x.is_exact_zero() {
        return None;
    }
    let lx = x.abs_f64().ln();
    let lq = q.abs_f64().ln();
    if !lx.is_finite() || !lq.is_finite() || lq == 0.0 {
        return None;
    }
    let j0 = (lx / lq).round() as i64;
    for j in [j0, j0 - 1, j0 + 1] {
        if j.abs() > QPOW_RANGE {
            continue;
        }
        if x.near(&q.powi(j), QPOW_REL) {
            return Some(j);
        }
    }
    None
}

pub(crate) fn params<F: Field>(xs: &[F], q: &F) -> Vec<Param<F>> {
    xs.iter()
        .map(|x| {
            let qexp = q_power(x, q);
            Param { x: qexp.map(|j| q.powi(j)).unwrap_or_else(|| x.clone()), qexp }
        })
        .collect()
}

/// `1 - x q^k`, exactly zero when `x = q^{-k}`.
fn factor<F: Field>(p: &Param<F>, k: i64, qk: &F) -> F {
    if p.qexp == Some(-k) {
        return qk.zero_like();
    }
    one_minus(&(p.x.clone() * qk.clone()), p.x.snap_eps())
}

/// Termination indices of a series.
pub(crate) fn termination<F: Field>(kind: Kind, up: &[Param<F>], lo: &[Param<F>]) -> Termination {
    let above = up.iter().filter_map(|p| p.qexp).filter(|j| *j <= 0).map(|j| (-j) as u64).min();
    let below = if kind == Kind::Bilateral {
        lo.iter().filter_map(|p| p.qexp).filter(|j| *j >= 1).map(|j| j as u64).min()
    } else {
        None
    };
    Termination { above, below }
}

/// Exponent of `(-1)^k q^{C(k,2)}` in the term.
pub(crate) fn excess(kind: Kind, r: usize, s: usize) -> i64 {
    match kind {
        Kind::Unilateral => 1 + s as i64 - r as i64,
        Kind::Bilateral => s as i64 - r as i64,
    }
}

struct Stopper {
    tol: f64,
    run: usize,
    prev: f64,
}

impl Stopper {
    fn new(tol: f64) -> Self {
        Stopper { tol, run: 0, prev: 0.0 }
    }

    /// Feed |t_k| and |partial|; true once three consecutive terms are small
    /// and contracting.
    fn push(&mut self, t: f64, partial: f64) -> bool {
        let small = if t == 0.0 {
            partial > 0.0
        } else {
            t <= self.tol * partial && self.prev > 0.0 && t / self.prev < 0.99
        };
        self.prev = t;
        self.run = if small { self.run + 1 } else { 0 };
        self.run >= 3
    }
}

fn vwp_factor<F: Field>(sigma: &Param<F>, k: i64, q2k: &F) -> F {
    let num = if sigma.qexp == Some(-2 * k) {
        q2k.zero_like()
    } else {
        one_minus(&(sigma.x.clone() * q2k.clone()), sigma.x.snap_eps())
    };
    num / one_minus(&sigma.x, sigma.x.snap_eps())
}

fn check_sigma<F: Field>(sigma: &Param<F>, kmax: Option<u64>) -> Result<()> {
    if sigma.qexp == Some(0) || one_minus(&sigma.x, sigma.x.snap_eps()).is_exact_zero() {
        return Err(Error::SigmaDegenerate("sigma = 1".into()));
    }
    if let Some(j) = sigma.qexp {
        if j < 0 && j % 2 == 0 && kmax.map_or(true, |n| (-j / 2) as u64 <= n) {
            return Err(Error::SigmaDegenerate(format!("sigma = q^{j}")));
        }
    }
    Ok(())
}

/// Sum over k >= 0 of a hypergeometric term (unilateral, or the forward
/// half of a bilateral series) with the given excess exponent.
pub(crate) fn forward_sum<F: Field>(
    kind: Kind,
    sigma: Option<&Param<F>>,
    up: &[Param<F>],
    lo: &[Param<F>],
    q: &F,
    z: &F,
    exponent: i64,
    opts: &EvalOptions,
) -> Result<(F, usize, f64)> {
    let term = termination(Kind::Unilateral, up, lo);
    if F::EXACT && term.above.is_none() && !z.is_exact_zero() {
        return Err(Error::ExactNonterminating);
    }
    if let Some(s) = sigma {
        check_sigma(s, term.above)?;
    }
    if term.above.is_none() {
        let zm = z.abs_f64();
        let divergent = match exponent {
            e if e > 0 => false,
            0 => zm >= 1.0,
            _ => !z.is_exact_zero(),
        };
        if divergent {
            return Err(Error::DivergentDomain(format!("|z| = {zm} with excess {exponent}")));
        }
    }
    for p in lo {
        if let Some(j) = p.qexp {
            if j <= 0 && term.above.map_or(true, |n| (-j) as u64 + 1 <= n) {
                return Err(Error::PoleInTerm(format!("lower parameter q^{j}")));
            }
        }
    }
    let one = q.one_like();
    let mut base = one.clone();
    let mut qk = one.clone();
    let mut q2k = one.clone();
    let q2 = q.clone() * q.clone();
    let mut sum = q.zero_like();
    let mut stop = Stopper::new(opts.term_tol);
    let limit = match term.above {
        Some(n) => n as usize + 1,
        None => opts.max_terms,
    };
    let mut last = 0.0;
    for k in 0..limit {
        let t = match sigma {
            Some(s) => base.clone() * vwp_factor(s, k as i64, &q2k),
            None => base.clone(),
        };
        sum = sum + t.clone();
        last = t.abs_f64();
        if term.above.is_none() && (base.is_exact_zero() || stop.push(last, sum.abs_f64())) {
            return Ok((sum, k + 1, last));
        }
        if k + 1 == limit {
            break;
        }
        // ratio t_{k+1}/t_k without the sigma factor
        let mut num = z.clone();
        for p in up {
            num = num * factor(p, k as i64, &qk);
        }
        let mut den = one.clone();
        for p in lo {
            den = den * factor(p, k as i64, &qk);
        }
        if kind == Kind::Unilateral {
            den = den * (one.clone() - qk.clone() * q.clone());
        }
        if exponent != 0 {
            let m = (-qk.clone()).powi(exponent);
            num = num * m;
        }
        if den.is_exact_zero() {
            if num.is_exact_zero() || base.is_exact_zero() {
                base = q.zero_like();
            } else {
                return Err(Error::PoleInTerm(format!("lower factor vanishes at k = {}", k + 1)));
            }
        } else {
            base = base * num / den;
        }
        qk = qk * q.clone();
        q2k = q2k * q2.clone();
    }
    if term.above.is_some() {
        return Ok((sum, limit, last));
    }
    Err(Error::NonConvergent(opts.max_terms))
}

/// Sum over k <= -1 by backward recurrence (used when r != s).
fn backward_direct<F: Field>(
    sigma: Option<&Param<F>>,
    up: &[Param<F>],
    lo: &[Param<F>],
    q: &F,
    z: &F,
    exponent: i64,
    opts: &EvalOptions,
) -> Result<(F, usize, f64)> {
    let below = termination(Kind::Bilateral, up, lo).below;
    if F::EXACT && below.is_none() {
        return Err(Error::ExactNonterminating);
    }
    if z.is_exact_zero() {
        return Err(Error::DivergentDomain("z = 0 in a bilateral series".into()));
    }
    let one = q.one_like();
    let qinv = one.clone() / q.clone();
    let q2inv = qinv.clone() * qinv.clone();
    // base_0 = 1; base_{k-1} = base_k * prod(1 - b q^{k-1}) / prod(1 - a q^{k-1}) / (z (-q^{k-1})^e)
    let mut base = one.clone();
    let mut qkm1 = qinv.clone();
    let mut q2k = q2inv.clone();
    let mut sum = q.zero_like();
    let mut stop = Stopper::new(opts.term_tol);
    let limit = match below {
        Some(j) => j as usize - 1,
        None => opts.max_terms,
    };
    let mut last = 0.0;
    for i in 1..=limit {
        let k = -(i as i64);
        let mut num = one.clone();
        for p in lo {
            num = num * factor(p, k, &qkm1);
        }
        let mut den = z.clone();
        for p in up {
            den = den * factor(p, k, &qkm1);
        }
        if exponent != 0 {
            den = den * (-qkm1.clone()).powi(exponent);
        }
        if den.is_exact_zero() {
            return Err(Error::PoleInTerm(format!("upper factor pole at k = {k}")));
        }
        base = base * num / den;
        let t = match sigma {
            Some(s) => base.clone() * vwp_factor(s, k, &q2k),
            None => base.clone(),
        };
        sum = sum + t.clone();
        last = t.abs_f64();
        if below.is_none() && (base.is_exact_zero() || stop.push(last, sum.abs_f64())) {
            return Ok((sum, i, last));
        }
        qkm1 = qkm1 * qinv.clone();
        q2k = q2k * q2inv.clone();
    }
    if below.is_some() {
        return Ok((sum, limit, last));
    }
    Err(Error::NonConvergent(opts.max_terms))
}

/// Unilateral series equal to the k <= -1 part of an r = s bilateral
/// series, and the value t_{-1} that scales it. `None` when the part
/// vanishes (a lower parameter equals q).
#[allow(clippy::type_complexity)]
pub(crate) fn reverse<F: Field>(s: &Series<F>) -> Result<Option<(Series<F>, F)>> {
    if s.kind != Kind::Bilateral {
        return Err(Error::DivergentDomain("reversal applies to bilateral series".into()));
    }
    if s.upper.len() != s.lower.len() {
        return Err(Error::DivergentDomain("reversal needs r = s".into()));
    }
    let q = &s.q;
    let one = q.one_like();
    let qinv = one.clone() / q.clone();
    let q2 = q.clone() * q.clone();
    let up = params(&s.upper, q);
    let lo = params(&s.lower, q);
    if s.z.is_exact_zero() {
        return Err(Error::DivergentDomain("z = 0 in a bilateral series".into()));
    }
    // t_{-1} = prod (1 - b/q) / (1 - a/q) / z
    let mut num = one.clone();
    for p in &lo {
        num = num * factor(p, -1, &qinv);
    }
    if num.is_exact_zero() {
        return Ok(None);
    }
    let mut den = s.z.clone();
    for p in &up {
        den = den * factor(p, -1, &qinv);
    }
    if den.is_exact_zero() {
        return Err(Error::PoleInTerm("upper parameter q makes (a;q)_{-1} a pole".into()));
    }
    let mut t1 = num / den;
    let mut w = s.z.one_like() / s.z.clone();
    for (a, b) in up.iter().zip(&lo) {
        w = w * b.x.clone() / a.x.clone();
    }
    let mut r_upper = vec![q.clone()];
    r_upper.extend(lo.iter().map(|b| q2.clone() / b.x.clone()));
    let r_lower: Vec<F> = up.iter().map(|a| q2.clone() / a.x.clone()).collect();
    let (sigma, z) = match &s.sigma {
        Some(sg) => {
            let sp = Param { qexp: q_power(sg, q), x: sg.clone() };
            let f = vwp_factor(&sp, -1, &(qinv.clone() * qinv.clone()));
            t1 = t1 * f;
            (Some(q2.clone() / sg.clone()), w * qinv.clone() * qinv)
        }
        None => (None, w),
    };
    Ok(Some((
        Series { kind: Kind::Unilateral, sigma, upper: r_upper, lower: r_lower, q: q.clone(), z },
        t1,
    )))
}

/// Evaluate a series of either kind.
pub fn eval_series<F: Field>(s: &Series<F>, opts: &EvalOptions) -> Result<(F, Diagnostics)> {
    check_base(&s.q)?;
    let q = &s.q;
    let up = params(&s.upper, q);
    let lo = params(&s.lower, q);
    let sigma = s.sigma.as_ref().map(|x| Param { qexp: q_power(x, q), x: x.clone() });
    let exponent = excess(s.kind, s.upper.len(), s.lower.len());
    let term = termination(s.kind, &up, &lo);
    let (fwd, nf, lf) = forward_sum(s.kind, sigma.as_ref(), &up, &lo, q, &s.z, exponent, opts)?;
    let mut diag = Diagnostics { terms_forward: nf, terms_backward: 0, last_term: lf, termination: term };
    if s.kind == Kind::Unilateral {
        return Ok((fwd, diag));
    }
    if s.upper.len() == s.lower.len() {
        match reverse(s)? {
            None => Ok((fwd, diag)),
            Some((rs, t1)) => {
                let (v, d) = eval_series(&rs, opts).map_err(|e| match e {
                    Error::DivergentDomain(m) => Error::DivergentDomain(format!("negative side: {m}")),
                    e => e,
                })?;
                diag.terms_backward = d.terms_forward;
                diag.last_term = diag.last_term.max(d.last_term * t1.abs_f64());
                Ok((fwd + t1 * v, diag))
            }
        }
    } else {
        let (bwd, nb, lb) = backward_direct(sigma.as_ref(), &up, &lo, q, &s.z, exponent, opts)?;
        diag.terms_backward = nb;
        diag.last_term = diag.last_term.max(lb);
        Ok((fwd + bwd, diag))
    }
}

/// Factor `(a;q)_{offset + step k}^{power}` inside a summand.
#[derive(Clone, Debug)]
pub struct Shifted<F: Field> {
    pub a: F,
    pub offset: i64,
    pub step: i64,
    pub power: i32,
}

/// Sum over k >= 0 of `vwp(k) (upper;q)_k/(lower;q)_k prod shifted z^k`.
/// No factor is implicit here; `(q;q)_k` must be listed in `lower`.
#[derive(Clone, Debug)]
pub struct ShiftedSeries<F: Field> {
    pub sigma: Option<F>,
    pub upper: Vec<F>,
    pub lower: Vec<F>,
    pub shifted: Vec<Shifted<F>>,
    pub q: F,
    pub z: F,
}

/// Running product of shifted factors `(a;q)_m^power`, kept as a finite
/// value times `0^order` so that neither overflow of individual factors nor
/// isolated zeros and poles spoil the term.
struct ShiftRun<F: Field> {
    a: F,
    m: i64,
    power: i32,
}

impl<F: Field> ShiftRun<F> {
    fn advance(&mut self, to: i64, q: &F, val: &mut F, order: &mut i64) {
        while self.m != to {
            let up = to > self.m;
            let idx = if up { self.m } else { self.m - 1 };
            let f = one_minus(&(self.a.clone() * q.powi(idx)), self.a.snap_eps());
            let sign = if up { 1 } else { -1 };
            if f.is_exact_zero() {
                *order += sign * self.power as i64;
            } else {
                for _ in 0..self.power.unsigned_abs() {
                    *val = if (sign * self.power as i64) > 0 { val.clone() * f.clone() } else { val.clone() / f.clone() };
                }
            }
            self.m += sign;
        }
    }
}

pub fn eval_shifted<F: Field>(s: &ShiftedSeries<F>, opts: &EvalOptions) -> Result<(F, Diagnostics)> {
    check_base(&s.q)?;
    let q = &s.q;
    let up = params(&s.upper, q);
    let lo = params(&s.lower, q);
    let sigma = s.sigma.as_ref().map(|x| Param { qexp: q_power(x, q), x: x.clone() });
    if let Some(sg) = &sigma {
        check_sigma(sg, None)?;
    }
    let one = q.one_like();
    let q2 = q.clone() * q.clone();
    let mut runs: Vec<ShiftRun<F>> = s.shifted.iter().map(|f| ShiftRun { a: f.a.clone(), m: 0, power: f.power }).collect();
    let mut shift = one.clone();
    let mut order = 0i64;
    let mut base = one.clone();
    let mut qk = one.clone();
    let mut q2k = one.clone();
    let mut sum = q.zero_like();
    let mut stop = Stopper::new(opts.term_tol);
    let term = termination(Kind::Unilateral, &up, &lo);
    let limit = term.above.map_or(opts.max_terms, |n| n as usize + 1);
    for k in 0..limit {
        for (f, run) in s.shifted.iter().zip(runs.iter_mut()) {
            run.advance(f.offset + f.step * k as i64, q, &mut shift, &mut order);
        }
        let t = match order {
            0 => base.clone() * shift.clone(),
            o if o > 0 => q.zero_like(),
            _ => return Err(Error::PoleInTerm(format!("shifted factor pole at k = {k}"))),
        };
        let t = match &sigma {
            Some(sg) => t * vwp_factor(sg, k as i64, &q2k),
            None => t,
        };
        sum = sum + t.clone();
        let last = t.abs_f64();
        if term.above.is_none() && stop.push(last, sum.abs_f64()) {
            let diag = Diagnostics { terms_forward: k + 1, terms_backward: 0, last_term: last, termination: term };
            return Ok((sum, diag));
        }
        let mut num = s.z.clone();
        for p in &up {
            num = num * factor(p, k as i64, &qk);
        }
        let mut den = one.clone();
        for p in &lo {
            den = den * factor(p, k as i64, &qk);
        }
        if den.is_exact_zero() {
            return Err(Error::PoleInTerm(format!("lower factor vanishes at k = {}", k + 1)));
        }
        base = base * num / den;
        qk = qk * q.clone();
        q2k = q2k * q2.clone();
    }
    if let Some(n) = term.above {
        let diag = Diagnostics { terms_forward: n as usize + 1, terms_backward: 0, last_term: 0.0, termination: term };
        return Ok((sum, diag));
    }
    Err(Error::NonConvergent(opts.max_terms))
}
