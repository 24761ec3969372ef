//! Deterministic sampling of admissible points.

use super::eval::{guard_term, Env};
use super::{check_env, Descriptor, Instance, Point, Shape};
use crate::error::{Error, Result};
use crate::numerics::{Field, Mode, Scalar};
use crate::qfactorial::on_mode;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

/// Margin applied to every modulus chain when sampling.
pub const MARGIN: f64 = 0.9;
pub const MAX_ATTEMPTS: usize = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct SampleOptions {
    pub mode: Mode,
    pub r_max: i64,
    pub s_max: i64,
    pub m_max: i64,
    /// Use this shape instead of drawing one.
    pub shape: Option<Shape>,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { mode: Mode::ComplexDouble, r_max: 6, s_max: 2, m_max: 3, shape: None }
    }
}

fn rng_for(id: &str, seed: u64, index: u64) -> ChaCha8Rng {
    let digest = Sha256::digest(format!("{id}:{seed}:{index}").as_bytes());
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}

fn draw_shape(desc: &Descriptor, rng: &mut ChaCha8Rng, opts: &SampleOptions) -> Shape {
    let cap = |name: &str| match name {
        "r" => Some(opts.r_max),
        "s" => Some(opts.s_max),
        "m" => Some(opts.m_max),
        _ => None,
    };
    let mut shape = Shape::new();
    let mut pick = |name: String, base: &str, lo: i64, hi: i64, shape: &mut Shape| {
        let hi = cap(base).map_or(hi, |c| hi.min(c)).max(lo);
        shape.insert(name, rng.gen_range(lo..=hi));
    };
    for p in desc.shape.iter().filter(|p| p.per.is_none()) {
        pick(p.name.to_string(), p.name, p.min, p.max, &mut shape);
    }
    for p in desc.shape.iter().filter(|p| p.per.is_some()) {
        let count = shape.get(p.per.unwrap_or_default()).copied().unwrap_or(0);
        for i in 1..=count {
            pick(format!("{}{i}", p.name), p.name, p.min, p.max, &mut shape);
        }
    }
    shape
}

/// A modulus in [lo, hi] with a random phase; rationals get a random sign
/// and a denominator of at most 16.
fn draw_scalar(rng: &mut ChaCha8Rng, lo: f64, hi: f64, mode: Mode) -> Scalar {
    match mode {
        Mode::ExactRational => loop {
            let den: i64 = rng.gen_range(2..=16);
            let (pl, ph) = ((lo * den as f64).ceil() as i64, (hi * den as f64).floor() as i64);
            if pl > ph {
                continue;
            }
            let num = rng.gen_range(pl..=ph) * if rng.gen_bool(0.5) { 1 } else { -1 };
            if num == 0 {
                continue;
            }
            break Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)));
        },
        _ => {
            let r = rng.gen_range(lo..=hi);
            let th = rng.gen_range(0.0..std::f64::consts::TAU);
            Scalar::Double(Complex64::from_polar(r, th))
        }
    }
}

fn attempt<F: Field>(
    inst: &Instance,
    shape: &Shape,
    dependent: &Option<(String, super::Mono)>,
    rng: &mut ChaCha8Rng,
    mode: Mode,
    ctx: F::Ctx,
) -> Result<Option<Point>> {
    let q = F::from_scalar(&draw_scalar(rng, inst.q_range.0, inst.q_range.1, mode), ctx)?;
    let mut env = Env { vals: BTreeMap::new(), shape: shape.clone(), q };
    for d in &inst.draws {
        for (n, m) in &inst.derived {
            if !env.vals.contains_key(n) && m.symbols().iter().all(|s| env.vals.contains_key(s)) {
                let v = env.mono(m)?;
                env.vals.insert(n.clone(), v);
            }
        }
        let anchor = env.mono(&d.anchor)?;
        let x = F::from_scalar(&draw_scalar(rng, d.lo, d.hi, mode), ctx)?;
        env.vals.insert(d.name.clone(), anchor * x);
    }
    if let Some((name, m)) = dependent {
        let v = match env.mono(m) {
            Ok(v) => v,
            Err(Error::DegeneratePoint(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        env.vals.insert(name.clone(), v);
    }
    let mut values = BTreeMap::new();
    values.insert("q".to_string(), env.q.to_scalar());
    for p in &inst.params {
        let v = env.vals.get(p).ok_or_else(|| Error::SymbolMissing(format!("no sampling rule for `{p}`")))?;
        if v.is_exact_zero() {
            return Ok(None);
        }
        values.insert(p.clone(), v.to_scalar());
    }
    for (n, m) in &inst.derived {
        let v = env.mono(m)?;
        env.vals.insert(n.clone(), v);
    }
    if !check_env(inst, &env, MARGIN)?.iter().all(|i| i.ok) {
        return Ok(None);
    }
    for t in inst.terms()? {
        match guard_term(&t, &env) {
            Ok(()) => {}
            Err(Error::DegeneratePoint(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(Point { shape: shape.clone(), values }))
}

/// The point for `(identity, seed, index)`: shape first, then `q` and the
/// drawn parameters in order, then the dependent parameter. Candidates are
/// rejected until every chain holds with margin 0.9 and the degenerate-point
/// guard passes.
pub fn sample_point(desc: &Descriptor, seed: u64, index: u64, opts: &SampleOptions) -> Result<Point> {
    let mut rng = rng_for(desc.id, seed, index);
    let shape = match &opts.shape {
        Some(s) => s.clone(),
        None => draw_shape(desc, &mut rng, opts),
    };
    let inst = desc.instance(&shape)?;
    let dependent = inst.dependent();
    for _ in 0..MAX_ATTEMPTS {
        let got = on_mode!(opts.mode, F, ctx => attempt::<F>(&inst, &shape, &dependent, &mut rng, opts.mode, ctx)?);
        if let Some(p) = got {
            return Ok(p);
        }
    }
    Err(Error::SamplingExhausted(format!("{}: no admissible point after {MAX_ATTEMPTS} draws", desc.id)))
}
