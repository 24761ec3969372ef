//! Reductions between catalog identities.
//!
//! A map sends a point of the target identity to a point of the source
//! identity at which the source reduces to the target: both sides of the
//! source then equal the corresponding sides of the target.

use super::expr::{Mono, Shape};
use super::{find, make_env, Descriptor, Point};
use crate::error::{Error, Result};
use crate::numerics::{Field, Scalar};
use crate::qfactorial::on_mode;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::sync::OnceLock;

/// Value of a source parameter in terms of the target's symbols.
#[derive(Clone, Debug)]
pub enum Sub {
    Mono(Mono),
    /// `mono * sqrt(symbol)`, principal branch (float towers only).
    SqrtTimes(Mono, String),
}

#[derive(Debug)]
pub struct SpecMap {
    pub source: &'static str,
    pub name: &'static str,
    pub target: &'static str,
    /// Source shape for a target shape.
    pub shape: fn(&Shape) -> Result<Shape>,
    /// Source parameters that are not carried over by name.
    pub subst: fn(&Shape) -> Vec<(String, Sub)>,
}

fn m(s: &str) -> Mono {
    Mono::parse(s).unwrap_or_else(|e| panic!("map monomial: {e}"))
}

fn mono(pairs: &[(&str, &str)]) -> Vec<(String, Sub)> {
    pairs.iter().map(|(k, v)| (k.to_string(), Sub::Mono(m(v)))).collect()
}

fn same(s: &Shape) -> Result<Shape> {
    Ok(s.clone())
}

fn with(s: &Shape, k: &str, v: i64) -> Shape {
    let mut out = s.clone();
    out.insert(k.into(), v);
    out
}

fn r_of(s: &Shape) -> i64 {
    s.get("r").copied().unwrap_or(0)
}

fn registry() -> Vec<SpecMap> {
    vec![
        SpecMap {
            source: "ramanujan_1psi1",
            name: "b=q",
            target: "q_binomial",
            shape: same,
            subst: |_| mono(&[("b", "q")]),
        },
        SpecMap { source: "bailey_6psi6", name: "e=a", target: "rogers_6phi5", shape: same, subst: |_| mono(&[("e", "a")]) },
        SpecMap {
            source: "bailey_8phi7_nt",
            name: "f=q^-n",
            target: "jackson_8phi7",
            shape: |_| Ok(Shape::new()),
            subst: |_| mono(&[("f", "q^(-n)"), ("e", "a^2*q^(1+n)/(b*c*d)")]),
        },
        SpecMap {
            source: "slater_wp_2r_general",
            name: "a=b",
            target: "slater_wp_2r",
            shape: same,
            subst: |s| (1..=r_of(s)).map(|i| (format!("a{i}"), Sub::Mono(m(&format!("b{i}"))))).collect(),
        },
        SpecMap {
            source: "slater_rpsir_general",
            name: "c=a",
            target: "slater_rpsir",
            shape: |s| Ok(with(s, "form", 1)),
            subst: |s| (1..=r_of(s)).map(|i| (format!("c{i}"), Sub::Mono(m(&format!("a{i}"))))).collect(),
        },
        SpecMap {
            source: "ckm_general",
            name: "s=0",
            target: "slater_rpsir_general",
            shape: |s| {
                if s.get("form") != Some(&0) {
                    return Err(Error::BadShape("s=0 reduces to the first form only (form = 0)".into()));
                }
                let mut out = s.clone();
                out.remove("form");
                out.insert("s".into(), 0);
                Ok(out)
            },
            subst: |_| vec![],
        },
        SpecMap {
            source: "ckm_km1",
            name: "e=bq",
            target: "chu_2s_tf",
            shape: |s| Ok(with(s, "form", 1)),
            subst: |_| mono(&[("e", "b*q")]),
        },
        SpecMap {
            source: "ckm_km3",
            name: "f=d,e=a/d",
            target: "chu_vwp_sum",
            shape: same,
            subst: |_| mono(&[("f", "d"), ("e", "a/d")]),
        },
        SpecMap {
            source: "slater_vwp_2r",
            name: "b=sqrt(a)",
            target: "slater_wp_2r",
            shape: |s| {
                let r = r_of(s);
                Ok(with(s, "r", r + 2))
            },
            subst: |s| {
                let r = r_of(s);
                let mut out: Vec<(String, Sub)> =
                    (1..=2 * r).map(|i| (format!("b{}", i + 2), Sub::Mono(m(&format!("b{i}"))))).collect();
                out.push((format!("b{}", 2 * r + 3), Sub::SqrtTimes(Mono::one(), "a".into())));
                out.push((format!("b{}", 2 * r + 4), Sub::SqrtTimes(m("-1"), "a".into())));
                out
            },
        },
        SpecMap {
            source: "slater_wp_2r",
            name: "b=q*sqrt(a)",
            target: "slater_vwp_2r",
            shape: same,
            subst: |s| {
                let r = r_of(s);
                let mut out: Vec<(String, Sub)> =
                    (1..=2 * r - 2).map(|i| (format!("b{i}"), Sub::Mono(m(&format!("b{}", i + 2))))).collect();
                out.push((format!("b{}", 2 * r - 1), Sub::SqrtTimes(m("q"), "a".into())));
                out.push((format!("b{}", 2 * r), Sub::SqrtTimes(m("-q"), "a".into())));
                out
            },
        },
    ]
}

pub fn maps() -> &'static [SpecMap] {
    static MAPS: OnceLock<Vec<SpecMap>> = OnceLock::new();
    MAPS.get_or_init(registry)
}

/// The registered map `map_name` out of `source` with its target descriptor.
pub fn specialize(source: &str, map_name: &str) -> Result<(&'static Descriptor, &'static SpecMap)> {
    find(source)?;
    let map = maps()
        .iter()
        .find(|mp| mp.source == source && mp.name == map_name)
        .ok_or_else(|| Error::UnknownMap(format!("{source}: {map_name}")))?;
    Ok((find(map.target)?, map))
}

/// Principal square root, refined by Newton steps in the working precision.
fn sqrt_in<F: Field>(x: &F) -> Result<F> {
    if F::EXACT {
        return Err(Error::IllegalDemotion("square roots need a float tower".into()));
    }
    let c = x.to_scalar().to_c64().sqrt();
    let mut y = F::from_scalar(&Scalar::Double(Complex64::new(c.re, c.im)), x.ctx())?;
    let half = F::from_i64(1, x.ctx()) / F::from_i64(2, x.ctx());
    for _ in 0..8 {
        y = (y.clone() + x.clone() / y.clone()) * half.clone();
    }
    Ok(y)
}

/// The source point corresponding to a target point.
pub fn map_point(map: &SpecMap, target_point: &Point) -> Result<Point> {
    let target = find(map.target)?;
    let source = find(map.source)?;
    let tinst = target.instance(&target_point.shape)?;
    let shape = (map.shape)(&target_point.shape)?;
    let sinst = source.instance(&shape)?;
    let subst: BTreeMap<String, Sub> = (map.subst)(&target_point.shape).into_iter().collect();
    on_mode!(target_point.mode(), F, ctx => {
        let env = make_env::<F>(&tinst, target_point, ctx)?;
        let mut values = BTreeMap::new();
        values.insert("q".to_string(), target_point.get("q")?.clone());
        for p in &sinst.params {
            let v = match subst.get(p) {
                Some(Sub::Mono(x)) => env.mono(x)?.to_scalar(),
                Some(Sub::SqrtTimes(x, of)) => {
                    let base = env.vals.get(of).ok_or_else(|| Error::SymbolMissing(of.clone()))?;
                    (env.mono(x)? * sqrt_in(base)?).to_scalar()
                }
                None => target_point.get(p)?.clone(),
            };
            values.insert(p.clone(), v);
        }
        Ok(Point { shape, values })
    })
}
