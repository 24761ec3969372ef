//! Identity catalog: descriptors with parameter constraints, idem groups,
//! left- and right-hand side builders, specialization maps and seeded
//! sampling of admissible points.
//!
//! Each descriptor builds an [`Instance`] for a concrete shape (r, s, n,
//! N, m_i, form). Instances are symbolic: sides are lists of [`Group`]s
//! whose monomials are evaluated in any tower level.

mod catalog;
pub(crate) mod eval;
pub mod expr;
mod maps;
mod sample;

pub use eval::GUARD;
pub use expr::{expand_idem, Factor, Group, IdemGroup, Len, Lin, Mono, SeriesTpl, Shape, ShiftedTpl, Term};
pub use maps::{map_point, maps, specialize, SpecMap, Sub};
pub use sample::{sample_point, SampleOptions};

use crate::error::{Error, Result};
use crate::numerics::{CLit, Field, Mode, Scalar};
use crate::qfactorial::on_mode;
use crate::series::{Diagnostics, EvalOptions, Kind, SeriesSpec};
use eval::{eval_side, guard_term, term_finite, Env};
use serde_json::{json, Map, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

/// Integer shape parameter. With `per = Some("s")` it stands for the family
/// `m1..m_s`.
#[derive(Clone, Debug)]
pub struct ShapeParam {
    pub name: &'static str,
    pub min: i64,
    pub max: i64,
    pub per: Option<&'static str>,
}

/// Sampling rule: `name = anchor * r e^{i theta}` with r in [lo, hi].
#[derive(Clone, Debug)]
pub struct Draw {
    pub name: String,
    pub anchor: Mono,
    pub lo: f64,
    pub hi: f64,
}

/// An identity at a fixed shape.
#[derive(Clone, Debug)]
pub struct Instance {
    pub params: Vec<String>,
    /// Named quantities defined from the parameters, in dependency order.
    pub derived: Vec<(String, Mono)>,
    pub equalities: Vec<(Mono, Mono)>,
    /// Chains `|c0| < |c1| < ...`.
    pub domain: Vec<Vec<Mono>>,
    pub lhs: Vec<Group>,
    pub rhs: Vec<Group>,
    pub draws: Vec<Draw>,
    pub q_range: (f64, f64),
}

#[derive(Debug)]
pub struct Descriptor {
    pub id: &'static str,
    pub name: &'static str,
    pub shape: Vec<ShapeParam>,
    pub constraints: &'static str,
    pub build: fn(&Shape) -> Instance,
}

pub fn catalog() -> &'static [Descriptor] {
    static CATALOG: OnceLock<Vec<Descriptor>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut v = catalog::entries();
        v.sort_by_key(|d| d.id);
        v
    })
}

pub fn find(id: &str) -> Result<&'static Descriptor> {
    catalog().iter().find(|d| d.id == id).ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

fn chain_text(c: &[Mono]) -> String {
    c.iter()
        .map(|m| if *m == Mono::one() { "1".to_string() } else { format!("|{m}|") })
        .collect::<Vec<_>>()
        .join("<")
}

impl Instance {
    /// Every idem-expanded term of both sides.
    pub fn terms(&self) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        for g in self.lhs.iter().chain(&self.rhs) {
            out.extend(g.expand()?);
        }
        Ok(out)
    }

    /// Parameter symbols used by the sides but not bound by `params` or
    /// `derived`.
    pub fn free_symbols(&self) -> BTreeSet<String> {
        let bound: BTreeSet<&String> = self.params.iter().chain(self.derived.iter().map(|(n, _)| n)).collect();
        let mut used = BTreeSet::new();
        for g in self.lhs.iter().chain(&self.rhs) {
            used.extend(g.term.symbols());
        }
        for (_, m) in &self.derived {
            used.extend(m.symbols());
        }
        used.into_iter().filter(|s| !bound.contains(s)).collect()
    }

    /// The parameter fixed by the equality constraint: the lexicographically
    /// last one occurring to the power +-1, as a monomial in the others.
    pub fn dependent(&self) -> Option<(String, Mono)> {
        let (l, r) = self.equalities.first()?;
        let ratio = l.div(r);
        let name = self.params.iter().filter(|p| ratio.power_of(p).abs() == 1).max()?.clone();
        let p = ratio.power_of(&name);
        let mut rest = ratio.clone();
        rest.pows.remove(&name);
        Some((name, if p == 1 { rest.inv() } else { rest }))
    }

    pub fn equality_texts(&self) -> Vec<String> {
        self.equalities.iter().map(|(l, r)| format!("{l} = {r}")).collect()
    }

    pub fn domain_texts(&self) -> Vec<String> {
        self.domain.iter().map(|c| chain_text(c)).collect()
    }
}

impl Descriptor {
    /// Concrete shape symbol names for a shape (expanding `m1..m_s`).
    pub fn shape_names(&self, shape: &Shape) -> Vec<(String, i64, i64)> {
        let mut out = Vec::new();
        for p in &self.shape {
            match p.per {
                None => out.push((p.name.to_string(), p.min, p.max)),
                Some(k) => {
                    let count = shape.get(k).copied().unwrap_or(0);
                    for i in 1..=count {
                        out.push((format!("{}{i}", p.name), p.min, p.max));
                    }
                }
            }
        }
        out
    }

    pub fn validate_shape(&self, shape: &Shape) -> Result<()> {
        let names = self.shape_names(shape);
        for (n, lo, hi) in &names {
            let v = shape.get(n).ok_or_else(|| Error::BadShape(format!("{}: shape symbol `{n}` missing", self.id)))?;
            if v < lo || v > hi {
                return Err(Error::BadShape(format!("{}: {n} = {v} outside [{lo}, {hi}]", self.id)));
            }
        }
        if let Some(k) = shape.keys().find(|k| !names.iter().any(|(n, _, _)| n == *k)) {
            return Err(Error::BadShape(format!("{}: unknown shape symbol `{k}`", self.id)));
        }
        Ok(())
    }

    pub fn instance(&self, shape: &Shape) -> Result<Instance> {
        self.validate_shape(shape)?;
        Ok((self.build)(shape))
    }

    /// The smallest admissible shape.
    pub fn min_shape(&self) -> Shape {
        let mut shape = Shape::new();
        for p in self.shape.iter().filter(|p| p.per.is_none()) {
            shape.insert(p.name.to_string(), p.min);
        }
        for (n, lo, _) in self.shape_names(&shape) {
            shape.entry(n).or_insert(lo);
        }
        shape
    }

    fn shape_text(&self) -> String {
        if self.shape.is_empty() {
            return "-".into();
        }
        self.shape
            .iter()
            .map(|p| match p.per {
                None => format!("{}={}..{}", p.name, p.min, p.max),
                Some(k) => format!("{}_i={}..{} (i<={k})", p.name, p.min, p.max),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// One listing line: id, shape ranges, constraint summary, name.
    pub fn list_line(&self) -> String {
        format!("{:<22} {:<28} {} | {}", self.id, self.shape_text(), self.constraints, self.name)
    }

    pub fn metadata(&self) -> Value {
        let inst = (self.build)(&self.min_shape());
        json!({
            "id": self.id,
            "name": self.name,
            "shape": self.shape.iter().map(|p| {
                let mut o = json!({"name": p.name, "min": p.min, "max": p.max});
                if let Some(k) = p.per {
                    o["per"] = json!(k);
                }
                o
            }).collect::<Vec<_>>(),
            "constraints": self.constraints,
            "params_at_min_shape": inst.params,
            "derived": inst.derived.iter().map(|(n, m)| format!("{n} = {m}")).collect::<Vec<_>>(),
            "equalities": inst.equality_texts(),
            "domain": inst.domain_texts(),
        })
    }
}

pub fn metadata_json() -> Value {
    Value::Array(catalog().iter().map(Descriptor::metadata).collect())
}

/// Integer shape plus named values, including `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub shape: Shape,
    pub values: BTreeMap<String, Scalar>,
}

impl Point {
    pub fn mode(&self) -> Mode {
        self.values.values().fold(Mode::ExactRational, |m, v| m.join(v.mode()))
    }

    pub fn get(&self, name: &str) -> Result<&Scalar> {
        self.values.get(name).ok_or_else(|| Error::SymbolMissing(format!("point has no value for `{name}`")))
    }

    /// Flat map of values; the reserved key `shape` holds the integers.
    pub fn to_json(&self) -> Value {
        let mut o = Map::new();
        if !self.shape.is_empty() {
            o.insert("shape".into(), json!(self.shape));
        }
        for (k, v) in &self.values {
            o.insert(k.clone(), v.to_json());
        }
        Value::Object(o)
    }

    pub fn from_json(v: &Value, mode: Mode) -> Result<Point> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("a point must be a JSON object".into()))?;
        let mut shape = Shape::new();
        let mut values = BTreeMap::new();
        for (k, x) in obj {
            if k == "shape" {
                let s = x.as_object().ok_or_else(|| Error::Parse("`shape` must be an object of integers".into()))?;
                for (n, i) in s {
                    let i = i.as_i64().ok_or_else(|| Error::Parse(format!("shape `{n}` must be an integer")))?;
                    shape.insert(n.clone(), i);
                }
            } else {
                let c = CLit::from_json(x).map_err(|e| Error::Parse(format!("value `{k}`: {e}")))?;
                values.insert(k.clone(), c.to_scalar(mode).map_err(|e| Error::Parse(format!("value `{k}`: {e}")))?);
            }
        }
        Ok(Point { shape, values })
    }
}

pub(crate) fn make_env<F: Field>(inst: &Instance, point: &Point, ctx: F::Ctx) -> Result<Env<F>> {
    let q = F::from_scalar(point.get("q")?, ctx)?;
    let mut env = Env { vals: BTreeMap::new(), shape: point.shape.clone(), q };
    for p in &inst.params {
        env.vals.insert(p.clone(), F::from_scalar(point.get(p)?, ctx)?);
    }
    for (n, m) in &inst.derived {
        let v = env.mono(m)?;
        env.vals.insert(n.clone(), v);
    }
    Ok(env)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintItem {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintReport {
    pub ok: bool,
    pub items: Vec<ConstraintItem>,
}

impl ConstraintReport {
    pub fn failures(&self) -> Vec<&ConstraintItem> {
        self.items.iter().filter(|i| !i.ok).collect()
    }
}

const EQ_REL: f64 = 1e-12;

/// Constraint items at `env`; chains must hold with `|c_i| < margin |c_{i+1}|`.
pub(crate) fn check_env<F: Field>(inst: &Instance, env: &Env<F>, margin: f64) -> Result<Vec<ConstraintItem>> {
    let mut items = Vec::new();
    let qa = env.q.abs_f64();
    items.push(ConstraintItem {
        name: "0<|q|<1".into(),
        ok: qa > 0.0 && qa < 1.0,
        detail: format!("|q| = {qa:.6e}"),
    });
    for (l, r) in &inst.equalities {
        let (lv, rv) = (env.mono(l)?, env.mono(r)?);
        let ok = lv.near(&rv, EQ_REL);
        let d = (lv.clone() - rv.clone()).abs_f64();
        items.push(ConstraintItem { name: format!("{l} = {r}"), ok, detail: format!("|difference| = {d:.3e}") });
    }
    let mut chain_fail = Vec::new();
    for c in &inst.domain {
        let mags = c.iter().map(|m| env.mono(m).map(|v| v.abs_f64())).collect::<Result<Vec<_>>>()?;
        let ok = mags.windows(2).all(|w| w[0] < margin * w[1]);
        let detail = mags.iter().map(|x| format!("{x:.6e}")).collect::<Vec<_>>().join(" < ");
        if !ok {
            chain_fail.push(items.len());
        }
        items.push(ConstraintItem { name: chain_text(c), ok, detail });
    }
    if !chain_fail.is_empty() {
        let mut all = true;
        for t in inst.terms()? {
            if !term_finite(&t, env)? {
                all = false;
                break;
            }
        }
        if all {
            for i in chain_fail {
                items[i].ok = true;
                items[i].detail.push_str(" (waived: every series terminates)");
            }
        }
    }
    Ok(items)
}

/// Check shape, equality constraints (exact, or 1e-12 relative), modulus
/// chains (strict; waived when every series terminates).
pub fn constraints_check(desc: &Descriptor, point: &Point) -> Result<ConstraintReport> {
    let inst = desc.instance(&point.shape)?;
    let items = on_mode!(point.mode(), F, ctx => {
        let env = make_env::<F>(&inst, point, ctx)?;
        check_env(&inst, &env, 1.0)?
    });
    Ok(ConstraintReport { ok: items.iter().all(|i| i.ok), items })
}

/// Both sides of an identity in one tower level.
#[derive(Clone, Debug)]
pub struct Sides {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub lhs_diagnostics: Vec<Diagnostics>,
    pub rhs_diagnostics: Vec<Diagnostics>,
}

pub(crate) fn sides_in<F: Field>(inst: &Instance, point: &Point, ctx: F::Ctx, opts: &EvalOptions) -> Result<(F, F, Vec<Diagnostics>, Vec<Diagnostics>)> {
    let env = make_env::<F>(inst, point, ctx)?;
    let (l, ld) = eval_side(&inst.lhs, &env, opts)?;
    let (r, rd) = eval_side(&inst.rhs, &env, opts)?;
    Ok((l, r, ld, rd))
}

/// Evaluate both sides in `mode` (the point is promoted; float points
/// cannot be evaluated exactly).
pub fn evaluate(desc: &Descriptor, point: &Point, mode: Mode, opts: &EvalOptions) -> Result<Sides> {
    let inst = desc.instance(&point.shape)?;
    on_mode!(mode, F, ctx => {
        let (l, r, ld, rd) = sides_in::<F>(&inst, point, ctx, opts)?;
        Ok(Sides { lhs: l.to_scalar(), rhs: r.to_scalar(), lhs_diagnostics: ld, rhs_diagnostics: rd })
    })
}

fn side(desc: &Descriptor, point: &Point, mode: Mode, opts: &EvalOptions, left: bool) -> Result<Scalar> {
    let inst = desc.instance(&point.shape)?;
    on_mode!(mode, F, ctx => {
        let env = make_env::<F>(&inst, point, ctx)?;
        let groups = if left { &inst.lhs } else { &inst.rhs };
        Ok(eval_side(groups, &env, opts)?.0.to_scalar())
    })
}

pub fn lhs(desc: &Descriptor, point: &Point, mode: Mode, opts: &EvalOptions) -> Result<Scalar> {
    side(desc, point, mode, opts, true)
}

pub fn rhs(desc: &Descriptor, point: &Point, mode: Mode, opts: &EvalOptions) -> Result<Scalar> {
    side(desc, point, mode, opts, false)
}

/// Run the degenerate-point guard over every term of both sides.
pub fn guard(desc: &Descriptor, point: &Point) -> Result<()> {
    let inst = desc.instance(&point.shape)?;
    on_mode!(point.mode(), F, ctx => {
        let env = make_env::<F>(&inst, point, ctx)?;
        for t in inst.terms()? {
            guard_term(&t, &env)?;
        }
        Ok(())
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Poisedness {
    pub balanced: bool,
    pub well_poised: bool,
    pub very_well_poised: bool,
}

fn poised_in<F: Field>(s: &crate::series::Series<F>) -> Poisedness {
    const REL: f64 = 1e-12;
    let (up, lo, q) = (&s.upper, &s.lower, &s.q);
    let prod = |xs: &[F]| xs.iter().fold(q.one_like(), |a, x| a * x.clone());
    match s.kind {
        Kind::Unilateral => {
            let shape_ok = up.len() == lo.len() + 1;
            let balanced = shape_ok && s.z.near(q, REL) && prod(lo).near(&(prod(up) * q.clone()), REL);
            let well_poised = shape_ok && {
                let c = up[0].clone() * q.clone();
                up[1..].iter().zip(lo).all(|(a, b)| (a.clone() * b.clone()).near(&c, REL))
            };
            let very_well_poised = well_poised
                && up.len() >= 3
                && up[1].near(&(-up[2].clone()), REL)
                && (up[1].clone() * up[1].clone()).near(&(q.clone() * q.clone() * up[0].clone()), REL);
            Poisedness { balanced, well_poised, very_well_poised }
        }
        Kind::Bilateral => {
            let well_poised = up.len() == lo.len() && !up.is_empty() && {
                let c = up[0].clone() * lo[0].clone();
                up.iter().zip(lo).all(|(a, b)| (a.clone() * b.clone()).near(&c, REL))
            };
            let very_well_poised = well_poised
                && up.len() >= 2
                && up[0].near(&(-up[1].clone()), REL)
                && up[0].near(&(q.clone() * lo[0].clone()), REL)
                && up[0].near(&(-(q.clone() * lo[1].clone())), REL);
            Poisedness { balanced: false, well_poised, very_well_poised }
        }
    }
}

/// Balanced / well-poised / very-well-poised flags of a series spec. The
/// very-well-poised pair is tested branch-free (a_2 = -a_3, a_2^2 = q^2 a_1).
pub fn poisedness(spec: &SeriesSpec) -> Poisedness {
    on_mode!(spec.mode(), F, ctx => {
        match spec.to_field::<F>(ctx) {
            Ok(s) => poised_in(&s),
            Err(_) => Poisedness::default(),
        }
    })
}

#[cfg(test)]
mod tests;
