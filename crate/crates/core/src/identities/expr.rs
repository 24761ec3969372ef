//! Symbolic building blocks: monomials in the parameters with q-exponents
//! linear in the integer shape symbols, q-shifted factorial factors,
//! series templates and idem groups.

use crate::error::{Error, Result};
use crate::series::Kind;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Values of the integer shape symbols (n, N, r, s, m1, ..., form).
pub type Shape = BTreeMap<String, i64>;

/// Integer linear form `c + sum coef * symbol` over shape symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lin {
    pub c: i64,
    pub terms: BTreeMap<String, i64>,
}

impl Lin {
    pub fn konst(c: i64) -> Self {
        Lin { c, terms: BTreeMap::new() }
    }

    pub fn sym(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(name.to_string(), 1);
        Lin { c: 0, terms }
    }

    pub fn is_const(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Lin) -> Lin {
        let mut out = self.clone();
        out.c += other.c;
        for (k, v) in &other.terms {
            *out.terms.entry(k.clone()).or_insert(0) += v;
        }
        out.terms.retain(|_, v| *v != 0);
        out
    }

    pub fn scale(&self, k: i64) -> Lin {
        let mut out = Lin { c: self.c * k, terms: self.terms.iter().map(|(s, v)| (s.clone(), v * k)).collect() };
        out.terms.retain(|_, v| *v != 0);
        out
    }

    pub fn eval(&self, shape: &Shape) -> Result<i64> {
        let mut acc = self.c;
        for (s, v) in &self.terms {
            let x = shape.get(s).ok_or_else(|| Error::SymbolMissing(format!("shape symbol `{s}`")))?;
            acc += v * x;
        }
        Ok(acc)
    }

    /// Replace shape symbols by their values where known.
    pub fn bind(&self, shape: &Shape) -> Lin {
        let mut out = Lin::konst(self.c);
        for (s, v) in &self.terms {
            match shape.get(s) {
                Some(x) => out.c += v * x,
                None => {
                    out.terms.insert(s.clone(), *v);
                }
            }
        }
        out
    }
}

impl fmt::Display for Lin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lead = self.c > 0 && self.terms.values().next().is_some_and(|v| *v < 0);
        if lead {
            write!(f, "{}", self.c)?;
        }
        let mut first = !lead;
        for (s, v) in &self.terms {
            let sign = if *v < 0 { "-" } else if first { "" } else { "+" };
            let mag = v.abs();
            if mag == 1 {
                write!(f, "{sign}{s}")?;
            } else {
                write!(f, "{sign}{mag}{s}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.c)
        } else if lead {
            Ok(())
        } else if self.c > 0 {
            write!(f, "+{}", self.c)
        } else if self.c < 0 {
            write!(f, "{}", self.c)
        } else {
            Ok(())
        }
    }
}

/// `(+-1) q^lin prod x^k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Mono {
    pub neg: bool,
    pub q: Lin,
    pub pows: BTreeMap<String, i32>,
}

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    pub fn sym(name: &str) -> Self {
        let mut m = Mono::one();
        if name == "q" {
            m.q = Lin::konst(1);
        } else {
            m.pows.insert(name.to_string(), 1);
        }
        m
    }

    pub fn qpow(e: Lin) -> Self {
        Mono { neg: false, q: e, pows: BTreeMap::new() }
    }

    /// Parse e.g. `a^2*q/(b*c*d*e)`, `-h/a`, `q^(1-n)`, `b3*q^(-m1)/a`.
    pub fn parse(src: &str) -> Result<Mono> {
        let toks: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { s: &toks, i: 0, src };
        let m = p.product()?;
        if p.i != toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(m)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut out = self.clone();
        out.neg ^= o.neg;
        out.q = out.q.add(&o.q);
        for (k, v) in &o.pows {
            *out.pows.entry(k.clone()).or_insert(0) += v;
        }
        out.pows.retain(|_, v| *v != 0);
        out
    }

    pub fn inv(&self) -> Mono {
        Mono {
            neg: self.neg,
            q: self.q.scale(-1),
            pows: self.pows.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn div(&self, o: &Mono) -> Mono {
        self.mul(&o.inv())
    }

    pub fn powi(&self, k: i32) -> Mono {
        Mono {
            neg: self.neg && k % 2 != 0,
            q: self.q.scale(k as i64),
            pows: self.pows.iter().map(|(s, v)| (s.clone(), v * k)).filter(|(_, v)| *v != 0).collect(),
        }
    }

    pub fn neg(&self) -> Mono {
        let mut m = self.clone();
        m.neg = !m.neg;
        m
    }

    /// Power of `name` (0 when absent).
    pub fn power_of(&self, name: &str) -> i32 {
        self.pows.get(name).copied().unwrap_or(0)
    }

    /// Replace `name` by `by` everywhere.
    pub fn subst(&self, name: &str, by: &Mono) -> Mono {
        let k = self.power_of(name);
        if k == 0 {
            return self.clone();
        }
        let mut rest = self.clone();
        rest.pows.remove(name);
        rest.mul(&by.powi(k))
    }

    /// Interchange two parameter symbols.
    pub fn swap(&self, a: &str, b: &str) -> Mono {
        let mut out = self.clone();
        let pa = out.pows.remove(a);
        let pb = out.pows.remove(b);
        if let Some(v) = pa {
            out.pows.insert(b.to_string(), v);
        }
        if let Some(v) = pb {
            out.pows.insert(a.to_string(), v);
        }
        out
    }

    pub fn bind(&self, shape: &Shape) -> Mono {
        Mono { neg: self.neg, q: self.q.bind(shape), pows: self.pows.clone() }
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        self.pows.keys().cloned().collect()
    }
}

struct Parser<'a> {
    s: &'a [char],
    i: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("monomial {:?} at {}: {what}", self.src, self.i))
    }

    fn peek(&self) -> Option<char> {
        self.s.get(self.i).copied()
    }

    fn product(&mut self) -> Result<Mono> {
        let mut m = self.atom()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.i += 1;
                    m = m.mul(&self.atom()?);
                }
                '/' => {
                    self.i += 1;
                    m = m.div(&self.atom()?);
                }
                _ => break,
            }
        }
        Ok(m)
    }

    fn atom(&mut self) -> Result<Mono> {
        let mut neg = false;
        while self.peek() == Some('-') {
            neg = !neg;
            self.i += 1;
        }
        let base = match self.peek() {
            Some('(') => {
                self.i += 1;
                let m = self.product()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.i += 1;
                m
            }
            Some('1') => {
                self.i += 1;
                Mono::one()
            }
            Some(c) if c.is_ascii_alphabetic() => Mono::sym(&self.ident()),
            _ => return Err(self.err("expected a symbol")),
        };
        let m = if self.peek() == Some('^') {
            self.i += 1;
            let e = self.exponent()?;
            if base == Mono::sym("q") {
                Mono::qpow(e)
            } else if e.is_const() {
                base.powi(e.c as i32)
            } else {
                return Err(self.err("symbolic exponents are allowed on q only"));
            }
        } else {
            base
        };
        Ok(if neg { m.neg() } else { m })
    }

    fn ident(&mut self) -> String {
        let start = self.i;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.i += 1;
        }
        self.s[start..self.i].iter().collect()
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.i;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.i += 1;
        }
        let txt: String = self.s[start..self.i].iter().collect();
        txt.parse().map_err(|_| self.err("expected an integer"))
    }

    fn exponent(&mut self) -> Result<Lin> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let l = self.linear()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.i += 1;
                Ok(l)
            }
            Some('-') => {
                self.i += 1;
                Ok(self.lin_term()?.scale(-1))
            }
            _ => self.lin_term(),
        }
    }

    fn lin_term(&mut self) -> Result<Lin> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let l = self.linear()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.i += 1;
                Ok(l)
            }
            Some(c) if c.is_ascii_digit() => {
                let k = self.int()?;
                if matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
                    Ok(Lin::sym(&self.ident()).scale(k))
                } else {
                    Ok(Lin::konst(k))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => Ok(Lin::sym(&self.ident())),
            _ => Err(self.err("expected an exponent")),
        }
    }

    fn linear(&mut self) -> Result<Lin> {
        let mut sign = 1;
        if self.peek() == Some('-') {
            sign = -1;
            self.i += 1;
        }
        let mut acc = self.lin_term()?.scale(sign);
        loop {
            match self.peek() {
                Some('+') => {
                    self.i += 1;
                    acc = acc.add(&self.lin_term()?);
                }
                Some('-') => {
                    self.i += 1;
                    acc = acc.add(&self.lin_term()?.scale(-1));
                }
                _ => return Ok(acc),
            }
        }
    }
}

fn token(name: &str, k: i64) -> String {
    if k == 1 {
        name.to_string()
    } else {
        format!("{name}^{k}")
    }
}

fn join(tokens: &[String]) -> String {
    let mut out = String::new();
    let mut prev_simple = false;
    for t in tokens {
        let simple = t.chars().count() == 1;
        if !out.is_empty() && !(prev_simple && simple) {
            out.push(' ');
        }
        out.push_str(t);
        prev_simple = simple;
    }
    out
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut all: Vec<(String, Option<i64>, Option<Lin>)> =
            self.pows.iter().map(|(s, v)| (s.clone(), Some(*v as i64), None)).collect();
        if self.q != Lin::konst(0) {
            all.push(("q".into(), if self.q.is_const() { Some(self.q.c) } else { None }, Some(self.q.clone())));
        }
        all.sort_by(|a, b| a.0.cmp(&b.0));
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (name, k, lin) in all {
            match k {
                Some(k) if k > 0 => num.push(token(&name, k)),
                Some(k) => den.push(token(&name, -k)),
                None => num.push(format!("q^{{{}}}", lin.expect("symbolic q exponent"))),
            }
        }
        if self.neg {
            f.write_str("-")?;
        }
        if num.is_empty() {
            f.write_str("1")?;
        } else {
            f.write_str(&join(&num))?;
        }
        match den.len() {
            0 => Ok(()),
            1 => write!(f, "/{}", den[0]),
            _ => write!(f, "/({})", join(&den)),
        }
    }
}

/// Length of a q-shifted factorial.
#[derive(Clone, Debug, PartialEq)]
pub enum Len {
    Inf,
    Fin(Lin),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    /// `(arg; q^base)_len ^ pow` with base 1 or 2 and pow = +-1.
    Poch { arg: Mono, base: u32, len: Len, pow: i32 },
    /// `base^exp`.
    Pow { base: Mono, exp: Lin },
    /// `(sum of terms)^pow`.
    Sum { terms: Vec<Mono>, pow: i32 },
}

/// `(arg;q)_{offset + step k} ^ pow` inside a summand.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftedTpl {
    pub arg: Mono,
    pub offset: Lin,
    pub step: i64,
    pub pow: i32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeriesTpl {
    /// Unilateral: `upper` excludes `sigma`, and `(q;q)_k` is implicit.
    Std { kind: Kind, sigma: Option<Mono>, upper: Vec<Mono>, lower: Vec<Mono>, z: Mono },
    /// Every factor explicit, including `sigma` and `(q;q)_k`.
    Shifted { sigma: Option<Mono>, upper: Vec<Mono>, lower: Vec<Mono>, shifted: Vec<ShiftedTpl>, z: Mono },
}

/// Product of factors times an optional series.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Term {
    pub factors: Vec<Factor>,
    pub series: Option<SeriesTpl>,
}

/// `idem(head; tail...)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdemGroup {
    pub head: String,
    pub tail: Vec<String>,
}

/// A term template, optionally summed over an idem group.
#[derive(Clone, Debug, PartialEq)]
pub struct Group {
    pub term: Term,
    pub idem: Option<IdemGroup>,
}

fn map_all(ms: &[Mono], f: &dyn Fn(&Mono) -> Mono) -> Vec<Mono> {
    ms.iter().map(f).collect()
}

impl Factor {
    fn map(&self, f: &dyn Fn(&Mono) -> Mono) -> Factor {
        match self {
            Factor::Poch { arg, base, len, pow } => Factor::Poch { arg: f(arg), base: *base, len: len.clone(), pow: *pow },
            Factor::Pow { base, exp } => Factor::Pow { base: f(base), exp: exp.clone() },
            Factor::Sum { terms, pow } => Factor::Sum { terms: map_all(terms, f), pow: *pow },
        }
    }

    fn monos(&self) -> Vec<&Mono> {
        match self {
            Factor::Poch { arg, .. } => vec![arg],
            Factor::Pow { base, .. } => vec![base],
            Factor::Sum { terms, .. } => terms.iter().collect(),
        }
    }
}

impl SeriesTpl {
    fn map(&self, f: &dyn Fn(&Mono) -> Mono) -> SeriesTpl {
        match self {
            SeriesTpl::Std { kind, sigma, upper, lower, z } => SeriesTpl::Std {
                kind: *kind,
                sigma: sigma.as_ref().map(f),
                upper: map_all(upper, f),
                lower: map_all(lower, f),
                z: f(z),
            },
            SeriesTpl::Shifted { sigma, upper, lower, shifted, z } => SeriesTpl::Shifted {
                sigma: sigma.as_ref().map(f),
                upper: map_all(upper, f),
                lower: map_all(lower, f),
                shifted: shifted
                    .iter()
                    .map(|s| ShiftedTpl { arg: f(&s.arg), offset: s.offset.clone(), step: s.step, pow: s.pow })
                    .collect(),
                z: f(z),
            },
        }
    }

    fn monos(&self) -> Vec<&Mono> {
        let (sigma, upper, lower, z, extra): (_, _, _, _, Vec<&Mono>) = match self {
            SeriesTpl::Std { sigma, upper, lower, z, .. } => (sigma, upper, lower, z, vec![]),
            SeriesTpl::Shifted { sigma, upper, lower, shifted, z } => {
                (sigma, upper, lower, z, shifted.iter().map(|s| &s.arg).collect())
            }
        };
        sigma.iter().chain(upper).chain(lower).chain(std::iter::once(z)).chain(extra).collect()
    }
}

impl Term {
    pub fn map(&self, f: &dyn Fn(&Mono) -> Mono) -> Term {
        Term { factors: self.factors.iter().map(|x| x.map(f)).collect(), series: self.series.as_ref().map(|s| s.map(f)) }
    }

    pub fn monos(&self) -> Vec<&Mono> {
        let mut out: Vec<&Mono> = self.factors.iter().flat_map(|f| f.monos()).collect();
        if let Some(s) = &self.series {
            out.extend(s.monos());
        }
        out
    }

    /// Parameter symbols occurring anywhere in the term.
    pub fn symbols(&self) -> BTreeSet<String> {
        self.monos().into_iter().flat_map(|m| m.symbols()).collect()
    }

    /// Shape symbols occurring in exponents and lengths.
    pub fn shape_symbols(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.monos().into_iter().flat_map(|m| m.q.terms.keys().cloned()).collect();
        for f in &self.factors {
            match f {
                Factor::Poch { len: Len::Fin(l), .. } | Factor::Pow { exp: l, .. } => out.extend(l.terms.keys().cloned()),
                _ => {}
            }
        }
        if let Some(SeriesTpl::Shifted { shifted, .. }) = &self.series {
            for s in shifted {
                out.extend(s.offset.terms.keys().cloned());
            }
        }
        out
    }

    pub fn swap(&self, a: &str, b: &str) -> Term {
        self.map(&|m| m.swap(a, b))
    }
}

/// The instances of an idem sum: the template itself, then one copy per
/// tail symbol with that symbol interchanged with the head.
pub fn expand_idem(template: &Term, group: &IdemGroup) -> Result<Vec<Term>> {
    let syms = template.symbols();
    if !syms.contains(&group.head) {
        return Err(Error::SymbolMissing(format!("idem head `{}` not in template", group.head)));
    }
    let mut seen = BTreeSet::new();
    for t in &group.tail {
        if t == &group.head || !seen.insert(t) {
            return Err(Error::SymbolMissing(format!("idem tail symbol `{t}` repeated or equal to the head")));
        }
        if !syms.contains(t) {
            return Err(Error::SymbolMissing(format!("idem tail symbol `{t}` not in template")));
        }
    }
    let mut out = vec![template.clone()];
    out.extend(group.tail.iter().map(|t| template.swap(&group.head, t)));
    Ok(out)
}

impl Group {
    pub fn expand(&self) -> Result<Vec<Term>> {
        match &self.idem {
            None => Ok(vec![self.term.clone()]),
            Some(g) => expand_idem(&self.term, g),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> Mono {
        Mono::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(m("a^2*q/(b*c*d*e)").to_string(), "a^2 q/(bcde)");
        assert_eq!(m("a*q/b").to_string(), "aq/b");
        assert_eq!(m("-h/a").to_string(), "-h/a");
        assert_eq!(m("q^(1-n)/a").to_string(), "q^{1-n}/a");
        assert_eq!(m("q^(N-m1-1)").to_string(), "q^{N-m1-1}");
        assert_eq!(m("b3*b4/a").to_string(), "b3 b4/a");
        assert_eq!(m("1").to_string(), "1");
        assert_eq!(m("q^2/q").to_string(), "q");
    }

    #[test]
    fn algebra() {
        let x = m("a^2*q/(b*c)");
        assert_eq!(x.mul(&x.inv()), Mono::one());
        assert_eq!(x.subst("a", &m("b*c")), m("b*c*q"));
        assert_eq!(x.swap("a", "b"), m("b^2*q/(a*c)"));
        assert_eq!(m("-a").powi(2), m("a^2"));
    }

    #[test]
    fn linear_exponents() {
        let x = m("q^(N-m1-m2-1)");
        let shape: Shape = [("N".to_string(), 2), ("m1".to_string(), 1), ("m2".to_string(), 3)].into_iter().collect();
        assert_eq!(x.q.eval(&shape).unwrap(), -3);
        assert_eq!(m("q^(N-(m1+m2)-1)"), x);
        assert!(m("q^(2n)").q.eval(&Shape::new()).is_err());
        assert!(Mono::parse("a^n").is_err());
        assert!(Mono::parse("a**b").is_err());
    }

    fn tpl(a: &str, b: &str) -> Term {
        Term {
            factors: vec![Factor::Poch { arg: m(&format!("{a}/{b}")), base: 1, len: Len::Inf, pow: -1 }],
            series: None,
        }
    }

    #[test]
    fn idem_instances() {
        let t = tpl("b", "c");
        let two = expand_idem(&t, &IdemGroup { head: "b".into(), tail: vec!["c".into()] }).unwrap();
        assert_eq!(two, vec![tpl("b", "c"), tpl("c", "b")]);
        let three = Term { factors: [tpl("b", "c").factors, tpl("d", "a").factors].concat(), series: None };
        let g = IdemGroup { head: "b".into(), tail: vec!["c".into(), "d".into()] };
        assert_eq!(expand_idem(&three, &g).unwrap().len(), 3);
        let missing = IdemGroup { head: "b".into(), tail: vec!["z".into()] };
        assert!(matches!(expand_idem(&t, &missing), Err(Error::SymbolMissing(_))));
        assert_eq!(t.swap("b", "c").swap("b", "c"), t);
    }
}
