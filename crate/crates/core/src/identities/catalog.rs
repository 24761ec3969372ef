//! The identity catalog.

use super::expr::{Factor, Group, IdemGroup, Len, Lin, Mono, SeriesTpl, Shape, ShiftedTpl, Term};
use super::{Descriptor, Draw, Instance, ShapeParam};
use crate::series::Kind;

fn m(s: &str) -> Mono {
    Mono::parse(s).unwrap_or_else(|e| panic!("catalog monomial: {e}"))
}

fn ms<S: AsRef<str>>(v: &[S]) -> Vec<Mono> {
    v.iter().map(|s| m(s.as_ref())).collect()
}

fn lin(s: &str) -> Lin {
    m(&format!("q^({s})")).q
}

/// `prefix{from}`, ..., `prefix{to}` (empty when to < from).
fn names(prefix: &str, from: i64, to: i64) -> Vec<String> {
    (from..=to).map(|i| format!("{prefix}{i}")).collect()
}

/// `x1*x2*...`, or `1`.
fn prod<S: AsRef<str>>(xs: &[S]) -> String {
    if xs.is_empty() {
        "1".into()
    } else {
        xs.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().join("*")
    }
}

/// `m1+...+ms`, or `0`.
fn msum(s: i64) -> String {
    if s == 0 {
        "0".into()
    } else {
        names("m", 1, s).join("+")
    }
}

fn each<F: Fn(&str) -> String>(xs: &[String], f: F) -> Vec<String> {
    xs.iter().map(|x| f(x)).collect()
}

fn cat(parts: &[Vec<String>]) -> Vec<String> {
    parts.concat()
}

fn v(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn get(shape: &Shape, k: &str) -> i64 {
    shape.get(k).copied().unwrap_or_else(|| panic!("shape symbol `{k}` missing"))
}

#[derive(Default)]
struct Pre(Vec<Factor>);

impl Pre {
    fn poch<S: AsRef<str>>(mut self, xs: &[S], base: u32, len: Len, pow: i32) -> Self {
        for x in xs {
            self.0.push(Factor::Poch { arg: m(x.as_ref()), base, len: len.clone(), pow });
        }
        self
    }

    fn num<S: AsRef<str>>(self, xs: &[S]) -> Self {
        self.poch(xs, 1, Len::Inf, 1)
    }

    fn den<S: AsRef<str>>(self, xs: &[S]) -> Self {
        self.poch(xs, 1, Len::Inf, -1)
    }

    fn num2<S: AsRef<str>>(self, xs: &[S]) -> Self {
        self.poch(xs, 2, Len::Inf, 1)
    }

    fn den2<S: AsRef<str>>(self, xs: &[S]) -> Self {
        self.poch(xs, 2, Len::Inf, -1)
    }

    fn num_n<S: AsRef<str>>(self, xs: &[S], n: &str) -> Self {
        self.poch(xs, 1, Len::Fin(lin(n)), 1)
    }

    fn den_n<S: AsRef<str>>(self, xs: &[S], n: &str) -> Self {
        self.poch(xs, 1, Len::Fin(lin(n)), -1)
    }

    fn pow(mut self, base: &str, exp: &str) -> Self {
        self.0.push(Factor::Pow { base: m(base), exp: lin(exp) });
        self
    }

    fn sum(mut self, terms: &[&str], pow: i32) -> Self {
        self.0.push(Factor::Sum { terms: ms(terms), pow });
        self
    }

    /// `prod_i (num_i;q)_{m_i} / (den_i;q)_{m_i}` over the Chu parameters,
    /// where `num`/`den` map `(h, m)` to argument lists.
    fn chu<N, D>(mut self, s: i64, num: N, den: D) -> Self
    where
        N: Fn(&str, &str) -> Vec<String>,
        D: Fn(&str, &str) -> Vec<String>,
    {
        for i in 1..=s {
            let (h, mi) = (format!("h{i}"), format!("m{i}"));
            self = self.num_n(&num(&h, &mi), &mi).den_n(&den(&h, &mi), &mi);
        }
        self
    }

    fn times(self, s: SeriesTpl) -> Term {
        Term { factors: self.0, series: Some(s) }
    }

    fn only(self) -> Term {
        Term { factors: self.0, series: None }
    }
}

fn std<S: AsRef<str>>(kind: Kind, sigma: Option<&str>, up: &[S], lo: &[S], z: &str) -> SeriesTpl {
    SeriesTpl::Std { kind, sigma: sigma.map(m), upper: ms(up), lower: ms(lo), z: m(z) }
}

fn phi<S: AsRef<str>>(up: &[S], lo: &[S], z: &str) -> SeriesTpl {
    std(Kind::Unilateral, None, up, lo, z)
}

fn psi<S: AsRef<str>>(up: &[S], lo: &[S], z: &str) -> SeriesTpl {
    std(Kind::Bilateral, None, up, lo, z)
}

/// Very-well-poised phi; `up` excludes the special parameter.
fn vphi<S: AsRef<str>>(sigma: &str, up: &[S], lo: &[S], z: &str) -> SeriesTpl {
    std(Kind::Unilateral, Some(sigma), up, lo, z)
}

fn vpsi<S: AsRef<str>>(sigma: &str, up: &[S], lo: &[S], z: &str) -> SeriesTpl {
    std(Kind::Bilateral, Some(sigma), up, lo, z)
}

/// `(arg;q)_{n + step k}^pow`.
fn sh(arg: &str, n: &str, step: i64, pow: i32) -> ShiftedTpl {
    ShiftedTpl { arg: m(arg), offset: lin(n), step, pow }
}

fn g(t: Term) -> Group {
    Group { term: t, idem: None }
}

fn idem(t: Term, head: &str, tail: Vec<String>) -> Group {
    if tail.is_empty() {
        return g(t);
    }
    Group { term: t, idem: Some(IdemGroup { head: head.into(), tail }) }
}

impl Instance {
    fn new<S: AsRef<str>>(params: &[S]) -> Self {
        Instance {
            params: params.iter().map(|s| s.as_ref().to_string()).collect(),
            derived: vec![],
            equalities: vec![],
            domain: vec![],
            lhs: vec![],
            rhs: vec![],
            draws: vec![],
            q_range: (0.2, 0.5),
        }
    }

    fn derive(mut self, name: &str, val: &str) -> Self {
        self.derived.push((name.into(), m(val)));
        self
    }

    fn equal(mut self, l: &str, r: &str) -> Self {
        self.equalities.push((m(l), m(r)));
        self
    }

    fn chain(mut self, c: &[&str]) -> Self {
        self.domain.push(ms(c));
        self
    }

    fn lhs(mut self, g: Group) -> Self {
        self.lhs.push(g);
        self
    }

    fn rhs(mut self, g: Group) -> Self {
        self.rhs.push(g);
        self
    }

    fn draw(mut self, name: &str, anchor: &str, lo: f64, hi: f64) -> Self {
        self.draws.push(Draw { name: name.into(), anchor: m(anchor), lo, hi });
        self
    }

    fn draws<S: AsRef<str>>(mut self, names: &[S], lo: f64, hi: f64) -> Self {
        for n in names {
            self = self.draw(n.as_ref(), "1", lo, hi);
        }
        self
    }

    fn q(mut self, lo: f64, hi: f64) -> Self {
        self.q_range = (lo, hi);
        self
    }
}

fn q_binomial(_: &Shape) -> Instance {
    Instance::new(&["a", "z"])
        .chain(&["z", "1"])
        .lhs(g(Term { factors: vec![], series: Some(phi(&["a"], &[], "z")) }))
        .rhs(g(Pre::default().num(&["a*z"]).den(&["z"]).only()))
        .draws(&["a"], 0.3, 2.0)
        .draws(&["z"], 0.1, 0.85)
}

fn q_binomial_terminating(_: &Shape) -> Instance {
    Instance::new(&["z"])
        .lhs(g(Pre::default().times(phi(&["q^(-n)"], &[], "z"))))
        .rhs(g(Pre::default().num_n(&["z*q^(-n)"], "n").only()))
        .draws(&["z"], 0.2, 2.0)
}

fn ramanujan_1psi1(_: &Shape) -> Instance {
    Instance::new(&["a", "b", "z"])
        .chain(&["b/a", "z", "1"])
        .lhs(g(Pre::default().times(psi(&["a"], &["b"], "z"))))
        .rhs(g(Pre::default().num(&["q", "b/a", "a*z", "q/(a*z)"]).den(&["b", "q/a", "z", "b/(a*z)"]).only()))
        .draws(&["a"], 1.0, 3.0)
        .draws(&["z"], 0.3, 0.85)
        .draw("b", "a*z", 0.05, 0.8)
}

fn pfaff_saalschutz(_: &Shape) -> Instance {
    Instance::new(&["a", "b", "c"])
        .equal("c*(a*b*q^(1-n)/c)", "a*b*q^(-n)*q")
        .lhs(g(Pre::default().times(phi(&["a", "b", "q^(-n)"], &["c", "a*b*q^(1-n)/c"], "q"))))
        .rhs(g(Pre::default().num_n(&["c/a", "c/b"], "n").den_n(&["c", "c/(a*b)"], "n").only()))
        .draws(&["a", "b", "c"], 0.5, 2.0)
}

fn pfaff_saalschutz_nt(_: &Shape) -> Instance {
    Instance::new(&["a", "b", "c", "e", "f"])
        .equal("e*f", "a*b*c*q")
        .lhs(g(Pre::default().times(phi(&["a", "b", "c"], &["e", "f"], "q"))))
        .lhs(g(Pre::default()
            .num(&["q/e", "a", "b", "c", "f*q/e"])
            .den(&["e/q", "a*q/e", "b*q/e", "c*q/e", "f"])
            .times(phi(&["a*q/e", "b*q/e", "c*q/e"], &["q^2/e", "f*q/e"], "q"))))
        .rhs(g(Pre::default().num(&["q/e", "f/a", "f/b", "f/c"]).den(&["a*q/e", "b*q/e", "c*q/e", "f"]).only()))
        .draws(&["a", "b", "c", "e"], 0.5, 2.0)
}

fn heine_euler(_: &Shape) -> Instance {
    Instance::new(&["a", "b", "c", "z"])
        .chain(&["z", "1"])
        .chain(&["a*b*z/c", "1"])
        .lhs(g(Pre::default().times(phi(&["a", "b"], &["c"], "z"))))
        .rhs(g(Pre::default().num(&["a*b*z/c"]).den(&["z"]).times(phi(&["c/a", "c/b"], &["c"], "a*b*z/c"))))
        .draws(&["a", "b"], 0.5, 1.5)
        .draws(&["c"], 0.8, 2.0)
        .draws(&["z"], 0.05, 0.6)
}

fn rogers_6phi5(_: &Shape) -> Instance {
    Instance::new(&["a", "b", "c", "d"])
        .chain(&["a*q/(b*c*d)", "1"])
        .lhs(g(Pre::default().times(vphi("a", &["b", "c", "d"], &["a*q/b", "a*q/c", "a*q/d"], "a*q/(b*c*d)"))))
        .rhs(g(Pre::default()
            .num(&["a*q", "a*q/(b*c)", "a*q/(b*d)", "a*q/(c*d)"])
            .den(&["a*q/b", "a*q/c", "a*q/d", "a*q/(b*c*d)"])
            .only()))
        .draws(&["a"], 0.5, 2.0)
        .draws(&["b", "c", "d"], 1.0, 3.0)
}

fn jackson_8phi7(_: &Shape) -> Instance {
    Instance::new(&["a", "b", "c", "d"])
        .lhs(g(Pre::default().times(vphi(
            "a",
            &["b", "c", "d", "a^2*q^(1+n)/(b*c*d)", "q^(-n)"],
            &["a*q/b", "a*q/c", "a*q/d", "b*c*d*q^(-n)/a", "a*q^(1+n)"],
            "q",
        ))))
        .rhs(g(Pre::default()
            .num_n(&["a*q", "a*q/(b*c)", "a*q/(b*d)", "a*q/(c*d)"], "n")
            .den_n(&["a*q/b", "a*q/c", "a*q/d", "a*q/(b*c*d)"], "n")
            .only()))
        .draws(&["a", "b", "c", "d"], 0.5, 2.0)
}

fn bailey_6psi6(_: &Shape) -> Instance {
    let bs = v(&["b", "c", "d", "e"]);
    Instance::new(&["a", "b", "c", "d", "e"])
        .chain(&["a^2*q/(b*c*d*e)", "1"])
        .lhs(g(Pre::default().times(vpsi("a", &bs, &each(&bs, |x| format!("a*q/{x}")), "a^2*q/(b*c*d*e)"))))
        .rhs(g(Pre::default()
            .num(&["a*q", "a*q/(b*c)", "a*q/(b*d)", "a*q/(b*e)", "a*q/(c*d)", "a*q/(c*e)", "a*q/(d*e)", "q", "q/a"])
            .den(&["a*q/b", "a*q/c", "a*q/d", "a*q/e", "q/b", "q/c", "q/d", "q/e", "a^2*q/(b*c*d*e)"])
            .only()))
        .draws(&["a"], 0.5, 2.0)
        .draws(&bs, 1.0, 3.0)
}

fn bailey_8phi7_nt(_: &Shape) -> Instance {
    let ps = v(&["b", "c", "d", "e", "f"]);
    Instance::new(&["a", "b", "c", "d", "e", "f"])
        .equal("a^2*q", "b*c*d*e*f")
        .lhs(g(Pre::default().times(vphi("a", &ps, &each(&ps, |x| format!("a*q/{x}")), "q"))))
        .lhs(g(Pre::default()
            .num(&["a*q", "c", "d", "e", "f", "b/a", "b*q/c", "b*q/d", "b*q/e", "b*q/f"])
            .den(&["a/b", "a*q/c", "a*q/d", "a*q/e", "a*q/f", "b*c/a", "b*d/a", "b*e/a", "b*f/a", "b^2*q/a"])
            .times(vphi(
                "b^2/a",
                &["b", "b*c/a", "b*d/a", "b*e/a", "b*f/a"],
                &["b*q/a", "b*q/c", "b*q/d", "b*q/e", "b*q/f"],
                "q",
            ))))
        .rhs(g(Pre::default()
            .num(&["a*q", "b/a", "a*q/(c*d)", "a*q/(c*e)", "a*q/(c*f)", "a*q/(d*e)", "a*q/(d*f)", "a*q/(e*f)"])
            .den(&["a*q/c", "a*q/d", "a*q/e", "a*q/f", "b*c/a", "b*d/a", "b*e/a", "b*f/a"])
            .only()))
        .draws(&["a", "b", "c", "d", "e"], 0.5, 2.0)
}

fn bailey_8phi7_tf(_: &Shape) -> Instance {
    let ps = v(&["b", "c", "d", "e", "f"]);
    Instance::new(&["a", "b", "c", "d", "e", "f"])
        .derive("lambda", "a^2*q/(b*c*d)")
        .chain(&["a^2*q^2/(b*c*d*e*f)", "1"])
        .chain(&["a*q/(e*f)", "1"])
        .lhs(g(Pre::default().times(vphi("a", &ps, &each(&ps, |x| format!("a*q/{x}")), "a^2*q^2/(b*c*d*e*f)"))))
        .rhs(g(Pre::default()
            .num(&["a*q", "a*q/(e*f)", "lambda*q/e", "lambda*q/f"])
            .den(&["a*q/e", "a*q/f", "lambda*q", "lambda*q/(e*f)"])
            .times(vphi(
                "lambda",
                &["lambda*b/a", "lambda*c/a", "lambda*d/a", "e", "f"],
                &["a*q/b", "a*q/c", "a*q/d", "lambda*q/e", "lambda*q/f"],
                "a*q/(e*f)",
            ))))
        .draws(&["a"], 0.5, 1.0)
        .draws(&["b", "c", "d"], 0.7, 1.5)
        .draws(&["e", "f"], 1.5, 3.0)
}

fn mjackson_8psi8(_: &Shape) -> Instance {
    let bs = v(&["b", "c", "d", "e", "f", "g"]);
    let rest = v(&["d", "e", "f", "g"]);
    let z = "a^3*q^2/(b*c*d*e*f*g)";
    let t = Pre::default()
        .num(&cat(&[
            v(&["q", "a*q", "q/a", "c", "c/a"]),
            each(&rest, |x| format!("b*q/{x}")),
            each(&rest, |x| format!("a*q/(b*{x})")),
        ]))
        .den(&cat(&[
            v(&["q/b"]),
            each(&rest, |x| format!("q/{x}")),
            v(&["a*q/b"]),
            each(&rest, |x| format!("a*q/{x}")),
            v(&["c/b", "b*c/a", "b^2*q/a"]),
        ]))
        .times(vphi(
            "b^2/a",
            &each(&bs[1..], |x| format!("b*{x}/a")),
            &each(&bs[1..], |x| format!("b*q/{x}")),
            z,
        ));
    Instance::new(&["a", "b", "c", "d", "e", "f", "g"])
        .chain(&[z, "1"])
        .lhs(g(Pre::default().times(vpsi("a", &bs, &each(&bs, |x| format!("a*q/{x}")), z))))
        .rhs(idem(t, "b", v(&["c"])))
        .draws(&["a"], 0.5, 2.0)
        .draws(&bs, 1.0, 2.5)
}

fn tenpsi10(_: &Shape) -> Instance {
    let bs = v(&["b", "c", "d", "e", "f", "g", "h", "y"]);
    let rest = v(&["e", "f", "g", "h", "y"]);
    let z = "a^4*q^3/(b*c*d*e*f*g*h*y)";
    let t = Pre::default()
        .num(&cat(&[
            v(&["q", "a*q", "q/a", "c", "c/a", "d", "d/a"]),
            each(&rest, |x| format!("b*q/{x}")),
            each(&rest, |x| format!("a*q/(b*{x})")),
        ]))
        .den(&cat(&[
            v(&["q/b"]),
            each(&rest, |x| format!("q/{x}")),
            v(&["a*q/b"]),
            each(&rest, |x| format!("a*q/{x}")),
            v(&["b*c/a", "b*d/a", "c/b", "d/b", "b^2*q/a"]),
        ]))
        .times(vphi(
            "b^2/a",
            &each(&bs[1..], |x| format!("b*{x}/a")),
            &each(&bs[1..], |x| format!("b*q/{x}")),
            z,
        ));
    Instance::new(&["a", "b", "c", "d", "e", "f", "g", "h", "y"])
        .chain(&[z, "1"])
        .lhs(g(Pre::default().times(vpsi("a", &bs, &each(&bs, |x| format!("a*q/{x}")), z))))
        .rhs(idem(t, "b", v(&["c", "d"])))
        .draws(&["a"], 0.5, 2.0)
        .draws(&bs, 1.0, 2.2)
}

fn slater_vwp_2r(shape: &Shape) -> Instance {
    let r = get(shape, "r");
    let bs = names("b", 3, 2 * r);
    let mid = names("b", 4, r);
    let hi = names("b", r + 1, 2 * r);
    let z = format!("a^{}*q^{}/({})", r - 1, r - 2, prod(&bs));
    let t = Pre::default()
        .num(&cat(&[
            v(&["q", "a*q", "q/a"]),
            mid.clone(),
            each(&mid, |x| format!("{x}/a")),
            each(&hi, |x| format!("b3*q/{x}")),
            each(&hi, |x| format!("a*q/(b3*{x})")),
        ]))
        .den(&cat(&[
            v(&["q/b3"]),
            each(&hi, |x| format!("q/{x}")),
            v(&["a*q/b3"]),
            each(&hi, |x| format!("a*q/{x}")),
            each(&mid, |x| format!("{x}/b3")),
            each(&mid, |x| format!("b3*{x}/a")),
            v(&["b3^2*q/a"]),
        ]))
        .times(vphi(
            "b3^2/a",
            &each(&bs[1..], |x| format!("b3*{x}/a")),
            &each(&bs[1..], |x| format!("b3*q/{x}")),
            &z,
        ));
    Instance::new(&cat(&[v(&["a"]), bs.clone()]))
        .chain(&[&z, "1"])
        .lhs(g(Pre::default().times(vpsi("a", &bs, &each(&bs, |x| format!("a*q/{x}")), &z))))
        .rhs(idem(t, "b3", mid.clone()))
        .draws(&["a"], 0.5, 1.5)
        .draws(&bs, 1.0, 2.0)
}

/// The well-poised 2r psi 2r with b1..b2r and its argument.
fn wp_lhs(r: i64) -> (Vec<String>, String, SeriesTpl) {
    let bs = names("b", 1, 2 * r);
    let z = format!("-a^{r}*q^{r}/({})", prod(&bs));
    let s = psi(&bs, &each(&bs, |x| format!("a*q/{x}")), &z);
    (bs, z, s)
}

fn slater_wp_2r(shape: &Shape) -> Instance {
    let r = get(shape, "r");
    let (bs, z, lhs) = wp_lhs(r);
    let mid = names("b", 2, r);
    let hi = names("b", r + 1, 2 * r);
    let t = Pre::default()
        .num(&cat(&[
            v(&["q", "a", "q/a"]),
            mid.clone(),
            each(&mid, |x| format!("{x}/a")),
            each(&hi, |x| format!("b1*q/{x}")),
            each(&hi, |x| format!("a*q/(b1*{x})")),
        ]))
        .den(&cat(&[
            v(&["q/b1"]),
            each(&hi, |x| format!("q/{x}")),
            v(&["a*q/b1"]),
            each(&hi, |x| format!("a*q/{x}")),
            each(&mid, |x| format!("{x}/b1")),
            each(&mid, |x| format!("b1*{x}/a")),
            v(&["b1^2*q/a"]),
        ]))
        .num2(&["b1^2*q^2/a", "a*q^2/b1^2"])
        .den2(&["q^2/a", "a"])
        .times(phi(
            &cat(&[v(&["b1^2/a"]), each(&bs[1..], |x| format!("b1*{x}/a"))]),
            &each(&bs[1..], |x| format!("b1*q/{x}")),
            &z,
        ));
    Instance::new(&cat(&[v(&["a"]), bs.clone()]))
        .chain(&[&z, "1"])
        .lhs(g(Pre::default().times(lhs)))
        .rhs(idem(t, "b1", mid))
        .draws(&["a"], 0.5, 2.0)
        .draws(&bs, 1.0, 2.0)
}

/// Prefactor shared by the general well-poised forms: the `a_1` term with
/// `as_` = a_2..a_r and `bs` the series parameters.
fn wp_general_pre(a1: &str, rest: &[String], bs: &[String], vwp: bool) -> Pre {
    let (front, sq, aq1) = if vwp {
        (v(&["a*q", "q/a"]), format!("{a1}^2*q/a"), format!("a*q/{a1}^2"))
    } else {
        (v(&["a", "q/a"]), format!("{a1}^2/a"), format!("a*q/{a1}^2"))
    };
    let pre = Pre::default()
        .num(&cat(&[
            front,
            rest.to_vec(),
            each(rest, |x| format!("q/{x}")),
            each(rest, |x| format!("{x}/a")),
            each(rest, |x| format!("a*q/{x}")),
            each(bs, |x| format!("{a1}*q/{x}")),
            each(bs, |x| format!("a*q/({a1}*{x})")),
        ]))
        .den(&cat(&[
            each(bs, |x| format!("q/{x}")),
            each(bs, |x| format!("a*q/{x}")),
            each(rest, |x| format!("{x}/{a1}")),
            each(rest, |x| format!("{a1}*q/{x}")),
            each(rest, |x| format!("{a1}*{x}/a")),
            each(rest, |x| format!("a*q/({a1}*{x})")),
            vec![sq, aq1],
        ]));
    if vwp {
        pre
    } else {
        pre.num2(&[format!("{a1}^2/a"), format!("a*q^2/{a1}^2")]).den2(&["q^2/a", "a"])
    }
}

fn slater_wp_2r_general(shape: &Shape) -> Instance {
    let r = get(shape, "r");
    let (bs, z, lhs) = wp_lhs(r);
    let as_ = names("a", 1, r);
    let rest = names("a", 2, r);
    let t = wp_general_pre("a1", &rest, &bs, false).times(psi(
        &each(&bs, |x| format!("a1*{x}/a")),
        &each(&bs, |x| format!("a1*q/{x}")),
        &z,
    ));
    Instance::new(&cat(&[v(&["a"]), as_.clone(), bs.clone()]))
        .chain(&[&z, "1"])
        .lhs(g(Pre::default().times(lhs)))
        .rhs(idem(t, "a1", rest))
        .draws(&["a"], 0.5, 2.0)
        .draws(&as_, 0.7, 1.5)
        .draws(&bs, 1.0, 2.0)
}

fn slater_rpsir(shape: &Shape) -> Instance {
    let r = get(shape, "r");
    let as_ = names("a", 1, r);
    let bs = names("b", 1, r);
    let rest = names("a", 2, r);
    let w = format!("{}/({}*z)", prod(&bs), prod(&as_));
    let t = Pre::default()
        .num(&cat(&[v(&["q"]), rest.clone(), each(&bs, |x| format!("{x}/a1")), v(&["a1*z", "q/(a1*z)"])]))
        .den(&cat(&[v(&["q/a1"]), each(&rest, |x| format!("{x}/a1")), bs.clone(), v(&["z", "q/z"])]))
        .times(phi(&each(&bs, |x| format!("a1*q/{x}")), &each(&rest, |x| format!("a1*q/{x}")), &w));
    let ratio = format!("{}/({})", prod(&bs), prod(&as_));
    Instance::new(&cat(&[as_.clone(), bs.clone(), v(&["z"])]))
        .chain(&[&ratio, "z", "1"])
        .lhs(g(Pre::default().times(psi(&as_, &bs, "z"))))
        .rhs(idem(t, "a1", rest))
        .draws(&as_, 1.0, 2.0)
        .draws(&bs, 0.3, 0.8)
        .draws(&["z"], 0.3, 0.9)
}

/// RHS term of the general r psi r transformation in either form, with
/// optional Chu parameters (count `s`, used by the Chu generalization).
fn rpsir_general_term(r: i64, form: i64, s: i64) -> Term {
    let as_ = names("a", 1, r);
    let bs = names("b", 1, r);
    let rest = names("c", 2, r);
    let hs = names("h", 1, s);
    let pre = Pre::default().chu(s, |h, _| vec![format!("{h}*q/c1")], |h, _| vec![h.to_string()]);
    if form == 0 {
        pre.num(&cat(&[
            each(&as_, |x| format!("c1/{x}")),
            rest.clone(),
            each(&rest, |x| format!("q/{x}")),
            each(&bs, |x| format!("{x}*q/c1")),
            v(&["A*c1*z", "q/(A*c1*z)"]),
        ]))
        .den(&cat(&[
            each(&as_, |x| format!("q/{x}")),
            each(&rest, |x| format!("c1/{x}")),
            each(&rest, |x| format!("{x}*q/c1")),
            bs.clone(),
            v(&["A*z*q", "1/(A*z)"]),
        ]))
        .times(psi(
            &cat(&[
                each(&as_, |x| format!("{x}*q/c1")),
                (1..=s).map(|i| format!("h{i}*q^(1+m{i})/c1")).collect(),
            ]),
            &cat(&[each(&bs, |x| format!("{x}*q/c1")), each(&hs, |h| format!("{h}*q/c1"))]),
            "z",
        ))
    } else {
        let w = format!("{}/({}*z)", prod(&bs), prod(&names("c", 1, r)));
        pre.num(&cat(&[
            each(&as_, |x| format!("c1*q/{x}")),
            rest.clone(),
            each(&rest, |x| format!("q/{x}")),
            each(&bs, |x| format!("{x}/c1")),
            v(&["c1*z", "q/(c1*z)"]),
        ]))
        .den(&cat(&[
            each(&as_, |x| format!("q/{x}")),
            each(&rest, |x| format!("c1*q/{x}")),
            each(&rest, |x| format!("{x}/c1")),
            bs.clone(),
            v(&["z", "q/z"]),
        ]))
        .times(psi(&each(&bs, |x| format!("c1*q/{x}")), &each(&as_, |x| format!("c1*q/{x}")), &w))
    }
}

fn slater_rpsir_general(shape: &Shape) -> Instance {
    let (r, form) = (get(shape, "r"), get(shape, "form"));
    let as_ = names("a", 1, r);
    let bs = names("b", 1, r);
    let cs = names("c", 1, r);
    let ratio = format!("{}/({})", prod(&bs), prod(&as_));
    let arg = if form == 0 { "z".to_string() } else { "z/A".to_string() };
    let inst = Instance::new(&cat(&[as_.clone(), bs.clone(), cs.clone(), v(&["z"])]))
        .derive("A", &format!("{}/({})", prod(&as_), prod(&cs)))
        .chain(&[&ratio, &arg, "1"])
        .lhs(g(Pre::default().times(psi(&as_, &bs, &arg))))
        .rhs(idem(rpsir_general_term(r, form, 0), "c1", names("c", 2, r)))
        .draws(&as_, 1.0, 2.0)
        .draws(&bs, 0.3, 0.8)
        .draws(&cs, 0.5, 2.0);
    if form == 0 {
        inst.draws(&["z"], 0.3, 0.9)
    } else {
        inst.draw("z", "A", 0.3, 0.9)
    }
}

/// Chu parameter lists: `h_i q^{m_i}` and `h_i`.
fn chu_pairs(s: i64) -> (Vec<String>, Vec<String>) {
    ((1..=s).map(|i| format!("h{i}*q^(m{i})")).collect(), names("h", 1, s))
}

fn chu_2s_tf(shape: &Shape) -> Instance {
    let s = get(shape, "s");
    let big_m = msum(s);
    let hs = names("h", 1, s);
    let (up_h, lo_h) = chu_pairs(s);
    let w = format!("c*d*q^(N-({big_m})-1)/b");
    Instance::new(&cat(&[v(&["a", "b", "c", "d"]), hs.clone()]))
        .chain(&["q/a", "q^N", &format!("b*q^({big_m}+1)/(c*d)")])
        .lhs(g(Pre::default().times(psi(&cat(&[v(&["a", "b"]), up_h]), &cat(&[v(&["c", "d"]), lo_h]), "q^(1-N)/a"))))
        .rhs(g(Pre::default()
            .pow("b", "N")
            .num(&["q", "b*q/a", "c/b", "d/b"])
            .den(&["q/a", "q/b", "c", "d"])
            .chu(s, |h, _| vec![format!("{h}/b")], |h, _| vec![h.to_string()])
            .times(phi(
                &cat(&[v(&["b*q/c", "b*q/d"]), each(&hs, |h| format!("b*q/{h}"))]),
                &cat(&[v(&["b*q/a"]), (1..=s).map(|i| format!("b*q^(1-m{i})/h{i}")).collect()]),
                &w,
            ))))
        .draws(&["c", "d"], 0.5, 1.5)
        .draws(&hs, 0.5, 2.0)
        .draw("a", "q^(1-N)", 1.2, 5.0)
        .draw("b", &format!("c*d*q^(N-({big_m})-1)"), 1.2, 5.0)
        .q(0.3, 0.45)
}

fn chu_vwp_sum(shape: &Shape) -> Instance {
    let s = get(shape, "s");
    let big_m = msum(s);
    let hs = names("h", 1, s);
    let z = format!("a*q^(1-({big_m}))/(b*c)");
    let up = cat(&[v(&["b", "c", "d", "a/d"]), hs.clone(), (1..=s).map(|i| format!("a*q^(1+m{i})/h{i}")).collect()]);
    let lo = cat(&[
        v(&["a*q/b", "a*q/c", "a*q/d", "d*q"]),
        each(&hs, |h| format!("a*q/{h}")),
        (1..=s).map(|i| format!("h{i}*q^(-m{i})")).collect(),
    ]);
    Instance::new(&cat(&[v(&["a", "b", "c", "d"]), hs.clone()]))
        .chain(&[&z, "1"])
        .lhs(g(Pre::default().times(vpsi("a", &up, &lo, &z))))
        .rhs(g(Pre::default()
            .num(&["q", "q", "a*q", "q/a", "a*q/(b*d)", "a*q/(c*d)", "d*q/b", "d*q/c"])
            .den(&["a*q/b", "a*q/c", "a*q/d", "d*q/a", "q/b", "q/c", "q/d", "d*q"])
            .chu(
                s,
                |h, _| vec![format!("a*q/(d*{h})"), format!("d*q/{h}")],
                |h, _| vec![format!("a*q/{h}"), format!("q/{h}")],
            )
            .only()))
        .draws(&["a", "c", "d"], 0.5, 2.0)
        .draws(&hs, 0.5, 2.0)
        .draw("b", &format!("a*q^(1-({big_m}))/c"), 1.2, 5.0)
        .q(0.3, 0.45)
}

fn ckm_general(shape: &Shape) -> Instance {
    let (r, s) = (get(shape, "r"), get(shape, "s"));
    let big_m = msum(s);
    let as_ = names("a", 1, r);
    let bs = names("b", 1, r);
    let cs = names("c", 1, r);
    let hs = names("h", 1, s);
    let (up_h, lo_h) = chu_pairs(s);
    let ratio = format!("{}*q^(-({big_m}))/({})", prod(&bs), prod(&as_));
    Instance::new(&cat(&[as_.clone(), bs.clone(), cs.clone(), hs.clone(), v(&["z"])]))
        .derive("A", &format!("{}/({})", prod(&as_), prod(&cs)))
        .chain(&[&ratio, "z", "1"])
        .lhs(g(Pre::default().times(psi(&cat(&[as_.clone(), up_h]), &cat(&[bs.clone(), lo_h]), "z"))))
        .rhs(idem(rpsir_general_term(r, 0, s), "c1", names("c", 2, r)))
        .draws(&as_, 1.0, 2.0)
        .draws(&bs[1..], 0.5, 1.0)
        .draws(&cs, 0.5, 2.0)
        .draws(&hs, 0.5, 2.0)
        .draws(&["z"], 0.3, 0.85)
        .draw("b1", &format!("{}*q^({big_m})*z/({})", prod(&as_), prod(&bs[1..])), 0.2, 0.8)
        .q(0.3, 0.45)
}

fn ckm_km1(shape: &Shape) -> Instance {
    let (s, form) = (get(shape, "s"), get(shape, "form"));
    let big_m = msum(s);
    let hs = names("h", 1, s);
    let (up_h, lo_h) = chu_pairs(s);
    let z = "e*q^(-N)/(a*b)";
    let pre = Pre::default()
        .pow("e/q", "N")
        .num(&["e/a", "e/b", "c*q/e", "d*q/e"])
        .den(&["q/a", "q/b", "c", "d"])
        .chu(s, |h, _| vec![format!("{h}*q/e")], |h, _| vec![h.to_string()]);
    let t = if form == 0 {
        pre.times(psi(
            &cat(&[v(&["a*q/e", "b*q/e"]), (1..=s).map(|i| format!("h{i}*q^(1+m{i})/e")).collect()]),
            &cat(&[v(&["c*q/e", "d*q/e"]), each(&hs, |h| format!("{h}*q/e"))]),
            z,
        ))
    } else {
        pre.times(psi(
            &cat(&[v(&["e/c", "e/d"]), each(&hs, |h| format!("e/{h}"))]),
            &cat(&[v(&["e/a", "e/b"]), (1..=s).map(|i| format!("e*q^(-m{i})/h{i}")).collect()]),
            &format!("c*d*q^(N-({big_m}))/e"),
        ))
    };
    Instance::new(&cat(&[v(&["a", "b", "c", "d", "e"]), hs.clone()]))
        .chain(&["e/(a*b)", "q^N", &format!("e*q^({big_m})/(c*d)")])
        .lhs(g(Pre::default().times(psi(&cat(&[v(&["a", "b"]), up_h]), &cat(&[v(&["c", "d"]), lo_h]), z))))
        .rhs(g(t))
        .draws(&["a", "d", "e"], 0.5, 2.0)
        .draws(&hs, 0.5, 2.0)
        .draw("b", "e*q^(-N)/a", 1.2, 5.0)
        .draw("c", &format!("e*q^(({big_m})-N)/d"), 0.2, 0.8)
        .q(0.3, 0.45)
}

fn ckm_km2(shape: &Shape) -> Instance {
    let s = get(shape, "s");
    let big_m = msum(s);
    let hs = names("h", 1, s);
    let (up_h, lo_h) = chu_pairs(s);
    Instance::new(&cat(&[v(&["a", "b", "c"]), hs.clone(), v(&["z"])]))
        .chain(&[&format!("b*q^(-({big_m}))/a"), "z", "1"])
        .lhs(g(Pre::default().times(psi(&cat(&[v(&["a"]), up_h]), &cat(&[v(&["b"]), lo_h]), "z"))))
        .rhs(g(Pre::default()
            .num(&["c/a", "b*q/c", "a*z", "q/(a*z)"])
            .den(&["q/a", "b", "a*z*q/c", "c/(a*z)"])
            .chu(s, |h, _| vec![format!("{h}*q/c")], |h, _| vec![h.to_string()])
            .times(psi(
                &cat(&[v(&["a*q/c"]), (1..=s).map(|i| format!("h{i}*q^(1+m{i})/c")).collect()]),
                &cat(&[v(&["b*q/c"]), each(&hs, |h| format!("{h}*q/c"))]),
                "z",
            ))))
        .draws(&["a"], 1.0, 2.0)
        .draws(&["c"], 0.5, 2.0)
        .draws(&hs, 0.5, 2.0)
        .draws(&["z"], 0.3, 0.85)
        .draw("b", &format!("a*q^({big_m})*z"), 0.2, 0.8)
        .q(0.3, 0.45)
}

fn ckm_2psi2_ul1(_: &Shape) -> Instance {
    Instance::new(&["a", "h", "z"])
        .chain(&["q", "z", "1"])
        .lhs(g(Pre::default().times(psi(&["a", "h*q"], &["a*q^2", "h"], "z"))))
        .rhs(g(Pre::default()
            .sum(&["1", "-h/(a*q)", "-z/q", "h*z/(a*q)"], 1)
            .sum(&["1", "-h"], -1)
            .num(&["q^2", "q", "a*z", "q/(a*z)"])
            .den(&["q/a", "a*q^2", "z/q", "q^2/z"])
            .only()))
        .draws(&["a", "h"], 0.5, 2.0)
        .draws(&["z"], 0.56, 0.88)
}

fn ckm_2psi2_ul2(_: &Shape) -> Instance {
    Instance::new(&["a", "h"])
        .chain(&["q", "-h/a", "1"])
        .lhs(g(Pre::default().times(psi(&["a", "h*q"], &["a*q^2", "h"], "-h/a"))))
        .rhs(g(Pre::default()
            .sum(&["1", "-h^2/(a^2*q)"], 1)
            .sum(&["1", "-h"], -1)
            .num(&["q^2", "q", "-h", "-q/h"])
            .den(&["q/a", "a*q^2", "-h/(a*q)", "-a*q^2/h"])
            .only()))
        .draws(&["a"], 0.5, 2.0)
        .draw("h", "a", 0.55, 0.88)
}

/// Chu-type extension lists of a well-poised series with special value `a`
/// and `h_i`: upper `h_i, a q^{1+m_i}/h_i`, lower `aq/h_i, h_i q^{-m_i}`.
fn wp_chu(s: i64, sp: &str) -> (Vec<String>, Vec<String>) {
    let hs = names("h", 1, s);
    (
        cat(&[hs.clone(), (1..=s).map(|i| format!("{sp}*q^(1+m{i})/h{i}")).collect()]),
        cat(&[each(&hs, |h| format!("{sp}*q/{h}")), (1..=s).map(|i| format!("h{i}*q^(-m{i})")).collect()]),
    )
}

fn ckm_wp_general(shape: &Shape) -> Instance {
    let (r, s) = (get(shape, "r"), get(shape, "s"));
    let big_m = msum(s);
    let as_ = names("a", 1, r);
    let rest = names("a", 2, r);
    let bs = names("b", 1, 2 * r);
    let hs = names("h", 1, s);
    let z = format!("-a^{r}*q^({r}-({big_m}))/({})", prod(&bs));
    let (up_h, lo_h) = wp_chu(s, "a");
    let t = wp_general_pre("a1", &rest, &bs, false)
        .chu(
            s,
            |h, _| vec![format!("a1*q/{h}"), format!("a*q/(a1*{h})")],
            |h, _| vec![format!("a*q/{h}"), format!("q/{h}")],
        )
        .times(psi(
            &cat(&[
                each(&bs, |x| format!("a1*{x}/a")),
                each(&hs, |h| format!("a1*{h}/a")),
                (1..=s).map(|i| format!("a1*q^(1+m{i})/h{i}")).collect(),
            ]),
            &cat(&[
                each(&bs, |x| format!("a1*q/{x}")),
                each(&hs, |h| format!("a1*q/{h}")),
                (1..=s).map(|i| format!("a1*h{i}*q^(-m{i})/a")).collect(),
            ]),
            &z,
        ));
    Instance::new(&cat(&[v(&["a"]), as_.clone(), bs.clone(), hs.clone()]))
        .chain(&[&z, "1"])
        .lhs(g(Pre::default().times(psi(
            &cat(&[bs.clone(), up_h]),
            &cat(&[each(&bs, |x| format!("a*q/{x}")), lo_h]),
            &z,
        ))))
        .rhs(idem(t, "a1", rest))
        .draws(&["a"], 0.5, 2.0)
        .draws(&as_, 0.5, 2.0)
        .draws(&bs[1..], 1.0, 2.0)
        .draws(&hs, 0.5, 2.0)
        .draw("b1", &format!("a^{r}*q^({r}-({big_m}))/({})", prod(&bs[1..])), 1.25, 5.0)
        .q(0.3, 0.45)
}

fn ckm_vwp_general(shape: &Shape) -> Instance {
    let (r, s) = (get(shape, "r"), get(shape, "s"));
    let big_m = msum(s);
    let as_ = names("a", 3, r);
    let rest = names("a", 4, r);
    let bs = names("b", 3, 2 * r);
    let hs = names("h", 1, s);
    let z = format!("a^{}*q^({}-({big_m}))/({})", r - 1, r - 2, prod(&bs));
    let (up_h, lo_h) = wp_chu(s, "a");
    let t = wp_general_pre("a3", &rest, &bs, true)
        .chu(
            s,
            |h, _| vec![format!("a3*q/{h}"), format!("a*q/(a3*{h})")],
            |h, _| vec![format!("a*q/{h}"), format!("q/{h}")],
        )
        .times(vpsi(
            "a3^2/a",
            &cat(&[
                each(&bs, |x| format!("a3*{x}/a")),
                each(&hs, |h| format!("a3*{h}/a")),
                (1..=s).map(|i| format!("a3*q^(1+m{i})/h{i}")).collect(),
            ]),
            &cat(&[
                each(&bs, |x| format!("a3*q/{x}")),
                each(&hs, |h| format!("a3*q/{h}")),
                (1..=s).map(|i| format!("a3*h{i}*q^(-m{i})/a")).collect(),
            ]),
            &z,
        ));
    Instance::new(&cat(&[v(&["a"]), as_.clone(), bs.clone(), hs.clone()]))
        .chain(&[&z, "1"])
        .lhs(g(Pre::default().times(vpsi(
            "a",
            &cat(&[bs.clone(), up_h]),
            &cat(&[each(&bs, |x| format!("a*q/{x}")), lo_h]),
            &z,
        ))))
        .rhs(idem(t, "a3", rest))
        .draws(&["a"], 0.5, 2.0)
        .draws(&as_, 0.5, 2.0)
        .draws(&bs[1..], 1.0, 2.0)
        .draws(&hs, 0.5, 2.0)
        .draw("b3", &format!("a^{}*q^({}-({big_m}))/({})", r - 1, r - 2, prod(&bs[1..])), 1.25, 5.0)
        .q(0.3, 0.45)
}

fn ckm_km3(shape: &Shape) -> Instance {
    let s = get(shape, "s");
    let big_m = msum(s);
    let ps = v(&["b", "c", "d", "e"]);
    let hs = names("h", 1, s);
    let z = format!("a^2*q^(1-({big_m}))/(b*c*d*e)");
    let (up_h, lo_h) = wp_chu(s, "a");
    let t = Pre::default()
        .num(&cat(&[v(&["a*q", "q/a"]), each(&ps, |x| format!("f*q/{x}")), each(&ps, |x| format!("a*q/({x}*f)"))]))
        .den(&cat(&[each(&ps, |x| format!("q/{x}")), each(&ps, |x| format!("a*q/{x}")), v(&["f^2*q/a", "a*q/f^2"])]))
        .chu(
            s,
            |h, _| vec![format!("f*q/{h}"), format!("a*q/(f*{h})")],
            |h, _| vec![format!("a*q/{h}"), format!("q/{h}")],
        )
        .times(vpsi(
            "f^2/a",
            &cat(&[
                each(&ps, |x| format!("f*{x}/a")),
                each(&hs, |h| format!("f*{h}/a")),
                (1..=s).map(|i| format!("f*q^(1+m{i})/h{i}")).collect(),
            ]),
            &cat(&[
                each(&ps, |x| format!("f*q/{x}")),
                each(&hs, |h| format!("f*q/{h}")),
                (1..=s).map(|i| format!("f*h{i}*q^(-m{i})/a")).collect(),
            ]),
            &z,
        ));
    Instance::new(&cat(&[v(&["a", "b", "c", "d", "e", "f"]), hs.clone()]))
        .chain(&[&z, "1"])
        .lhs(g(Pre::default().times(vpsi(
            "a",
            &cat(&[ps.clone(), up_h]),
            &cat(&[each(&ps, |x| format!("a*q/{x}")), lo_h]),
            &z,
        ))))
        .rhs(g(t))
        .draws(&["a", "c", "d", "e", "f"], 0.5, 2.0)
        .draws(&hs, 0.5, 2.0)
        .draw("b", &format!("a^2*q^(1-({big_m}))/(c*d*e)"), 1.25, 5.0)
        .q(0.3, 0.45)
}

fn shifted(sigma: Option<&str>, up: &[&str], lo: &[&str], sh: Vec<ShiftedTpl>, z: &str) -> SeriesTpl {
    SeriesTpl::Shifted { sigma: sigma.map(m), upper: ms(up), lower: ms(lo), shifted: sh, z: m(z) }
}

fn kernel_key1(_: &Shape) -> Instance {
    Instance::new(&["a", "b", "c"])
        .chain(&["a*q/(b*c)", "1"])
        .lhs(g(Pre::default()
            .num(&["c*q/b", "q/a", "q", "a*q/(b*c)"])
            .den(&["c*q/a", "q/b", "a*q/b", "q/c"])
            .times(shifted(
                Some("c/a"),
                &["c/a", "b/a"],
                &["q", "c*q/b"],
                vec![sh("c", "n", 1, 1), sh("a", "n", -1, 1), sh("q", "n", 1, -1), sh("a*q/c", "n", -1, -1)],
                "a/b",
            ))))
        .rhs(g(Pre::default().num_n(&["b", "c"], "n").den_n(&["a*q/b", "a*q/c"], "n").pow("a/b", "n").only()))
        .draws(&["a"], 0.5, 1.0)
        .draws(&["b", "c"], 1.5, 2.5)
}

fn kernel_87ntgl2(_: &Shape) -> Instance {
    let t = Pre::default()
        .num(&["b*q/d", "a*q^2/(c*d*e)", "a^2*q^2/(c*d*e)", "b*q/e", "a*q/(b*e)", "c", "c/a", "a*q/(b*d)"])
        .den(&["a*b*q^2/(c*d*e)", "c/b", "q/d", "a*q/d", "b*c/a", "a^2*q^2/(b*c*d*e)", "q/e", "a*q/e"])
        .times(shifted(
            Some("a*b*q/(c*d*e)"),
            &["a*b*q/(c*d*e)", "a*q/(d*e)", "a*q/(c*e)", "a*q/(c*d)"],
            &["q", "b*q/c", "b*q/d", "b*q/e"],
            vec![
                sh("b", "n", 1, 1),
                sh("c*d*e/(a*q)", "n", -1, 1),
                sh("a^2*q^2/(c*d*e)", "n", 1, -1),
                sh("a*q/b", "n", -1, -1),
            ],
            "b*c*d*e/(a^2*q)",
        ));
    Instance::new(&["a", "b", "c", "d", "e"])
        .lhs(idem(t, "b", v(&["c"])))
        .rhs(g(Pre::default()
            .num_n(&["b", "c", "d", "e"], "n")
            .den_n(&["a*q/b", "a*q/c", "a*q/d", "a*q/e"], "n")
            .only()))
        .draws(&["a", "b", "c", "d", "e"], 0.7, 1.4)
        .q(0.3, 0.45)
}

fn kernel_key32(_: &Shape) -> Instance {
    let t = Pre::default()
        .num(&["b1*b2/a2", "b2/a1", "a2", "b1/a1"])
        .den(&["a2/a1", "b1", "b1*b2/(a1*a2)", "b2"])
        .times(shifted(
            None,
            &["b1/a2", "b2/a2"],
            &["q", "a1*q/a2"],
            vec![sh("a1", "n", 1, 1), sh("b1*b2/a2", "n", 1, -1)],
            "q",
        ));
    Instance::new(&["a1", "a2", "b1", "b2"])
        .lhs(idem(t, "a1", v(&["a2"])))
        .rhs(g(Pre::default().num_n(&["a1", "a2"], "n").den_n(&["b1", "b2"], "n").only()))
        .draws(&["a1", "a2", "b1", "b2"], 0.5, 2.0)
        .q(0.3, 0.45)
}

fn sp(name: &'static str, min: i64, max: i64) -> ShapeParam {
    ShapeParam { name, min, max, per: None }
}

/// `m_1..m_s`, one per Chu parameter.
fn m_i() -> ShapeParam {
    ShapeParam { name: "m", min: 0, max: 4, per: Some("s") }
}

pub(super) fn entries() -> Vec<Descriptor> {
    let d = |id, name, shape, constraints, build| Descriptor { id, name, shape, constraints, build };
    let chu = || vec![sp("s", 0, 3), m_i()];
    vec![
        d("q_binomial", "q-binomial theorem", vec![], "|z|<1", q_binomial as fn(&Shape) -> Instance),
        d("q_binomial_terminating", "terminating q-binomial theorem", vec![sp("n", 0, 10)], "terminating", q_binomial_terminating),
        d("ramanujan_1psi1", "Ramanujan's 1psi1 summation", vec![], "|b/a|<|z|<1", ramanujan_1psi1),
        d("pfaff_saalschutz", "terminating q-Pfaff-Saalschutz summation", vec![sp("n", 0, 8)], "terminating, balanced", pfaff_saalschutz),
        d("pfaff_saalschutz_nt", "nonterminating q-Pfaff-Saalschutz summation", vec![], "ef = abcq", pfaff_saalschutz_nt),
        d("heine_euler", "Heine's q-Euler transformation", vec![], "|z|<1, |abz/c|<1", heine_euler),
        d("rogers_6phi5", "Rogers' 6phi5 summation", vec![], "|aq/(bcd)|<1", rogers_6phi5),
        d("jackson_8phi7", "Jackson's terminating 8phi7 summation", vec![sp("n", 0, 8)], "terminating", jackson_8phi7),
        d("bailey_6psi6", "Bailey's very-well-poised 6psi6 summation", vec![], "|a^2 q/(bcde)|<1", bailey_6psi6),
        d("bailey_8phi7_nt", "Bailey's nonterminating 8phi7 summation", vec![], "a^2 q = bcdef", bailey_8phi7_nt),
        d(
            "bailey_8phi7_tf",
            "Bailey's nonterminating 8phi7 transformation",
            vec![],
            "lambda = a^2 q/(bcd); |a^2 q^2/(bcdef)|<1, |aq/(ef)|<1",
            bailey_8phi7_tf,
        ),
        d("mjackson_8psi8", "M. Jackson's 8psi8 transformation", vec![], "|a^3 q^2/(bcdefg)|<1", mjackson_8psi8),
        d("tenpsi10", "very-well-poised 10psi10 transformation", vec![], "|a^4 q^3/(bcdefghy)|<1", tenpsi10),
        d("slater_vwp_2r", "Slater's very-well-poised 2r psi 2r transformation", vec![sp("r", 3, 6)], "|a^{r-1} q^{r-2}/(b3...b2r)|<1", slater_vwp_2r),
        d("slater_wp_2r", "Slater's well-poised 2r psi 2r transformation", vec![sp("r", 1, 6)], "|a^r q^r/(b1...b2r)|<1", slater_wp_2r),
        d(
            "slater_wp_2r_general",
            "Slater's general well-poised 2r psi 2r transformation",
            vec![sp("r", 1, 6)],
            "|a^r q^r/(b1...b2r)|<1",
            slater_wp_2r_general,
        ),
        d("slater_rpsir", "Slater's r psi r transformation", vec![sp("r", 1, 4)], "|b1...br/(a1...ar)|<|z|<1", slater_rpsir),
        d(
            "slater_rpsir_general",
            "Slater's general r psi r transformation (two forms)",
            vec![sp("r", 1, 4), sp("form", 0, 1)],
            "A = a1...ar/(c1...cr); |b1...br/(a1...ar)|<|z|<1 (form 0), |b1...br/(a1...ar)|<|z/A|<1 (form 1)",
            slater_rpsir_general,
        ),
        d("chu_2s_tf", "Chu's 2+s psi 2+s transformation", vec![sp("s", 0, 3), m_i(), sp("N", -3, 3)], "|q/a|<|q^N|<|b q^{|m|+1}/(cd)|", chu_2s_tf),
        d("chu_vwp_sum", "Chu's very-well-poised 6+2s psi 6+2s summation", chu(), "|a q^{1-|m|}/(bc)|<1", chu_vwp_sum),
        d(
            "ckm_general",
            "general r+s psi r+s transformation of Chu-Gasper-Karlsson-Minton type",
            vec![sp("r", 1, 3), sp("s", 0, 3), m_i()],
            "A = a1...ar/(c1...cr); |b1...br q^{-|m|}/(a1...ar)|<|z|<1",
            ckm_general,
        ),
        d(
            "ckm_km1",
            "2+s psi 2+s transformations of Chu-Gasper-Karlsson-Minton type (two forms)",
            vec![sp("s", 0, 3), m_i(), sp("N", -3, 3), sp("form", 0, 1)],
            "|e/(ab)|<|q^N|<|e q^{|m|}/(cd)|",
            ckm_km1,
        ),
        d("ckm_km2", "1+s psi 1+s transformation of Chu-Gasper-Karlsson-Minton type", chu(), "|b q^{-|m|}/a|<|z|<1", ckm_km2),
        d("ckm_2psi2_ul1", "2psi2 evaluation with a linear factor", vec![], "|q|<|z|<1", ckm_2psi2_ul1),
        d("ckm_2psi2_ul2", "2psi2 evaluation that factors completely", vec![], "|q|<|h/a|<1", ckm_2psi2_ul2),
        d(
            "ckm_wp_general",
            "well-poised 2r+2s psi 2r+2s transformation of Chu-Gasper-Karlsson-Minton type",
            vec![sp("r", 1, 3), sp("s", 0, 3), m_i()],
            "|a^r q^{r-|m|}/(b1...b2r)|<1",
            ckm_wp_general,
        ),
        d(
            "ckm_vwp_general",
            "very-well-poised 2r+2s psi 2r+2s transformation of Chu-Gasper-Karlsson-Minton type",
            vec![sp("r", 3, 5), sp("s", 0, 3), m_i()],
            "|a^{r-1} q^{r-2-|m|}/(b3...b2r)|<1",
            ckm_vwp_general,
        ),
        d("ckm_km3", "very-well-poised 8+2s psi 8+2s transformation", chu(), "|a^2 q^{1-|m|}/(bcde)|<1", ckm_km3),
        d("kernel_key1", "kernel of the 6psi6 derivation", vec![sp("n", -5, 5)], "|aq/(bc)|<1", kernel_key1),
        d("kernel_87ntgl2", "two-term kernel of the 8psi8 derivation", vec![sp("n", -5, 5)], "none", kernel_87ntgl2),
        d("kernel_key32", "two-term kernel of the r psi r derivation", vec![sp("n", -5, 5)], "none", kernel_key32),
    ]
}
