//! Unilateral and bilateral basic hypergeometric series.
//!
//! ```text
//! r phi s (a; b; q, z) = sum_{k>=0}  (a_1..a_r;q)_k / (q, b_1..b_s;q)_k
//!                                   * ((-1)^k q^{k(k-1)/2})^{1+s-r} z^k
//! r psi s (a; b; q, z) = sum_{k in Z} (a_1..a_r;q)_k / (b_1..b_s;q)_k
//!                                   * ((-1)^k q^{k(k-1)/2})^{s-r} z^k
//! ```
//!
//! Very-well-poised series carry `(1 - sigma q^{2k})/(1 - sigma)` in place
//! of the parameter pairs `+-q sqrt(sigma)` over `+-sqrt(sigma)`, so no square
//! root is ever taken.
//!
//! Bilateral series with r = s are split at k = 0; the k <= -1 half is
//! reindexed by k -> -1-k into a unilateral series ([`reverse_bilateral`]).

pub(crate) mod engine;
pub mod tail;

pub use engine::{eval_series, eval_shifted, Series, Shifted, ShiftedSeries};
pub use tail::{certified_spec_sum, certified_sum, tail_bound, CertifiedSum, TailCertificate};

use crate::error::{Error, Result};
use crate::numerics::{CLit, Field, Mode, Scalar, Tolerance};
use crate::qfactorial::on_mode;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Unilateral,
    Bilateral,
}

/// Series in scalar form, as exchanged with callers and the CLI.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSpec {
    pub kind: Kind,
    pub upper: Vec<Scalar>,
    pub lower: Vec<Scalar>,
    pub q: Scalar,
    pub z: Scalar,
}

/// Very-well-poised series with special parameter `sigma`.
///
/// Unilateral: upper `sigma, rest_upper`, lower `rest_lower` (plus the
/// implicit `q`). Bilateral: upper `rest_upper`, lower `rest_lower`.
/// Both carry the factor `(1 - sigma q^{2k})/(1 - sigma)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VWPSpec {
    pub kind: Kind,
    pub sigma: Scalar,
    pub rest_upper: Vec<Scalar>,
    pub rest_lower: Vec<Scalar>,
    pub q: Scalar,
    pub z: Scalar,
}

/// Where a series stops. `above = n`: terms vanish for k > n.
/// `below = j`: terms vanish for k <= -j.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Termination {
    pub above: Option<u64>,
    pub below: Option<u64>,
}

impl Termination {
    pub fn is_finite(&self, kind: Kind) -> bool {
        match kind {
            Kind::Unilateral => self.above.is_some(),
            Kind::Bilateral => self.above.is_some() && self.below.is_some(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub term_tol: f64,
    pub max_terms: usize,
}

impl EvalOptions {
    pub fn for_mode(mode: Mode) -> Self {
        EvalOptions { term_tol: Tolerance::for_mode(mode).term_tol, max_terms: 10_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub terms_forward: usize,
    pub terms_backward: usize,
    pub last_term: f64,
    pub termination: Termination,
}

impl SeriesSpec {
    pub fn mode(&self) -> Mode {
        self.upper
            .iter()
            .chain(&self.lower)
            .fold(self.q.mode().join(self.z.mode()), |m, x| m.join(x.mode()))
    }

    pub(crate) fn to_field<F: Field>(&self, ctx: F::Ctx) -> Result<Series<F>> {
        let conv = |xs: &[Scalar]| xs.iter().map(|x| F::from_scalar(x, ctx)).collect::<Result<Vec<_>>>();
        Ok(Series {
            kind: self.kind,
            sigma: None,
            upper: conv(&self.upper)?,
            lower: conv(&self.lower)?,
            q: F::from_scalar(&self.q, ctx)?,
            z: F::from_scalar(&self.z, ctx)?,
        })
    }

    /// Parse `{kind, upper[], lower[], q, z}`; values are "p/q" strings,
    /// numbers, or [re, im] pairs.
    pub fn from_json(v: &Value, mode: Mode) -> Result<Self> {
        let field = |name: &str| v.get(name).ok_or_else(|| Error::Parse(format!("missing field `{name}`")));
        let kind: Kind = serde_json::from_value(field("kind")?.clone())
            .map_err(|e| Error::Parse(format!("field `kind`: {e}")))?;
        let list = |name: &str| -> Result<Vec<Scalar>> {
            let arr = field(name)?.as_array().ok_or_else(|| Error::Parse(format!("field `{name}` must be an array")))?;
            arr.iter()
                .enumerate()
                .map(|(i, x)| {
                    CLit::from_json(x)
                        .and_then(|c| c.to_scalar(mode))
                        .map_err(|e| Error::Parse(format!("field `{name}[{i}]`: {e}")))
                })
                .collect()
        };
        let one = |name: &str| -> Result<Scalar> {
            CLit::from_json(field(name)?)
                .and_then(|c| c.to_scalar(mode))
                .map_err(|e| Error::Parse(format!("field `{name}`: {e}")))
        };
        Ok(SeriesSpec { kind, upper: list("upper")?, lower: list("lower")?, q: one("q")?, z: one("z")? })
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "kind": self.kind,
            "upper": self.upper.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "lower": self.lower.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "q": self.q.to_json(),
            "z": self.z.to_json(),
        })
    }
}

impl VWPSpec {
    pub fn mode(&self) -> Mode {
        self.rest_upper
            .iter()
            .chain(&self.rest_lower)
            .fold(self.q.mode().join(self.z.mode()).join(self.sigma.mode()), |m, x| m.join(x.mode()))
    }

    pub(crate) fn to_field<F: Field>(&self, ctx: F::Ctx) -> Result<Series<F>> {
        let conv = |xs: &[Scalar]| xs.iter().map(|x| F::from_scalar(x, ctx)).collect::<Result<Vec<_>>>();
        let sigma = F::from_scalar(&self.sigma, ctx)?;
        let mut upper = conv(&self.rest_upper)?;
        if self.kind == Kind::Unilateral {
            upper.insert(0, sigma.clone());
        }
        Ok(Series {
            kind: self.kind,
            sigma: Some(sigma),
            upper,
            lower: conv(&self.rest_lower)?,
            q: F::from_scalar(&self.q, ctx)?,
            z: F::from_scalar(&self.z, ctx)?,
        })
    }
}

/// Evaluate a unilateral series.
pub fn eval_phi(spec: &SeriesSpec, opts: &EvalOptions) -> Result<(Scalar, Diagnostics)> {
    if spec.kind != Kind::Unilateral {
        return Err(Error::Parse("eval_phi needs a unilateral spec".into()));
    }
    eval_spec(spec, opts)
}

/// Evaluate a bilateral series; r psi r outside its annulus gives
/// `DivergentDomain`.
pub fn eval_psi(spec: &SeriesSpec, opts: &EvalOptions) -> Result<(Scalar, Diagnostics)> {
    if spec.kind != Kind::Bilateral {
        return Err(Error::Parse("eval_psi needs a bilateral spec".into()));
    }
    eval_spec(spec, opts)
}

/// Evaluate either kind.
pub fn eval_spec(spec: &SeriesSpec, opts: &EvalOptions) -> Result<(Scalar, Diagnostics)> {
    on_mode!(spec.mode(), F, ctx => {
        let s = spec.to_field::<F>(ctx)?;
        let (v, d) = eval_series(&s, opts)?;
        Ok((v.to_scalar(), d))
    })
}

pub fn eval_vwp(spec: &VWPSpec, opts: &EvalOptions) -> Result<(Scalar, Diagnostics)> {
    on_mode!(spec.mode(), F, ctx => {
        let s = spec.to_field::<F>(ctx)?;
        let (v, d) = eval_series(&s, opts)?;
        Ok((v.to_scalar(), d))
    })
}

/// The k <= -1 part of an r psi r series as a unilateral series, with the
/// prefactor t_{-1}: sum_{k<=-1} t_k = prefactor * value(returned spec).
/// `None` when the part vanishes because a lower parameter equals q.
pub fn reverse_bilateral(spec: &SeriesSpec) -> Result<Option<(SeriesSpec, Scalar)>> {
    on_mode!(spec.mode(), F, ctx => {
        let s = spec.to_field::<F>(ctx)?;
        Ok(engine::reverse(&s)?.map(|(r, t1)| (from_field(&r), t1.to_scalar())))
    })
}

fn from_field<F: Field>(s: &Series<F>) -> SeriesSpec {
    assert!(s.sigma.is_none(), "plain series expected");
    SeriesSpec {
        kind: s.kind,
        upper: s.upper.iter().map(Field::to_scalar).collect(),
        lower: s.lower.iter().map(Field::to_scalar).collect(),
        q: s.q.to_scalar(),
        z: s.z.to_scalar(),
    }
}

pub fn detect_termination(spec: &SeriesSpec) -> Termination {
    on_mode!(spec.mode(), F, ctx => {
        match spec.to_field::<F>(ctx) {
            Ok(s) => {
                let up = engine::params(&s.upper, &s.q);
                let lo = engine::params(&s.lower, &s.q);
                engine::termination(s.kind, &up, &lo)
            }
            Err(_) => Termination::default(),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational_to_f64;
    use crate::qfactorial::qpoch_inf;
    use num_complex::Complex64;
    use num_rational::BigRational;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dopts() -> EvalOptions {
        EvalOptions::for_mode(Mode::ComplexDouble)
    }

    fn inf(a: Complex64, q: Complex64) -> Complex64 {
        qpoch_inf(&a, &q, 1e-18).unwrap().0
    }

    fn phi(up: Vec<Complex64>, lo: Vec<Complex64>, q: Complex64, z: Complex64) -> Series<Complex64> {
        Series { kind: Kind::Unilateral, sigma: None, upper: up, lower: lo, q, z }
    }

    fn psi(up: Vec<Complex64>, lo: Vec<Complex64>, q: Complex64, z: Complex64) -> Series<Complex64> {
        Series { kind: Kind::Bilateral, sigma: None, upper: up, lower: lo, q, z }
    }

    #[test]
    fn terminating_binomial_exact() {
        let spec = SeriesSpec {
            kind: Kind::Unilateral,
            upper: vec![Scalar::rational(4, 1)],
            lower: vec![],
            q: Scalar::rational(1, 2),
            z: Scalar::rational(1, 1),
        };
        let (v, d) = eval_phi(&spec, &EvalOptions::for_mode(Mode::ExactRational)).unwrap();
        assert_eq!(v, Scalar::rational(3, 1));
        assert_eq!(d.terms_forward, 3);
        assert_eq!(d.termination.above, Some(2));
    }

    #[test]
    fn z_zero_gives_one() {
        let s = phi(vec![c(0.3, 0.1), c(2.0, 0.0)], vec![c(0.7, 0.0)], c(0.4, 0.0), c(0.0, 0.0));
        let (v, _) = eval_series(&s, &dopts()).unwrap();
        assert_eq!(v, c(1.0, 0.0));
    }

    #[test]
    fn q_binomial_theorem() {
        let (a, q, z) = (c(1.0 / 3.0, 0.0), c(0.5, 0.0), c(0.25, 0.0));
        let (v, _) = eval_series(&phi(vec![a], vec![], q, z), &dopts()).unwrap();
        let rhs = inf(a * z, q) / inf(z, q);
        assert!((v - rhs).norm() / rhs.norm() < 1e-14);
    }

    #[test]
    fn one_psi_one_matches_products() {
        let (a, b, q, z) = (c(2.0, 0.0), c(0.05, 0.0), c(0.1, 0.0), c(0.5, 0.0));
        let (v, _) = eval_series(&psi(vec![a], vec![b], q, z), &dopts()).unwrap();
        let rhs = inf(q, q) * inf(b / a, q) * inf(a * z, q) * inf(q / (a * z), q)
            / (inf(b, q) * inf(q / a, q) * inf(z, q) * inf(b / (a * z), q));
        // a z = 1: both sides vanish, the two halves cancel
        assert_eq!(rhs, c(0.0, 0.0));
        assert!(v.norm() < 1e-12);
        let z = c(0.3, 0.1);
        let (v, _) = eval_series(&psi(vec![a], vec![b], q, z), &dopts()).unwrap();
        let rhs = inf(q, q) * inf(b / a, q) * inf(a * z, q) * inf(q / (a * z), q)
            / (inf(b, q) * inf(q / a, q) * inf(z, q) * inf(b / (a * z), q));
        assert!((v - rhs).norm() / rhs.norm() < 1e-12);
    }

    #[test]
    fn lower_q_kills_negative_side() {
        let (a, q, z) = (c(0.4, 0.3), c(0.3, -0.2), c(0.6, 0.1));
        let (v1, _) = eval_series(&psi(vec![a], vec![q], q, z), &dopts()).unwrap();
        let (v2, _) = eval_series(&phi(vec![a], vec![], q, z), &dopts()).unwrap();
        assert!((v1 - v2).norm() < 1e-14);
    }

    #[test]
    fn annulus_violation_is_divergent() {
        let spec = SeriesSpec {
            kind: Kind::Bilateral,
            upper: vec![Scalar::double(2.0, 0.0)],
            lower: vec![Scalar::double(1.5, 0.0)],
            q: Scalar::double(0.3, 0.0),
            z: Scalar::double(0.5, 0.0),
        };
        let e = eval_psi(&spec, &dopts()).unwrap_err();
        assert_eq!(e.kind(), "DivergentDomain");
        let spec = SeriesSpec { z: Scalar::double(1.2, 0.0), ..spec };
        assert_eq!(eval_psi(&spec, &dopts()).unwrap_err().kind(), "DivergentDomain");
    }

    /// Two-sided partial sum of an r psi r series by term recurrences in
    /// both directions from t_0 = 1.
    fn brute_psi(up: &[Complex64], lo: &[Complex64], q: Complex64, z: Complex64, kmin: i64, kmax: i64) -> Complex64 {
        let one = c(1.0, 0.0);
        let mut s = c(0.0, 0.0);
        let mut t = one;
        for k in 0..=kmax {
            if k >= kmin {
                s += t;
            }
            let qk = q.powi(k as i32);
            t *= z * up.iter().map(|a| one - a * qk).product::<Complex64>() / lo.iter().map(|b| one - b * qk).product::<Complex64>();
        }
        let mut t = one;
        for k in 0..(-kmin) {
            let qk = q.powi(-(k as i32) - 1);
            t *= lo.iter().map(|b| one - b * qk).product::<Complex64>() / (z * up.iter().map(|a| one - a * qk).product::<Complex64>());
            if -k - 1 <= kmax {
                s += t;
            }
        }
        s
    }

    #[test]
    fn reversal_matches_direct_negative_sum() {
        let (a, b, q, z) = (c(1.3, 0.4), c(0.2, -0.1), c(0.35, 0.2), c(0.5, 0.2));
        let spec = psi(vec![a], vec![b], q, z);
        let (rs, t1) = engine::reverse(&spec).unwrap().unwrap();
        let (v, _) = eval_series(&rs, &dopts()).unwrap();
        let neg = brute_psi(&[a], &[b], q, z, -60, -1);
        assert!((t1 * v - neg).norm() / neg.norm() < 1e-14);
    }

    #[test]
    fn two_sided_sum_matches_brute_force() {
        let (q, z) = (c(0.3, 0.25), c(0.45, -0.3));
        let up = [c(1.4, 0.2), c(0.9, -0.8)];
        let lo = [c(0.3, 0.1), c(0.25, -0.2)];
        let (v, _) = eval_series(&psi(up.to_vec(), lo.to_vec(), q, z), &dopts()).unwrap();
        let b = brute_psi(&up, &lo, q, z, -120, 120);
        assert!((v - b).norm() / b.norm() < 1e-13);
    }

    #[test]
    fn vwp_matches_explicit_square_root_pairs() {
        let q = c(0.3, 0.2);
        let a = c(0.6, 0.3);
        let rest = [c(0.7, -0.2), c(1.3, 0.5), c(-0.4, 0.9)];
        let z = a * q / (rest[0] * rest[1] * rest[2]);
        let lower: Vec<_> = rest.iter().map(|b| a * q / b).collect();
        let s = Series { kind: Kind::Unilateral, sigma: Some(a), upper: [vec![a], rest.to_vec()].concat(), lower: lower.clone(), q, z };
        let (v, _) = eval_series(&s, &dopts()).unwrap();
        let r = a.sqrt();
        let mut up = vec![a, q * r, -q * r];
        up.extend(rest);
        let mut lo = vec![r, -r];
        lo.extend(lower);
        let (w, _) = eval_series(&phi(up, lo, q, z), &dopts()).unwrap();
        assert!((v - w).norm() / w.norm() < 1e-12);
    }

    #[test]
    fn rogers_sum_rational_point() {
        let (a, b, cc, d, q) = (0.25, 3.0, 5.0, 7.0, 0.5);
        let cq = |x: f64| c(x, 0.0);
        let z = a * q / (b * cc * d);
        let s = Series {
            kind: Kind::Unilateral,
            sigma: Some(cq(a)),
            upper: vec![cq(a), cq(b), cq(cc), cq(d)],
            lower: vec![cq(a * q / b), cq(a * q / cc), cq(a * q / d)],
            q: cq(q),
            z: cq(z),
        };
        let (v, _) = eval_series(&s, &dopts()).unwrap();
        let (qq, aa) = (cq(q), cq(a));
        let rhs = inf(aa * qq, qq) * inf(cq(a * q / (b * cc)), qq) * inf(cq(a * q / (b * d)), qq) * inf(cq(a * q / (cc * d)), qq)
            / (inf(cq(a * q / b), qq) * inf(cq(a * q / cc), qq) * inf(cq(a * q / d), qq) * inf(cq(z), qq));
        assert!((v - rhs).norm() / rhs.norm() < 1e-13);
    }

    #[test]
    fn vwp_k0_factor_is_one() {
        let q = c(0.3, 0.0);
        let s = Series { kind: Kind::Unilateral, sigma: Some(c(0.5, 0.1)), upper: vec![c(0.5, 0.1)], lower: vec![], q, z: c(0.0, 0.0) };
        assert_eq!(eval_series(&s, &dopts()).unwrap().0, c(1.0, 0.0));
        let s = Series { sigma: Some(c(1.0, 0.0)), ..s };
        assert_eq!(eval_series(&s, &dopts()).unwrap_err().kind(), "SigmaDegenerate");
    }

    #[test]
    fn detects_termination() {
        let q = Scalar::rational(1, 3);
        let spec = SeriesSpec {
            kind: Kind::Bilateral,
            upper: vec![Scalar::rational(27, 1), Scalar::rational(5, 7)],
            lower: vec![Scalar::rational(1, 3), Scalar::rational(2, 9)],
            q: q.clone(),
            z: Scalar::rational(1, 2),
        };
        let t = detect_termination(&spec);
        assert_eq!(t, Termination { above: Some(3), below: Some(1) });
        let generic = SeriesSpec {
            upper: vec![Scalar::double(0.7, 0.1)],
            lower: vec![Scalar::double(0.2, 0.3)],
            q: Scalar::double(0.3, 0.1),
            ..spec
        };
        assert_eq!(detect_termination(&generic), Termination::default());
    }

    #[test]
    fn double_reversal_round_trip() {
        let (a, b, q, z) = (c(1.3, 0.4), c(0.2, -0.1), c(0.35, 0.2), c(0.5, 0.2));
        let spec = SeriesSpec {
            kind: Kind::Bilateral,
            upper: vec![Scalar::Double(a)],
            lower: vec![Scalar::Double(b)],
            q: Scalar::Double(q),
            z: Scalar::Double(z),
        };
        // reflect: psi(a;b;z) = psi(q/b; q/a; b/(a z)) term by term with k -> -k
        let reflected = SeriesSpec {
            upper: vec![Scalar::Double(q / b)],
            lower: vec![Scalar::Double(q / a)],
            z: Scalar::Double(b / (a * z)),
            ..spec.clone()
        };
        let (v1, _) = eval_psi(&spec, &dopts()).unwrap();
        let (v2, _) = eval_psi(&reflected, &dopts()).unwrap();
        assert!((v1.to_c64() - v2.to_c64()).norm() / v1.abs_f64() < 1e-13);
        let (rs, t1) = reverse_bilateral(&spec).unwrap().unwrap();
        let (rv, _) = eval_phi(&rs, &dopts()).unwrap();
        let (rs2, t2) = reverse_bilateral(&reflected).unwrap().unwrap();
        let (rv2, _) = eval_phi(&rs2, &dopts()).unwrap();
        let neg = t1.to_c64() * rv.to_c64();
        let neg_reflected = t2.to_c64() * rv2.to_c64();
        // negative part of the reflection is the positive part minus k = 0 of the original
        let (fwd, _) = eval_series(&phi(vec![a, q], vec![b], q, z), &dopts()).unwrap();
        assert!((neg_reflected - (fwd - c(1.0, 0.0))).norm() < 1e-13);
        assert!((v1.to_c64() - fwd - neg).norm() < 1e-13);
    }

    #[test]
    fn big_mode_binomial() {
        let spec = SeriesSpec {
            kind: Kind::Unilateral,
            upper: vec![Scalar::rational(1, 3)],
            lower: vec![],
            q: Scalar::rational(1, 2),
            z: Scalar::rational(1, 4),
        };
        let mode = Mode::ComplexBig(60);
        let spec_big = SeriesSpec {
            upper: spec.upper.iter().map(|x| crate::numerics::promote(x, mode).unwrap()).collect(),
            ..spec.clone()
        };
        let (v, _) = eval_phi(&spec_big, &EvalOptions::for_mode(mode)).unwrap();
        let a = BigRational::new(1.into(), 3.into());
        let q = BigRational::new(1.into(), 2.into());
        let z = BigRational::new(1.into(), 4.into());
        let target = BigRational::new(1.into(), 1_000_000_000_000_000_000i64.into());
        let t2 = &target * &target * &target;
        let (p1, _, _) = crate::qfactorial::qpoch_inf_exact(&(&a * &z), &q, &t2).unwrap();
        let (p2, _, _) = crate::qfactorial::qpoch_inf_exact(&z, &q, &t2).unwrap();
        let exact = p1 / p2;
        let Scalar::Big(b, _) = v else { panic!() };
        let diff = rational_to_f64(&(b.re.to_rational() - exact));
        assert!(diff.abs() < 1e-50, "{diff}");
    }
}
