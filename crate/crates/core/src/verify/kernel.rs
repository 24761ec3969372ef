//! Kernel identities and the summation-interchange reconstruction.

use super::{check_identity, CheckOptions, VerificationReport};
use crate::error::{Error, Result};
use crate::identities::{find, lhs, sample_point, Descriptor, Point, SampleOptions, ShapeParam};
use crate::numerics::{scalar_residual, Field, Mode, Scalar};
use crate::qfactorial::on_mode;
use crate::series::EvalOptions;
use serde_json::{json, Value};

/// Check a kernel identity for every `n` in `lo..=hi` at the parameter
/// values of `point` (its shape is ignored).
pub fn check_kernel(desc: &Descriptor, lo: i64, hi: i64, point: &Point, opts: &CheckOptions) -> Result<Vec<VerificationReport>> {
    if !desc.shape.iter().any(|p| p.name == "n") || desc.shape.len() != 1 {
        return Err(Error::BadShape(format!("{} is not a kernel identity", desc.id)));
    }
    if lo > hi {
        return Err(Error::BadShape(format!("empty range {lo}..={hi}")));
    }
    Ok((lo..=hi)
        .map(|n| {
            let mut p = point.clone();
            p.shape.clear();
            p.shape.insert("n".into(), n);
            check_identity(desc, &p, opts)
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct InterchangeReport {
    pub point: Point,
    pub target: Scalar,
    pub reconstructed: Scalar,
    pub rel_residual: f64,
    pub n_max: i64,
    /// Largest number of inner-series terms used at any n.
    pub inner_terms: usize,
}

impl InterchangeReport {
    pub fn to_json(&self) -> Value {
        json!({
            "point": self.point.to_json(),
            "target": self.target.to_json(),
            "reconstructed": self.reconstructed.to_json(),
            "rel_residual": self.rel_residual,
            "n_max": self.n_max,
            "inner_terms": self.inner_terms,
        })
    }
}

/// `w_{n+1}/w_n` for the weights multiplying the key1 kernel, chosen so
/// that the weighted kernel right-hand sides are the 6psi6 terms:
/// `w_n = (1 - a q^{2n})/(1 - a) (d,e;q)_n/(aq/d,aq/e;q)_n (aq/(cde))^n`.
/// Built by recurrence from `w_0 = 1` so no partial product overflows.
fn weight_ratio<F: Field>(v: &[F; 5], q: &F, n: i64) -> F {
    let [a, _b, c, d, e] = v;
    let one = q.one_like();
    let qn = q.powi(n);
    let aq = a.clone() * q.clone();
    let vwp = (one.clone() - a.clone() * qn.clone() * qn.clone() * q.clone() * q.clone())
        / (one.clone() - a.clone() * qn.clone() * qn.clone());
    let num = (one.clone() - d.clone() * qn.clone()) * (one.clone() - e.clone() * qn.clone());
    let den = (one.clone() - aq.clone() * qn.clone() / d.clone()) * (one - aq.clone() * qn / e.clone());
    vwp * num / den * (aq / (c.clone() * d.clone() * e.clone()))
}

fn weights<F: Field>(v: &[F; 5], q: &F, n_max: i64) -> Vec<F> {
    let mut fwd = vec![q.one_like()];
    for n in 0..n_max {
        let w = fwd[n as usize].clone() * weight_ratio(v, q, n);
        fwd.push(w);
    }
    let mut back = vec![q.one_like()];
    for n in 1..=n_max {
        let w = back[n as usize - 1].clone() / weight_ratio(v, q, -n);
        back.push(w);
    }
    back.into_iter().skip(1).rev().chain(fwd).collect()
}

fn admissible(p: &Point) -> Result<bool> {
    let g = |s: &str| p.get(s).map(Scalar::to_c64);
    let (q, a, b, c, d, e) = (g("q")?, g("a")?, g("b")?, g("c")?, g("d")?, g("e")?);
    let z = a * a * q / (b * c * d * e);
    Ok((a / b).norm() < 0.56 && z.norm() < 0.3 && (a * q / (b * c)).norm() < 0.9)
}

/// Rebuild the 6psi6 left-hand side from the key1 kernel: sum the kernel's
/// left-hand side at each |n| <= n_max against the weights and compare with
/// the directly summed bilateral series. The point is the first sampled
/// 6psi6 point from `(seed, index)` onward with |a/b| < 0.56,
/// |a^2 q/(bcde)| < 0.3 and |aq/(bc)| < 0.9.
pub fn interchange(seed: u64, index: u64, n_max: i64, mode: Mode) -> Result<InterchangeReport> {
    let target_desc = find("bailey_6psi6")?;
    let key1 = find("kernel_key1")?;
    // The outer sum runs past the kernel's sampling range of n.
    let kernel = Descriptor {
        shape: vec![ShapeParam { name: "n", min: -n_max, max: n_max, per: None }],
        ..*key1
    };
    let sample = SampleOptions { mode, ..Default::default() };
    let mut found = None;
    for i in index..index + 1000 {
        let p = sample_point(target_desc, seed, i, &sample)?;
        if admissible(&p)? {
            found = Some(p);
            break;
        }
    }
    let point = found.ok_or_else(|| Error::SamplingExhausted("no point for the interchange check".into()))?;
    let opts = EvalOptions::for_mode(mode);
    let target = lhs(target_desc, &point, mode, &opts)?;
    let mut inner_terms = 0;
    let reconstructed = on_mode!(mode, F, ctx => {
        let val = |s: &str| -> Result<F> { F::from_scalar(point.get(s)?, ctx) };
        let v = [val("a")?, val("b")?, val("c")?, val("d")?, val("e")?];
        let q = val("q")?;
        let w = weights(&v, &q, n_max);
        let mut sum = q.zero_like();
        for (n, wn) in (-n_max..=n_max).zip(w) {
            let mut kp = Point { shape: [("n".to_string(), n)].into_iter().collect(), values: Default::default() };
            for s in ["q", "a", "b", "c"] {
                kp.values.insert(s.to_string(), point.get(s)?.clone());
            }
            let sides = crate::identities::evaluate(&kernel, &kp, mode, &opts)?;
            inner_terms = sides.lhs_diagnostics.iter().map(|d| d.terms_forward).fold(inner_terms, usize::max);
            let k = F::from_scalar(&sides.lhs, ctx)?;
            sum = sum + wn * k;
        }
        sum.to_scalar()
    });
    let (_, rel) = scalar_residual(&target, &reconstructed, 1e-300);
    Ok(InterchangeReport { point, target, reconstructed, rel_residual: rel, n_max, inner_terms })
}
