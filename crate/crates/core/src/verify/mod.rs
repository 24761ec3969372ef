//! Residual checks, seeded sweeps, exact and certified verification and
//! kernel-identity checks.

mod certify;
mod kernel;

pub use certify::{certify, Certificate, TermEnclosure};
pub use kernel::{check_kernel, interchange, InterchangeReport};

use crate::error::{Error, Result};
use crate::identities::{constraints_check, evaluate, find, guard, sample_point, Descriptor, Point, SampleOptions, Sides};
use crate::numerics::{scalar_residual, Mode, Scalar, Tolerance};
use crate::series::{Diagnostics, EvalOptions};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::fmt;
use std::time::{Duration, Instant};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    ConstraintViolation,
    Degenerate,
    Error(String),
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 4,
            Status::ConstraintViolation => 3,
            Status::Degenerate | Status::Error(_) => 2,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => f.write_str("PASS"),
            Status::Fail => f.write_str("FAIL"),
            Status::ConstraintViolation => f.write_str("CONSTRAINT_VIOLATION"),
            Status::Degenerate => f.write_str("DEGENERATE"),
            Status::Error(k) => write!(f, "ERROR({k})"),
        }
    }
}

/// Errors that mean the point sits on (or next to) a pole or a removable
/// singularity rather than that the identity failed.
fn is_degenerate(e: &Error) -> bool {
    matches!(
        e,
        Error::PoleEncountered(_)
            | Error::PoleInTerm(_)
            | Error::DegeneratePoint(_)
            | Error::SigmaDegenerate(_)
            | Error::IndeterminateProduct
            | Error::SamplingExhausted(_)
    )
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub identity: String,
    pub seed: Option<u64>,
    pub index: Option<u64>,
    pub point: Option<Point>,
    pub mode: Mode,
    pub tol: f64,
    pub lhs: Option<Scalar>,
    pub rhs: Option<Scalar>,
    pub abs_residual: Option<f64>,
    pub rel_residual: Option<f64>,
    pub status: Status,
    pub diagnostics: Value,
    pub certificate: Option<Certificate>,
}

impl VerificationReport {
    fn bare(identity: &str, mode: Mode, tol: f64, point: Option<Point>) -> Self {
        VerificationReport {
            identity: identity.to_string(),
            seed: None,
            index: None,
            point,
            mode,
            tol,
            lhs: None,
            rhs: None,
            abs_residual: None,
            rel_residual: None,
            status: Status::Pass,
            diagnostics: json!({}),
            certificate: None,
        }
    }

    fn failed_with(mut self, e: &Error) -> Self {
        self.status = if is_degenerate(e) { Status::Degenerate } else { Status::Error(e.kind().to_string()) };
        self.diagnostics = json!({ "error": e.to_string() });
        self
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "identity": self.identity,
            "seed": self.seed,
            "index": self.index,
            "point": self.point.as_ref().map(Point::to_json),
            "mode": self.mode.name(),
            "tol": self.tol,
            "lhs": self.lhs.as_ref().map(Scalar::to_json),
            "rhs": self.rhs.as_ref().map(Scalar::to_json),
            "abs_residual": self.abs_residual,
            "rel_residual": self.rel_residual,
            "status": self.status.to_string(),
            "diagnostics": self.diagnostics,
        });
        if let Some(c) = &self.certificate {
            v["certificate"] = c.to_json();
        }
        v
    }
}

/// Verification policy: tower and relative tolerance per identity.
/// Identities whose sides cancel heavily in binary64 are checked in
/// big(50) at a tolerance far below the double round-off level.
pub fn policy(id: &str) -> (Mode, f64) {
    const DOUBLE: &[&str] = &[
        "bailey_6psi6",
        "bailey_8phi7_tf",
        "chu_2s_tf",
        "ckm_2psi2_ul1",
        "ckm_2psi2_ul2",
        "ckm_km1",
        "heine_euler",
        "pfaff_saalschutz_nt",
        "q_binomial",
        "q_binomial_terminating",
        "ramanujan_1psi1",
        "rogers_6phi5",
    ];
    if DOUBLE.contains(&id) {
        (Mode::ComplexDouble, 1e-10)
    } else {
        (Mode::big(), 1e-30)
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    /// Tower; `None` uses exact arithmetic for exact points where possible
    /// and the policy tower otherwise.
    pub mode: Option<Mode>,
    pub tol: Option<f64>,
    pub eval: Option<EvalOptions>,
}

impl CheckOptions {
    pub fn in_mode(mode: Mode) -> Self {
        CheckOptions { mode: Some(mode), ..Default::default() }
    }

    fn tol_for(&self, id: &str, mode: Mode) -> f64 {
        self.tol.unwrap_or_else(|| {
            let (pm, pt) = policy(id);
            if pm == mode {
                pt
            } else {
                Tolerance::for_mode(mode).residual_tol
            }
        })
    }

    fn eval_for(&self, mode: Mode) -> EvalOptions {
        self.eval.unwrap_or_else(|| EvalOptions::for_mode(mode))
    }
}

fn diag_json(d: &[Diagnostics]) -> Value {
    serde_json::to_value(d).unwrap_or(Value::Null)
}

fn check_in(desc: &Descriptor, point: &Point, mode: Mode, opts: &CheckOptions) -> VerificationReport {
    let tol = opts.tol_for(desc.id, mode);
    let mut rep = VerificationReport::bare(desc.id, mode, tol, Some(point.clone()));
    match constraints_check(desc, point) {
        Ok(c) if !c.ok => {
            rep.status = Status::ConstraintViolation;
            let fails: Vec<Value> =
                c.failures().iter().map(|i| json!({ "constraint": i.name, "detail": i.detail })).collect();
            rep.diagnostics = json!({ "violations": fails });
            return rep;
        }
        Ok(_) => {}
        Err(e) => return rep.failed_with(&e),
    }
    if let Err(e) = guard(desc, point) {
        return rep.failed_with(&e);
    }
    let Sides { lhs, rhs, lhs_diagnostics, rhs_diagnostics } = match evaluate(desc, point, mode, &opts.eval_for(mode)) {
        Ok(s) => s,
        Err(e) => return rep.failed_with(&e),
    };
    let floor = Tolerance::for_mode(mode).zero_floor;
    let (abs, rel) = scalar_residual(&lhs, &rhs, floor);
    rep.status = match mode {
        Mode::ExactRational if lhs == rhs => Status::Pass,
        Mode::ExactRational => Status::Fail,
        _ if rel < tol => Status::Pass,
        _ => Status::Fail,
    };
    rep.lhs = Some(lhs);
    rep.rhs = Some(rhs);
    rep.abs_residual = Some(abs);
    rep.rel_residual = Some(rel);
    rep.diagnostics = json!({ "lhs": diag_json(&lhs_diagnostics), "rhs": diag_json(&rhs_diagnostics) });
    rep
}

/// Check one identity at one point. Constraint violations, degenerate
/// points and evaluation errors become report statuses.
pub fn check_identity(desc: &Descriptor, point: &Point, opts: &CheckOptions) -> VerificationReport {
    match opts.mode {
        Some(m) => check_in(desc, point, m, opts),
        None if point.mode() == Mode::ExactRational => {
            let rep = check_in(desc, point, Mode::ExactRational, opts);
            match &rep.status {
                Status::Error(k) if k == "ExactInfiniteProduct" || k == "ExactNonterminating" => {
                    check_in(desc, point, policy(desc.id).0, opts)
                }
                _ => rep,
            }
        }
        None => check_in(desc, point, policy(desc.id).0, opts),
    }
}

/// Exact check of a terminating identity at a rational point: literal
/// equality of both sides.
pub fn check_exact_terminating(desc: &Descriptor, point: &Point) -> Result<bool> {
    if point.mode() != Mode::ExactRational {
        return Err(Error::IllegalDemotion("exact verification needs a rational point".into()));
    }
    let s = evaluate(desc, point, Mode::ExactRational, &EvalOptions::for_mode(Mode::ExactRational))?;
    Ok(s.lhs == s.rhs)
}

/// Check at the point sampled for `(identity, seed, index)`.
pub fn check_sampled(desc: &Descriptor, seed: u64, index: u64, sample: &SampleOptions, opts: &CheckOptions) -> VerificationReport {
    let mode = opts.mode.unwrap_or(sample.mode);
    let mut rep = match sample_point(desc, seed, index, sample) {
        Ok(p) => check_identity(desc, &p, &CheckOptions { mode: Some(mode), ..opts.clone() }),
        Err(e) => VerificationReport::bare(desc.id, mode, opts.tol_for(desc.id, mode), None).failed_with(&e),
    };
    rep.seed = Some(seed);
    rep.index = Some(index);
    rep
}

#[derive(Clone, Debug)]
pub struct SweepSummary {
    pub identity: String,
    pub n_points: usize,
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    pub max_residual: f64,
    /// Not part of the JSON form, which must be reproducible.
    pub wall_time: Duration,
}

impl SweepSummary {
    pub fn of(identity: &str, reports: &[VerificationReport], wall_time: Duration) -> Self {
        let pass = reports.iter().filter(|r| r.status == Status::Pass).count();
        let skip = reports.iter().filter(|r| r.status == Status::Degenerate).count();
        let max_residual = reports.iter().filter_map(|r| r.rel_residual).fold(0.0, f64::max);
        SweepSummary {
            identity: identity.to_string(),
            n_points: reports.len(),
            pass,
            fail: reports.len() - pass - skip,
            skip,
            max_residual,
            wall_time,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "summary": true,
            "identity": self.identity,
            "n_points": self.n_points,
            "pass": self.pass,
            "fail": self.fail,
            "skip": self.skip,
            "max_residual": self.max_residual,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    /// Tower; `None` follows [`policy`].
    pub mode: Option<Mode>,
    pub tol: Option<f64>,
    pub eval: Option<EvalOptions>,
    pub r_max: i64,
    pub s_max: i64,
    pub m_max: i64,
    /// Worker threads; 0 uses the available processors.
    pub workers: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        let s = SampleOptions::default();
        SweepOptions { mode: None, tol: None, eval: None, r_max: s.r_max, s_max: s.s_max, m_max: s.m_max, workers: 0 }
    }
}

/// `n_points` seeded checks of one identity, in point-index order.
pub fn sweep(identity: &str, n_points: usize, seed: u64, opts: &SweepOptions) -> Result<(Vec<VerificationReport>, SweepSummary)> {
    if n_points == 0 {
        return Err(Error::BadShape("a sweep needs at least one point".into()));
    }
    let desc = find(identity)?;
    let mode = opts.mode.unwrap_or(policy(identity).0);
    let sample = SampleOptions { mode, r_max: opts.r_max, s_max: opts.s_max, m_max: opts.m_max, shape: None };
    let check = CheckOptions { mode: Some(mode), tol: opts.tol, eval: opts.eval };
    let start = Instant::now();
    let run = || -> Vec<VerificationReport> {
        (0..n_points as u64).into_par_iter().map(|i| check_sampled(desc, seed, i, &sample, &check)).collect()
    };
    let reports = if opts.workers == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(run)
    };
    let summary = SweepSummary::of(identity, &reports, start.elapsed());
    Ok((reports, summary))
}

/// JSON array of reports followed by the summary objects.
pub fn sweep_json(runs: &[(Vec<VerificationReport>, SweepSummary)]) -> Value {
    let mut out: Vec<Value> = runs.iter().flat_map(|(r, _)| r.iter().map(VerificationReport::to_json)).collect();
    out.extend(runs.iter().map(|(_, s)| s.to_json()));
    Value::Array(out)
}

fn parts(s: &Option<Scalar>) -> (String, String) {
    match s {
        None => (String::new(), String::new()),
        Some(Scalar::Exact(r)) => (r.to_string(), "0".into()),
        Some(Scalar::Big(b, p)) => (b.re.to_decimal(*p), b.im.to_decimal(*p)),
        Some(Scalar::Double(c)) => (format!("{:e}", c.re), format!("{:e}", c.im)),
    }
}

/// CSV with one row per report.
pub fn reports_csv(reports: &[VerificationReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record([
        "identity", "seed", "index", "mode", "status", "abs_residual", "rel_residual", "lhs_re", "lhs_im", "rhs_re",
        "rhs_im", "point",
    ])
    .map_err(io)?;
    for r in reports {
        let (lr, li) = parts(&r.lhs);
        let (rr, ri) = parts(&r.rhs);
        let opt = |x: Option<u64>| x.map_or(String::new(), |v| v.to_string());
        let res = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:e}"));
        w.write_record([
            r.identity.clone(),
            opt(r.seed),
            opt(r.index),
            r.mode.name(),
            r.status.to_string(),
            res(r.abs_residual),
            res(r.rel_residual),
            lr,
            li,
            rr,
            ri,
            r.point.as_ref().map_or(String::new(), |p| p.to_json().to_string()),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}
