//! Command-line front end: `list`, `eval`, `check` and `sweep`.
//!
//! Settings come from module defaults, then a flat TOML file (`--config`
//! or `QBIL_CONFIG`), then flags. Exit codes: 0 pass, 1 infrastructure or
//! usage error, 2 evaluation error or degenerate point, 3 constraint
//! violation, 4 verification failure.

use crate::error::{Error, Result};
use crate::identities::{catalog, find, metadata_json, sample_point, Point, SampleOptions, Shape};
use crate::numerics::{Mode, Scalar, DEFAULT_DIGITS};
use crate::series::{eval_spec, eval_vwp, Diagnostics, EvalOptions, SeriesSpec, VWPSpec};
use crate::verify::{
    certify, check_identity, check_sampled, reports_csv, sweep, sweep_json, CheckOptions, Status, SweepOptions,
    SweepSummary, VerificationReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const CONFIG_ENV: &str = "QBIL_CONFIG";

#[derive(Parser, Debug)]
#[command(name = "qbil", version, about = "Evaluate basic hypergeometric series and verify identities between them")]
struct Cli {
    /// Flat TOML settings file (default: $QBIL_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List the identity catalog.
    List {
        /// Emit the JSON metadata export.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a series given as a JSON spec file.
    Eval {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check one identity at a point.
    Check(CheckArgs),
    /// Check seeded points of one identity or of the whole catalog.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Default)]
struct Common {
    #[arg(long, value_enum)]
    tower: Option<Tower>,
    /// Decimal digits of the big tower (implies --tower big).
    #[arg(long)]
    prec: Option<u32>,
    /// Relative residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    identity: String,
    /// JSON point file: {"shape": {...}, "q": ..., "a": ...}.
    #[arg(long, conflicts_with = "sample")]
    point: Option<PathBuf>,
    /// Sample the point from this seed.
    #[arg(long)]
    sample: Option<u64>,
    /// Point index for --sample.
    #[arg(long, default_value_t = 0)]
    index: u64,
    /// Shape for --sample, e.g. "r=3,n=2".
    #[arg(long)]
    shape: Option<String>,
    /// Certify |LHS - RHS| <= eps at an exact point.
    #[arg(long)]
    certify: bool,
    #[arg(long)]
    eps: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, required_unless_present = "all", conflicts_with = "all")]
    identity: Option<String>,
    #[arg(long)]
    all: bool,
    #[arg(short = 'n', default_value_t = 30)]
    points: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Tower {
    Double,
    Big,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

/// Contents of the settings file; every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    tower: Option<Tower>,
    prec: Option<u32>,
    tol: Option<f64>,
    term_tol: Option<f64>,
    max_terms: Option<usize>,
    r_max: Option<i64>,
    s_max: Option<i64>,
    m_max: Option<i64>,
    seed: Option<u64>,
    format: Option<Format>,
    workers: Option<usize>,
    eps: Option<f64>,
}

impl Config {
    fn load(flag: &Option<PathBuf>) -> Result<Config> {
        let path = match flag {
            Some(p) => Some(p.clone()),
            None => std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from),
        };
        let Some(path) = path else { return Ok(Config::default()) };
        let text = read(&path)?;
        toml::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    /// Tower from flags over file; `None` leaves the choice to the
    /// verification policy.
    fn mode(&self, c: &Common) -> Option<Mode> {
        let prec = c.prec.or(self.prec);
        let tower = c.tower.or(self.tower).or(prec.map(|_| Tower::Big));
        tower.map(|t| match t {
            Tower::Double => Mode::ComplexDouble,
            Tower::Big => Mode::ComplexBig(prec.unwrap_or(DEFAULT_DIGITS)),
            Tower::Exact => Mode::ExactRational,
        })
    }

    fn eval_options(&self, mode: Mode) -> Option<EvalOptions> {
        if self.term_tol.is_none() && self.max_terms.is_none() {
            return None;
        }
        let d = EvalOptions::for_mode(mode);
        Some(EvalOptions { term_tol: self.term_tol.unwrap_or(d.term_tol), max_terms: self.max_terms.unwrap_or(d.max_terms) })
    }

    fn sample(&self, mode: Mode) -> SampleOptions {
        let d = SampleOptions::default();
        SampleOptions {
            mode,
            r_max: self.r_max.unwrap_or(d.r_max),
            s_max: self.s_max.unwrap_or(d.s_max),
            m_max: self.m_max.unwrap_or(d.m_max),
            shape: None,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn parse_json(path: &Path) -> Result<Value> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_shape(text: &str) -> Result<Shape> {
    let mut shape = Shape::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("shape entry `{part}` is not name=value")))?;
        let v: i64 = v.trim().parse().map_err(|_| Error::Parse(format!("shape entry `{part}`: not an integer")))?;
        shape.insert(k.trim().to_string(), v);
    }
    Ok(shape)
}

/// Human-oriented scalar text.
fn show(s: &Scalar) -> String {
    match s {
        Scalar::Double(c) if c.im == 0.0 => format!("{}", c.re),
        Scalar::Double(c) => format!("{} {} {}i", c.re, if c.im < 0.0 { '-' } else { '+' }, c.im.abs()),
        other => other.to_string(),
    }
}

/// Outcome of a command: exit code plus what to print.
struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }
}

fn cmd_list(json_out: bool) -> Outcome {
    if json_out {
        return Outcome::ok(0, format!("{:#}\n", metadata_json()));
    }
    let mut out = String::new();
    for d in catalog() {
        out.push_str(&d.list_line());
        out.push('\n');
    }
    Outcome::ok(0, out)
}

fn diag_text(d: &Diagnostics) -> String {
    format!("terms forward {}, backward {}, last term {:.3e}", d.terms_forward, d.terms_backward, d.last_term)
}

fn cmd_eval(cfg: &Config, file: &Path, common: &Common) -> Result<Outcome> {
    let mode = cfg.mode(common).unwrap_or(Mode::ComplexDouble);
    let v = parse_json(file)?;
    let spec = SeriesSpec::from_json(&v, mode).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
    let opts = cfg.eval_options(mode).unwrap_or_else(|| EvalOptions::for_mode(mode));
    let result = match v.get("sigma") {
        Some(sig) => {
            let sigma = crate::numerics::CLit::from_json(sig)
                .and_then(|c| c.to_scalar(mode))
                .map_err(|e| Error::Parse(format!("{}: field `sigma`: {e}", file.display())))?;
            let vwp = VWPSpec {
                kind: spec.kind,
                sigma,
                rest_upper: spec.upper.clone(),
                rest_lower: spec.lower.clone(),
                q: spec.q.clone(),
                z: spec.z.clone(),
            };
            eval_vwp(&vwp, &opts)
        }
        None => eval_spec(&spec, &opts),
    };
    let (value, diag) = match result {
        Ok(x) => x,
        Err(e) => return Ok(Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") }),
    };
    let out = match common.format.or(cfg.format).unwrap_or(Format::Text) {
        Format::Text => format!("{}\nmode: {}\n{}\n", show(&value), mode, diag_text(&diag)),
        Format::Json | Format::Csv => {
            format!("{:#}\n", json!({ "value": value.to_json(), "mode": mode.name(), "diagnostics": diag }))
        }
    };
    Ok(Outcome::ok(0, out))
}

fn report_text(r: &VerificationReport) -> String {
    let mut out = format!("identity      {}\nstatus        {}\nmode          {}\n", r.identity, r.status, r.mode);
    if let (Some(s), Some(i)) = (r.seed, r.index) {
        out.push_str(&format!("sample        seed {s}, index {i}\n"));
    }
    if let Some(p) = &r.point {
        out.push_str(&format!("point         {}\n", p.to_json()));
    }
    if let (Some(l), Some(rh)) = (&r.lhs, &r.rhs) {
        out.push_str(&format!("lhs           {}\nrhs           {}\n", show(l), show(rh)));
    }
    if let (Some(a), Some(rel)) = (r.abs_residual, r.rel_residual) {
        out.push_str(&format!("abs_residual  {a:.3e}\nrel_residual  {rel:.3e}\ntolerance     {:.1e}\n", r.tol));
    }
    if let Some(c) = &r.certificate {
        out.push_str(&format!("certified     |LHS - RHS| <= {:.3e} (eps {:.1e})\n", c.gap_bound, r.tol));
    }
    if r.status != Status::Pass {
        out.push_str(&format!("diagnostics   {}\n", r.diagnostics));
    }
    out
}

fn emit_reports(reports: &[VerificationReport], format: Format) -> Result<String> {
    Ok(match format {
        Format::Json if reports.len() == 1 => format!("{:#}\n", reports[0].to_json()),
        Format::Json => format!("{:#}\n", Value::Array(reports.iter().map(VerificationReport::to_json).collect())),
        Format::Csv => reports_csv(reports)?,
        Format::Text => reports.iter().map(report_text).collect::<Vec<_>>().join("\n"),
    })
}

fn cmd_check(cfg: &Config, a: &CheckArgs) -> Result<Outcome> {
    let desc = find(&a.identity)?;
    let mode = cfg.mode(&a.common);
    let check = CheckOptions {
        mode: if a.certify { None } else { mode },
        tol: a.common.tol.or(cfg.tol),
        eval: mode.and_then(|m| cfg.eval_options(m)),
    };
    let point = match (&a.point, a.sample) {
        (Some(path), _) => {
            let v = parse_json(path)?;
            let p = match mode {
                Some(m) => Point::from_json(&v, m),
                None => Point::from_json(&v, Mode::ExactRational).or_else(|_| Point::from_json(&v, Mode::ComplexDouble)),
            };
            Some(p.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?)
        }
        (None, Some(_)) => None,
        (None, None) => return Err(Error::Parse("check needs --point FILE or --sample SEED".into())),
    };
    let report = if a.certify {
        let point = match point {
            Some(p) => p,
            None => {
                let mut so = cfg.sample(Mode::ExactRational);
                so.shape = a.shape.as_deref().map(parse_shape).transpose()?;
                match sample_point(desc, a.sample.unwrap_or(0), a.index, &so) {
                    Ok(p) => p,
                    Err(e) => return Ok(Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") }),
                }
            }
        };
        let eps = a.eps.or(cfg.eps).unwrap_or(1e-30);
        match certify(desc, &point, eps) {
            Ok(r) => r,
            Err(e @ (Error::Io(_) | Error::Parse(_) | Error::IllegalDemotion(_) | Error::CertificationTooTight(_))) => {
                return Err(e)
            }
            Err(e) => return Ok(Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") }),
        }
    } else {
        match point {
            Some(p) => check_identity(desc, &p, &check),
            None => {
                let m = mode.unwrap_or(crate::verify::policy(desc.id).0);
                let mut so = cfg.sample(m);
                so.shape = a.shape.as_deref().map(parse_shape).transpose()?;
                check_sampled(desc, a.sample.unwrap_or(0), a.index, &so, &CheckOptions { mode: Some(m), ..check })
            }
        }
    };
    let format = a.common.format.or(cfg.format).unwrap_or(Format::Text);
    Ok(Outcome::ok(report.status.exit_code(), emit_reports(std::slice::from_ref(&report), format)?))
}

fn cmd_sweep(cfg: &Config, a: &SweepArgs, workers_default: usize) -> Result<Outcome> {
    let ids: Vec<&str> = match &a.identity {
        Some(id) => vec![find(id)?.id],
        None => catalog().iter().map(|d| d.id).collect(),
    };
    let seed = a.seed.or(cfg.seed).unwrap_or(42);
    let mode = cfg.mode(&a.common);
    let d = SweepOptions::default();
    let opts = SweepOptions {
        mode,
        tol: a.common.tol.or(cfg.tol),
        eval: mode.and_then(|m| cfg.eval_options(m)),
        r_max: cfg.r_max.unwrap_or(d.r_max),
        s_max: cfg.s_max.unwrap_or(d.s_max),
        m_max: cfg.m_max.unwrap_or(d.m_max),
        workers: a.workers.or(cfg.workers).unwrap_or(workers_default),
    };
    let mut runs: Vec<(Vec<VerificationReport>, SweepSummary)> = Vec::new();
    let mut stderr = String::new();
    let start = std::time::Instant::now();
    for id in ids {
        let run = sweep(id, a.points, seed, &opts)?;
        let s = &run.1;
        stderr.push_str(&format!(
            "{:<24} pass {:>4}  fail {:>3}  skip {:>3}  max residual {:.2e}  {:.2}s\n",
            s.identity,
            s.pass,
            s.fail,
            s.skip,
            s.max_residual,
            s.wall_time.as_secs_f64()
        ));
        runs.push(run);
    }
    stderr.push_str(&format!("total wall time {:.2}s\n", start.elapsed().as_secs_f64()));
    let failed = runs.iter().any(|(_, s)| s.fail > 0);
    let format = a.common.format.or(cfg.format).unwrap_or(Format::Json);
    let body = match format {
        Format::Json => format!("{:#}\n", sweep_json(&runs)),
        Format::Csv => reports_csv(&runs.iter().flat_map(|(r, _)| r.iter().cloned()).collect::<Vec<_>>())?,
        Format::Text => {
            let mut t = String::new();
            for (reps, s) in &runs {
                for r in reps {
                    t.push_str(&format!(
                        "{} #{} {} {}\n",
                        r.identity,
                        r.index.unwrap_or(0),
                        r.status,
                        r.rel_residual.map_or("-".into(), |x| format!("{x:.2e}"))
                    ));
                }
                t.push_str(&format!("{}: {} pass, {} fail, {} skip\n", s.identity, s.pass, s.fail, s.skip));
            }
            t
        }
    };
    let stdout = match &a.out {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            String::new()
        }
        None => body,
    };
    Ok(Outcome { code: if failed { 4 } else { 0 }, stdout, stderr })
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let cfg = Config::load(&cli.config)?;
    match &cli.cmd {
        Cmd::List { json } => Ok(cmd_list(*json)),
        Cmd::Eval { file, common } => cmd_eval(&cfg, file, common),
        Cmd::Check(a) => cmd_check(&cfg, a),
        Cmd::Sweep(a) => {
            let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
            cmd_sweep(&cfg, a, workers)
        }
    }
}

/// Run the command line `args` (including the program name) and return
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.stdout.as_bytes());
            let _ = err.write_all(o.stderr.as_bytes());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
