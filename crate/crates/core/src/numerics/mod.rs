//! Arithmetic tower: complex binary64, complex big float with P decimal
//! digits, and exact rationals.

pub mod bigfloat;
pub mod field;
pub mod parse;

pub use bigfloat::{BigComplex, BigFloat};
pub use field::{rational_to_f64, BigCtx, Field};
pub use parse::{parse_rational, CLit};

use crate::error::{Error, Result};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt;

pub const DEFAULT_DIGITS: u32 = 50;

/// Arithmetic mode of a [`Scalar`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    ComplexDouble,
    ComplexBig(u32),
    ExactRational,
}

impl Mode {
    pub fn big() -> Self {
        Mode::ComplexBig(DEFAULT_DIGITS)
    }

    pub fn name(&self) -> String {
        match self {
            Mode::ComplexDouble => "double".into(),
            Mode::ComplexBig(p) => format!("big({p})"),
            Mode::ExactRational => "exact".into(),
        }
    }

    fn rank(&self) -> (u8, u32) {
        match self {
            Mode::ExactRational => (0, 0),
            Mode::ComplexDouble => (1, 0),
            Mode::ComplexBig(p) => (2, *p),
        }
    }

    /// The common mode two operands promote to.
    pub fn join(self, other: Mode) -> Mode {
        if self.rank() >= other.rank() {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Double(Complex64),
    /// Value and its precision in decimal digits.
    Big(BigComplex, u32),
    Exact(BigRational),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Double(_) => Mode::ComplexDouble,
            Scalar::Big(_, p) => Mode::ComplexBig(*p),
            Scalar::Exact(_) => Mode::ExactRational,
        }
    }

    pub fn double(re: f64, im: f64) -> Self {
        Scalar::Double(Complex64::new(re, im))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Scalar::Exact(BigRational::new(n.into(), d.into()))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::from_scalar(self, ()).expect("conversion to double never fails")
    }

    pub fn abs_f64(&self) -> f64 {
        match self {
            Scalar::Double(c) => c.norm(),
            Scalar::Big(b, _) => b.abs_f64(),
            Scalar::Exact(r) => Field::abs_f64(r),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Double(c) => Field::is_exact_zero(c),
            Scalar::Big(b, _) => b.is_zero(),
            Scalar::Exact(r) => Field::is_exact_zero(r),
        }
    }

    /// JSON form: exact values as "p/q", doubles as [re, im] numbers,
    /// big values as [re, im] decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Double(c) => serde_json::json!([c.re, c.im]),
            Scalar::Big(b, p) => serde_json::json!([b.re.to_decimal(*p), b.im.to_decimal(*p)]),
            Scalar::Exact(r) => serde_json::Value::String(r.to_string()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Double(c) => {
                if c.im == 0.0 {
                    write!(f, "{:e}", c.re)
                } else {
                    write!(f, "{:e} {} {:e}i", c.re, if c.im < 0.0 { '-' } else { '+' }, c.im.abs())
                }
            }
            Scalar::Big(b, _) => write!(f, "{b}"),
            Scalar::Exact(r) => write!(f, "{r}"),
        }
    }
}

/// Convert to `target`. Float to exact and loss of float precision are
/// refused.
pub fn promote(x: &Scalar, target: Mode) -> Result<Scalar> {
    match (x, target) {
        (Scalar::Exact(r), Mode::ExactRational) => Ok(Scalar::Exact(r.clone())),
        (_, Mode::ExactRational) => {
            Err(Error::IllegalDemotion(format!("{} to exact", x.mode())))
        }
        (Scalar::Big(_, p), Mode::ComplexDouble) => {
            Err(Error::IllegalDemotion(format!("big({p}) to double")))
        }
        (Scalar::Big(_, p), Mode::ComplexBig(t)) if t < *p => {
            Err(Error::IllegalDemotion(format!("big({p}) to big({t})")))
        }
        _ => Ok(round_to(x, target)),
    }
}

/// Conversion between modes that may lose precision (never into exact
/// from a float).
pub fn round_to(x: &Scalar, target: Mode) -> Scalar {
    match target {
        Mode::ComplexDouble => Scalar::Double(x.to_c64()),
        Mode::ComplexBig(p) => {
            let ctx = BigCtx::new(p);
            let v = match x {
                Scalar::Double(c) => BigComplex::from_f64_pair(c.re, c.im, ctx.bits),
                Scalar::Big(b, _) => b.with_prec(ctx.bits),
                Scalar::Exact(r) => BigComplex::from_rational(r, ctx.bits),
            };
            Scalar::Big(v, p)
        }
        Mode::ExactRational => match x {
            Scalar::Exact(r) => Scalar::Exact(r.clone()),
            _ => panic!("round_to exact from a float value"),
        },
    }
}

/// Tolerances for series truncation and residual checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub term_tol: f64,
    pub residual_tol: f64,
    pub zero_floor: f64,
}

impl Tolerance {
    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::ComplexDouble => Tolerance { term_tol: 1e-17, residual_tol: 1e-10, zero_floor: 1e-300 },
            Mode::ComplexBig(p) => Tolerance {
                term_tol: 10f64.powi(-(p as i32) - 4),
                residual_tol: 1e-9,
                zero_floor: 1e-30,
            },
            Mode::ExactRational => Tolerance { term_tol: 1e-60, residual_tol: 1e-60, zero_floor: 1e-300 },
        }
    }

    pub fn with_residual(mut self, tol: f64) -> Self {
        self.residual_tol = tol;
        if self.term_tol > tol {
            self.term_tol = tol;
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.term_tol > 0.0
            && self.residual_tol > 0.0
            && self.zero_floor > 0.0
            && self.term_tol <= self.residual_tol;
        if ok {
            Ok(())
        } else {
            Err(Error::Parse(format!("invalid tolerance {self:?}")))
        }
    }
}

/// Absolute and relative residual of two field values.
pub fn residual<F: Field>(x: &F, y: &F, zero_floor: f64) -> (f64, f64) {
    let abs = (x.clone() - y.clone()).abs_f64();
    let den = x.abs_f64().max(y.abs_f64()).max(zero_floor);
    (abs, abs / den)
}

/// Absolute and relative residual of two scalars in their joint mode.
/// Exact operands give exact zeros when equal.
pub fn scalar_residual(x: &Scalar, y: &Scalar, zero_floor: f64) -> (f64, f64) {
    match (x, y) {
        (Scalar::Exact(a), Scalar::Exact(b)) if a == b => (0.0, 0.0),
        (Scalar::Exact(a), Scalar::Exact(b)) => residual(a, b, zero_floor),
        _ => match x.mode().join(y.mode()) {
            Mode::ComplexBig(p) => {
                let ctx = BigCtx::new(p);
                let a = BigComplex::from_scalar(x, ctx).expect("promotion to big");
                let b = BigComplex::from_scalar(y, ctx).expect("promotion to big");
                residual(&a, &b, zero_floor)
            }
            _ => residual(&x.to_c64(), &y.to_c64(), zero_floor),
        },
    }
}

/// Relative comparison: returns (within tolerance, relative residual).
/// Exact operands compare literally.
pub fn approx_eq(x: &Scalar, y: &Scalar, tol: &Tolerance) -> (bool, f64) {
    let mode = x.mode().join(y.mode());
    match mode {
        Mode::ExactRational => {
            let (Scalar::Exact(a), Scalar::Exact(b)) = (x, y) else { unreachable!() };
            if a == b {
                (true, 0.0)
            } else {
                let (_, rel) = residual(a, b, tol.zero_floor);
                (false, rel)
            }
        }
        Mode::ComplexDouble => {
            let (_, rel) = residual(&x.to_c64(), &y.to_c64(), tol.zero_floor);
            (rel <= tol.residual_tol, rel)
        }
        Mode::ComplexBig(p) => {
            let ctx = BigCtx::new(p);
            let a = BigComplex::from_scalar(x, ctx).expect("promotion to big");
            let b = BigComplex::from_scalar(y, ctx).expect("promotion to big");
            let (_, rel) = residual(&a, &b, tol.zero_floor);
            (rel <= tol.residual_tol, rel)
        }
    }
}
