//! Text and JSON input for scalar values.

use super::{round_to, Mode, Scalar};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

/// Parse "p/q", an integer, or a decimal such as "-1.25e-3" exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
    let e = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let mut r = if e >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, e as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-e) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// A complex literal with exact rational parts, materialized in any mode.
#[derive(Clone, Debug, PartialEq)]
pub struct CLit {
    pub re: BigRational,
    pub im: BigRational,
}

impl CLit {
    pub fn real(re: BigRational) -> Self {
        CLit { re, im: BigRational::zero() }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Ok(CLit::real(parse_rational(s)?)),
            Value::Number(_) => Ok(CLit::real(json_real(v)?)),
            Value::Array(a) if a.len() == 2 => Ok(CLit { re: json_real(&a[0])?, im: json_real(&a[1])? }),
            _ => Err(Error::Parse(format!("expected \"p/q\", a number or [re, im], got {v}"))),
        }
    }

    pub fn to_scalar(&self, mode: Mode) -> Result<Scalar> {
        if mode == Mode::ExactRational {
            if !self.im.is_zero() {
                return Err(Error::Parse("exact mode needs real rational values".into()));
            }
            return Ok(Scalar::Exact(self.re.clone()));
        }
        let exact_re = Scalar::Exact(self.re.clone());
        let exact_im = Scalar::Exact(self.im.clone());
        Ok(match mode {
            Mode::ComplexDouble => {
                Scalar::double(exact_re.to_c64().re, exact_im.to_c64().re)
            }
            Mode::ComplexBig(p) => {
                let (Scalar::Big(re, _), Scalar::Big(im, _)) = (round_to(&exact_re, mode), round_to(&exact_im, mode))
                else {
                    unreachable!()
                };
                Scalar::Big(super::BigComplex::new(re.re, im.re), p)
            }
            Mode::ExactRational => unreachable!(),
        })
    }
}

fn json_real(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                return Ok(BigRational::from_integer(i.into()));
            }
            let f = n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}")))?;
            BigRational::from_float(f).ok_or_else(|| Error::Parse(format!("bad number {n}")))
        }
        _ => Err(Error::Parse(format!("expected a number or string, got {v}"))),
    }
}

/// Rational from an f64, exactly.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::one)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/6").unwrap(), r(1, 2));
        assert_eq!(parse_rational("-1.25e-1").unwrap(), r(-1, 8));
        assert_eq!(parse_rational("0.1").unwrap(), r(1, 10));
        assert_eq!(parse_rational("42").unwrap(), r(42, 1));
        assert_eq!(parse_rational(".5").unwrap(), r(1, 2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn json_literals() {
        let v: Value = serde_json::from_str(r#"["1/3", 0.5]"#).unwrap();
        let c = CLit::from_json(&v).unwrap();
        assert_eq!(c.re, r(1, 3));
        assert_eq!(c.im, r(1, 2));
        assert!(c.to_scalar(Mode::ExactRational).is_err());
        let v: Value = serde_json::from_str(r#""2/5""#).unwrap();
        assert_eq!(CLit::from_json(&v).unwrap().to_scalar(Mode::ExactRational).unwrap(), Scalar::rational(2, 5));
    }
}
