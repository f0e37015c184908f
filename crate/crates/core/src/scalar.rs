//! Numeric backends.
//!
//! Every quantity in this crate is computed either in double precision or in
//! exact arbitrary-precision rationals. Inclusion–exclusion sums cancel badly
//! near the boundary of the Shearer region, so correctness checks run in the
//! exact backend and sweeps in the fast one.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which numeric backend produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Float,
    Rational,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Float => "float",
            Backend::Rational => "rational",
        }
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "float" | "f64" => Ok(Backend::Float),
            "rational" | "exact" => Ok(Backend::Rational),
            other => Err(Error::Parse(format!("unknown backend '{other}'"))),
        }
    }
}

impl Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A real-number backend.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    const BACKEND: Backend;

    /// Exact for the rational backend (the binary value of `x`).
    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn from_rational(r: &BigRational) -> Self;

    fn to_rational(&self) -> BigRational;

    /// Magnitude at or below which a value is classified as zero.
    /// Zero for the exact backend.
    fn zero_tol() -> Self;

    /// Slack accepted when comparing a flow value or probability against its
    /// target. Zero for the exact backend.
    fn feasibility_slack() -> Self;

    /// `n`-th root of a non-negative value. The exact backend answers only
    /// when the root is rational.
    fn nth_root(&self, n: u32) -> Option<Self>;

    /// Parses decimal (`0.7`, `1e-3`) or fraction (`3/4`) notation. Decimal
    /// input is exact in the rational backend.
    fn parse_value(s: &str) -> Result<Self>;

    /// Lossless textual form.
    fn to_exact_string(&self) -> String;

    fn is_negligible(&self) -> bool {
        self.abs() <= Self::zero_tol()
    }

    fn from_usize(k: usize) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(k)))
    }

    fn powi(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_float(*self).expect("finite float")
    }

    fn zero_tol() -> Self {
        1e-10
    }

    fn feasibility_slack() -> Self {
        1e-9
    }

    fn nth_root(&self, n: u32) -> Option<Self> {
        if *self < 0.0 {
            return None;
        }
        Some(match n {
            1 => *self,
            2 => self.sqrt(),
            _ => self.powf(1.0 / f64::from(n)),
        })
    }

    fn parse_value(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let a: f64 = a.trim().parse().map_err(|_| Error::Parse(s.into()))?;
            let b: f64 = b.trim().parse().map_err(|_| Error::Parse(s.into()))?;
            return Ok(a / b);
        }
        s.parse().map_err(|_| Error::Parse(format!("not a number: '{s}'")))
    }

    fn to_exact_string(&self) -> String {
        format!("{self:?}")
    }
}

impl Scalar for BigRational {
    const BACKEND: Backend = Backend::Rational;

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn zero_tol() -> Self {
        BigRational::zero()
    }

    fn feasibility_slack() -> Self {
        BigRational::zero()
    }

    fn nth_root(&self, n: u32) -> Option<Self> {
        if self.is_negative() || n == 0 {
            return None;
        }
        let num = exact_int_root(self.numer(), n)?;
        let den = exact_int_root(self.denom(), n)?;
        Some(BigRational::new(num, den))
    }

    fn parse_value(s: &str) -> Result<Self> {
        parse_rational(s)
    }

    fn to_exact_string(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

fn exact_int_root(x: &BigInt, n: u32) -> Option<BigInt> {
    let r = x.nth_root(n);
    if num::pow::pow(r.clone(), n as usize) == *x {
        Some(r)
    } else {
        None
    }
}

/// Parses `a/b`, `1.25`, `-3e-2` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a number: '{s}'"));
    if let Some((a, b)) = s.split_once('/') {
        let a = BigInt::from_str_radix(a.trim(), 10).map_err(|_| err())?;
        let b = BigInt::from_str_radix(b.trim(), 10).map_err(|_| err())?;
        if b.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(a, b));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let joined = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str_radix(if joined.is_empty() { "0" } else { &joined }, 10)
        .map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(num::pow::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num::pow::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

/// Shorthand for building exact constants in tests and closed forms.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}
