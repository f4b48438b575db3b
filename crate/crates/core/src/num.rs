//! Arithmetic used by the LP kernel and the cover pipeline.
//!
//! Weights are always stored as exact rationals. Solvers are generic over
//! [`Scalar`], which is implemented for [`Rational`] (exact, zero tolerance)
//! and `f64` (floating, small tolerances).

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Feasibility tolerance used in floating mode.
pub const FLOAT_TOL: f64 = 1e-9;
/// Separates "cover(e) > 0" from numeric noise in floating mode.
pub const FLOAT_SLACK_EPS: f64 = 1e-7;

/// Field operations plus the tolerance policy of one arithmetic mode.
pub trait Scalar: Clone + Debug + PartialOrd + Send + Sync + 'static {
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_rational(&self) -> Rational;
    fn to_f64(&self) -> f64;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn abs(&self) -> Self;

    /// Feasibility tolerance (zero in exact mode).
    fn tol() -> Self;
    /// Positivity threshold for cover values (zero in exact mode).
    fn slack_eps() -> Self;

    /// Exact test for a structural zero. Floats snap tiny values.
    fn is_zero(&self) -> bool;

    fn exceeds_tol(&self) -> bool {
        *self > Self::tol()
    }

    fn is_positive_cover(&self) -> bool {
        *self > Self::slack_eps()
    }

    /// Clean up accumulated round-off. No-op in exact mode.
    fn snap(self) -> Self {
        self
    }

    fn clamp_unit(self) -> Self {
        if self < Self::zero() {
            Self::zero()
        } else if self > Self::one() {
            Self::one()
        } else {
            self
        }
    }

    fn sum<'a, I: IntoIterator<Item = &'a Self>>(items: I) -> Self {
        items.into_iter().fold(Self::zero(), |acc, x| acc.add(x))
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn tol() -> Self {
        Zero::zero()
    }
    fn slack_eps() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn to_rational(&self) -> Rational {
        Rational::from_f64(*self).unwrap_or_else(Zero::zero)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn tol() -> Self {
        FLOAT_TOL
    }
    fn slack_eps() -> Self {
        FLOAT_SLACK_EPS
    }
    fn is_zero(&self) -> bool {
        f64::abs(*self) < 1e-12
    }
    fn snap(self) -> Self {
        if f64::abs(self) < 1e-12 {
            0.0
        } else {
            self
        }
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Renders `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses an integer (`3`), ratio (`5/2`) or decimal literal (`2.5`, `1e-3`).
///
/// Decimal literals are converted digit-by-digit so `0.1` becomes exactly
/// `1/10`. Infinite or NaN inputs are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidArgument(format!("not a number: {text:?}"));
    if text.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = text.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::InvalidArgument(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Ok(i) = BigInt::from_str(text) {
        return Ok(Rational::from_integer(i));
    }
    parse_decimal(text).ok_or_else(bad)
}

fn parse_decimal(text: &str) -> Option<Rational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&digits).ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    if negative {
        value = -value;
    }
    Some(value)
}
