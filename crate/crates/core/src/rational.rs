//! Exact rational numbers: literal parsing and the canonical text form shared
//! by every file format in the crate.
//!
//! Decimal literals are read exactly (`"1.1"` is `11/10`). On output a value
//! whose reduced denominator divides a power of ten is written as a
//! terminating decimal, anything else as `p/q`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

/// `v` as a rational.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `n / d` as a reduced rational. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

fn parse_signed(s: &str) -> Option<BigInt> {
    match s.strip_prefix('-') {
        Some(rest) => parse_digits(rest).map(|v| -v),
        None => parse_digits(s.strip_prefix('+').unwrap_or(s)),
    }
}

/// Parses `"7"`, `"-3/2"`, `"0.25"`, `"-.5"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    let err = || ParseRationalError(text.to_string());

    if let Some((num, den)) = s.split_once('/') {
        let num = parse_signed(num.trim()).ok_or_else(err)?;
        let den = parse_digits(den.trim()).ok_or_else(err)?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }

    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let int_value = if int_part.is_empty() {
        BigInt::zero()
    } else {
        parse_digits(int_part).ok_or_else(err)?
    };
    let mut value = Rational::from_integer(int_value);
    if !frac_part.is_empty() {
        let digits = parse_digits(frac_part).ok_or_else(err)?;
        let scale: BigInt = Pow::pow(BigInt::from(10u32), frac_part.len());
        value += Rational::new(digits, scale);
    }
    Ok(if negative { -value } else { value })
}

/// Number of decimal places needed to write `r` exactly, or `None` when the
/// expansion does not terminate.
pub fn decimal_places(r: &Rational) -> Option<u32> {
    let mut den = r.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    den.is_one().then_some(twos.max(fives))
}

/// Canonical text form: integer, terminating decimal, or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let Some(places) = decimal_places(r) else {
        return format!("{}/{}", r.numer(), r.denom());
    };
    let scale: BigInt = Pow::pow(BigInt::from(10u32), places);
    let scaled = (r * Rational::from_integer(scale)).to_integer();
    let digits = scaled.abs().to_string();
    let places = places as usize;
    let padded = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (whole, fraction) = padded.split_at(padded.len() - places);
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{whole}.{fraction}")
}

/// Lossy conversion for drawing only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
