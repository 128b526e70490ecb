use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `a` or `a/b`, with an optional leading sign.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, text.strip_prefix('+').unwrap_or(text).trim_start()),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (body, "1"),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !digits(den) {
        return None;
    }
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    let value = Rational::new(num, den);
    Some(if negative { -value } else { value })
}

/// Renders `a` for integers and `a/b` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Fixed-point decimal rendering with `digits` fractional digits, rounding half to even.
pub fn format_decimal(value: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = value * Rational::from_integer(scale.clone());
    let floor = scaled.floor();
    let frac = &scaled - &floor;
    let half = ratio(1, 2);
    let mut rounded = floor.to_integer();
    if frac > half || (frac == half && rounded.is_odd_big()) {
        rounded += 1;
    }
    let negative = rounded.is_negative();
    let magnitude = rounded.abs();
    let whole = &magnitude / &scale;
    let rest = &magnitude % &scale;
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!(
            "{sign}{whole}.{:0>width$}",
            rest.to_string(),
            width = digits as usize
        )
    }
}

trait OddBig {
    fn is_odd_big(&self) -> bool;
}

impl OddBig for BigInt {
    fn is_odd_big(&self) -> bool {
        !(self % 2u32).is_zero()
    }
}
