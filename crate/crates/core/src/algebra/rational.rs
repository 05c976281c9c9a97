use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{GkmError, Result};

/// Arbitrary precision rational, always held in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub(crate) fn from_int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or `"p"`. Zero denominators are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| GkmError::Parse(format!("bad rational `{text}`")))?;
    let den = BigInt::from_str(den).map_err(|_| GkmError::Parse(format!("bad rational `{text}`")))?;
    if den.is_zero() {
        return Err(GkmError::Parse(format!("zero denominator in `{text}`")));
    }
    Ok(Rational::new(num, den))
}

/// Renders as `p/q`, or `p` for integers.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}
