//! Arbitrary precision rationals and their string form.
//!
//! Rationals are serialized as `"num/den"` (or just `"num"` for integers) so
//! that no JSON reader can lose precision. `num_rational` keeps every value
//! reduced with a positive denominator, which makes equality canonical.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` as a reduced rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-3"`, or `"3/4"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let mut parts = s.splitn(2, '/');
    let num: BigInt = parts
        .next()
        .ok_or_else(bad)?
        .trim()
        .parse()
        .map_err(|_| bad())?;
    let den: BigInt = match parts.next() {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(num, den))
}

/// Formats without precision loss; integers drop the denominator.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Sign helper used by term displays.
pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}
