use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always held in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Parses `"p/q"` or `"p"` in base 10. Surrounding whitespace is ignored;
/// the result is canonicalized.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::parse(text, "empty rational"));
    }
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num = BigInt::from_str(num).map_err(|e| Error::parse(text, format!("numerator: {e}")))?;
    let den =
        BigInt::from_str(den).map_err(|e| Error::parse(text, format!("denominator: {e}")))?;
    if den.is_zero() {
        return Err(Error::parse(text, "zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"p"` when the denominator is one, else `"p/q"`.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn rational_from_int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Smallest positive integer vector that is a positive multiple of `coords`.
/// The zero vector maps to the zero vector.
pub fn primitive_integer(coords: &[Rational]) -> Vec<BigInt> {
    let lcm = coords
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled: Vec<BigInt> = coords
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    reduce_by_gcd(scaled)
}

pub(crate) fn reduce_by_gcd(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
    }
    v
}

pub(crate) mod serde_point {
    //! `Vec<Rational>` as an array of canonical rational strings.
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(coords: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(coords.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_canonicalizes() {
        assert_eq!(format_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("-3").unwrap()), "-3");
        assert_eq!(format_rational(&parse_rational("3/-6").unwrap()), "-1/2");
        assert_eq!(format_rational(&parse_rational(" 10/5 ").unwrap()), "2");
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn primitive_integer_scales_positively() {
        let v = vec![parse_rational("1/2").unwrap(), parse_rational("-3/4").unwrap()];
        assert_eq!(primitive_integer(&v), vec![BigInt::from(2), BigInt::from(-3)]);
        let z = vec![Rational::zero(), Rational::zero()];
        assert_eq!(primitive_integer(&z), vec![BigInt::zero(), BigInt::zero()]);
    }
}
