//! Exact rational helpers: parsing of `a/b` tokens, canonical formatting and
//! serde adapters that write rationals as lowest-terms strings.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or an integer shorthand `"p"`. Whitespace around the token is ignored.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let t = token.trim();
    let bad = || Error::InvalidRational(token.to_string());
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let numer: BigInt = n.parse().map_err(|_| bad())?;
    let denom: BigInt = d.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Parses a comma-separated list of rational tokens.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    if s.trim().is_empty() {
        return Err(Error::InvalidRational(s.to_string()));
    }
    s.split(',').map(parse_rational).collect()
}

/// Canonical lowest-terms form: `"3"`, `"-1/2"`, `"40/23"`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn format_rational_list(rs: &[Rational]) -> String {
    rs.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact base-2 logarithm of a positive integer that is a power of two.
pub fn exact_log2_count(n: u64) -> Option<u32> {
    if n != 0 && n.is_power_of_two() {
        Some(n.trailing_zeros())
    } else {
        None
    }
}

/// Exact base-2 logarithm of a rational if it is a (possibly negative) power of two.
pub fn exact_log2(r: &Rational) -> Option<i64> {
    if !r.is_positive() {
        return None;
    }
    let n = r.numer().to_u64()?;
    let d = r.denom().to_u64()?;
    match (exact_log2_count(n), exact_log2_count(d)) {
        (Some(a), Some(b)) => Some(a as i64 - b as i64),
        _ => None,
    }
}

pub fn in_closed_unit(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        r: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

pub mod serde_rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rs.len()))?;
        for r in rs {
            seq.serialize_element(&format_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("40/23").unwrap(), rat(40, 23));
        assert_eq!(parse_rational(" 2 ").unwrap(), int(2));
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
        assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "1/0", "a/2", "1.5", "1//2", "/3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert!(parse_rational_list("1,,2").is_err());
    }

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format_rational(&rat(2, 10)), "1/5");
        assert_eq!(format_rational(&rat(6, 2)), "3");
        assert_eq!(format_rational_list(&[rat(4, 3), int(2)]), "4/3,2");
    }

    #[test]
    fn dyadic_logs() {
        assert_eq!(exact_log2(&rat(1, 8)), Some(-3));
        assert_eq!(exact_log2(&int(16)), Some(4));
        assert_eq!(exact_log2(&rat(3, 4)), None);
        assert_eq!(exact_log2(&int(0)), None);
        assert_eq!(exact_log2_count(6), None);
    }
}
