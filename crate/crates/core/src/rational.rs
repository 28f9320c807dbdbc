//! Exact rational numbers.
//!
//! Every quantity in the engine is a [`Rational`]: an arbitrary precision
//! fraction kept in lowest terms with a positive denominator. The textual
//! form is `"p/q"`, or `"p"` when the denominator is one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n / d` as a rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// `[z]^+`
pub fn pos_part(z: &Rational) -> Rational {
    if z.is_positive() {
        z.clone()
    } else {
        Rational::zero()
    }
}

/// Parses `"p/q"` or `"p"`; surrounding whitespace is rejected.
pub fn parse(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    if s.is_empty() || s.trim() != s {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"p/q"` text (`"p"` for integers).
pub fn format(r: &Rational) -> String {
    r.to_string()
}

/// Decimal rendering with `digits` significant digits, truncated toward
/// zero. Display only; never parsed back.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();
    let (int_part, mut rem) = num.div_rem(&den);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    let int_str = int_part.to_string();
    out.push_str(&int_str);
    let mut used = if int_part.is_zero() { 0 } else { int_str.len() };
    if rem.is_zero() || used >= digits {
        return out;
    }
    out.push('.');
    let ten = BigInt::from(10);
    let mut frac = String::new();
    let mut leading = int_part.is_zero();
    while !rem.is_zero() && used < digits {
        rem *= &ten;
        let (q, r2) = rem.div_rem(&den);
        rem = r2;
        let digit = q.to_string();
        frac.push_str(&digit);
        if leading && digit == "0" {
            continue;
        }
        leading = false;
        used += 1;
    }
    out.push_str(&frac);
    out
}

pub fn to_f64(r: &Rational) -> f64 {
    to_decimal(r, 20).parse().unwrap_or(f64::NAN)
}

pub fn min<'a>(a: &'a Rational, b: &'a Rational) -> &'a Rational {
    if a <= b {
        a
    } else {
        b
    }
}

/// Serde adapter: rationals as `"p/q"` strings.
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("4/6").unwrap(), rat(2, 3));
        assert_eq!(parse("-3").unwrap(), int(-3));
        assert_eq!(parse("1/-2").unwrap(), rat(-1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse(" 1").is_err());
        assert!(parse("").is_err());
        assert!(parse("1.5").is_err());
    }

    #[test]
    fn format_is_lowest_terms() {
        assert_eq!(format(&rat(8, 6)), "4/3");
        assert_eq!(format(&int(7)), "7");
        assert_eq!(format(&rat(-1, 3)), "-1/3");
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&rat(4, 3), 5), "1.3333");
        assert_eq!(to_decimal(&rat(1, 8), 20), "0.125");
        assert_eq!(to_decimal(&rat(-1, 300), 3), "-0.00333");
        assert_eq!(to_decimal(&int(12345), 3), "12345");
    }

    proptest! {
        #[test]
        fn text_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = rat(n, d);
            prop_assert_eq!(parse(&format(&r)).unwrap(), r);
        }
    }
}
