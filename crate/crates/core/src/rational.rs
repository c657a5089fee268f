// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

//! Helpers for exact rationals: parsing, decimal rendering, one-sided n-th
//! roots and string-based serde adapters.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn from_biguint(v: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from_biguint(Sign::Plus, v.clone()))
}

/// `x^e` for a non-negative integer exponent.
pub fn pow(x: &BigRational, e: usize) -> BigRational {
    num_traits::pow(x.clone(), e)
}

/// Parses `"3"`, `"-7/4"`, `"0.125"` or `"1e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    let bad = || Error::Parse(format!("not a rational literal: {text:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{whole}{frac}");
    let mut numer: BigInt = if joined.is_empty() { BigInt::zero() } else { joined.parse().map_err(|_| bad())? };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac.len() as i64;
    if exponent.unsigned_abs() > 10_000 {
        return Err(bad());
    }
    let ten = BigInt::from(10u32);
    Ok(if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Renders `x` as a decimal string truncated toward zero after `digits`
/// fractional digits.
pub fn to_decimal(x: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = (x.numer().abs() * &scale) / x.denom();
    let (whole, frac) = scaled.div_rem(&scale);
    let sign = if x.is_negative() && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = digits)
    }
}

/// Lossy conversion for reporting only.
pub fn to_f64(x: &BigRational) -> f64 {
    to_decimal(x, 17).parse().unwrap_or(f64::NAN)
}

fn nth_root_scaled(x: &BigRational, n: usize, digits: usize) -> (BigUint, BigUint, bool) {
    assert!(n >= 1, "root index must be positive");
    assert!(!x.is_negative(), "root of a negative rational");
    let scale = num_traits::pow(BigUint::from(10u32), digits);
    let numer = x.numer().to_biguint().expect("non-negative");
    let denom = x.denom().to_biguint().expect("positive");
    // floor((numer/denom) * 10^(digits*n)) has the same integer n-th root floor
    let target = numer * num_traits::pow(scale.clone(), n) / &denom;
    let root = target.nth_root(n as u32);
    let exact = {
        let back = num_traits::pow(root.clone(), n);
        back * &denom == x.numer().to_biguint().unwrap() * num_traits::pow(scale.clone(), n)
    };
    (root, scale, exact)
}

/// Largest multiple of `10^-digits` whose `n`-th power does not exceed `x`.
pub fn nth_root_floor(x: &BigRational, n: usize, digits: usize) -> BigRational {
    let (root, scale, _) = nth_root_scaled(x, n, digits);
    BigRational::new(BigInt::from(root), BigInt::from(scale))
}

/// `x^{1/n}` when it is rational.
pub fn exact_nth_root(x: &BigRational, n: usize) -> Option<BigRational> {
    assert!(n >= 1, "root index must be positive");
    if x.is_negative() {
        return None;
    }
    let root = |v: &BigInt| {
        let v = v.to_biguint().expect("non-negative");
        let r = v.nth_root(n as u32);
        (num_traits::pow(r.clone(), n) == v).then_some(r)
    };
    let (p, q) = (root(x.numer())?, root(x.denom())?);
    Some(BigRational::new(BigInt::from(p), BigInt::from(q)))
}

/// Smallest multiple of `10^-digits` whose `n`-th power is at least `x`.
pub fn nth_root_ceil(x: &BigRational, n: usize, digits: usize) -> BigRational {
    let (root, scale, exact) = nth_root_scaled(x, n, digits);
    let root = if exact { root } else { root + BigUint::one() };
    BigRational::new(BigInt::from(root), BigInt::from(scale))
}

/// Serde adapters that keep rationals as `"p/q"` strings.
pub mod serde_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
            match x {
                Some(v) => s.collect_str(v),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigRational>, D::Error> {
            let text: Option<String> = Option::deserialize(d)?;
            text.map(|t| parse_rational(&t).map_err(serde::de::Error::custom)).transpose()
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
            let texts: Vec<String> = Vec::deserialize(d)?;
            texts.iter().map(|t| parse_rational(t).map_err(serde::de::Error::custom)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-7/4").unwrap(), ratio(-7, 4));
        assert_eq!(parse_rational("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse_rational("-.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("1e-3").unwrap(), ratio(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), ratio(3, 2));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "abc", "1.2.3", "--1", ".", "1/2/3"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn decimal_truncates() {
        assert_eq!(to_decimal(&ratio(2, 3), 4), "0.6666");
        assert_eq!(to_decimal(&ratio(-2, 3), 2), "-0.66");
        assert_eq!(to_decimal(&int(5), 0), "5");
        assert_eq!(to_decimal(&ratio(1, 20), 3), "0.050");
    }

    #[test]
    fn roots_bracket_value() {
        let x = int(2);
        let lo = nth_root_floor(&x, 2, 6);
        let hi = nth_root_ceil(&x, 2, 6);
        assert!(pow(&lo, 2) <= x && pow(&hi, 2) >= x);
        assert_eq!(&hi - &lo, ratio(1, 1_000_000));
        assert_eq!(nth_root_floor(&int(27), 3, 5), int(3));
        assert_eq!(nth_root_ceil(&int(27), 3, 5), int(3));
        assert_eq!(nth_root_floor(&ratio(1, 4), 2, 3), ratio(1, 2));
    }

    #[test]
    fn exact_roots() {
        assert_eq!(exact_nth_root(&ratio(8, 27), 3), Some(ratio(2, 3)));
        assert_eq!(exact_nth_root(&ratio(1, 9), 2), Some(ratio(1, 3)));
        assert_eq!(exact_nth_root(&ratio(1, 5), 2), None);
        assert_eq!(exact_nth_root(&int(-4), 2), None);
    }
}
