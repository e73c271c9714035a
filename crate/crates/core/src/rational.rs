//! Exact rationals used for ρ, δ, probabilities and every sign decision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Arbitrary-precision rational in canonical form (denominator > 0).
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `"p/q"` or `"p"`. Decimal notation is rejected: every value that
/// enters a sign decision has to be exact.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("`{s}` is not a rational of the form p/q"));
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::InvalidArgument(format!("`{s}` has a zero denominator")));
    }
    Ok(Rational::new(num, den))
}

/// Checks `0 <= rho <= 1`.
pub fn check_unit(rho: &Rational, what: &str) -> Result<()> {
    if rho.is_negative() || *rho > Rational::one() {
        return Err(Error::InvalidArgument(format!("{what} = {rho} lies outside [0, 1]")));
    }
    Ok(())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division when numerator or denominator overflow f64.
        let shift = r.denom().bits().max(r.numer().bits()).saturating_sub(1000);
        let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
        let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
        n / d
    })
}

/// Parses an exact decimal such as `1e-9`, `0.001` or `3/1000` into a rational.
/// Only used for tolerances; ρ and δ go through [`parse_rational`].
pub fn parse_decimal(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.contains('/') || !s.contains(['.', 'e', 'E']) {
        return parse_rational(s);
    }
    let bad = || Error::InvalidArgument(format!("`{s}` is not a decimal number"));
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let exp = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if exp >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, exp as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-exp) as usize))
    })
}

/// `base^exp` for rationals.
pub fn pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// JSON rendering of an exact rational with a float mirror alongside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
    pub approx: f64,
}

impl From<&Rational> for RationalRepr {
    fn from(r: &Rational) -> Self {
        RationalRepr { num: r.numer().to_string(), den: r.denom().to_string(), approx: to_f64(r) }
    }
}

impl RationalRepr {
    pub fn to_rational(&self) -> Result<Rational> {
        parse_rational(&format!("{}/{}", self.num, self.den))
    }
}

/// Serde helper so structs can hold `Rational` fields directly.
pub mod serde_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalRepr::from(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let repr = RationalRepr::deserialize(d)?;
        repr.to_rational().map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_opt {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        r.as_ref().map(RationalRepr::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        let repr = Option::<RationalRepr>::deserialize(d)?;
        repr.map(|r| r.to_rational()).transpose().map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        v.iter().map(RationalRepr::from).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let reprs = Vec::<RationalRepr>::deserialize(d)?;
        reprs.iter().map(|r| r.to_rational()).collect::<Result<_>>().map_err(serde::de::Error::custom)
    }
}
