//! Helpers for exact rationals: parsing, string serialization and integer
//! scaling of weight vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `"7"`, `"-3/4"` or `"6/8"` (normalized to `3/4`).
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let parse_int = |s: &str| {
        s.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not a rational number: {text:?}")))
    };
    match text.split_once('/') {
        Some((num, den)) => {
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(BigRational::new(parse_int(num)?, den))
        }
        None => Ok(BigRational::from_integer(parse_int(text)?)),
    }
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

pub fn to_f64(value: &BigRational) -> f64 {
    // Very large numerators and denominators overflow f64 individually even
    // when the quotient is moderate, so shift both down first.
    if let (Some(n), Some(d)) = (value.numer().to_f64(), value.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = value.numer().bits() as i64;
    let db = value.denom().bits() as i64;
    let shift_n = (nb - 900).max(0) as u64;
    let shift_d = (db - 900).max(0) as u64;
    let n = (value.numer() >> shift_n).to_f64().unwrap_or(f64::NAN);
    let d = (value.denom() >> shift_d).to_f64().unwrap_or(f64::NAN);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// Writes the weights as integers over one common denominator.
///
/// Returns `(scaled, denominator)` with `weights[i] = scaled[i] / denominator`.
/// Counting DPs run on the scaled integers and divide by `denominator^n` once
/// at the end, which keeps every intermediate value an integer.
pub fn common_denominator<'a, I>(weights: I) -> (Vec<BigInt>, BigInt)
where
    I: IntoIterator<Item = &'a BigRational>,
{
    let weights: Vec<&BigRational> = weights.into_iter().collect();
    let mut den = BigInt::one();
    for w in &weights {
        den = den.lcm(w.denom());
    }
    let scaled = weights
        .iter()
        .map(|w| w.numer() * (&den / w.denom()))
        .collect();
    (scaled, den)
}

pub fn is_positive(value: &BigRational) -> bool {
    value.is_positive()
}

/// Serializes a rational as its display string (`"7"`, `"1/3"`).
pub mod serde_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Same as [`serde_str`] for a vector of rationals.
pub mod serde_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&v.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}
