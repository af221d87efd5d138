//! Serialization helpers: big integers travel as decimal strings, intervals as
//! `{"lo", "hi"}` pairs of directed scientific-notation strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::quadfield::{Interval, Round};

/// Significant digits used for every decimal rendering of an interval endpoint.
pub const DIGITS: usize = 17;

pub fn interval_value(x: &Interval) -> Value {
    serde_json::json!({
        "lo": x.lo().to_sci_string(DIGITS, Round::Down),
        "hi": x.hi().to_sci_string(DIGITS, Round::Up),
    })
}

/// Upper endpoint rendered upward, the form used for reported bounds.
pub fn upper(x: &Interval) -> String {
    x.hi().to_sci_string(DIGITS, Round::Up)
}

/// Small integers become JSON numbers, larger ones decimal strings.
pub fn compact_int(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

pub fn parse_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).or_else(|| n.to_string().parse().ok()),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// Parses a decimal such as `4.6051e1`, `-12` or `0.5` into an exact rational.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let t = text.trim();
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().ok()?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let shift = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    let mut r = if shift >= 0 {
        BigRational::from_integer(digits * scale)
    } else {
        BigRational::new(digits, scale)
    };
    if neg {
        r = -r;
    }
    Some(r)
}

/// Rational value of an integer or decimal-string JSON field.
pub fn decimal_value(v: &Value) -> Option<BigRational> {
    match v {
        Value::String(s) => parse_decimal(s),
        Value::Number(n) => parse_decimal(&n.to_string()),
        _ => None,
    }
}

pub mod decimal {
    use super::*;

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        n.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let v = Value::deserialize(d)?;
        parse_int(&v).ok_or_else(|| serde::de::Error::custom(format!("not an integer: {v}")))
    }
}

pub mod compact_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(compact_int).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<Value>::deserialize(d)?;
        raw.iter()
            .map(|v| parse_int(v).ok_or_else(|| serde::de::Error::custom(format!("not an integer: {v}"))))
            .collect()
    }
}

pub mod compact {
    use super::*;

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        compact_int(n).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        super::decimal::deserialize(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::Dyadic;
    use num_traits::One;

    #[test]
    fn decimal_round_trip_is_an_upper_bound() {
        for (m, e) in [(7i64, -3i64), (123456789, 40), (-5, 2), (1, 0)] {
            let d = Dyadic::new(BigInt::from(m), e);
            let s = d.to_sci_string(DIGITS, Round::Up);
            assert!(parse_decimal(&s).unwrap() >= d.to_rational(), "{s}");
        }
        assert_eq!(parse_decimal("2.5e1").unwrap(), BigRational::from_integer(25.into()));
        assert_eq!(parse_decimal("-0.25").unwrap(), BigRational::new((-1).into(), 4.into()));
        assert!(parse_decimal("abc").is_none());
        assert!(BigRational::one() > BigRational::new(1.into(), 2.into()));
    }
}
