use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::precise::Real;

/// Decimal scientific notation: `±d.ddd…e±X`.
///
/// `digits` holds the significant digits with the decimal point after the
/// first one. Zero is the single digit `0` with exponent 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SciNumber {
    negative: bool,
    digits: String,
    exp10: i64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse {0:?} as a decimal number")]
pub struct SciParseError(pub String);

fn ten_pow(k: u64) -> BigInt {
    Pow::pow(BigInt::from(10u32), k)
}

impl SciNumber {
    pub fn zero() -> Self {
        SciNumber { negative: false, digits: "0".into(), exp10: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.digits == "0"
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn digits(&self) -> &str {
        &self.digits
    }

    pub fn exp10(&self) -> i64 {
        self.exp10
    }

    pub fn significant_digits(&self) -> usize {
        self.digits.len()
    }

    fn from_integer_digits(negative: bool, mut int: BigInt, mut exp10: i64, digits: usize) -> Self {
        // int holds `digits` or `digits + 1` decimal digits after rounding
        let mut s = int.to_string();
        if s.len() > digits {
            int /= 10;
            exp10 += 1;
            s = int.to_string();
        }
        if int.is_zero() {
            return SciNumber::zero();
        }
        SciNumber { negative, digits: s, exp10 }
    }

    /// Nearest `digits`-digit value to `exp(ln_value)`.
    pub fn from_ln(ln_value: &Real, digits: usize) -> Self {
        let bits = ln_value.bits();
        let ln10 = Real::ln10(bits);
        let e = ln_value.div(&ln10).floor();
        let e_i64 = e.to_i64().expect("exponent out of range");
        let frac = ln_value.clone() - ln10.mul_ratio(&BigRational::from_integer(e));
        let mantissa = frac.exp();
        let scaled = mantissa.mul_ratio(&BigRational::from_integer(ten_pow(digits as u64 - 1)));
        let half = Real::from_ratio(&BigRational::new(1.into(), 2.into()), bits);
        let int = (scaled + half).floor();
        let mut exp10 = e_i64;
        let mut int = int;
        // guard against a mantissa a hair below 1 from rounding in the log
        if int.to_string().len() < digits {
            int *= 10;
            exp10 -= 1;
        }
        SciNumber::from_integer_digits(false, int, exp10, digits)
    }

    /// Nearest `digits`-digit value to an exact rational.
    pub fn from_rational(value: &BigRational, digits: usize) -> Self {
        if value.is_zero() {
            return SciNumber::zero();
        }
        let negative = value.is_negative();
        let v = value.abs();
        // estimate the decimal exponent, then correct
        let mut e = (v.numer().to_string().len() as i64) - (v.denom().to_string().len() as i64);
        let scale = |e: i64| -> BigRational {
            if e >= 0 {
                BigRational::from_integer(ten_pow(e as u64))
            } else {
                BigRational::new(BigInt::one(), ten_pow((-e) as u64))
            }
        };
        while v < scale(e) {
            e -= 1;
        }
        while v >= scale(e + 1) {
            e += 1;
        }
        let shifted = &v / scale(e) * BigRational::from_integer(ten_pow(digits as u64 - 1));
        let int = (shifted + BigRational::new(1.into(), 2.into())).floor().to_integer();
        SciNumber::from_integer_digits(negative, int, e, digits)
    }

    /// Exact rational value of the decimal representation.
    pub fn to_rational(&self) -> BigRational {
        let int: BigInt = self.digits.parse().expect("digit string");
        let shift = self.exp10 - (self.digits.len() as i64 - 1);
        let mag = if shift >= 0 {
            BigRational::from_integer(int * ten_pow(shift as u64))
        } else {
            BigRational::new(int, ten_pow((-shift) as u64))
        };
        if self.negative {
            -mag
        } else {
            mag
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_string().parse().unwrap_or(f64::NAN)
    }

    /// Rounds half-up to at most `digits` significant digits.
    pub fn round_to(&self, digits: usize) -> Self {
        if self.digits.len() <= digits || self.is_zero() {
            return self.clone();
        }
        let head: BigInt = self.digits[..digits].parse().unwrap();
        let next = self.digits.as_bytes()[digits] - b'0';
        let int = if next >= 5 { head + 1 } else { head };
        SciNumber::from_integer_digits(self.negative, int, self.exp10, digits)
    }
}

impl fmt::Display for SciNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { "-" } else { "" };
        let (head, tail) = self.digits.split_at(1);
        let esign = if self.exp10 < 0 { '-' } else { '+' };
        if tail.is_empty() {
            write!(f, "{sign}{head}e{esign}{}", self.exp10.abs())
        } else {
            write!(f, "{sign}{head}.{tail}e{esign}{}", self.exp10.abs())
        }
    }
}

impl FromStr for SciNumber {
    type Err = SciParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SciParseError(s.to_string());
        let t = s.trim();
        let (negative, t) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (mant, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| err())?),
            None => (t, 0),
        };
        let (int_part, frac_part) = match mant.find('.') {
            Some(i) => (&mant[..i], &mant[i + 1..]),
            None => (mant, ""),
        };
        if int_part.is_empty() && frac_part.is_empty()
            || !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit())
        {
            return Err(err());
        }
        let all = format!("{int_part}{frac_part}");
        let lead = all.bytes().take_while(|&b| b == b'0').count();
        if lead == all.len() {
            return Ok(SciNumber::zero());
        }
        let exp10 = exp + int_part.len() as i64 - 1 - lead as i64;
        Ok(SciNumber { negative, digits: all[lead..].to_string(), exp10 })
    }
}

impl Serialize for SciNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SciNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
