//! Exact rational arithmetic for all weights, penalties, dual values and
//! objective values.
//!
//! Every quantity in the solvers is a [`Num`]: an arbitrary-precision
//! rational. Nothing is ever rounded, so "the first constraint that becomes
//! tight" and "these two objective values are equal" are well-defined
//! questions. Instance data (weights, penalties, sweep parameters) is
//! validated to be nonnegative at parse time; intermediate quantities such as
//! net-worth values may legitimately be negative.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number.
///
/// Wraps a reduced `BigRational`. Construct from integers, from decimal text
/// (`"12.5"`), or from fraction text (`"3/7"`); render back with
/// [`Num::to_decimal_string`], which is exact and round-trips.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Num(BigRational);

/// Errors produced when parsing numeric text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumParseError {
    #[error("empty numeric string")]
    Empty,
    #[error("malformed numeric string {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

impl Num {
    pub fn zero() -> Self {
        Num(BigRational::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Num(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_u64(v: u64) -> Self {
        Num(BigRational::from_integer(BigInt::from(v)))
    }

    /// `numer / denom`. Panics if `denom == 0`.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Num(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Parses decimal text (`"42"`, `"6.2"`, `"-0.5"`) or fraction text
    /// (`"87/5"`). Fraction form is what [`Num::to_decimal_string`] emits for
    /// values without a terminating decimal expansion.
    pub fn parse(text: &str) -> Result<Self, NumParseError> {
        let s = text.trim();
        if s.is_empty() {
            return Err(NumParseError::Empty);
        }
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        if body.is_empty() {
            return Err(NumParseError::Malformed(text.to_string()));
        }
        let magnitude = if let Some((n, d)) = body.split_once('/') {
            let numer = parse_digits(n, text)?;
            let denom = parse_digits(d, text)?;
            if denom.is_zero() {
                return Err(NumParseError::ZeroDenominator(text.to_string()));
            }
            BigRational::new(numer, denom)
        } else if let Some((int_part, frac_part)) = body.split_once('.') {
            if int_part.is_empty() && frac_part.is_empty() {
                return Err(NumParseError::Malformed(text.to_string()));
            }
            let int_digits = if int_part.is_empty() {
                BigInt::zero()
            } else {
                parse_digits(int_part, text)?
            };
            let frac_digits = if frac_part.is_empty() {
                BigInt::zero()
            } else {
                parse_digits(frac_part, text)?
            };
            let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
            BigRational::new(int_digits * &scale + frac_digits, scale)
        } else {
            BigRational::from_integer(parse_digits(body, text)?)
        };
        Ok(Num(if negative { -magnitude } else { magnitude }))
    }

    /// Renders the exact value: a terminating decimal when the reduced
    /// denominator is of the form 2^a·5^b, otherwise a reduced fraction
    /// `p/q`.
    pub fn to_decimal_string(&self) -> String {
        let numer = self.0.numer();
        let denom = self.0.denom();
        let (mut twos, mut rest) = (0u32, denom.clone());
        let two = BigInt::from(2u32);
        let five = BigInt::from(5u32);
        while rest.is_even() && !rest.is_zero() {
            rest /= &two;
            twos += 1;
        }
        let mut fives = 0u32;
        while (&rest % &five).is_zero() && !rest.is_zero() {
            rest /= &five;
            fives += 1;
        }
        if rest != BigInt::from(1u32) {
            return format!("{}/{}", numer, denom);
        }
        let digits = twos.max(fives);
        if digits == 0 {
            return numer.to_string();
        }
        // numer / denom == scaled / 10^digits with scaled integral.
        let scaled = numer * BigInt::from(10u32).pow(digits) / denom;
        let negative = scaled.is_negative();
        let body = scaled.abs().to_string();
        let body = if body.len() <= digits as usize {
            format!("{}{}", "0".repeat(digits as usize + 1 - body.len()), body)
        } else {
            body
        };
        let split = body.len() - digits as usize;
        let (int_part, frac_part) = body.split_at(split);
        let frac_part = frac_part.trim_end_matches('0');
        let sign = if negative { "-" } else { "" };
        if frac_part.is_empty() {
            format!("{}{}", sign, int_part)
        } else {
            format!("{}{}.{}", sign, int_part, frac_part)
        }
    }

    /// Nearest-double approximation; used for display with `--float` and as a
    /// non-authoritative filter inside the growth loop.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Least integer ≥ self. Requires self ≥ 0.
    pub fn ceil_to_usize(&self) -> usize {
        assert!(!self.is_negative());
        self.0
            .ceil()
            .to_integer()
            .to_usize()
            .expect("ceil overflows usize")
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }
}

fn parse_digits(s: &str, whole: &str) -> Result<BigInt, NumParseError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(NumParseError::Malformed(whole.to_string()));
    }
    BigInt::from_str(s).map_err(|_| NumParseError::Malformed(whole.to_string()))
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl fmt::Debug for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Num({})", self.to_decimal_string())
    }
}

impl FromStr for Num {
    type Err = NumParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Num::parse(s)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal_string())
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Num::parse(&s).map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Num {
            type Output = Num;
            fn $method(self, rhs: Num) -> Num {
                Num((self.0).$method(rhs.0))
            }
        }
        impl $trait for &Num {
            type Output = Num;
            fn $method(self, rhs: &Num) -> Num {
                Num((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Num> for Num {
            type Output = Num;
            fn $method(self, rhs: &Num) -> Num {
                Num((self.0).$method(&rhs.0))
            }
        }
        impl $trait<Num> for &Num {
            type Output = Num;
            fn $method(self, rhs: Num) -> Num {
                Num((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Num {
    type Output = Num;
    fn div(self, rhs: Num) -> Num {
        assert!(!rhs.is_zero(), "division by zero");
        Num(self.0 / rhs.0)
    }
}

impl Div for &Num {
    type Output = Num;
    fn div(self, rhs: &Num) -> Num {
        assert!(!rhs.is_zero(), "division by zero");
        Num(&self.0 / &rhs.0)
    }
}

impl Neg for Num {
    type Output = Num;
    fn neg(self) -> Num {
        Num(-self.0)
    }
}

impl AddAssign<&Num> for Num {
    fn add_assign(&mut self, rhs: &Num) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Num> for Num {
    fn sub_assign(&mut self, rhs: &Num) {
        self.0 -= &rhs.0;
    }
}

impl std::iter::Sum for Num {
    fn sum<I: Iterator<Item = Num>>(iter: I) -> Num {
        iter.fold(Num::zero(), |acc, x| acc + x)
    }
}

impl From<u64> for Num {
    fn from(v: u64) -> Self {
        Num::from_u64(v)
    }
}
