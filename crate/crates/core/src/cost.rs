//! Exact rational money amounts.
//!
//! Every cost, payment, share and utility in the crate is a [`Cost`]. The
//! value is an arbitrary-precision rational, so equalities such as budget
//! balance are checked without tolerance. The type is signed: payments to
//! the winning contractor are negative and utilities may be negative.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Cost(BigRational);

/// Failure to read a rational literal.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{literal}`: {reason}")]
pub struct ParseCostError {
    pub literal: String,
    pub reason: &'static str,
}

impl Cost {
    pub fn zero() -> Self {
        Cost(BigRational::zero())
    }

    pub fn integer(value: i64) -> Self {
        Cost(BigRational::from_integer(BigInt::from(value)))
    }

    /// `numer / denom`. Panics when `denom` is zero.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Cost(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_rational(value: BigRational) -> Self {
        Cost(value)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Cost(self.0.abs())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Lossy conversion for display and logging only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Cost {
    /// `p/q` in lowest terms, or the bare integer when `q = 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

fn parse_integer(digits: &str, literal: &str) -> Result<BigInt, ParseCostError> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseCostError {
            literal: literal.to_string(),
            reason: "expected decimal digits",
        });
    }
    digits.parse().map_err(|_| ParseCostError {
        literal: literal.to_string(),
        reason: "expected decimal digits",
    })
}

impl FromStr for Cost {
    type Err = ParseCostError;

    /// Accepts `[-]digits[/digits]` with a strictly positive denominator.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (numer, denom) = match body.split_once('/') {
            Some((n, d)) => (parse_integer(n, s)?, parse_integer(d, s)?),
            None => (parse_integer(body, s)?, BigInt::from(1)),
        };
        if denom.is_zero() {
            return Err(ParseCostError {
                literal: s.to_string(),
                reason: "denominator must be positive",
            });
        }
        let value = BigRational::new(numer, denom);
        Ok(Cost(if negative { -value } else { value }))
    }
}

impl From<i64> for Cost {
    fn from(value: i64) -> Self {
        Cost::integer(value)
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Cost> for &'a Cost {
    type Output = Cost;
    fn add(self, rhs: &Cost) -> Cost {
        Cost(&self.0 + &rhs.0)
    }
}

impl AddAssign<&Cost> for Cost {
    fn add_assign(&mut self, rhs: &Cost) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Cost {
    fn add_assign(&mut self, rhs: Cost) {
        self.0 += rhs.0;
    }
}

impl Sub for Cost {
    type Output = Cost;
    fn sub(self, rhs: Cost) -> Cost {
        Cost(self.0 - rhs.0)
    }
}

impl<'a> Sub<&'a Cost> for &'a Cost {
    type Output = Cost;
    fn sub(self, rhs: &Cost) -> Cost {
        Cost(&self.0 - &rhs.0)
    }
}

impl Mul for Cost {
    type Output = Cost;
    fn mul(self, rhs: Cost) -> Cost {
        Cost(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Cost> for &'a Cost {
    type Output = Cost;
    fn mul(self, rhs: &Cost) -> Cost {
        Cost(&self.0 * &rhs.0)
    }
}

impl Div for Cost {
    type Output = Cost;
    /// Panics on division by zero.
    fn div(self, rhs: Cost) -> Cost {
        Cost(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Cost> for &'a Cost {
    type Output = Cost;
    fn div(self, rhs: &Cost) -> Cost {
        Cost(&self.0 / &rhs.0)
    }
}

impl Neg for Cost {
    type Output = Cost;
    fn neg(self) -> Cost {
        Cost(-self.0)
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::zero(), |acc, c| acc + c)
    }
}

impl<'a> Sum<&'a Cost> for Cost {
    fn sum<I: Iterator<Item = &'a Cost>>(iter: I) -> Cost {
        iter.fold(Cost::zero(), |mut acc, c| {
            acc += c;
            acc
        })
    }
}
