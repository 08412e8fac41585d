//! Exact scalars: rationals and the max-plus semifield over them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn dot_iq(a: &[i64], x: &[Q]) -> Q {
    a.iter()
        .zip(x)
        .fold(Q::zero(), |acc, (&ai, xi)| if ai == 0 { acc } else { acc + xi * BigInt::from(ai) })
}

pub fn dot_qq(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn norm_sq(a: &[Q]) -> Q {
    dot_qq(a, a)
}

pub fn to_q_vec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

/// Renders `p` for integers and `p/q` otherwise.
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p` or `p/q`. Decimal points and exponents are rejected so that
/// every accepted value is exact.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(n, d))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Fallback for magnitudes that overflow the direct conversion.
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Smallest integer not below `x`.
pub fn ceil_q(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

pub fn big_to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Overflow(format!("{x} does not fit in i64")))
}

/// Least common multiple of the denominators.
pub fn common_denominator(xs: &[Q]) -> BigInt {
    xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector to a primitive integer vector pointing the same way.
/// Returns the integer vector and the positive factor it was multiplied by.
/// `None` for the zero vector.
pub fn primitive_direction(v: &[Q]) -> Result<Option<(Vec<i64>, Q)>> {
    if v.iter().all(Zero::is_zero) {
        return Ok(None);
    }
    let den = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &den).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let mut out = Vec::with_capacity(v.len());
    for x in &ints {
        out.push(big_to_i64(&(x / &g))?);
    }
    Ok(Some((out, Q::from_integer(den) / Q::from_integer(g))))
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// An element of the tropical semifield restricted to `Q ∪ {−∞}`:
/// `⊕` is max, `⊙` is addition, `−∞` is the zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtendedRational {
    NegInf,
    Finite(Q),
}

impl ExtendedRational {
    pub fn zero() -> Self {
        Self::NegInf
    }

    /// Multiplicative identity, i.e. the rational 0.
    pub fn one() -> Self {
        Self::Finite(Q::zero())
    }

    pub fn finite(x: Q) -> Self {
        Self::Finite(x)
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, Self::NegInf)
    }

    pub fn as_finite(&self) -> Option<&Q> {
        match self {
            Self::Finite(x) => Some(x),
            Self::NegInf => None,
        }
    }

    pub fn into_finite(self) -> Option<Q> {
        match self {
            Self::Finite(x) => Some(x),
            Self::NegInf => None,
        }
    }

    pub fn tropical_add(&self, other: &Self) -> Self {
        std::cmp::max(self, other).clone()
    }

    pub fn tropical_mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => Self::Finite(a + b),
            _ => Self::NegInf,
        }
    }

    /// `a − b` with the conventions `−∞ − b = −∞`. Undefined for `b = −∞`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        match (self, other) {
            (_, Self::NegInf) => None,
            (Self::NegInf, _) => Some(Self::NegInf),
            (Self::Finite(a), Self::Finite(b)) => Some(Self::Finite(a - b)),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Self::NegInf => f64::NEG_INFINITY,
            Self::Finite(x) => q_to_f64(x),
        }
    }
}

impl From<Q> for ExtendedRational {
    fn from(x: Q) -> Self {
        Self::Finite(x)
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegInf => f.write_str("-inf"),
            Self::Finite(x) => f.write_str(&format_q(x)),
        }
    }
}

impl FromStr for ExtendedRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-inf" | "-∞" => Ok(Self::NegInf),
            other => parse_q(other).map(Self::Finite),
        }
    }
}
