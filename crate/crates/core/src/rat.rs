//! Exact rational scalar used for every point value in the crate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator. Values whose numerator and denominator fit in an `i64` are
/// stored inline; everything else falls back to a `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat(Repr);

// Canonical: `Small` whenever both parts fit in (-i64::MAX..=i64::MAX), so
// structural equality and hashing agree with numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64, i64),
    Big(BigRational),
}

/// Failure to read a rational literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed integer `{0}`")]
    BadInteger(String),
    #[error("denominator must be positive in `{0}`")]
    BadDenominator(String),
}

const LIM: i128 = i64::MAX as i128;

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Rat {
    fn from_i128(mut n: i128, mut d: i128) -> Rat {
        assert!(d != 0, "rational with zero denominator");
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        if n.abs() <= LIM && d <= LIM {
            Rat(Repr::Small(n as i64, d as i64))
        } else {
            Rat(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))))
        }
    }

    fn from_big(b: BigRational) -> Rat {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rat(Repr::Small(n, d)),
            _ => Rat(Repr::Big(b)),
        }
    }

    fn big(&self) -> std::borrow::Cow<'_, BigRational> {
        match &self.0 {
            Repr::Small(n, d) => std::borrow::Cow::Owned(BigRational::new_raw(BigInt::from(*n), BigInt::from(*d))),
            Repr::Big(b) => std::borrow::Cow::Borrowed(b),
        }
    }

    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Rat::from_big(BigRational::new(num.into(), den.into()))
    }

    pub fn from_int(n: i64) -> Self {
        Rat::from_i128(n as i128, 1)
    }

    pub fn zero() -> Self {
        Rat(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rat(Repr::Small(1, 1))
    }

    /// `2^-k`.
    pub fn dyadic(k: u32) -> Self {
        Rat::from_big(BigRational::new(BigInt::one(), BigInt::one() << k))
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => match b.numer().sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor_int(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, d) => BigInt::from(n.div_floor(d)),
            Repr::Big(b) => b.numer().div_floor(b.denom()),
        }
    }

    /// Smallest integer not below the value.
    pub fn ceil_int(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, d) => BigInt::from(n.div_ceil(d)),
            Repr::Big(b) => b.numer().div_ceil(b.denom()),
        }
    }

    /// [`Rat::floor_int`] when it fits in an `i64`.
    pub fn floor_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, d) => Some(n.div_floor(d)),
            Repr::Big(b) => b.numer().div_floor(b.denom()).to_i64(),
        }
    }

    pub fn min_of(a: Rat, b: Rat) -> Rat {
        if a <= b {
            a
        } else {
            b
        }
    }

    pub fn max_of(a: Rat, b: Rat) -> Rat {
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn midpoint(&self, other: &Rat) -> Rat {
        (self + other) / Rat::from_int(2)
    }

    /// Lossy conversion, used only for rendering coordinates.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn to_big(&self) -> BigRational {
        self.big().into_owned()
    }

    /// Stable 64-bit digest of the canonical value, independent of platform
    /// and hasher state.
    pub fn digest64(&self) -> u64 {
        let mut h = 0x243f_6a88_85a3_08d3_u64;
        if let Repr::Small(n, d) = self.0 {
            // same digit stream as the BigInt path below
            let sign = match n.signum() {
                -1 => Sign::Minus,
                0 => Sign::NoSign,
                _ => Sign::Plus,
            };
            h = crate::sampler::mix64(h ^ (sign as u64));
            if n != 0 {
                h = crate::sampler::mix64(h ^ n.unsigned_abs());
            }
            h = crate::sampler::mix64(h ^ 0x9e37);
            return crate::sampler::mix64(h ^ d as u64);
        }
        let b = self.big();
        let (sign, digits) = b.numer().to_u64_digits();
        h = crate::sampler::mix64(h ^ (sign as u64));
        for d in digits {
            h = crate::sampler::mix64(h ^ d);
        }
        h = crate::sampler::mix64(h ^ 0x9e37);
        for d in b.denom().to_u64_digits().1 {
            h = crate::sampler::mix64(h ^ d);
        }
        h
    }

    fn add_ref(&self, rhs: &Rat) -> Rat {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Rat::from_i128(a + c, b)
                } else {
                    Rat::from_i128(a * d + c * b, b * d)
                }
            }
            _ => Rat::from_big(self.big().as_ref() + rhs.big().as_ref()),
        }
    }

    fn sub_ref(&self, rhs: &Rat) -> Rat {
        self.add_ref(&-rhs)
    }

    fn mul_ref(&self, rhs: &Rat) -> Rat {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => Rat::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128),
            _ => Rat::from_big(self.big().as_ref() * rhs.big().as_ref()),
        }
    }

    fn div_ref(&self, rhs: &Rat) -> Rat {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => Rat::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128),
            _ => Rat::from_big(self.big().as_ref() / rhs.big().as_ref()),
        }
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.big().as_ref().cmp(other.big().as_ref()),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Self {
        Rat::from_big(r)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl FromStr for Rat {
    type Err = RatParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(RatParseError::Empty);
        }
        let parse_int = |t: &str| -> Result<BigInt, RatParseError> {
            let body = t.strip_prefix('-').unwrap_or(t);
            if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
                return Err(RatParseError::BadInteger(t.to_string()));
            }
            t.parse::<BigInt>()
                .map_err(|_| RatParseError::BadInteger(t.to_string()))
        };
        match s.split_once('/') {
            None => Ok(Rat::from_big(BigRational::from_integer(parse_int(s)?))),
            Some((p, q)) => {
                let num = parse_int(p)?;
                if q.starts_with('-') {
                    return Err(RatParseError::BadDenominator(s.to_string()));
                }
                let den = parse_int(q)?;
                if den.is_zero() {
                    return Err(RatParseError::BadDenominator(s.to_string()));
                }
                Ok(Rat::new(num, den))
            }
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.denom().is_one() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                self.$imp(rhs)
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                self.$imp(&rhs)
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                self.$imp(rhs)
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                self.$imp(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => Rat(Repr::Small(-n, *d)),
            Repr::Big(b) => Rat::from_big(-b),
        }
    }
}

/// Shorthand used throughout tests and fixtures: `r(1, 4)` is one quarter.
pub fn r(num: i64, den: i64) -> Rat {
    Rat::from_i128(num as i128, den as i128)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_canonicalizes() {
        assert_eq!("2/4".parse::<Rat>().unwrap(), r(1, 2));
        assert_eq!("-6/3".parse::<Rat>().unwrap().to_string(), "-2");
        assert_eq!("7".parse::<Rat>().unwrap(), Rat::from_int(7));
        assert_eq!(r(3, 12).to_string(), "1/4");
    }

    #[test]
    fn rejects_bad_literals() {
        assert!("1/0".parse::<Rat>().is_err());
        assert!("1/-2".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
        assert!("1.5".parse::<Rat>().is_err());
        assert!("a/2".parse::<Rat>().is_err());
        assert!("/2".parse::<Rat>().is_err());
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(r(7, 2).floor_int(), BigInt::from(3));
        assert_eq!(r(-7, 2).floor_int(), BigInt::from(-4));
        assert_eq!(r(7, 2).ceil_int(), BigInt::from(4));
        assert_eq!(r(4, 2).ceil_int(), BigInt::from(2));
    }

    #[test]
    fn serde_as_string() {
        let v = serde_json::to_string(&r(-3, 9)).unwrap();
        assert_eq!(v, "\"-1/3\"");
        let back: Rat = serde_json::from_str(&v).unwrap();
        assert_eq!(back, r(-1, 3));
    }

    #[test]
    fn small_and_big_agree() {
        let big = Rat::new(BigInt::from(1) << 70, BigInt::from(3));
        let back = (&big * r(3, 1)) / Rat::new(BigInt::from(1) << 70, BigInt::from(1));
        assert_eq!(back, Rat::one());
        assert!(big > r(i64::MAX, 1));
        assert!(-&big < r(i64::MIN + 1, 1));
        let m = r(i64::MAX, 1) + r(i64::MAX, 1);
        assert_eq!(m.to_string(), "18446744073709551614");
        assert_eq!(m - r(i64::MAX, 1), r(i64::MAX, 1));
        assert_eq!(Rat::new(i64::MIN, 1).to_string(), "-9223372036854775808");
        assert_eq!(r(-7, 2).floor_i64(), Some(-4));
        let q = r(5, 3);
        assert_eq!(q.digest64(), {
            let b = q.to_big();
            let mut h = 0x243f_6a88_85a3_08d3_u64;
            let (sign, digits) = b.numer().to_u64_digits();
            h = crate::sampler::mix64(h ^ (sign as u64));
            for d in digits {
                h = crate::sampler::mix64(h ^ d);
            }
            h = crate::sampler::mix64(h ^ 0x9e37);
            for d in b.denom().to_u64_digits().1 {
                h = crate::sampler::mix64(h ^ d);
            }
            h
        });
    }

    #[test]
    fn digest_depends_on_value_only() {
        assert_eq!(r(2, 4).digest64(), r(1, 2).digest64());
        assert_ne!(r(1, 2).digest64(), r(-1, 2).digest64());
        assert_ne!(r(1, 3).digest64(), r(3, 1).digest64());
    }
}
