//! Exact dyadic rationals `n / 2^e`.
//!
//! Every value is kept in canonical form: either `exp == 0` or `num` is odd.
//! Structural equality and hashing therefore coincide with equality of the
//! rational value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DyadicError {
    #[error("{0} is not an integer power of two")]
    NotAPowerOfTwo(Dyadic),
    #[error("cannot parse {0:?} as a dyadic rational")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u64,
}

impl Dyadic {
    /// Builds `num / 2^exp` and canonicalizes.
    pub fn new(num: impl Into<BigInt>, exp: u64) -> Self {
        let mut num = num.into();
        let mut exp = exp;
        if num.is_zero() {
            return Self::zero();
        }
        if exp > 0 {
            let tz = num.trailing_zeros().unwrap_or(0).min(exp);
            if tz > 0 {
                num >>= tz;
                exp -= tz;
            }
        }
        Dyadic { num, exp }
    }

    pub fn zero() -> Self {
        Dyadic {
            num: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            num: BigInt::one(),
            exp: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(n, 0)
    }

    /// `2^m` for any integer `m`.
    pub fn pow2(m: i64) -> Self {
        if m >= 0 {
            Dyadic {
                num: BigInt::one() << (m as u64),
                exp: 0,
            }
        } else {
            Dyadic {
                num: BigInt::one(),
                exp: m.unsigned_abs(),
            }
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    /// Exponent `e` of the canonical denominator `2^e`.
    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn signum(&self) -> i32 {
        if self.num.is_positive() {
            1
        } else if self.num.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            num: self.num.abs(),
            exp: self.exp,
        }
    }

    /// Multiplies by `2^m`; exact for every integer `m`.
    pub fn mul_pow2(&self, m: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        if m >= 0 {
            let m = m as u64;
            if m <= self.exp {
                Dyadic {
                    num: self.num.clone(),
                    exp: self.exp - m,
                }
            } else {
                Dyadic {
                    num: &self.num << (m - self.exp),
                    exp: 0,
                }
            }
        } else {
            Self::new(self.num.clone(), self.exp + m.unsigned_abs())
        }
    }

    /// Returns `m` with `self == 2^m`.
    pub fn log2_exact(&self) -> Result<i64, DyadicError> {
        if !self.num.is_positive() {
            return Err(DyadicError::NotAPowerOfTwo(self.clone()));
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        if (&self.num >> tz) != BigInt::one() {
            return Err(DyadicError::NotAPowerOfTwo(self.clone()));
        }
        Ok(tz as i64 - self.exp as i64)
    }

    /// `m` with `self / other == 2^m`, if the ratio is a power of two.
    pub fn ratio_log2(&self, other: &Dyadic) -> Option<i64> {
        if self.signum() == 0 || self.signum() != other.signum() {
            return None;
        }
        let tz_a = self.num.trailing_zeros().unwrap_or(0);
        let tz_b = other.num.trailing_zeros().unwrap_or(0);
        if (self.num.abs() >> tz_a) != (other.num.abs() >> tz_b) {
            return None;
        }
        Some((tz_a as i64 - self.exp as i64) - (tz_b as i64 - other.exp as i64))
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), BigInt::one() << self.exp)
    }

    /// Converts an exact rational back, if its reduced denominator is a power of two.
    pub fn from_rational(r: &BigRational) -> Option<Self> {
        let den = r.denom();
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> tz) != BigInt::one() {
            return None;
        }
        Some(Self::new(r.numer().clone(), tz))
    }

    /// Lossy conversion, for plotting only.
    pub fn to_f64(&self) -> f64 {
        let n = self.num.to_f64().unwrap_or(f64::NAN);
        let e = self.exp.min(i32::MAX as u64) as i32;
        n * 2f64.powi(-e)
    }

    /// Plain fraction text such as `7/8`; integers stay bare.
    pub fn to_fraction_string(&self) -> String {
        if self.exp == 0 {
            self.num.to_string()
        } else {
            format!("{}/{}", self.num, BigInt::one() << self.exp)
        }
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u64) {
        let e = self.exp.max(other.exp);
        (
            &self.num << (e - self.exp),
            &other.num << (e - other.exp),
            e,
        )
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(rhs);
        Dyadic::new(a - b, e)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.num * &rhs.num, self.exp + rhs.exp)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -&self.num,
            exp: self.exp,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `n/2^e`, `n/d` with `d` a power of two, and plain integers.
impl FromStr for Dyadic {
    type Err = DyadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DyadicError::Parse(s.to_string());
        let t = s.trim();
        let Some((n, d)) = t.split_once('/') else {
            return t
                .parse::<BigInt>()
                .map(|n| Dyadic::new(n, 0))
                .map_err(|_| err());
        };
        let num: BigInt = n.trim().parse().map_err(|_| err())?;
        let d = d.trim();
        if let Some(e) = d.strip_prefix("2^") {
            let e: u64 = e.parse().map_err(|_| err())?;
            return Ok(Dyadic::new(num, e));
        }
        let den: BigInt = d.parse().map_err(|_| err())?;
        if !den.is_positive() {
            return Err(err());
        }
        let tz = den.trailing_zeros().unwrap_or(0);
        if (&den >> tz) != BigInt::one() {
            return Err(err());
        }
        Ok(Dyadic::new(num, tz))
    }
}

impl serde::Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Dyadic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Reduced-fraction text for an exact rational, e.g. `7/24`.
pub fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Shorthand used across the crate and its tests.
pub fn dy(num: i64, exp: u64) -> Dyadic {
    Dyadic::new(num, exp)
}

#[cfg(test)]
fn is_canonical(d: &Dyadic) -> bool {
    d.exp == 0 || d.num.bit(0)
}
