use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::Sign;

/// Exact rational number.
///
/// Values that are integers fitting in an `i128` are kept inline and use
/// checked machine arithmetic; everything else (and every overflow) is
/// promoted to a reduced [`BigRational`]. The representation is canonical:
/// an integral value that fits in `i128` is never stored as `Big`, so the
/// derived equality and hash are value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i128),
    Big(BigRational),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}: expected an integer or \"p/q\"")]
pub struct ParseScalarError(pub String);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Small(0))
    }

    pub fn one() -> Self {
        Scalar(Repr::Small(1))
    }

    pub fn from_int(v: i64) -> Self {
        Scalar(Repr::Small(v as i128))
    }

    /// `numer / denom`, reduced.
    ///
    /// Panics if `denom` is zero.
    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Scalar::from_int(numer) / Scalar::from_int(denom)
    }

    pub fn from_big(r: BigRational) -> Self {
        Self::normalize(r)
    }

    fn normalize(r: BigRational) -> Self {
        if r.is_integer() {
            if let Some(v) = r.numer().to_i128() {
                return Scalar(Repr::Small(v));
            }
        }
        Scalar(Repr::Big(r))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(v) => BigRational::from_integer(BigInt::from(*v)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_) => true,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn sign(&self) -> Sign {
        match &self.0 {
            Repr::Small(v) => Sign::from_ordering(v.cmp(&0)),
            Repr::Big(r) => {
                if r.is_positive() {
                    Sign::Positive
                } else if r.is_negative() {
                    Sign::Negative
                } else {
                    Sign::Zero
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Sign::Negative {
            -self
        } else {
            self.clone()
        }
    }

    /// Nearest double. Integers below 2^53 and dyadic rationals convert exactly.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(v) => *v as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Numerator and denominator as decimal strings (denominator positive).
    pub fn to_parts(&self) -> (String, String) {
        match &self.0 {
            Repr::Small(v) => (v.to_string(), "1".to_string()),
            Repr::Big(r) => (r.numer().to_string(), r.denom().to_string()),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<i32> for Scalar {
    fn from(v: i32) -> Self {
        Scalar::from_int(v as i64)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => write!(f, "{v}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str, allow_sign: bool) -> Option<BigInt> {
    let digits = if allow_sign {
        s.strip_prefix('-').unwrap_or(s)
    } else {
        s
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    /// Accepts `-?[0-9]+` or `-?[0-9]+/[0-9]+` with a nonzero denominator.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let (numer, denom) = match s.split_once('/') {
            Some((n, d)) => (
                parse_int(n, true).ok_or_else(err)?,
                parse_int(d, false).ok_or_else(err)?,
            ),
            None => (parse_int(s, true).ok_or_else(err)?, BigInt::from(1)),
        };
        if denom.is_zero() {
            return Err(err());
        }
        Ok(Scalar::normalize(BigRational::new(numer, denom)))
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident, $big:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
                    if let Some(v) = a.$checked(*b) {
                        return Scalar(Repr::Small(v));
                    }
                }
                let f: fn(BigRational, BigRational) -> BigRational = $big;
                Scalar::normalize(f(self.to_big(), rhs.to_big()))
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add, |a, b| a + b);
binop!(Sub, sub, checked_sub, |a, b| a - b);
binop!(Mul, mul, checked_mul, |a, b| a * b);

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division of a rational by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if a.checked_rem(*b) == Some(0) {
                if let Some(v) = a.checked_div(*b) {
                    return Scalar(Repr::Small(v));
                }
            }
        }
        Scalar::normalize(self.to_big() / rhs.to_big())
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Div<&Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        &self / rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Small(v) => match v.checked_neg() {
                Some(n) => Scalar(Repr::Small(n)),
                None => Scalar::normalize(-self.to_big()),
            },
            Repr::Big(r) => Scalar::normalize(-r.clone()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
