use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Scalar, Sign};

pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Exact element `a + b·√3` of ℚ[√3].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExtScalar {
    pub a: Scalar,
    pub b: Scalar,
}

impl ExtScalar {
    pub fn new(a: Scalar, b: Scalar) -> Self {
        ExtScalar { a, b }
    }

    pub fn rational(a: Scalar) -> Self {
        ExtScalar {
            a,
            b: Scalar::zero(),
        }
    }

    pub fn zero() -> Self {
        ExtScalar::default()
    }

    pub fn sqrt3() -> Self {
        ExtScalar::new(Scalar::zero(), Scalar::one())
    }

    pub fn sign(&self) -> Sign {
        sign_ext(self)
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        ExtScalar::new(&self.a * k, &self.b * k)
    }

    /// Multiplication by √3: `(a + b√3)·√3 = 3b + a√3`.
    pub fn times_sqrt3(&self) -> Self {
        ExtScalar::new(&self.b * &Scalar::from_int(3), self.a.clone())
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Sign::Negative {
            -self
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * SQRT_3
    }
}

/// Exact sign of `a + b·√3`.
///
/// Equal signs decide immediately; otherwise the larger of `a²` and `3b²`
/// carries its sign. The two squares can only be equal when `a = b = 0`
/// because √3 is irrational.
pub fn sign_ext(v: &ExtScalar) -> Sign {
    let sa = v.a.sign();
    let sb = v.b.sign();
    if sb == Sign::Zero || sa == sb {
        return sa;
    }
    if sa == Sign::Zero {
        return sb;
    }
    let a2 = &v.a * &v.a;
    let b2 = &(&v.b * &v.b) * &Scalar::from_int(3);
    match a2.cmp(&b2) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Sign::Zero,
    }
}

impl PartialOrd for ExtScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign().to_ordering()
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}·√3", self.b)
        } else {
            write!(f, "{} + {}·√3", self.a, self.b)
        }
    }
}

impl fmt::Debug for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add<&ExtScalar> for &ExtScalar {
    type Output = ExtScalar;
    fn add(self, rhs: &ExtScalar) -> ExtScalar {
        ExtScalar::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub<&ExtScalar> for &ExtScalar {
    type Output = ExtScalar;
    fn sub(self, rhs: &ExtScalar) -> ExtScalar {
        ExtScalar::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul<&ExtScalar> for &ExtScalar {
    type Output = ExtScalar;
    fn mul(self, rhs: &ExtScalar) -> ExtScalar {
        let three = Scalar::from_int(3);
        ExtScalar::new(
            &(&self.a * &rhs.a) + &(&(&self.b * &rhs.b) * &three),
            &(&self.a * &rhs.b) + &(&self.b * &rhs.a),
        )
    }
}

impl Neg for &ExtScalar {
    type Output = ExtScalar;
    fn neg(self) -> ExtScalar {
        ExtScalar::new(-&self.a, -&self.b)
    }
}

impl Add for ExtScalar {
    type Output = ExtScalar;
    fn add(self, rhs: ExtScalar) -> ExtScalar {
        &self + &rhs
    }
}

impl Sub for ExtScalar {
    type Output = ExtScalar;
    fn sub(self, rhs: ExtScalar) -> ExtScalar {
        &self - &rhs
    }
}

impl Mul for ExtScalar {
    type Output = ExtScalar;
    fn mul(self, rhs: ExtScalar) -> ExtScalar {
        &self * &rhs
    }
}

impl Neg for ExtScalar {
    type Output = ExtScalar;
    fn neg(self) -> ExtScalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ext(a: i64, b: i64) -> ExtScalar {
        ExtScalar::new(a.into(), b.into())
    }

    #[test]
    fn sign_examples() {
        assert_eq!(sign_ext(&ext(1, -1)), Sign::Negative);
        assert_eq!(sign_ext(&ext(2, -1)), Sign::Positive);
        assert_eq!(sign_ext(&ext(0, 0)), Sign::Zero);
        assert_eq!(sign_ext(&ext(-2, 1)), Sign::Negative);
        assert_eq!(sign_ext(&ext(0, -5)), Sign::Negative);
        assert_eq!(sign_ext(&ext(-7, 0)), Sign::Negative);
    }

    #[test]
    fn close_convergents_of_sqrt3() {
        // 989/571 and 1351/780 bracket √3 from both sides.
        assert_eq!(sign_ext(&ext(989, -571)), Sign::Negative);
        assert_eq!(sign_ext(&ext(1351, -780)), Sign::Positive);
    }

    #[test]
    fn product_uses_sqrt3_squared() {
        let v = &ext(1, 1) * &ext(1, -1);
        assert_eq!(v, ext(-2, 0));
        assert_eq!(ExtScalar::sqrt3().times_sqrt3(), ext(3, 0));
    }

    fn small_ratio() -> impl Strategy<Value = Scalar> {
        (-999_999i64..1_000_000, 1i64..1_000_000).prop_map(|(n, d)| Scalar::from_ratio(n, d))
    }

    proptest! {
        #[test]
        fn sign_matches_float_when_clear(a in small_ratio(), b in small_ratio()) {
            let v = ExtScalar::new(a, b);
            let approx = v.to_f64();
            prop_assume!(approx.abs() > 1e-6);
            let expect = if approx > 0.0 { Sign::Positive } else { Sign::Negative };
            prop_assert_eq!(sign_ext(&v), expect);
        }
    }
}
