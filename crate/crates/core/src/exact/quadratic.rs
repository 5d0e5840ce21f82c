//! Exact arithmetic in the field `Q(sqrt 2)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The number `a + b * sqrt(2)` with `a`, `b` reduced rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadraticRational {
    a: BigRational,
    b: BigRational,
}

impl QuadraticRational {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn from_integers(a: i64, b: i64) -> Self {
        Self::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
        )
    }

    /// `(an / ad) + (bn / bd) sqrt 2`.
    pub fn from_fractions(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        Self::new(
            BigRational::new(an.into(), ad.into()),
            BigRational::new(bn.into(), bd.into()),
        )
    }

    pub fn rational(q: BigRational) -> Self {
        Self::new(q, BigRational::zero())
    }

    pub fn zero() -> Self {
        Self::from_integers(0, 0)
    }

    pub fn one() -> Self {
        Self::from_integers(1, 0)
    }

    pub fn sqrt2() -> Self {
        Self::from_integers(0, 1)
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of `sqrt 2`.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `a^2 - 2 b^2`; nonzero for every nonzero element since sqrt 2 is irrational.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(2.into()) * &self.b * &self.b
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.a.clone(), -&self.b)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new(&self.a / &n, -&self.b / &n))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.a) + ratio_to_f64(&self.b) * std::f64::consts::SQRT_2
    }

    /// Writes the value as `(n + m sqrt 2) / d` with `d > 0` minimal.
    pub fn over_common_denominator(&self) -> (BigInt, BigInt, BigInt) {
        use num_integer::Integer;
        let d = self.a.denom().lcm(self.b.denom());
        let n = self.a.numer() * (&d / self.a.denom());
        let m = self.b.numer() * (&d / self.b.denom());
        (n, m, d)
    }
}

fn ratio_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Very large numerator/denominator: scale down before converting.
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl fmt::Display for QuadraticRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, m, d) = self.over_common_denominator();
        let sign = if m.is_negative() { '-' } else { '+' };
        if d.is_one() {
            write!(f, "{n} {sign} {}*sqrt(2)", m.abs())
        } else {
            write!(f, "({n} {sign} {}*sqrt(2))/{d}", m.abs())
        }
    }
}

impl Add for &QuadraticRational {
    type Output = QuadraticRational;
    fn add(self, rhs: &QuadraticRational) -> QuadraticRational {
        QuadraticRational::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &QuadraticRational {
    type Output = QuadraticRational;
    fn sub(self, rhs: &QuadraticRational) -> QuadraticRational {
        QuadraticRational::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul for &QuadraticRational {
    type Output = QuadraticRational;
    fn mul(self, rhs: &QuadraticRational) -> QuadraticRational {
        let two = BigRational::from_integer(2.into());
        QuadraticRational::new(
            &self.a * &rhs.a + two * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Neg for &QuadraticRational {
    type Output = QuadraticRational;
    fn neg(self) -> QuadraticRational {
        QuadraticRational::new(-&self.a, -&self.b)
    }
}

/// Panics on division by zero, like integer division; use
/// [`QuadraticRational::checked_div`] to handle it.
impl Div for &QuadraticRational {
    type Output = QuadraticRational;
    fn div(self, rhs: &QuadraticRational) -> QuadraticRational {
        self.checked_div(rhs)
            .expect("division by zero in Q(sqrt 2)")
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for QuadraticRational {
            type Output = QuadraticRational;
            fn $m(self, rhs: QuadraticRational) -> QuadraticRational {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for QuadraticRational {
    type Output = QuadraticRational;
    fn neg(self) -> QuadraticRational {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationalizes_one_over_one_minus_x() {
        // 1 / (1 - sqrt2/4) = (8 + 2 sqrt2) / 7
        let x = QuadraticRational::from_fractions(0, 1, 1, 4);
        let v = QuadraticRational::one()
            .checked_div(&(QuadraticRational::one() - x))
            .unwrap();
        assert_eq!(v, QuadraticRational::from_fractions(8, 7, 2, 7));
        assert_eq!(v.to_string(), "(8 + 2*sqrt(2))/7");
    }

    #[test]
    fn quotient_of_conjugates() {
        // (177 + 25 sqrt2) / (96 - 24 sqrt2) = (758 + 277 sqrt2) / 336
        let n = QuadraticRational::from_integers(177, 25);
        let d = QuadraticRational::from_integers(96, -24);
        assert_eq!(n / d, QuadraticRational::from_fractions(758, 336, 277, 336));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(
            QuadraticRational::zero().inverse(),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let s = QuadraticRational::sqrt2();
        assert_eq!(s.pow(2), QuadraticRational::from_integers(2, 0));
        assert_eq!(s.pow(3), QuadraticRational::from_integers(0, 2));
    }
}
