//! Polynomials in the two symbols `P` (the prime) and `X` (standing for `p^-s`)
//! with arbitrary-precision integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

/// Exponent pair `(P-exponent, X-exponent)`.
pub type Exponents = (u32, u32);

/// A polynomial `sum c * P^a * X^b`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivariatePolynomial {
    terms: BTreeMap<Exponents, BigInt>,
}

impl BivariatePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn p() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn monomial(c: impl Into<BigInt>, p_exp: u32, x_exp: u32) -> Self {
        let mut out = Self::zero();
        out.add_term(c.into(), p_exp, x_exp);
        out
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (C, u32, u32)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (c, a, b) in terms {
            out.add_term(c.into(), a, b);
        }
        out
    }

    /// Adds `c * P^a * X^b` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, c: BigInt, p_exp: u32, x_exp: u32) {
        if c.is_zero() {
            return;
        }
        let key = (p_exp, x_exp);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing `(P-exponent, X-exponent)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, u32, u32)> {
        self.terms.iter().map(|(&(a, b), c)| (c, a, b))
    }

    pub fn coefficient(&self, p_exp: u32, x_exp: u32) -> BigInt {
        self.terms
            .get(&(p_exp, x_exp))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(0, 0)
    }

    pub fn max_p_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, _)| a).max()
    }

    pub fn max_x_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, b)| b).max()
    }

    pub fn min_p_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, _)| a).min()
    }

    pub fn min_x_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, b)| b).min()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    /// Multiplies by `P^a X^b`.
    pub fn shift(&self, p_exp: u32, x_exp: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), v)| ((a + p_exp, b + x_exp), v.clone()))
                .collect(),
        }
    }

    /// Divides by `P^a X^b`; every term must be divisible.
    pub(crate) fn unshift(&self, p_exp: u32, x_exp: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), v)| ((a - p_exp, b - x_exp), v.clone()))
                .collect(),
        }
    }

    /// `P^A X^B f(1/P, 1/X)` with `A`, `B` the maximal degrees.
    pub(crate) fn reflect(&self) -> Self {
        let (Some(ma), Some(mb)) = (self.max_p_degree(), self.max_x_degree()) else {
            return Self::zero();
        };
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), v)| ((ma - a, mb - b), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `P := p`, returning dense coefficients in `X` (index = X-exponent).
    pub fn specialize(&self, p: &BigInt) -> Vec<BigInt> {
        let len = self.max_x_degree().map_or(0, |d| d as usize + 1);
        let mut out = vec![BigInt::zero(); len];
        for (&(a, b), c) in &self.terms {
            out[b as usize] += c * Pow::pow(p, a);
        }
        out
    }

    /// Collects the polynomial as `sum_b q_b(P) X^b`, each `q_b` given densely in `P`.
    pub fn coefficients_in_x(&self) -> Vec<Vec<BigInt>> {
        let len = self.max_x_degree().map_or(0, |d| d as usize + 1);
        let mut out: Vec<Vec<BigInt>> = vec![Vec::new(); len];
        for (&(a, b), c) in &self.terms {
            let row = &mut out[b as usize];
            if row.len() <= a as usize {
                row.resize(a as usize + 1, BigInt::zero());
            }
            row[a as usize] += c;
        }
        out
    }

    pub fn eval_f64(&self, p: f64, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(a, b), c)| {
                c.to_f64().unwrap_or(f64::NAN) * p.powi(a as i32) * x.powi(b as i32)
            })
            .sum()
    }

    /// True iff the polynomial is unchanged by `(a, b) -> (A - a, B - b)`.
    pub fn is_palindromic(&self) -> bool {
        self.reflect() == *self
    }
}

impl fmt::Debug for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Ordered by X-degree, then P-degree: reads like the displayed formulas.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(&(a, b), _)| (b, a));
        for (i, (&(a, b), c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let has_vars = a > 0 || b > 0;
            if !mag.is_one() || !has_vars {
                write!(f, "{mag}")?;
            }
            for (sym, e) in [("p", a), ("x", b)] {
                match e {
                    0 => {}
                    1 => write!(f, "{sym}")?,
                    _ => write!(f, "{sym}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl Neg for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn neg(self) -> BivariatePolynomial {
        BivariatePolynomial {
            terms: self.terms.iter().map(|(&k, v)| (k, -v)).collect(),
        }
    }
}

impl Neg for BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn neg(self) -> BivariatePolynomial {
        -&self
    }
}

impl Add for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn add(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(c.clone(), a, b);
        }
        out
    }
}

impl Sub for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn sub(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(-c, a, b);
        }
        out
    }
}

impl Mul for &BivariatePolynomial {
    type Output = BivariatePolynomial;
    fn mul(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
        let mut out = BivariatePolynomial::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term(c1 * c2, a1 + a2, b1 + b2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for BivariatePolynomial {
            type Output = BivariatePolynomial;
            fn $m(self, rhs: BivariatePolynomial) -> BivariatePolynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BivariatePolynomial> for BivariatePolynomial {
            type Output = BivariatePolynomial;
            fn $m(self, rhs: &BivariatePolynomial) -> BivariatePolynomial {
                (&self).$m(rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

/// Dense univariate helpers over `BigInt` (index = exponent).
pub(crate) mod dense {
    use num_bigint::BigInt;
    use num_traits::Zero;

    pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    pub fn mul_truncated(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); len];
        for (i, x) in a.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] += x * y;
            }
        }
        out
    }

    pub fn trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
        while a.last().is_some_and(Zero::is_zero) {
            a.pop();
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficients_are_dropped() {
        let mut f = BivariatePolynomial::monomial(3, 1, 2);
        f.add_term(BigInt::from(-3), 1, 2);
        assert!(f.is_zero());
        let g = BivariatePolynomial::from_terms([(1, 0, 0), (0, 5, 5), (2, 0, 0)]);
        assert_eq!(g.len(), 1);
        assert_eq!(g.constant_term(), BigInt::from(3));
    }

    #[test]
    fn product_and_specialization() {
        // (1 - p x)(1 + p x) = 1 - p^2 x^2
        let px = BivariatePolynomial::monomial(1, 1, 1);
        let one = BivariatePolynomial::one();
        let prod = (&one - &px) * (&one + &px);
        assert_eq!(
            prod,
            BivariatePolynomial::from_terms([(1, 0, 0), (-1, 2, 2)])
        );
        let dense = prod.specialize(&BigInt::from(3));
        assert_eq!(dense, vec![1.into(), 0.into(), BigInt::from(-9)]);
    }

    #[test]
    fn reflect_and_palindromy() {
        let f = BivariatePolynomial::from_terms([(1, 0, 0), (-2, 1, 1), (1, 2, 2)]);
        assert!(f.is_palindromic());
        let g = BivariatePolynomial::from_terms([(1, 0, 0), (1, 1, 2)]);
        assert!(g.is_palindromic());
        let h = BivariatePolynomial::from_terms([(1, 0, 0), (2, 1, 2)]);
        assert!(!h.is_palindromic());
    }

    #[test]
    fn display_reads_like_source() {
        let f = BivariatePolynomial::from_terms([(1, 0, 0), (1, 1, 2), (-2, 5, 6)]);
        assert_eq!(f.to_string(), "1 + px^2 - 2p^5x^6");
    }
}
