//! Rational functions `N(P, X) / prod (1 - P^a X^b)^m` with factored denominators.
//!
//! Denominators are never expanded for bookkeeping; equality is decided by
//! cross-multiplication over the least common multiple of the factor multisets.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{dense, BivariatePolynomial};
use super::quadratic::QuadraticRational;
use crate::error::{Error, Result};

/// `(1 - P^p_exp X^x_exp)^multiplicity`, with `x_exp >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DenominatorFactor {
    pub p_exp: u32,
    pub x_exp: u32,
    pub multiplicity: u32,
}

impl DenominatorFactor {
    pub fn base(&self) -> BivariatePolynomial {
        BivariatePolynomial::from_terms([(1, 0, 0), (-1, self.p_exp, self.x_exp)])
    }

    pub fn expand(&self) -> BivariatePolynomial {
        self.base().pow(self.multiplicity)
    }
}

/// `sign * P^p_exp * X^x_exp` with possibly negative exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub sign: i8,
    pub p_exp: i64,
    pub x_exp: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        sign: 1,
        p_exp: 0,
        x_exp: 0,
    };

    pub fn new(sign: i8, p_exp: i64, x_exp: i64) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        Self { sign, p_exp, x_exp }
    }

    pub fn times(self, other: Monomial) -> Monomial {
        Monomial::new(
            self.sign * other.sign,
            self.p_exp + other.p_exp,
            self.x_exp + other.x_exp,
        )
    }

    pub fn inverse(self) -> Monomial {
        Monomial::new(self.sign, -self.p_exp, -self.x_exp)
    }

    pub fn negate(self) -> Monomial {
        Monomial::new(-self.sign, self.p_exp, self.x_exp)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            write!(f, "-")?;
        }
        if self.p_exp == 0 && self.x_exp == 0 {
            return write!(f, "1");
        }
        for (sym, e) in [("p", self.p_exp), ("x", self.x_exp)] {
            match e {
                0 => {}
                1 => write!(f, "{sym}")?,
                _ => write!(f, "{sym}^{e}")?,
            }
        }
        Ok(())
    }
}

/// A formal rational function in `P` and `X` whose denominator is a product of
/// `(1 - P^a X^b)` factors. The constant function has no factors.
#[derive(Clone)]
pub struct RationalFunction {
    num: BivariatePolynomial,
    // (p_exp, x_exp) -> multiplicity
    den: BTreeMap<(u32, u32), u32>,
}

impl RationalFunction {
    pub fn new(
        numerator: BivariatePolynomial,
        factors: impl IntoIterator<Item = DenominatorFactor>,
    ) -> Self {
        let mut den = BTreeMap::new();
        for f in factors {
            assert!(f.x_exp >= 1, "denominator factors need positive X-degree");
            if f.multiplicity > 0 {
                *den.entry((f.p_exp, f.x_exp)).or_insert(0) += f.multiplicity;
            }
        }
        Self {
            num: numerator,
            den,
        }
    }

    pub fn polynomial(numerator: BivariatePolynomial) -> Self {
        Self::new(numerator, [])
    }

    pub fn zero() -> Self {
        Self::polynomial(BivariatePolynomial::zero())
    }

    pub fn one() -> Self {
        Self::polynomial(BivariatePolynomial::one())
    }

    /// Parses the textual notation of [`super::parse`].
    pub fn parse(src: &str) -> Result<Self> {
        super::parse::parse_rational_function(src)
    }

    pub fn numerator(&self) -> &BivariatePolynomial {
        &self.num
    }

    pub fn factors(&self) -> impl Iterator<Item = DenominatorFactor> + '_ {
        self.den.iter().map(|(&(a, b), &m)| DenominatorFactor {
            p_exp: a,
            x_exp: b,
            multiplicity: m,
        })
    }

    pub fn expanded_denominator(&self) -> BivariatePolynomial {
        Self::expand(&self.den)
    }

    fn expand(den: &BTreeMap<(u32, u32), u32>) -> BivariatePolynomial {
        den.iter()
            .fold(BivariatePolynomial::one(), |acc, (&(a, b), &m)| {
                &acc * &DenominatorFactor {
                    p_exp: a,
                    x_exp: b,
                    multiplicity: m,
                }
                .expand()
            })
    }

    fn lcm_den(
        a: &BTreeMap<(u32, u32), u32>,
        b: &BTreeMap<(u32, u32), u32>,
    ) -> BTreeMap<(u32, u32), u32> {
        let mut out = a.clone();
        for (&k, &m) in b {
            let e = out.entry(k).or_insert(0);
            *e = (*e).max(m);
        }
        out
    }

    /// `L / den` for a multiset `L` containing `den`.
    fn cofactor(
        lcm: &BTreeMap<(u32, u32), u32>,
        den: &BTreeMap<(u32, u32), u32>,
    ) -> BTreeMap<(u32, u32), u32> {
        lcm.iter()
            .filter_map(|(&k, &m)| {
                let rest = m - den.get(&k).copied().unwrap_or(0);
                (rest > 0).then_some((k, rest))
            })
            .collect()
    }

    /// Numerators of `self` and `other` brought over their common denominator.
    fn cross(&self, other: &Self) -> (BivariatePolynomial, BivariatePolynomial) {
        let lcm = Self::lcm_den(&self.den, &other.den);
        let lhs = &self.num * &Self::expand(&Self::cofactor(&lcm, &self.den));
        let rhs = &other.num * &Self::expand(&Self::cofactor(&lcm, &other.den));
        (lhs, rhs)
    }

    /// Formal equality as rational functions in `P` and `X`.
    pub fn rf_equal(&self, other: &Self) -> bool {
        let (l, r) = self.cross(other);
        l == r
    }

    /// Equality after substituting `P := p` (the functions may differ as
    /// bivariate objects yet agree at one prime).
    pub fn equal_at_prime(&self, other: &Self, p: u64) -> bool {
        let (l, r) = self.cross(other);
        let p = BigInt::from(p);
        dense::trim(l.specialize(&p)) == dense::trim(r.specialize(&p))
    }

    /// An order up to which agreeing series imply equality at any prime.
    pub fn decisive_order(&self, other: &Self) -> usize {
        let (l, r) = self.cross(other);
        l.max_x_degree().max(r.max_x_degree()).unwrap_or(0) as usize
    }

    /// First index `i <= order` where the series of `self` and `other` at `p` differ.
    pub fn first_series_mismatch(
        &self,
        other: &Self,
        p: u64,
        order: usize,
    ) -> Option<(usize, BigInt, BigInt)> {
        let a = self.series(p, order);
        let b = other.series(p, order);
        a.into_iter()
            .zip(b)
            .enumerate()
            .find(|(_, (x, y))| x != y)
            .map(|(i, (x, y))| (i, x, y))
    }

    /// Coefficients `c_0..=c_order` of the power series in `X` after `P := p`.
    pub fn series(&self, p: u64, order: usize) -> Vec<BigInt> {
        let p = BigInt::from(p);
        let len = order + 1;
        let mut num = self.num.specialize(&p);
        num.resize(len.max(num.len()), BigInt::zero());
        num.truncate(len);
        let den = self
            .den
            .iter()
            .fold(vec![BigInt::one()], |acc, (&(a, b), &m)| {
                let mut f = vec![BigInt::zero(); b as usize + 1];
                f[0] = BigInt::one();
                f[b as usize] = -num_traits::Pow::pow(&p, a);
                (0..m).fold(acc, |acc, _| dense::mul_truncated(&acc, &f, len))
            });
        // den[0] == 1, so the division is exact over the integers.
        let mut out: Vec<BigInt> = Vec::with_capacity(len);
        for n in 0..len {
            let mut c = num[n].clone();
            for j in 1..=n.min(den.len().saturating_sub(1)) {
                if !den[j].is_zero() {
                    c -= &den[j] * &out[n - j];
                }
            }
            out.push(c);
        }
        out
    }

    /// Series coefficients in `X` as dense polynomials in `P`
    /// (`result[n][a]` is the coefficient of `P^a X^n`).
    pub fn series_in_p(&self, order: usize) -> Vec<Vec<BigInt>> {
        let len = order + 1;
        let mut num = self.num.coefficients_in_x();
        num.resize(len.max(num.len()), Vec::new());
        let den = self.expanded_denominator().coefficients_in_x();
        let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(len);
        for n in 0..len {
            let mut c = num[n].clone();
            for j in 1..=n.min(den.len().saturating_sub(1)) {
                let prod = dense::mul(&den[j], &out[n - j]);
                if c.len() < prod.len() {
                    c.resize(prod.len(), BigInt::zero());
                }
                for (i, v) in prod.into_iter().enumerate() {
                    c[i] -= v;
                }
            }
            out.push(dense::trim(c));
        }
        out
    }

    /// Splits off `P^u X^v` from the numerator so the remaining numerator is
    /// divisible by neither symbol.
    pub fn split_monomial(&self) -> (Monomial, RationalFunction) {
        let (Some(u), Some(v)) = (self.num.min_p_degree(), self.num.min_x_degree()) else {
            return (Monomial::ONE, self.clone());
        };
        (
            Monomial::new(1, u as i64, v as i64),
            RationalFunction {
                num: self.num.unshift(u, v),
                den: self.den.clone(),
            },
        )
    }

    /// `f(1/P, 1/X) = m * g(P, X)`, returned as `(m, g)`.
    ///
    /// `g` has a numerator divisible by neither `P` nor `X` whose constant
    /// term, when present, is positive; its denominator keeps the original
    /// factors.
    pub fn invert_variables(&self) -> (Monomial, RationalFunction) {
        if self.num.is_zero() {
            return (Monomial::ONE, self.clone());
        }
        let max_a = self.num.max_p_degree().unwrap_or(0) as i64;
        let max_b = self.num.max_x_degree().unwrap_or(0) as i64;
        // N(1/P, 1/X) = P^-A X^-B * reflect(N)
        let mut mono = Monomial::new(1, -max_a, -max_b);
        let mut num = self.num.reflect();
        let (u, v) = (
            num.min_p_degree().unwrap_or(0),
            num.min_x_degree().unwrap_or(0),
        );
        num = num.unshift(u, v);
        mono = mono.times(Monomial::new(1, u as i64, v as i64));
        if num.constant_term().is_negative() {
            num = -num;
            mono = mono.negate();
        }
        // 1 / (1 - P^-a X^-b)^m = (-1)^m P^am X^bm / (1 - P^a X^b)^m
        for (&(a, b), &m) in &self.den {
            let sign = if m % 2 == 1 { -1 } else { 1 };
            mono = mono.times(Monomial::new(
                sign,
                a as i64 * m as i64,
                b as i64 * m as i64,
            ));
        }
        (
            mono,
            RationalFunction {
                num,
                den: self.den.clone(),
            },
        )
    }

    /// `(u, v, sign)` with `f(1/P, 1/X) = sign * P^u X^v * f(P, X)`, if such a
    /// monomial exists.
    pub fn functional_equation(&self) -> Option<Monomial> {
        if self.num.is_zero() {
            return None;
        }
        let (inv_mono, inverted) = self.invert_variables();
        let (own_mono, reduced) = self.split_monomial();
        // f(1/P,1/X) = inv_mono * inverted; f = own_mono * reduced.
        let ratio = inv_mono.times(own_mono.inverse());
        if inverted.rf_equal(&reduced) {
            Some(ratio)
        } else if inverted.rf_equal(&-&reduced) {
            Some(ratio.negate())
        } else {
            None
        }
    }

    /// Exact value at `P = p`, `X = x` in `Q(sqrt 2)`.
    pub fn eval_at(
        &self,
        p: &QuadraticRational,
        x: &QuadraticRational,
    ) -> Result<QuadraticRational> {
        let mut num = QuadraticRational::zero();
        for (c, a, b) in self.num.terms() {
            let c = QuadraticRational::rational(num_rational::BigRational::from_integer(c.clone()));
            num = &num + &(&(&c * &p.pow(a)) * &x.pow(b));
        }
        let mut den = QuadraticRational::one();
        for (&(a, b), &m) in &self.den {
            let factor = &QuadraticRational::one() - &(&p.pow(a) * &x.pow(b));
            if factor.is_zero() {
                return Err(Error::Pole { p_exp: a, x_exp: b });
            }
            den = &den * &factor.pow(m);
        }
        num.checked_div(&den)
    }

    /// Exact value at `P = 2`, `X = 2^(-3/2) = sqrt(2)/4`.
    pub fn eval_quadratic(&self) -> Result<QuadraticRational> {
        self.eval_at(
            &QuadraticRational::from_integers(2, 0),
            &QuadraticRational::from_fractions(0, 1, 1, 4),
        )
    }

    /// Floating-point value at `P = p`, `X = p^-s`. No exactness claim.
    pub fn eval_real(&self, p: u64, s: f64) -> Result<f64> {
        let pf = p as f64;
        let x = pf.powf(-s);
        let mut den = 1.0;
        for (&(a, b), &m) in &self.den {
            if (a as f64 - s * b as f64).abs() < 1e-12 {
                return Err(Error::Pole { p_exp: a, x_exp: b });
            }
            den *= (1.0 - pf.powi(a as i32) * x.powi(b as i32)).powi(m as i32);
        }
        Ok(self.num.eval_f64(pf, x) / den)
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a RationalFunction>) -> RationalFunction {
        items
            .into_iter()
            .fold(RationalFunction::zero(), |acc, f| &acc + f)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.rf_equal(other)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.num)?;
        if self.den.is_empty() {
            return Ok(());
        }
        write!(f, " / (")?;
        for (&(a, b), &m) in self.den.iter().rev() {
            write!(
                f,
                "({})",
                DenominatorFactor {
                    p_exp: a,
                    x_exp: b,
                    multiplicity: 1
                }
                .base()
            )?;
            if m > 1 {
                write!(f, "^{m}")?;
            }
        }
        write!(f, ")")
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let lcm = RationalFunction::lcm_den(&self.den, &rhs.den);
        let (l, r) = self.cross(rhs);
        RationalFunction {
            num: l + r,
            den: lcm,
        }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        let mut den = self.den.clone();
        for (&k, &m) in &rhs.den {
            *den.entry(k).or_insert(0) += m;
        }
        RationalFunction {
            num: &self.num * &rhs.num,
            den,
        }
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn equality_by_cross_multiplication() {
        assert!(rf("1/(1-x)").rf_equal(&rf("(1+x)/(1-x^2)")));
        assert!(!rf("1/(1-x)").rf_equal(&rf("1/(1-px)")));
        assert!(rf("0").rf_equal(&rf("0/(1-x)")));
    }

    #[test]
    fn geometric_series() {
        for p in [2, 3, 5] {
            assert_eq!(rf("1/(1-x)").series(p, 4), ints(&[1, 1, 1, 1, 1]));
        }
        assert_eq!(rf("1/(1-px)^2").series(3, 3), ints(&[1, 6, 27, 108]));
    }

    #[test]
    fn series_in_p_matches_specialized_series() {
        let f = rf("(1 + p x^2 - p^3x^3)/((1-x)(1-p^2x^2)^2)");
        let sym = f.series_in_p(9);
        for p in [2u64, 3, 7] {
            let direct = f.series(p, 9);
            for (n, coeffs) in sym.iter().enumerate() {
                let v: BigInt = coeffs
                    .iter()
                    .enumerate()
                    .map(|(a, c)| c * num_traits::Pow::pow(&BigInt::from(p), a as u32))
                    .sum();
                assert_eq!(v, direct[n]);
            }
        }
    }

    #[test]
    fn inversion_of_geometric_factor() {
        let (m, g) = rf("1/(1-x)").invert_variables();
        assert_eq!(m, Monomial::new(-1, 0, 1));
        assert!(g.rf_equal(&rf("1/(1-x)")));
    }

    #[test]
    fn inversion_of_one_minus_px_over_one_minus_x() {
        let f = rf("(1-px)/(1-x)");
        let (m, g) = f.invert_variables();
        assert_eq!(m, Monomial::new(1, -1, 0));
        assert!(g.rf_equal(&f));
        assert_eq!(f.functional_equation(), Some(Monomial::new(1, -1, 0)));
    }

    #[test]
    fn functional_equation_with_monomial_numerator() {
        // p^2x^3/(1-x): f(1/p,1/x) = p^-2 x^-3 * (-x)/(1-x) = -p^-4 x^-5 f
        let f = rf("p^2x^3/(1-x)");
        assert_eq!(f.functional_equation(), Some(Monomial::new(-1, -4, -5)));
        assert_eq!(
            rf("(1+px)/(1-x)").functional_equation(),
            Some(Monomial::new(-1, -1, 0))
        );
        assert_eq!(rf("(1+px+x)/(1-x)").functional_equation(), None);
    }

    #[test]
    fn exact_and_real_evaluation() {
        let f = rf("1/(1-x)");
        assert_eq!(
            f.eval_quadratic().unwrap(),
            QuadraticRational::from_fractions(8, 7, 2, 7)
        );
        assert!((rf("1/(1-x)").eval_real(4, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        let g = rf("1 - p^2x^2");
        assert_eq!(
            g.eval_quadratic().unwrap(),
            QuadraticRational::from_fractions(1, 2, 0, 1)
        );
        assert!((g.eval_real(2, 1.5).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn poles_are_reported() {
        let f = rf("1/(1-p^2x^2)");
        assert!(matches!(f.eval_real(3, 1.0), Err(Error::Pole { .. })));
        let g = rf("1/(1-p^3x^2)");
        assert!(matches!(g.eval_quadratic(), Err(Error::Pole { .. })));
    }
}
