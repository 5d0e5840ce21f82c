//! Exact arithmetic substrate: bivariate polynomials in `P` and `X`, rational
//! functions with `(1 - P^a X^b)` denominators, and the field `Q(sqrt 2)`.
//!
//! Integers and rationals come from `num-bigint` / `num-rational`.

pub mod parse;
pub mod poly;
pub mod quadratic;
pub mod ratfunc;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use poly::BivariatePolynomial;
pub use quadratic::QuadraticRational;
pub use ratfunc::{DenominatorFactor, Monomial, RationalFunction};

/// Formal equality of two rational functions.
pub fn rf_equal(f: &RationalFunction, g: &RationalFunction) -> bool {
    f.rf_equal(g)
}

/// Power-series coefficients in `X` after `P := p`.
pub fn rf_series(f: &RationalFunction, p: u64, order: usize) -> Vec<BigInt> {
    f.series(p, order)
}

/// `f(1/P, 1/X)` as a monomial times a normalized rational function.
pub fn rf_invert_variables(f: &RationalFunction) -> (Monomial, RationalFunction) {
    f.invert_variables()
}

/// Exact value at `P = 2`, `X = sqrt(2)/4`.
pub fn rf_eval_quadratic(f: &RationalFunction) -> crate::Result<QuadraticRational> {
    f.eval_quadratic()
}

/// Double-precision value at `P = p`, `X = p^-s`.
pub fn rf_eval_real(f: &RationalFunction, p: u64, s: f64) -> crate::Result<f64> {
    f.eval_real(p, s)
}
