//! Global coefficients, partial sums and the growth constants `C` and `D`.
//!
//! Local series come from sources that agree with enumeration: the theorem
//! forms at odd primes, the case sum for `p = 2` subrings and residue
//! enumeration for `p = 2` cocyclic subrings.

use std::sync::OnceLock;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::budget::Budget;
use crate::closed_forms::{self, FormulaName};
use crate::enumerate;
use crate::error::{Error, Result};
use crate::exact::{QuadraticRational, RationalFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Subring,
    Cocyclic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexFilter {
    All,
    Odd,
}

/// Largest `p = 2` exponent served from enumeration.
const TWO_MAX_EXPONENT: u32 = 24;
/// Odd-prime series are expanded symbolically to this order.
const ODD_MAX_EXPONENT: usize = 40;

/// Local series per kind: coefficient polynomials in `P` for odd primes
/// and plain integers at `p = 2`.
#[derive(Debug)]
pub struct GlobalCoefficientCache {
    pub kind: Kind,
    odd: Vec<Vec<i128>>,
    two: Vec<u128>,
}

impl GlobalCoefficientCache {
    fn build(kind: Kind) -> Self {
        let odd_factor = match kind {
            Kind::Subring => closed_forms::entry(FormulaName::SubringOdd),
            Kind::Cocyclic => closed_forms::entry(FormulaName::CocyclicOddTheorem),
        };
        let odd = odd_factor
            .series_in_p(ODD_MAX_EXPONENT)
            .into_iter()
            .map(|c| {
                c.iter()
                    .map(|v| v.to_i128().expect("small coefficients"))
                    .collect()
            })
            .collect();
        let two = match kind {
            Kind::Subring => closed_forms::subring_two_case_sum()
                .series(2, TWO_MAX_EXPONENT as usize)
                .iter()
                .map(|v| v.to_u128().expect("counts are non-negative"))
                .collect(),
            Kind::Cocyclic => (0..=TWO_MAX_EXPONENT)
                .map(|m| enumerate::count_cocyclic(2, m).expect("p = 2 is prime"))
                .collect(),
        };
        Self { kind, odd, two }
    }

    pub fn get(kind: Kind) -> &'static Self {
        static SUB: OnceLock<GlobalCoefficientCache> = OnceLock::new();
        static CC: OnceLock<GlobalCoefficientCache> = OnceLock::new();
        match kind {
            Kind::Subring => SUB.get_or_init(|| Self::build(kind)),
            Kind::Cocyclic => CC.get_or_init(|| Self::build(kind)),
        }
    }

    /// Coefficient of `X^e` in the local series at `p`.
    pub fn local(&self, p: u64, e: u32) -> Result<u128> {
        if p == 2 {
            return self
                .two
                .get(e as usize)
                .copied()
                .ok_or(Error::BudgetExceeded {
                    what: "p = 2 local exponent",
                    needed: e as u128,
                    budget: TWO_MAX_EXPONENT as u128,
                });
        }
        let poly = self.odd.get(e as usize).ok_or(Error::BudgetExceeded {
            what: "odd local exponent",
            needed: e as u128,
            budget: ODD_MAX_EXPONENT as u128,
        })?;
        let p = p as i128;
        let mut acc: i128 = 0;
        for &c in poly.iter().rev() {
            acc = acc
                .checked_mul(p)
                .and_then(|v| v.checked_add(c))
                .ok_or(Error::Overflow("local coefficient"))?;
        }
        u128::try_from(acc)
            .map_err(|_| Error::Inconsistent(format!("negative local count at p={p}")))
    }
}

/// `a(n)`: number of subrings (or cocyclic subrings) of index `n`.
pub fn coefficient(n: u64, kind: Kind, budget: &Budget) -> Result<u128> {
    if n == 0 {
        return Err(Error::Domain("index must be positive".into()));
    }
    let cache = GlobalCoefficientCache::get(kind);
    let mut rest = n;
    let mut out: u128 = 1;
    let mut d: u64 = 2;
    while d.saturating_mul(d) <= rest {
        Budget::check("trial-division bound", d as u128, budget.sieve_bound)?;
        if rest.is_multiple_of(d) {
            let mut e = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                e += 1;
            }
            out = out
                .checked_mul(cache.local(d, e)?)
                .ok_or(Error::Overflow("coefficient"))?;
        }
        d += 1;
    }
    if rest > 1 {
        out = out
            .checked_mul(cache.local(rest, 1)?)
            .ok_or(Error::Overflow("coefficient"))?;
    }
    Ok(out)
}

/// All coefficients `a(1..=bound)` by a smallest-prime-factor sieve; index 0 is unused.
pub fn sieve_coefficients(bound: u64, kind: Kind, budget: &Budget) -> Result<Vec<u128>> {
    Budget::check("sieve bound", bound as u128, budget.sieve_bound)?;
    let n = bound as usize;
    let cache = GlobalCoefficientCache::get(kind);
    let mut spf: Vec<u32> = vec![0; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut a = vec![0u128; n + 1];
    if n >= 1 {
        a[1] = 1;
    }
    for i in 2..=n {
        let p = spf[i] as usize;
        let mut q = i;
        let mut e = 0;
        while q % p == 0 {
            q /= p;
            e += 1;
        }
        a[i] = a[q]
            .checked_mul(cache.local(p as u64, e)?)
            .ok_or(Error::Overflow("coefficient"))?;
    }
    Ok(a)
}

fn keep(n: usize, filter: IndexFilter) -> bool {
    filter == IndexFilter::All || n % 2 == 1
}

/// `sum_{n <= bound} a(n)`, optionally over odd `n` only.
pub fn partial_sum(bound: u64, kind: Kind, filter: IndexFilter, budget: &Budget) -> Result<u128> {
    let a = sieve_coefficients(bound, kind, budget)?;
    Ok(a.iter()
        .enumerate()
        .skip(1)
        .filter(|&(n, _)| keep(n, filter))
        .map(|(_, v)| v)
        .sum())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub bound: u64,
    #[serde(serialize_with = "as_string")]
    pub sum: u128,
    pub ratio: f64,
}

fn as_string<S: serde::Serializer>(v: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `(B, s(B), s(B) / B^{3/2})` for each requested bound, from one sieve.
pub fn growth_diagnostic(
    bounds: &[u64],
    kind: Kind,
    filter: IndexFilter,
    budget: &Budget,
) -> Result<Vec<GrowthRow>> {
    let Some(&max) = bounds.iter().max() else {
        return Ok(Vec::new());
    };
    if bounds.contains(&0) {
        return Err(Error::Domain("bounds must be positive".into()));
    }
    let a = sieve_coefficients(max, kind, budget)?;
    let mut prefix = vec![0u128; a.len()];
    for n in 1..a.len() {
        prefix[n] = prefix[n - 1] + if keep(n, filter) { a[n] } else { 0 };
    }
    Ok(bounds
        .iter()
        .map(|&b| GrowthRow {
            bound: b,
            sum: prefix[b as usize],
            ratio: prefix[b as usize] as f64 / (b as f64).powf(1.5),
        })
        .collect())
}

/// Riemann zeta for real `s > 1`, absolute error below `1e-10`.
///
/// Direct summation to `N - 1` plus `N^{1-s}/(s-1) + N^{-s}/2`; the next
/// Euler-Maclaurin term is `s / (12 N^{s+1})`, and `N` is chosen to push it
/// under `1e-12`.
pub fn riemann_zeta_real(s: f64) -> Result<f64> {
    if s.is_nan() || s <= 1.0 || !s.is_finite() {
        return Err(Error::Domain(format!("zeta needs real s > 1, got {s}")));
    }
    let tol = 1e-12;
    let n = ((s / (12.0 * tol)).powf(1.0 / (s + 1.0)).ceil() as u64).clamp(10, 50_000_000);
    let nf = n as f64;
    let mut sum = 0.0;
    for k in (1..n).rev() {
        sum += (k as f64).powf(-s);
    }
    Ok(sum + nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s))
}

/// A truncated Euler product with its error bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantEstimate {
    pub value: f64,
    pub prime_bound: u64,
    /// Bound on `|log(value) - log(full product)|` from the primes above the bound.
    pub tail_bound: f64,
    /// The plain product over odd primes up to the bound, for comparison.
    pub plain_value: f64,
}

/// `F(y) = sum coeffs[n] y^n` with `coeffs[0] = 1`, the per-prime factor in
/// `y = p^{-1/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerFactor {
    pub coeffs: Vec<i64>,
}

/// Terms of the odd-prime product in the definition of `C`, as
/// `(coefficient, exponent of p^{-1/2})`.
pub const C_PRODUCT_TERMS: [(i64, usize); 10] = [
    (1, 0),
    (1, 4),
    (1, 5),
    (-1, 7),
    (-2, 8),
    (-2, 9),
    (-1, 10),
    (1, 12),
    (1, 13),
    (1, 17),
];

/// Terms of the odd-prime product in the definition of `D`.
pub const D_PRODUCT_TERMS: [(i64, usize); 5] = [(1, 0), (2, 3), (-1, 5), (-1, 6), (-1, 7)];

/// Order of the zeta-factor correction in the accelerated products.
const ACCEL_ORDER: usize = 10;

impl EulerFactor {
    pub fn from_terms(terms: &[(i64, usize)]) -> Self {
        let deg = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut coeffs = vec![0; deg + 1];
        for &(c, e) in terms {
            coeffs[e] += c;
        }
        Self { coeffs }
    }

    /// Numerator of a local factor at `X = p^{-3/2}`: `c P^a X^b` becomes `c y^{3b - 2a}`.
    pub fn from_numerator_at_three_halves(f: &RationalFunction) -> Result<Self> {
        let mut terms = Vec::new();
        for (c, a, b) in f.numerator().terms() {
            let e = 3 * b as i64 - 2 * a as i64;
            if e < 0 {
                return Err(Error::Domain(
                    "numerator term grows with p at s = 3/2".into(),
                ));
            }
            terms.push((
                c.to_i64().ok_or(Error::Overflow("numerator coefficient"))?,
                e as usize,
            ));
        }
        Ok(Self::from_terms(&terms))
    }

    pub fn eval(&self, y: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * y + c as f64)
    }

    /// Exponents `c_1..=c_n` with `F(y) = prod (1 - y^j)^{-c_j} (1 + O(y^{n+1}))`.
    pub fn zeta_exponents(&self, n: usize) -> Vec<i64> {
        // y F'/F = sum_m (sum_{d | m} d c_d) y^m
        let f = |i: usize| self.coeffs.get(i).copied().unwrap_or(0) as i128;
        let mut l = vec![0i128; n + 1];
        for m in 1..=n {
            let mut v = m as i128 * f(m);
            for j in 1..m {
                v -= f(j) * l[m - j];
            }
            l[m] = v;
        }
        let mut c = vec![0i128; n + 1];
        for m in 1..=n {
            let partial: i128 = (1..m)
                .filter(|d| m % d == 0)
                .map(|d| d as i128 * c[d])
                .sum();
            c[m] = (l[m] - partial) / m as i128;
        }
        c.into_iter().map(|v| v as i64).collect()
    }
}

fn odd_primes_up_to(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            if i > 2 {
                out.push(i as u64);
            }
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `prod_{p odd} F(p^{-1/2})` with the first `ACCEL_ORDER` orders of the
/// product carried by zeta values, so the truncated part converges like
/// `P^{-(ACCEL_ORDER - 1)/2}`.
///
/// With `F = G prod_{n <= N} (1 - y^n)^{-c_n}` the product equals
/// `prod_n [zeta(n/2)(1 - 2^{-n/2})]^{c_n} * prod_{p odd} G(p^{-1/2})`.
/// `G = Q / prod_{c_n < 0} (1 - y^n)^{|c_n|}` with `Q` a polynomial, so the
/// coefficients of `G` are at most `|Q|_1 binom(m + D - 1, D - 1)` with
/// `D = sum_{c_n < 0} |c_n|`, and `G - 1` starts at degree `N + 1`. That
/// gives `|G(y) - 1| <= eps(y) = A y^{N+1} / (1 - kappa y)` with
/// `A = |Q|_1 binom(N + D, D - 1)` and `kappa = 1 + (D - 1)/(N + 2)`. Summing
/// `eps(t^{-1/2})` over all integers `t > P` and comparing with the integral
/// bounds the neglected `log G` terms.
pub fn odd_euler_product(factor: &EulerFactor, prime_bound: u64) -> Result<ConstantEstimate> {
    if prime_bound < 3 {
        return Err(Error::Domain("prime bound must be at least 3".into()));
    }
    let n = ACCEL_ORDER;
    let c = factor.zeta_exponents(n);
    if c[1] != 0 || c[2] != 0 {
        return Err(Error::Domain(
            "product diverges: terms of order p^{-1/2} or p^{-1}".into(),
        ));
    }
    let mut zeta_part = 1.0;
    for (j, &cj) in c.iter().enumerate().skip(3) {
        if cj != 0 {
            let s = j as f64 / 2.0;
            zeta_part *= (riemann_zeta_real(s)? * (1.0 - 2f64.powf(-s))).powi(cj as i32);
        }
    }
    let primes = odd_primes_up_to(prime_bound);
    let mut log_g = 0.0;
    let mut log_plain = 0.0;
    for &p in &primes {
        let y = (p as f64).powf(-0.5);
        let f = factor.eval(y);
        let mut g = f;
        for (j, &cj) in c.iter().enumerate().skip(3) {
            if cj != 0 {
                g *= (1.0 - y.powi(j as i32)).powi(cj as i32);
            }
        }
        log_g += g.ln();
        log_plain += f.ln();
    }

    // Q = F * prod_{c_j > 0} (1 - y^j)^{c_j}
    let mut q: Vec<i128> = factor.coeffs.iter().map(|&v| v as i128).collect();
    let mut d_neg: u64 = 0;
    for (j, &cj) in c.iter().enumerate().skip(1) {
        if cj > 0 {
            for _ in 0..cj {
                let mut next = vec![0i128; q.len() + j];
                for (i, &v) in q.iter().enumerate() {
                    next[i] += v;
                    next[i + j] -= v;
                }
                q = next;
            }
        } else {
            d_neg += (-cj) as u64;
        }
    }
    let q_norm: f64 = q.iter().map(|v| v.unsigned_abs() as f64).sum();
    let d = d_neg.max(1);
    let a = q_norm * binomial(n as u64 + d, d - 1);
    let kappa = 1.0 + (d as f64 - 1.0) / (n as f64 + 2.0);
    let pb = prime_bound as f64;
    let y_p = pb.powf(-0.5);
    let eps_p = a * y_p.powi(n as i32 + 1) / (1.0 - kappa * y_p);
    let tail_bound = if kappa * y_p < 1.0 && eps_p < 1.0 {
        a * (2.0 / (n as f64 - 1.0)) * pb.powf(-(n as f64 - 1.0) / 2.0)
            / ((1.0 - kappa * y_p) * (1.0 - eps_p))
    } else {
        f64::INFINITY
    };
    Ok(ConstantEstimate {
        value: zeta_part * log_g.exp(),
        prime_bound,
        tail_bound,
        plain_value: log_plain.exp(),
    })
}

fn scale(e: ConstantEstimate, factor: f64) -> ConstantEstimate {
    ConstantEstimate {
        value: e.value * factor,
        plain_value: e.plain_value * factor,
        ..e
    }
}

/// The algebraic prefactor of `C` as stated: `(29256 + 18556 sqrt 2) / 194481`.
pub fn c_prefactor() -> QuadraticRational {
    QuadraticRational::from_fractions(29256, 194481, 18556, 194481)
}

/// The prefactor of `C` implied by a given `p = 2` subring factor:
/// the residue of `zeta(2s - 2)` is `1/2`, the Tauberian constant divides by
/// `3/2`, and the `p = 2` Euler factors of `zeta(3/2)^2 zeta(2) zeta(4)` and
/// `zeta(2s - 2)` are removed, leaving `(15/128)(1 - 2^{-3/2})^2 f(2, 2^{-3/2})`.
pub fn c_prefactor_from(two_factor: &RationalFunction) -> Result<QuadraticRational> {
    let y3 = QuadraticRational::from_fractions(1, 1, -1, 4);
    let lead = QuadraticRational::from_fractions(15, 128, 0, 1);
    Ok(&(&lead * &y3.pow(2)) * &two_factor.eval_quadratic()?)
}

/// `C = prefactor * zeta(3/2)^2 zeta(2) zeta(4) * prod_{p odd} F_C(p^{-1/2})`.
pub fn constant_c(prime_bound: u64) -> Result<ConstantEstimate> {
    let z = riemann_zeta_real(1.5)?.powi(2) * riemann_zeta_real(2.0)? * riemann_zeta_real(4.0)?;
    let prod = odd_euler_product(&EulerFactor::from_terms(&C_PRODUCT_TERMS), prime_bound)?;
    Ok(scale(prod, c_prefactor().to_f64() * z))
}

/// Exact `p = 2` cocyclic factor at `s = 3/2`, from the case sum.
pub fn cocyclic_two_value() -> Result<QuadraticRational> {
    closed_forms::cocyclic_two_case_sum().eval_quadratic()
}

/// `A + B sqrt 2 = zeta^{cc}_2(3/2) / 8`.
pub fn d_prefactor() -> Result<QuadraticRational> {
    Ok(&cocyclic_two_value()? * &QuadraticRational::from_fractions(1, 8, 0, 1))
}

/// `D = zeta(2) (A + B sqrt 2) prod_{p odd} F_D(p^{-1/2})`.
pub fn constant_d(prime_bound: u64) -> Result<ConstantEstimate> {
    let prod = odd_euler_product(&EulerFactor::from_terms(&D_PRODUCT_TERMS), prime_bound)?;
    Ok(scale(
        prod,
        riemann_zeta_real(2.0)? * d_prefactor()?.to_f64(),
    ))
}

/// Truncated `p = 2` cocyclic factor at `s = 3/2` from enumerated counts,
/// `sum_{m <= order} a(2^m) 2^{-3m/2}`.
pub fn cocyclic_two_value_enumerated(order: u32) -> Result<f64> {
    (0..=order)
        .map(|m| Ok(enumerate::count_cocyclic(2, m)? as f64 * 2f64.powf(-1.5 * m as f64)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_coefficients() {
        let b = Budget::default();
        assert_eq!(coefficient(1, Kind::Subring, &b).unwrap(), 1);
        assert_eq!(coefficient(12, Kind::Subring, &b).unwrap(), 7);
        assert_eq!(coefficient(9, Kind::Cocyclic, &b).unwrap(), 9);
        assert_eq!(coefficient(27, Kind::Subring, &b).unwrap(), 49);
    }

    #[test]
    fn small_partial_sums() {
        let b = Budget::default();
        assert_eq!(
            partial_sum(1, Kind::Subring, IndexFilter::All, &b).unwrap(),
            1
        );
        assert_eq!(
            partial_sum(4, Kind::Subring, IndexFilter::All, &b).unwrap(),
            10
        );
        assert_eq!(
            partial_sum(9, Kind::Cocyclic, IndexFilter::Odd, &b).unwrap(),
            13
        );
        let sieve = sieve_coefficients(200, Kind::Subring, &b).unwrap();
        for n in 1..=200u64 {
            assert_eq!(
                sieve[n as usize],
                coefficient(n, Kind::Subring, &b).unwrap()
            );
        }
    }

    #[test]
    fn zeta_values() {
        let pi = std::f64::consts::PI;
        assert!((riemann_zeta_real(2.0).unwrap() - pi * pi / 6.0).abs() < 1e-10);
        assert!((riemann_zeta_real(4.0).unwrap() - pi.powi(4) / 90.0).abs() < 1e-10);
        assert!((riemann_zeta_real(1.5).unwrap() - 2.612_375_348_685_488).abs() < 1e-10);
        assert!(riemann_zeta_real(1.0).is_err());
    }

    #[test]
    fn zeta_exponents_reproduce_factor() {
        // 1/(1-y^3)^2 = 1 + 2y^3 + 3y^6 + ...
        let f = EulerFactor::from_terms(&[(1, 0), (2, 3), (3, 6), (4, 9)]);
        assert_eq!(&f.zeta_exponents(6)[..7], &[0, 0, 0, 2, 0, 0, 0]);
    }

    #[test]
    fn product_terms_match_local_numerators() {
        let sub = EulerFactor::from_numerator_at_three_halves(closed_forms::entry(
            FormulaName::SubringOdd,
        ))
        .unwrap();
        assert_eq!(sub, EulerFactor::from_terms(&C_PRODUCT_TERMS));
        let cc = EulerFactor::from_numerator_at_three_halves(closed_forms::entry(
            FormulaName::CocyclicOddTheorem,
        ))
        .unwrap();
        assert_eq!(cc, EulerFactor::from_terms(&D_PRODUCT_TERMS));
    }

    #[test]
    fn d_prefactor_value() {
        assert_eq!(
            d_prefactor().unwrap(),
            QuadraticRational::from_fractions(758, 2688, 277, 2688)
        );
    }
}
