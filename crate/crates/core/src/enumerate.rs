//! Subring and cocyclic-subring counts of index `p^m`, cell by cell.
//!
//! Two independent paths: the fast path checks the valuation condition on
//! `(a21, a32)` and treats `a31` as free; the oracle path walks every
//! residue triple and calls the generic closure test.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::closed_forms::{self, Parity};
use crate::error::{Error, Result};
use crate::ring::{pow_i128, valuation_at_least, HnfSubringMatrix};
use crate::{require_prime, volume};

/// Diagonal exponents `(k, l, r)` of a Hermite-form basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub k: u32,
    pub l: u32,
    pub r: u32,
}

impl Cell {
    pub fn new(k: u32, l: u32, r: u32) -> Result<Self> {
        let c = Self { k, l, r };
        if c.is_valid() {
            Ok(c)
        } else {
            Err(Error::InvalidCell { k, l, r })
        }
    }

    pub fn is_valid(&self) -> bool {
        self.l <= 2 * self.r && self.k <= self.l + self.r
    }

    pub fn weight(&self) -> u32 {
        self.k + self.l + self.r
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        Cell::new(self.k, self.l, self.r).map(|_| ())
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.k, self.l, self.r)
    }
}

/// All valid cells of weight `m`, lexicographic in `(k, l, r)`.
pub fn valid_cells(m: u32) -> Vec<Cell> {
    let mut out = Vec::new();
    for k in 0..=m {
        for l in 0..=m - k {
            let c = Cell { k, l, r: m - k - l };
            if c.is_valid() {
                out.push(c);
            }
        }
    }
    out
}

fn check_size(p: u64, c: &Cell) -> Result<()> {
    if (c.k + c.l + c.r) as f64 * (p as f64).log2() > 62.0 {
        return Err(Error::Overflow("lattice index exceeds 2^62"));
    }
    Ok(())
}

fn pair_closed(p: u64, c: &Cell, a21: u64, a32: u64) -> bool {
    let lhs = 2 * pow_i128(p, c.l) * a32 as i128 - pow_i128(p, c.r) * a21 as i128;
    valuation_at_least(lhs, p, c.k as i64 + c.l as i64 - c.r as i64)
}

/// Closed `(a21, a32)` pairs of a cell, in increasing order.
fn closed_pairs(p: u64, c: &Cell) -> impl Iterator<Item = (u64, u64)> + '_ {
    let (pk, pl) = (p.pow(c.k), p.pow(c.l));
    (0..pk)
        .flat_map(move |a21| (0..pl).map(move |a32| (a21, a32)))
        .filter(move |&(a21, a32)| pair_closed(p, c, a21, a32))
}

/// Number of subring bases in a cell, via the valuation condition.
pub fn count_cell(p: u64, c: Cell) -> Result<u128> {
    require_prime(p)?;
    c.require_valid()?;
    check_size(p, &c)?;
    Ok(closed_pairs(p, &c).count() as u128 * p.pow(c.k) as u128)
}

/// Number of subring bases in a cell, via the generic closure test on every
/// residue triple.
pub fn count_cell_oracle(p: u64, c: Cell, budget: &Budget) -> Result<u128> {
    require_prime(p)?;
    c.require_valid()?;
    check_size(p, &c)?;
    let needed = (p as u128).pow(2 * c.k + c.l);
    Budget::check("closure-oracle matrix checks", needed, budget.oracle_checks)?;
    let (pk, pl) = (p.pow(c.k), p.pow(c.l));
    let count = (0..pk)
        .into_par_iter()
        .map(|a21| {
            let mut n = 0u128;
            for a31 in 0..pk {
                for a32 in 0..pl {
                    let m = HnfSubringMatrix::new_unchecked(p, (c.k, c.l, c.r), a21, a31, a32);
                    if m.is_subring() {
                        n += 1;
                    }
                }
            }
            n
        })
        .sum();
    Ok(count)
}

/// How many `a31` in `[0, p^k)` make a closed `(a21, a32)` cocyclic.
fn cocyclic_a31_count(p: u64, c: &Cell, a21: u64, a32: u64) -> u128 {
    let pk = p.pow(c.k) as u128;
    let unit = |e: u32, factor: u64| e == 0 && !factor.is_multiple_of(p);
    // gcd terms not involving a31: p^{k+l+r}, p^{l+r}, p^r a21, p^{k+r}, p^k a32, p^{k+l}
    let free_unit = unit(c.k + c.l + c.r, 1)
        || unit(c.l + c.r, 1)
        || unit(c.r, a21)
        || unit(c.k + c.r, 1)
        || unit(c.k, a32)
        || unit(c.k + c.l, 1);
    if free_unit {
        return pk;
    }
    // Remaining term a21 a32 - p^l a31 must be a unit.
    if c.l >= 1 {
        if !((a21 % p) * (a32 % p)).is_multiple_of(p) {
            pk
        } else {
            0
        }
    } else {
        // l = 0 forces a32 = 0: need p not dividing a31; here k >= 1.
        pk - pk / p as u128
    }
}

/// Cocyclic subring bases in a cell, fast path.
pub fn count_cocyclic_cell(p: u64, c: Cell) -> Result<u128> {
    require_prime(p)?;
    c.require_valid()?;
    check_size(p, &c)?;
    Ok(closed_pairs(p, &c)
        .map(|(a21, a32)| cocyclic_a31_count(p, &c, a21, a32))
        .sum())
}

/// Cocyclic subring bases in a cell: every residue triple, generic closure
/// test, and both cocyclicity criteria (which must agree).
pub fn count_cocyclic_cell_oracle(p: u64, c: Cell, budget: &Budget) -> Result<u128> {
    require_prime(p)?;
    c.require_valid()?;
    check_size(p, &c)?;
    let needed = (p as u128).pow(2 * c.k + c.l);
    Budget::check("closure-oracle matrix checks", needed, budget.oracle_checks)?;
    let (pk, pl) = (p.pow(c.k), p.pow(c.l));
    (0..pk)
        .into_par_iter()
        .map(|a21| {
            let mut n = 0u128;
            for a31 in 0..pk {
                for a32 in 0..pl {
                    let m = HnfSubringMatrix::new_unchecked(p, (c.k, c.l, c.r), a21, a31, a32);
                    if m.is_subring() && m.is_cocyclic()? {
                        n += 1;
                    }
                }
            }
            Ok(n)
        })
        .sum()
}

fn sum_cells(m: u32, f: impl Fn(Cell) -> Result<u128> + Sync + Send) -> Result<u128> {
    valid_cells(m).into_par_iter().map(f).sum()
}

/// Subrings of index `p^m`.
pub fn count_subrings(p: u64, m: u32) -> Result<u128> {
    sum_cells(m, |c| count_cell(p, c))
}

/// Cocyclic subrings of index `p^m`.
pub fn count_cocyclic(p: u64, m: u32) -> Result<u128> {
    sum_cells(m, |c| count_cocyclic_cell(p, c))
}

/// Subrings of index `p^m` through the generic closure oracle.
pub fn count_subrings_oracle(p: u64, m: u32, budget: &Budget) -> Result<u128> {
    sum_cells(m, |c| count_cell_oracle(p, c, budget))
}

/// Cocyclic subrings of index `p^m` through the generic closure oracle.
pub fn count_cocyclic_oracle(p: u64, m: u32, budget: &Budget) -> Result<u128> {
    sum_cells(m, |c| count_cocyclic_cell_oracle(p, c, budget))
}

/// Where a count came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Residue enumeration of Hermite-form bases (valuation fast path).
    Enumeration,
    /// Cell sums `p^{2k+l} mu(k,l,r)` from the volume rules; the cocyclic
    /// column sums per-cell cocyclic counts.
    Cells,
    /// Series coefficients of the stored local factors.
    Formula,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Enumeration => "enumeration",
            Method::Cells => "cells",
            Method::Formula => "formula",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enum" | "enumeration" => Ok(Method::Enumeration),
            "cells" => Ok(Method::Cells),
            "formula" => Ok(Method::Formula),
            other => Err(Error::Domain(format!("unknown method {other:?}"))),
        }
    }
}

/// Residue pairs `(a21, a32)` the fast path visits for index `p^m`.
pub fn fast_path_work(p: u64, m: u32) -> u128 {
    valid_cells(m)
        .iter()
        .map(|c| (p as u128).saturating_pow(c.k + c.l))
        .fold(0u128, u128::saturating_add)
}

/// [`count_with_method`] after checking the enumeration work against the budget.
pub fn count_with_budget(
    p: u64,
    m: u32,
    cocyclic: bool,
    method: Method,
    budget: &Budget,
) -> Result<BigInt> {
    require_prime(p)?;
    if method != Method::Formula {
        Budget::check(
            "fast-path residue pairs",
            fast_path_work(p, m),
            budget.oracle_checks,
        )?;
    }
    count_with_method(p, m, cocyclic, method)
}

/// Subring (or cocyclic) count of index `p^m` by the chosen method.
///
/// The formula method uses the odd-prime theorem forms for odd `p`; at
/// `p = 2` it uses the case sum for subrings and the displayed factor for
/// cocyclic subrings.
pub fn count_with_method(p: u64, m: u32, cocyclic: bool, method: Method) -> Result<BigInt> {
    require_prime(p)?;
    match (method, cocyclic) {
        (Method::Enumeration, false) => Ok(count_subrings(p, m)?.into()),
        (Method::Enumeration, true) | (Method::Cells, true) => Ok(count_cocyclic(p, m)?.into()),
        (Method::Cells, false) => {
            let mut s = volume::local_series_via_cells(p, m)?;
            Ok(s.swap_remove(m as usize))
        }
        (Method::Formula, _) => {
            let parity = Parity::of(p);
            let f = if cocyclic {
                closed_forms::cocyclic_local_factor(parity, closed_forms::Form::Theorem)?
            } else if parity == Parity::Two {
                closed_forms::subring_two_case_sum()
            } else {
                closed_forms::subring_local_factor(parity)
            };
            let mut s = f.series(p, m as usize);
            Ok(s.swap_remove(m as usize))
        }
    }
}

/// One row of a [`CountTable`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub m: u32,
    #[serde(with = "decimal")]
    pub subrings: BigInt,
    #[serde(with = "decimal")]
    pub cocyclic: BigInt,
    pub method: Method,
}

/// Per-exponent counts at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub prime: u64,
    pub rows: Vec<CountRow>,
}

impl CountTable {
    pub fn build(p: u64, max_m: u32, method: Method, budget: &Budget) -> Result<Self> {
        let rows = (0..=max_m)
            .map(|m| {
                Ok(CountRow {
                    m,
                    subrings: count_with_budget(p, m, false, method, budget)?,
                    cocyclic: count_with_budget(p, m, true, method, budget)?,
                    method,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { prime: p, rows })
    }
}

/// Big integers as decimal strings.
mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(k: u32, l: u32, r: u32) -> Cell {
        Cell::new(k, l, r).unwrap()
    }

    #[test]
    fn cells_of_small_weight() {
        assert_eq!(valid_cells(0), vec![cell(0, 0, 0)]);
        assert_eq!(valid_cells(1), vec![cell(0, 0, 1)]);
        assert_eq!(
            valid_cells(2),
            vec![cell(0, 0, 2), cell(0, 1, 1), cell(1, 0, 1)]
        );
        assert!(Cell::new(1, 0, 0).is_err());
    }

    #[test]
    fn cell_counts() {
        assert_eq!(count_cell(3, cell(0, 1, 1)).unwrap(), 3);
        assert_eq!(count_cell(3, cell(1, 0, 1)).unwrap(), 9);
        assert_eq!(count_cell(2, cell(1, 1, 1)).unwrap(), 8);
        let b = Budget::default();
        assert_eq!(count_cell_oracle(3, cell(0, 0, 2), &b).unwrap(), 1);
        assert_eq!(count_cell_oracle(3, cell(0, 1, 1), &b).unwrap(), 3);
        assert_eq!(count_cell_oracle(2, cell(2, 1, 1), &b).unwrap(), 16);
    }

    #[test]
    fn index_counts() {
        for p in [2, 3, 5] {
            assert_eq!(count_subrings(p, 0).unwrap(), 1);
            assert_eq!(count_cocyclic(p, 0).unwrap(), 1);
        }
        assert_eq!(count_subrings(3, 2).unwrap(), 13);
        assert_eq!(count_subrings(2, 2).unwrap(), 7);
        assert_eq!(count_cocyclic(3, 2).unwrap(), 9);
        assert_eq!(count_cocyclic(2, 2).unwrap(), 4);
        assert_eq!(count_cocyclic(2, 3).unwrap(), 8);
    }

    #[test]
    fn oracle_budget_is_enforced() {
        let tight = Budget {
            oracle_checks: 10,
            ..Budget::default()
        };
        assert!(matches!(
            count_cell_oracle(3, cell(2, 1, 1), &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(count_subrings(4, 1), Err(Error::NotPrime(4)));
    }
}
