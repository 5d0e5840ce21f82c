//! Haar volumes `mu_p(k, l, r)` of the closure condition inside a cell.
//!
//! Within a cell the condition reads `v(2 p^l a32 - p^r a21) >= k + l - r`
//! and never involves `a31`. Every volume is a power of `p`; the rule
//! tables below give the exponent by case.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::closed_forms::Parity;
use crate::enumerate::{valid_cells, Cell};
use crate::error::{Error, Result};
use crate::require_prime;
use crate::ring::{pow_i128, valuation_at_least};

/// One case of the volume table: where it applies and the exponent of `p`.
#[derive(Clone, Copy)]
pub struct VolumeCaseRule {
    pub label: &'static str,
    pub applies: fn(i64, i64, i64) -> bool,
    pub exponent: fn(i64, i64, i64) -> i64,
}

impl std::fmt::Debug for VolumeCaseRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label)
    }
}

pub const ODD_RULES: [VolumeCaseRule; 5] = [
    VolumeCaseRule {
        label: "F1: r >= l, r < k",
        applies: |k, l, r| r >= l && r < k,
        exponent: |k, _, r| r - k,
    },
    VolumeCaseRule {
        label: "F2: r >= l, r >= k",
        applies: |k, l, r| r >= l && r >= k,
        exponent: |_, _, _| 0,
    },
    VolumeCaseRule {
        label: "F3: r < l, r < k",
        applies: |k, l, r| r < l && r < k,
        exponent: |k, l, r| 2 * r - k - l,
    },
    VolumeCaseRule {
        label: "F4: r < l, r >= k, k + l > 2r",
        applies: |k, l, r| r < l && r >= k && k + l > 2 * r,
        exponent: |k, l, r| 2 * r - k - l,
    },
    VolumeCaseRule {
        label: "F5: r < l, r >= k, k + l <= 2r",
        applies: |k, l, r| r < l && r >= k && k + l <= 2 * r,
        exponent: |_, _, _| 0,
    },
];

pub const TWO_RULES: [VolumeCaseRule; 6] = [
    VolumeCaseRule {
        label: "T1: r > l, r < k",
        applies: |k, l, r| r > l && r < k,
        exponent: |k, _, r| r - k + 1,
    },
    VolumeCaseRule {
        label: "T2: r = l, r < k",
        applies: |k, l, r| r == l && r < k,
        exponent: |k, _, r| r - k,
    },
    VolumeCaseRule {
        label: "T3: r >= l, r >= k",
        applies: |k, l, r| r >= l && r >= k,
        exponent: |_, _, _| 0,
    },
    VolumeCaseRule {
        label: "T4: r < l, r < k",
        applies: |k, l, r| r < l && r < k,
        exponent: |k, l, r| 2 * r - k - l,
    },
    VolumeCaseRule {
        label: "T5: r < l, r >= k, k + l > 2r",
        applies: |k, l, r| r < l && r >= k && k + l > 2 * r,
        exponent: |k, l, r| 2 * r - k - l,
    },
    VolumeCaseRule {
        label: "T6: r < l, r >= k, k + l <= 2r",
        applies: |k, l, r| r < l && r >= k && k + l <= 2 * r,
        exponent: |_, _, _| 0,
    },
];

pub fn rules(parity: Parity) -> &'static [VolumeCaseRule] {
    match parity {
        Parity::Odd => &ODD_RULES,
        Parity::Two => &TWO_RULES,
    }
}

/// The unique rule covering a valid cell.
pub fn rule_for(p: u64, c: Cell) -> Result<&'static VolumeCaseRule> {
    c.require_valid()?;
    let (k, l, r) = (c.k as i64, c.l as i64, c.r as i64);
    let mut hits = rules(Parity::of(p))
        .iter()
        .filter(|rule| (rule.applies)(k, l, r));
    match (hits.next(), hits.next()) {
        (Some(rule), None) => Ok(rule),
        (None, _) => Err(Error::Inconsistent(format!(
            "no volume rule covers cell {c}"
        ))),
        (Some(a), Some(b)) => Err(Error::Inconsistent(format!(
            "rules {a:?} and {b:?} both cover cell {c}"
        ))),
    }
}

fn p_power(p: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(p));
    if e >= 0 {
        Pow::pow(&base, e as u64)
    } else {
        Pow::pow(&base, (-e) as u64).recip()
    }
}

/// Volume from the case rules.
pub fn mu_closed(p: u64, c: Cell) -> Result<BigRational> {
    require_prime(p)?;
    let rule = rule_for(p, c)?;
    Ok(p_power(
        p,
        (rule.exponent)(c.k as i64, c.l as i64, c.r as i64),
    ))
}

/// Volume by residue counting.
///
/// With `e = k + l - r`, the condition depends only on `a21` modulo
/// `p^{max(0, e - r)}` and on `a32` modulo `p^{max(0, e - l)}`: shifting
/// `a21` by `p^{e-r}` moves `p^r a21` by a multiple of `p^e`, and likewise
/// for `a32`. Counting over those moduli is therefore exact.
pub fn mu_oracle(p: u64, c: Cell) -> Result<BigRational> {
    require_prime(p)?;
    c.require_valid()?;
    let (k, l, r) = (c.k as i64, c.l as i64, c.r as i64);
    let e = k + l - r;
    if e <= 0 {
        return Ok(BigRational::one());
    }
    let e21 = (e - r).max(0) as u32;
    let e32 = (e - l).max(0) as u32;
    let (m21, m32) = (p.pow(e21), p.pow(e32));
    let (pl, pr) = (pow_i128(p, c.l), pow_i128(p, c.r));
    let mut hits: u64 = 0;
    for a21 in 0..m21 {
        for a32 in 0..m32 {
            let v = 2 * pl * a32 as i128 - pr * a21 as i128;
            if valuation_at_least(v, p, e) {
                hits += 1;
            }
        }
    }
    Ok(BigRational::new(
        BigInt::from(hits),
        BigInt::from(p).pow(e21 + e32),
    ))
}

/// Volume at `p = 2`, `r < l`, of the condition as written with `a31`:
/// `v(2^{l-r+1} a32 - a31) >= k + l - 2r`, counted over `a31 mod 2^k` and
/// `a32 mod 2^l`. Used only to compare against [`mu_oracle`].
pub fn mu_stated_two(c: Cell) -> Result<BigRational> {
    c.require_valid()?;
    if c.r >= c.l {
        return Err(Error::Domain(format!("{c} is not an r < l cell")));
    }
    let need = c.k as i64 + c.l as i64 - 2 * c.r as i64;
    let shift = pow_i128(2, c.l - c.r + 1);
    let (m31, m32) = (1u64 << c.k, 1u64 << c.l);
    let mut hits: u64 = 0;
    for a31 in 0..m31 {
        for a32 in 0..m32 {
            if valuation_at_least(shift * a32 as i128 - a31 as i128, 2, need) {
                hits += 1;
            }
        }
    }
    Ok(BigRational::new(
        BigInt::from(hits),
        BigInt::from(m31) * BigInt::from(m32),
    ))
}

/// Coefficients `c_m = sum over cells of weight m of p^{2k+l} mu_p(k,l,r)`.
pub fn local_series_via_cells(p: u64, order: u32) -> Result<Vec<BigInt>> {
    require_prime(p)?;
    (0..=order)
        .map(|m| {
            let mut total = BigInt::from(0);
            for c in valid_cells(m) {
                let v = p_power(p, 2 * c.k as i64 + c.l as i64) * mu_closed(p, c)?;
                if !v.is_integer() {
                    return Err(Error::NonIntegral {
                        k: c.k,
                        l: c.l,
                        r: c.r,
                        value: v.to_string(),
                    });
                }
                total += v.to_integer();
            }
            Ok(total)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn cell(k: u32, l: u32, r: u32) -> Cell {
        Cell::new(k, l, r).unwrap()
    }

    #[test]
    fn closed_volumes() {
        assert_eq!(mu_closed(3, cell(1, 0, 1)).unwrap(), q(1, 1));
        assert_eq!(mu_closed(3, cell(2, 1, 1)).unwrap(), q(1, 3));
        assert_eq!(mu_closed(2, cell(3, 1, 2)).unwrap(), q(1, 1));
    }

    #[test]
    fn oracle_volumes() {
        for p in [2, 3, 5] {
            assert_eq!(mu_oracle(p, cell(0, 0, 0)).unwrap(), q(1, 1));
        }
        assert_eq!(mu_oracle(3, cell(2, 1, 1)).unwrap(), q(1, 3));
        assert_eq!(mu_oracle(2, cell(2, 2, 2)).unwrap(), q(1, 1));
    }

    #[test]
    fn cell_series() {
        let s = |p, n| -> Vec<i64> {
            local_series_via_cells(p, n)
                .unwrap()
                .iter()
                .map(|v| i64::try_from(v).unwrap())
                .collect()
        };
        assert_eq!(s(3, 2), vec![1, 1, 13]);
        assert_eq!(s(2, 3), vec![1, 1, 7, 19]);
        assert_eq!(s(7, 0), vec![1]);
    }

    #[test]
    fn rules_partition_the_cone() {
        for p in [2, 3] {
            for m in 0..12 {
                for c in valid_cells(m) {
                    rule_for(p, c).unwrap();
                }
            }
        }
    }

    #[test]
    fn invalid_cell_is_rejected() {
        assert!(matches!(
            mu_closed(3, Cell { k: 1, l: 0, r: 0 }),
            Err(Error::InvalidCell { .. })
        ));
    }
}
