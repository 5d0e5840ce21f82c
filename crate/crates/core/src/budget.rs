//! Work caps for the brute-force paths.

use crate::error::{Error, Result};

/// Environment variable that overrides every cap with a single value.
pub const BUDGET_ENV: &str = "TRUNCZETA_BUDGET";

/// Iteration and size caps. The defaults cover every acceptance range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Matrices examined by one call of the generic closure oracle.
    pub oracle_checks: u128,
    /// Largest bound accepted by the multiplicative sieve.
    pub sieve_bound: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            oracle_checks: 10_000_000,
            sieve_bound: 1_000_000,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Self {
            oracle_checks: u128::MAX,
            sieve_bound: u128::MAX,
        }
    }

    /// Defaults, with both caps replaced by `TRUNCZETA_BUDGET` when it is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(raw) => {
                let v: u128 = raw.trim().parse().map_err(|_| {
                    Error::Domain(format!(
                        "{BUDGET_ENV}={raw:?} is not a non-negative integer"
                    ))
                })?;
                Ok(Self {
                    oracle_checks: v,
                    sieve_bound: v,
                })
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub(crate) fn check(what: &'static str, needed: u128, budget: u128) -> Result<()> {
        if needed > budget {
            Err(Error::BudgetExceeded {
                what,
                needed,
                budget,
            })
        } else {
            Ok(())
        }
    }
}
