//! Counting subrings and cocyclic subrings of `Z[t]/(t^4)`.
//!
//! The crate pairs every closed-form local zeta factor with an independent
//! brute-force count over Hermite-normal-form bases, and evaluates the
//! asymptotic growth constants of the global counting functions.
//!
//! * [`exact`]: bivariate rational functions, `Q(sqrt 2)`.
//! * [`ring`]: structure constants, HNF bases, closure and cotype.
//! * [`enumerate`]: per-cell and per-index counts.
//! * [`volume`]: p-adic cell volumes and the cell-sum series.
//! * [`closed_forms`]: the catalog of displayed factors and identity checks.
//! * [`dirichlet`]: global coefficients, partial sums and constants.
//! * [`verify`]: the verification suites behind the `verify` command.

pub mod budget;
pub mod closed_forms;
pub mod dirichlet;
pub mod enumerate;
pub mod error;
pub mod exact;
pub mod ring;
pub mod verify;
pub mod volume;

pub use error::{Error, Result};

/// Trial-division primality test; arguments here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `Err(NotPrime)` unless `p` is prime.
pub fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}
