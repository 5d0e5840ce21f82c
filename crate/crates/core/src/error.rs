use thiserror::Error;

/// Errors raised by the counting, evaluation and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cell (k={k}, l={l}, r={r}) violates l <= 2r or k <= l + r")]
    InvalidCell { k: u32, l: u32, r: u32 },

    #[error("off-diagonal entry {name} = {value} outside [0, {bound})")]
    EntryOutOfRange {
        name: &'static str,
        value: u64,
        bound: u64,
    },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("work estimate {needed} exceeds budget {budget} ({what})")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("denominator factor (1 - P^{p_exp} X^{x_exp}) vanishes at the evaluation point")]
    Pole { p_exp: u32, x_exp: u32 },

    #[error("division by zero in Q(sqrt 2)")]
    DivisionByZero,

    #[error("cell (k={k}, l={l}, r={r}) contributes a non-integral count {value}")]
    NonIntegral {
        k: u32,
        l: u32,
        r: u32,
        value: String,
    },

    #[error("unknown formula name {0:?}")]
    UnknownFormula(String),

    #[error("no {0} form is displayed for this factor")]
    UnavailableForm(&'static str),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
