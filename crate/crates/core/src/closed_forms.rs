//! Stored local factors: the consolidated subring and cocyclic factors and
//! every case sum they are assembled from.
//!
//! Entries are kept verbatim, including those that disagree with
//! enumeration; [`verify_case_identities`] and the `verify` suites report
//! such disagreements instead of correcting them. The two displays that only
//! make sense at `p = 2` are stored with each power `2^n` written as `P^n`,
//! so they are meant to be specialized at `P = 2` only.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::RationalFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Two,
}

impl Parity {
    pub fn of(p: u64) -> Self {
        if p == 2 {
            Parity::Two
        } else {
            Parity::Odd
        }
    }
}

/// Which displayed form of the cocyclic factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    Theorem,
    Derived,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum FormulaName {
    SubringOdd,
    SubringTwoDisplayed,
    CocyclicOddTheorem,
    CocyclicOddAlt,
    CocyclicTwoDisplayed,
    F1,
    F2,
    F3,
    F4,
    F5,
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    Z1,
    Z2,
    Z3,
    Z4,
    Z5,
    Z6,
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
}

impl FormulaName {
    pub const ALL: [FormulaName; 28] = [
        FormulaName::SubringOdd,
        FormulaName::SubringTwoDisplayed,
        FormulaName::CocyclicOddTheorem,
        FormulaName::CocyclicOddAlt,
        FormulaName::CocyclicTwoDisplayed,
        FormulaName::F1,
        FormulaName::F2,
        FormulaName::F3,
        FormulaName::F4,
        FormulaName::F5,
        FormulaName::T1,
        FormulaName::T2,
        FormulaName::T3,
        FormulaName::T4,
        FormulaName::T5,
        FormulaName::T6,
        FormulaName::Z1,
        FormulaName::Z2,
        FormulaName::Z3,
        FormulaName::Z4,
        FormulaName::Z5,
        FormulaName::Z6,
        FormulaName::E1,
        FormulaName::E2,
        FormulaName::E3,
        FormulaName::E4,
        FormulaName::E5,
        FormulaName::E6,
    ];

    pub fn as_str(&self) -> &'static str {
        use FormulaName::*;
        match self {
            SubringOdd => "SUBRING_ODD",
            SubringTwoDisplayed => "SUBRING_TWO_DISPLAYED",
            CocyclicOddTheorem => "COCYCLIC_ODD_THM",
            CocyclicOddAlt => "COCYCLIC_ODD_ALT",
            CocyclicTwoDisplayed => "COCYCLIC_TWO_DISPLAYED",
            F1 => "F1",
            F2 => "F2",
            F3 => "F3",
            F4 => "F4",
            F5 => "F5",
            T1 => "T1",
            T2 => "T2",
            T3 => "T3",
            T4 => "T4",
            T5 => "T5",
            T6 => "T6",
            Z1 => "Z1",
            Z2 => "Z2",
            Z3 => "Z3",
            Z4 => "Z4",
            Z5 => "Z5",
            Z6 => "Z6",
            E1 => "E1",
            E2 => "E2",
            E3 => "E3",
            E4 => "E4",
            E5 => "E5",
            E6 => "E6",
        }
    }

    /// The prime class the entry is meant for.
    pub fn parity(&self) -> Parity {
        use FormulaName::*;
        match self {
            SubringTwoDisplayed | CocyclicTwoDisplayed | T1 | T2 | T3 | T4 | T5 | T6 | E1 | E2
            | E3 | E4 | E5 | E6 => Parity::Two,
            _ => Parity::Odd,
        }
    }

    fn source(&self) -> &'static str {
        use FormulaName::*;
        match self {
            SubringOdd => {
                "(1 + px^2 + p^2x^3 - p^4x^5 - 2p^5x^6 - 2p^6x^7 - p^7x^8 + p^9x^10 + p^10x^11 + p^11x^13)
                 / ((1-p^5x^6)(1-p^4x^4)(1-p^3x^3)(1-p^2x^2)(1-x))"
            }
            SubringTwoDisplayed => {
                "(p^12x^13 - p^12x^12 + p^11x^12 + p^10x^11 + p^9x^10 - p^7x^8 - p^7x^7
                  + p^7x^6 - p^6x^7 - p^6x^6 - p^5x^6 - p^4x^5 + p^2x^3 + px^2 + 1)
                 / ((1-x)(1-px^2)(1-p^4x^4)(1-p^3x^3)(1-p^5x^6))"
            }
            CocyclicOddTheorem => {
                "(1 + x + (p^3-p^2)x^3 - p^3x^4 - p^4x^5) / ((1-p^2x^2)(1-p^4x^4))"
            }
            CocyclicOddAlt => "(-p^3x^4 + (p^2-p)x^2 + (1-p)x + 1) / ((1-px)(1-p^4x^4))",
            CocyclicTwoDisplayed => {
                "(1 + x + p^2x^2 - p^3x^4 - p^4x^5 + p^4x^6 - p^5x^6 - p^6x^6
                  + p^7x^6 + p^7x^8 - p^7x^9 - p^9x^8 + p^8x^9 + p^9x^8 - p^8x^10 + p^9x^10)
                 / ((1-p^4x^4)(1-p^3x^3))"
            }
            F1 => "p^4x^4 / ((1-p^2x^2)(1-p^3x^3)(1-p^4x^4))",
            F2 | T3 => "(1-p^3x^4) / ((1-x)(1-p^2x^2)(1-p^3x^3)(1-px^2))",
            F3 | T4 => {
                "p^4x^5(1 + px - p^4x^4 - p^8x^9) / ((1-p^3x^3)(1-p^3x^4)(1-p^4x^4)(1-p^5x^6))"
            }
            F4 | T5 => "p^3x^4 / ((1-p^3x^3)(1-p^3x^4)(1-p^2x^3))",
            F5 | T6 => "p^2x^3 / ((1-px^2)(1-p^2x^3)(1-p^3x^3))",
            T1 => "p^7x^6 / ((1-p^2x^2)(1-p^3x^3)(1-p^4x^4))",
            T2 => "p^4x^4 / ((1-p^3x^3)(1-p^4x^4))",
            Z1 | E1 => "(px^2 + x + 1) / (1-p^2x^3)",
            Z2 | E2 => "p(p-1)x^2 / ((1-x)(1-p^2x^2))",
            Z3 => {
                "p(p-1)^2x^4(-p^3x^3 - p^2x^2 + p^2x + 1) / ((1-x)(1-p^2x^2)(1-p^3x^3)(1-px^2))"
            }
            Z4 => "p^3(p-1)^2x^6 / ((1-px^2)(1-p^3x^3)(1-p^2x^3))",
            Z5 => "p(p-1)^2x^3 / ((1-px^2)(1-p^3x^3))",
            Z6 => "p^3(p-1)x^4 / ((1-p^3x^3)(1-p^4x^4))",
            E3 => {
                "(p(p-1)^2x^5)(p^7x^6 - p^7x^5 - p^6x^4 + p^5x^5 + p^6x^3
                  - p^5x^4 - p^4x^3 + p^4x^2 - p^3x^3 - p^2x^2 + p^2x + 1)
                 / ((1-x)(1-p^2x^2)(1-p^3x^3)(1-px^2))"
            }
            E4 => "p(p-1)^2x^3 / ((1-px^2)(1-p^3x^3)(1-p^2x^3))",
            E5 => "p(p-1)^2x^4(1 + p^2x - p^3x^3 + p^4x^2 - p^5x^4) / ((1-px^2)(1-p^3x^3))",
            E6 => "p^4(p-1)x^6(p^4x^4 + p^3x^3 - 1) / ((1-p^3x^3)(1-p^4x^4))",
        }
    }
}

impl fmt::Display for FormulaName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormulaName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase();
        if key == "COCYCLIC_ODD_DERIVED" {
            return Ok(FormulaName::CocyclicOddAlt);
        }
        FormulaName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str() == key)
            .ok_or_else(|| Error::UnknownFormula(s.to_string()))
    }
}

/// A stored entry with its source text.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: FormulaName,
    pub source: &'static str,
    pub function: RationalFunction,
}

/// Every stored formula, parsed once.
pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        FormulaName::ALL
            .iter()
            .map(|&name| CatalogEntry {
                name,
                source: name.source(),
                function: RationalFunction::parse(name.source())
                    .unwrap_or_else(|e| panic!("stored formula {name} does not parse: {e}")),
            })
            .collect()
    })
}

pub fn entry(name: FormulaName) -> &'static RationalFunction {
    &catalog()
        .iter()
        .find(|e| e.name == name)
        .expect("every name is cataloged")
        .function
}

/// Stored formula by name (`"F1"`, `"SUBRING_ODD"`, ...).
pub fn case_sum(name: &str) -> Result<RationalFunction> {
    Ok(entry(name.parse()?).clone())
}

/// The displayed subring factor for the prime class.
pub fn subring_local_factor(parity: Parity) -> RationalFunction {
    match parity {
        Parity::Odd => entry(FormulaName::SubringOdd).clone(),
        Parity::Two => entry(FormulaName::SubringTwoDisplayed).clone(),
    }
}

fn sum_of(names: &[FormulaName]) -> RationalFunction {
    RationalFunction::sum(names.iter().map(|&n| entry(n)))
}

/// `F1 + ... + F5`.
pub fn subring_odd_case_sum() -> RationalFunction {
    use FormulaName::*;
    sum_of(&[F1, F2, F3, F4, F5])
}

/// `T1 + ... + T6`, the `p = 2` subring factor assembled from its cases.
pub fn subring_two_case_sum() -> RationalFunction {
    use FormulaName::*;
    sum_of(&[T1, T2, T3, T4, T5, T6])
}

/// `Z1 + ... + Z6`.
pub fn cocyclic_odd_case_sum() -> RationalFunction {
    use FormulaName::*;
    sum_of(&[Z1, Z2, Z3, Z4, Z5, Z6])
}

/// `E1 + ... + E6`, the `p = 2` cocyclic factor assembled from its cases.
pub fn cocyclic_two_case_sum() -> RationalFunction {
    use FormulaName::*;
    sum_of(&[E1, E2, E3, E4, E5, E6])
}

/// The displayed cocyclic factor. At `p = 2` only one form is displayed.
pub fn cocyclic_local_factor(parity: Parity, form: Form) -> Result<RationalFunction> {
    match (parity, form) {
        (Parity::Odd, Form::Theorem) => Ok(entry(FormulaName::CocyclicOddTheorem).clone()),
        (Parity::Odd, Form::Derived) => Ok(entry(FormulaName::CocyclicOddAlt).clone()),
        (Parity::Two, Form::Theorem) => Ok(entry(FormulaName::CocyclicTwoDisplayed).clone()),
        (Parity::Two, Form::Derived) => Err(Error::UnavailableForm("derived p = 2 cocyclic")),
    }
}

/// `(u, v, sign)` with `f(1/P, 1/X) = sign P^u X^v f(P, X)`, when it exists.
pub fn functional_equation_monomial(f: &RationalFunction) -> Option<(i64, i64, i8)> {
    f.functional_equation().map(|m| (m.p_exp, m.x_exp, m.sign))
}

/// First differing series coefficient of two stored functions at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesMismatch {
    pub prime: u64,
    pub index: usize,
    #[serde(serialize_with = "as_string")]
    pub left: BigInt,
    #[serde(serialize_with = "as_string")]
    pub right: BigInt,
}

fn as_string<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Verdict on one consolidated display against its case sum.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityVerdict {
    pub left: &'static str,
    pub right: &'static str,
    /// Compared as bivariate functions, or only at `p = 2` for the `p = 2` displays.
    pub at_prime: Option<u64>,
    pub equal: bool,
    pub mismatch: Option<SeriesMismatch>,
}

fn verdict(
    left: &'static str,
    f: &RationalFunction,
    right: &'static str,
    g: &RationalFunction,
    at_prime: Option<u64>,
) -> IdentityVerdict {
    let equal = match at_prime {
        Some(p) => f.equal_at_prime(g, p),
        None => f.rf_equal(g),
    };
    let mismatch = if equal {
        None
    } else {
        let primes: &[u64] = match at_prime {
            Some(p) => &[p],
            None => &[3, 5, 7, 2],
        };
        let order = f.decisive_order(g) + 1;
        primes.iter().find_map(|&p| {
            f.first_series_mismatch(g, p, order)
                .map(|(index, left, right)| SeriesMismatch {
                    prime: p,
                    index,
                    left,
                    right,
                })
        })
    };
    IdentityVerdict {
        left,
        right,
        at_prime,
        equal,
        mismatch,
    }
}

/// Every consolidated display against the sum of its cases.
pub fn verify_case_identities() -> Vec<IdentityVerdict> {
    use FormulaName::*;
    vec![
        verdict(
            "F1+..+F5",
            &subring_odd_case_sum(),
            "SUBRING_ODD",
            entry(SubringOdd),
            None,
        ),
        verdict(
            "T1+..+T6",
            &subring_two_case_sum(),
            "SUBRING_TWO_DISPLAYED",
            entry(SubringTwoDisplayed),
            Some(2),
        ),
        verdict(
            "Z1+..+Z6",
            &cocyclic_odd_case_sum(),
            "COCYCLIC_ODD_ALT",
            entry(CocyclicOddAlt),
            None,
        ),
        verdict(
            "Z1+..+Z6",
            &cocyclic_odd_case_sum(),
            "COCYCLIC_ODD_THM",
            entry(CocyclicOddTheorem),
            None,
        ),
        verdict(
            "COCYCLIC_ODD_THM",
            entry(CocyclicOddTheorem),
            "COCYCLIC_ODD_ALT",
            entry(CocyclicOddAlt),
            None,
        ),
        verdict(
            "E1+..+E6",
            &cocyclic_two_case_sum(),
            "COCYCLIC_TWO_DISPLAYED",
            entry(CocyclicTwoDisplayed),
            Some(2),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(f: &RationalFunction, p: u64, n: usize) -> Vec<i64> {
        f.series(p, n)
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn catalog_parses() {
        assert_eq!(catalog().len(), FormulaName::ALL.len());
        for n in FormulaName::ALL {
            assert_eq!(n.as_str().parse::<FormulaName>().unwrap(), n);
        }
        assert_eq!(
            "cocyclic_odd_derived".parse::<FormulaName>().unwrap(),
            FormulaName::CocyclicOddAlt
        );
        assert!(matches!(case_sum("F9"), Err(Error::UnknownFormula(_))));
    }

    #[test]
    fn subring_factors() {
        assert_eq!(
            series(&subring_local_factor(Parity::Odd), 3, 3),
            vec![1, 1, 13, 49]
        );
        assert_eq!(series(&subring_local_factor(Parity::Odd), 5, 1), vec![1, 1]);
        assert_eq!(
            series(&subring_local_factor(Parity::Two), 2, 2),
            vec![1, 1, 5]
        );
        assert_eq!(series(&subring_two_case_sum(), 2, 3), vec![1, 1, 7, 19]);
    }

    #[test]
    fn cocyclic_factors() {
        let thm = cocyclic_local_factor(Parity::Odd, Form::Theorem).unwrap();
        let alt = cocyclic_local_factor(Parity::Odd, Form::Derived).unwrap();
        assert!(thm.rf_equal(&alt));
        assert_eq!(series(&thm, 3, 2), vec![1, 1, 9]);
        let two = cocyclic_local_factor(Parity::Two, Form::Theorem).unwrap();
        assert_eq!(series(&two, 2, 3), vec![1, 1, 4, 8]);
        assert_eq!(
            cocyclic_local_factor(Parity::Two, Form::Derived),
            Err(Error::UnavailableForm("derived p = 2 cocyclic"))
        );
    }

    #[test]
    fn case_sum_leading_terms() {
        let f1 = series(&case_sum("F1").unwrap(), 3, 4);
        assert_eq!(f1, vec![0, 0, 0, 0, 81]);
        assert_eq!(&series(&case_sum("Z1").unwrap(), 3, 1), &[1, 1]);
        let e6 = series(&case_sum("E6").unwrap(), 2, 6);
        assert!(e6[..6].iter().all(|&c| c == 0) && e6[6] != 0);
    }

    #[test]
    fn functional_equations() {
        assert_eq!(
            functional_equation_monomial(&subring_local_factor(Parity::Odd)),
            Some((3, 3, -1))
        );
        assert_eq!(
            functional_equation_monomial(&RationalFunction::parse("1/(1-x)").unwrap()),
            Some((0, 1, -1))
        );
    }

    #[test]
    fn identity_verdicts() {
        let v = verify_case_identities();
        assert!(v[0].equal && v[2].equal && v[3].equal && v[4].equal);
        let m = v[1].mismatch.as_ref().unwrap();
        assert_eq!((m.prime, m.index), (2, 2));
        assert_eq!((m.left.clone(), m.right.clone()), (7.into(), 5.into()));
    }
}
