//! Reader for the textual formula notation used by the catalog.
//!
//! ```text
//! rational    := expr [ '/' denominator ]
//! denominator := factors | '(' factors ')'
//! factors     := factor ( ['*'] factor )*
//! factor      := '(' expr ')' [ '^' uint ]        -- must equal 1 - p^a x^b, b >= 1
//! expr        := [sign] term ( sign term )*
//! term        := power ( ['*'] power )*           -- juxtaposition multiplies
//! power       := atom [ '^' uint ]
//! atom        := uint | 'p' | 'x' | '(' expr ')'
//! ```
//!
//! Whitespace is ignored, so `p^4x^4` and `p^4 * x^4` read the same.

use num_bigint::BigInt;
use num_traits::One;

use super::poly::BivariatePolynomial;
use super::ratfunc::{DenominatorFactor, RationalFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Num(BigInt),
    P,
    X,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().map_err(|_| Error::Parse {
                    pos: start,
                    msg: "bad integer".into(),
                })?;
                out.push((start, Token::Num(n)));
                continue;
            }
            b'p' | b'P' => Token::P,
            b'x' | b'X' => Token::X,
            b'+' => Token::Plus,
            b'-' => Token::Minus,
            b'*' => Token::Star,
            b'/' => Token::Slash,
            b'^' => Token::Caret,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            other => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character {:?}", other as char),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Self {
            tokens: tokenize(src)?,
            pos: 0,
            len: src.len(),
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Token) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.err(format!("expected {t:?}"))
        }
    }

    fn uint(&mut self) -> Result<u32> {
        match self.peek() {
            Some(Token::Num(n)) => {
                let v = u32::try_from(n).or_else(|_| self.err("exponent too large"))?;
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected exponent"),
        }
    }

    fn expr(&mut self) -> Result<BivariatePolynomial> {
        let mut acc = BivariatePolynomial::zero();
        let mut negate = false;
        if self.eat(&Token::Minus) {
            negate = true;
        } else {
            self.eat(&Token::Plus);
        }
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            if self.eat(&Token::Plus) {
                negate = false;
            } else if self.eat(&Token::Minus) {
                negate = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_power(&self) -> bool {
        matches!(
            self.peek(),
            Some(Token::Num(_) | Token::P | Token::X | Token::LParen)
        )
    }

    fn term(&mut self) -> Result<BivariatePolynomial> {
        let mut acc = self.power()?;
        loop {
            if self.eat(&Token::Star) || self.starts_power() {
                let rhs = self.power()?;
                acc = &acc * &rhs;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<BivariatePolynomial> {
        let base = self.atom()?;
        if self.eat(&Token::Caret) {
            let e = self.uint()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<BivariatePolynomial> {
        match self.peek().cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(BivariatePolynomial::constant(n))
            }
            Some(Token::P) => {
                self.pos += 1;
                Ok(BivariatePolynomial::p())
            }
            Some(Token::X) => {
                self.pos += 1;
                Ok(BivariatePolynomial::x())
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(&Token::RParen)?;
                Ok(inner)
            }
            _ => self.err("expected number, p, x or '('"),
        }
    }

    fn denominator_factor(&mut self) -> Result<DenominatorFactor> {
        let at = self.offset();
        self.expect(&Token::LParen)?;
        let inner = self.expr()?;
        self.expect(&Token::RParen)?;
        let multiplicity = if self.eat(&Token::Caret) {
            self.uint()?
        } else {
            1
        };
        let shape_err = || Error::Parse {
            pos: at,
            msg: format!("denominator factor ({inner}) is not of the form 1 - p^a x^b with b >= 1"),
        };
        if inner.len() != 2 || !inner.constant_term().is_one() {
            return Err(shape_err());
        }
        let (c, a, b) = inner
            .terms()
            .find(|&(_, a, b)| (a, b) != (0, 0))
            .ok_or_else(shape_err)?;
        if *c != -BigInt::one() || b == 0 || multiplicity == 0 {
            return Err(shape_err());
        }
        Ok(DenominatorFactor {
            p_exp: a,
            x_exp: b,
            multiplicity,
        })
    }

    /// Factors, optionally wrapped as a whole in one pair of parentheses.
    fn denominator(&mut self, factors: &mut Vec<DenominatorFactor>) -> Result<()> {
        let grouped = self.peek() == Some(&Token::LParen)
            && self.tokens.get(self.pos + 1).map(|(_, t)| t) == Some(&Token::LParen);
        if grouped {
            self.pos += 1;
        }
        loop {
            factors.push(self.denominator_factor()?);
            self.eat(&Token::Star);
            if self.peek() != Some(&Token::LParen) {
                break;
            }
        }
        if grouped {
            self.expect(&Token::RParen)?;
        }
        Ok(())
    }

    fn rational(&mut self) -> Result<RationalFunction> {
        let num = self.expr()?;
        let mut factors = Vec::new();
        if self.eat(&Token::Slash) {
            self.denominator(&mut factors)?;
        }
        if self.pos != self.tokens.len() {
            return self.err("trailing input");
        }
        Ok(RationalFunction::new(num, factors))
    }
}

pub fn parse_polynomial(src: &str) -> Result<BivariatePolynomial> {
    let mut parser = Parser::new(src)?;
    let out = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return parser.err("trailing input");
    }
    Ok(out)
}

pub fn parse_rational_function(src: &str) -> Result<RationalFunction> {
    Parser::new(src)?.rational()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn juxtaposition_and_powers() {
        let f = parse_polynomial("2p^5x^6 - p(p-1)^2x").unwrap();
        let g = BivariatePolynomial::from_terms([(2, 5, 6), (-1, 3, 1), (2, 2, 1), (-1, 1, 1)]);
        assert_eq!(f, g);
    }

    #[test]
    fn leading_sign_and_explicit_star() {
        let f = parse_polynomial("-p^3 * x^4 + (p^2 - p) * x^2 + 1").unwrap();
        let g = BivariatePolynomial::from_terms([(-1, 3, 4), (1, 2, 2), (-1, 1, 2), (1, 0, 0)]);
        assert_eq!(f, g);
    }

    #[test]
    fn denominator_factors_and_multiplicity() {
        let f = parse_rational_function("1 / ((1-x)^2 (1 - p^2x^2))").unwrap();
        let fs: Vec<_> = f.factors().collect();
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&DenominatorFactor {
            p_exp: 0,
            x_exp: 1,
            multiplicity: 2
        }));
    }

    #[test]
    fn rejects_malformed_denominators() {
        for bad in [
            "1/(1+x)",
            "1/(2-x)",
            "1/(1-p)",
            "1/(x)",
            "1/(1-x-x^2)",
            "1/(1-x)^0",
        ] {
            assert!(
                matches!(parse_rational_function(bad), Err(Error::Parse { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_polynomial("p + ").is_err());
        assert!(parse_polynomial("p ) ").is_err());
        assert!(parse_polynomial("y").is_err());
        assert!(parse_polynomial("p^x").is_err());
    }
}
