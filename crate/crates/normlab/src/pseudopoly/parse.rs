//! Expression parser for pseudo-polynomials.
//!
//! Grammar: `term ('+'|'-' term)*`, `term = [coeff '*'] 'x' ['^' exponent]`,
//! where `coeff` and `exponent` are decimal literals or one of the
//! named constants `pi`, `e`, `sqrt2`. Whitespace is insignificant.

use super::{PolyError, PseudoPolynomial, Scalar, Term};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
        }
    }

    fn decimal(&mut self) -> Result<BigRational, PolyError> {
        self.skip_ws();
        let start = self.pos;
        let mut int_part = String::new();
        let mut frac_part = String::new();
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            int_part.push(self.src[self.pos] as char);
            self.pos += 1;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                frac_part.push(self.src[self.pos] as char);
                self.pos += 1;
            }
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(PolyError::Parse(format!(
                "expected a number at byte {start}"
            )));
        }
        let digits = format!("{int_part}{frac_part}");
        let numer: BigInt = digits.parse().unwrap_or_else(|_| BigInt::zero());
        let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
        Ok(BigRational::new(numer, denom))
    }

    fn scalar(&mut self) -> Result<Scalar, PolyError> {
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {
                let w = self.word().unwrap();
                Scalar::named(&w).ok_or_else(|| PolyError::Parse(format!("unknown constant `{w}`")))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(Scalar::Rational(self.decimal()?)),
            other => Err(PolyError::Parse(format!(
                "expected coefficient or constant, found {other:?}"
            ))),
        }
    }
}

pub(super) fn parse(text: &str) -> Result<PseudoPolynomial, PolyError> {
    let mut sc = Scanner::new(text);
    let mut terms: Vec<Term> = Vec::new();
    let mut negate = match sc.peek() {
        Some(b'-') => {
            sc.bump();
            true
        }
        Some(b'+') => {
            sc.bump();
            false
        }
        _ => false,
    };
    loop {
        let term = parse_term(&mut sc)?;
        terms.push(if negate { term.negated() } else { term });
        match sc.peek() {
            None => break,
            Some(b'+') => {
                sc.bump();
                negate = false;
            }
            Some(b'-') => {
                sc.bump();
                negate = true;
            }
            Some(c) => {
                return Err(PolyError::Parse(format!(
                    "unexpected character `{}`",
                    c as char
                )))
            }
        }
    }
    PseudoPolynomial::from_terms(terms)
}

fn parse_term(sc: &mut Scanner) -> Result<Term, PolyError> {
    // Either `coeff * x ...`, bare `x ...`, or a `pi`/`e`/`sqrt2` coefficient
    // directly followed by `*x`.
    let coeff;
    match sc.peek() {
        Some(b'x') => {
            coeff = Scalar::Rational(BigRational::one());
            sc.bump();
        }
        _ => {
            coeff = sc.scalar()?;
            if !sc.eat(b'*') {
                return Err(PolyError::Parse("expected `*` after coefficient".into()));
            }
            if sc.bump() != Some(b'x') {
                return Err(PolyError::Parse("expected `x`".into()));
            }
        }
    }
    let exponent = if sc.eat(b'^') {
        sc.scalar()?
    } else {
        Scalar::Rational(BigRational::one())
    };
    Ok(Term { coeff, exponent })
}
