//! Text form of field elements: sums of terms `c`, `c*t^k`, `t^k`, `t`,
//! with rational `c` written `p` or `p/q`. Whitespace is free. Powers at or
//! above the field degree are reduced by the minimal polynomial.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{qpoly, FieldElement, FieldError, NumberField};

pub fn parse_scalar(field: &Arc<NumberField>, text: &str) -> Result<FieldElement, FieldError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    let poly = parser.sum()?;
    if parser.pos != parser.tokens.len() {
        return Err(FieldError::Parse(format!(
            "unexpected trailing input at token {}",
            parser.pos
        )));
    }
    let reduced = qpoly::rem(&poly, field.min_poly());
    let mut coords = reduced;
    coords.resize(field.degree(), BigRational::zero());
    FieldElement::new(field, coords)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Theta,
    Int(BigInt),
}

fn describe(token: Option<&Token>) -> String {
    match token {
        None => "the end of the input".to_string(),
        Some(Token::Plus) => "'+'".to_string(),
        Some(Token::Minus) => "'-'".to_string(),
        Some(Token::Star) => "'*'".to_string(),
        Some(Token::Caret) => "'^'".to_string(),
        Some(Token::Slash) => "'/'".to_string(),
        Some(Token::Theta) => "'t'".to_string(),
        Some(Token::Int(n)) => format!("'{n}'"),
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, FieldError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '+' => {
                chars.next();
                tokens.push(Token::Plus);
            }
            '-' => {
                chars.next();
                tokens.push(Token::Minus);
            }
            '*' => {
                chars.next();
                tokens.push(Token::Star);
            }
            '^' => {
                chars.next();
                tokens.push(Token::Caret);
            }
            '/' => {
                chars.next();
                tokens.push(Token::Slash);
            }
            't' => {
                chars.next();
                tokens.push(Token::Theta);
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let n: BigInt = digits.parse().expect("digit run parses");
                tokens.push(Token::Int(n));
            }
            other => {
                return Err(FieldError::Parse(format!(
                    "unexpected character {other:?}"
                )));
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn sum(&mut self) -> Result<Vec<BigRational>, FieldError> {
        let mut acc = Vec::new();
        let mut negate = false;
        match self.peek() {
            Some(Token::Plus) => {
                self.bump();
            }
            Some(Token::Minus) => {
                self.bump();
                negate = true;
            }
            _ => {}
        }
        loop {
            let term = self.term()?;
            let term = if negate { qpoly::neg(&term) } else { term };
            acc = qpoly::add(&acc, &term);
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    negate = false;
                }
                Some(Token::Minus) => {
                    self.bump();
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// One term: `coeff`, `coeff * power`, or `power`, where `power` is `t`
    /// or `t^k`.
    fn term(&mut self) -> Result<Vec<BigRational>, FieldError> {
        match self.peek() {
            Some(Token::Int(_)) => {
                let coeff = self.rational()?;
                if self.peek() == Some(&Token::Star) {
                    self.bump();
                    let exp = self.power()?;
                    let mut poly = vec![BigRational::zero(); exp + 1];
                    poly[exp] = coeff;
                    Ok(qpoly::trim(poly))
                } else {
                    Ok(qpoly::trim(vec![coeff]))
                }
            }
            Some(Token::Theta) => {
                let exp = self.power()?;
                let mut poly = vec![BigRational::zero(); exp + 1];
                poly[exp] = BigRational::one();
                Ok(poly)
            }
            other => Err(FieldError::Parse(format!(
                "expected a term, found {}",
                describe(other)
            ))),
        }
    }

    /// `t` or `t^k`; returns the exponent.
    fn power(&mut self) -> Result<usize, FieldError> {
        match self.bump() {
            Some(Token::Theta) => {}
            other => {
                return Err(FieldError::Parse(format!(
                    "expected t, found {}",
                    describe(other.as_ref())
                )));
            }
        }
        if self.peek() == Some(&Token::Caret) {
            self.bump();
            match self.bump() {
                Some(Token::Int(n)) => {
                    let exp: usize = n
                        .try_into()
                        .map_err(|_| FieldError::Parse("exponent out of range".into()))?;
                    Ok(exp)
                }
                other => Err(FieldError::Parse(format!(
                    "expected exponent, found {}",
                    describe(other.as_ref())
                ))),
            }
        } else {
            Ok(1)
        }
    }

    /// `p` or `p/q` with positive integer literals (signs come from the sum
    /// level).
    fn rational(&mut self) -> Result<BigRational, FieldError> {
        let num = match self.bump() {
            Some(Token::Int(n)) => n,
            other => {
                return Err(FieldError::Parse(format!(
                    "expected integer, found {}",
                    describe(other.as_ref())
                )));
            }
        };
        if self.peek() == Some(&Token::Slash) {
            self.bump();
            match self.bump() {
                Some(Token::Int(d)) => {
                    if d.is_zero() {
                        return Err(FieldError::Parse("zero denominator".into()));
                    }
                    Ok(BigRational::new(num, d))
                }
                other => Err(FieldError::Parse(format!(
                    "expected denominator, found {}",
                    describe(other.as_ref())
                ))),
            }
        } else {
            Ok(BigRational::from(num))
        }
    }
}

/// Canonical text form: descending powers of `t`, ` + `/` - ` joins, unit
/// coefficients left implicit on powers of `t`. The zero element renders as
/// `0`.
pub fn render_scalar(coords: &[BigRational]) -> String {
    let mut out = String::new();
    for k in (0..coords.len()).rev() {
        let c = &coords[k];
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let unit = mag.is_one();
        if k == 0 {
            out.push_str(&mag.to_string());
        } else {
            if !unit {
                out.push_str(&mag.to_string());
                out.push('*');
            }
            out.push('t');
            if k > 1 {
                out.push('^');
                out.push_str(&k.to_string());
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
