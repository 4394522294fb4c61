//! Text and JSON forms of [`MPoly`].
//!
//! The text form lists terms in decreasing graded-lex order (variable order
//! x, y, z, rho1, rho2, rho3, L).  Inside a term the joint symbols are
//! written first, e.g. `8*rho1*z+8*rho2*z-16*rho3*z`.  Coefficients that
//! mix a rational and a √3 part are parenthesized: `(1/2+3/4*sqrt3)*x`.
//!
//! The parser accepts that form and, more generally, any expression built
//! from integers, `p/q`, `sqrt3`, the seven variables, `+ - *`, division
//! by an integer, integer powers `^k` and parentheses.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::monomial::{Monomial, Var, NUM_VARS};
use super::poly::MPoly;
use super::scalar::Scalar;
use super::PolyError;

fn fmt_ratio(r: &BigRational) -> String {
    if r.denom() == &1.into() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn write_term(out: &mut String, first: bool, c: &Scalar, m: Monomial) {
    let (negative, coeff) = if c.is_rational() {
        let r = c.rat_part();
        let mag = r.abs();
        let text = if mag == BigRational::from_integer(1.into()) && !m.is_one() {
            String::new()
        } else {
            fmt_ratio(&mag)
        };
        (r.is_negative(), text)
    } else if c.rat_part().is_zero() {
        let b = c.sqrt3_part();
        let mag = b.abs();
        let text = if mag == BigRational::from_integer(1.into()) {
            "sqrt3".to_string()
        } else {
            format!("{}*sqrt3", fmt_ratio(&mag))
        };
        (b.is_negative(), text)
    } else {
        (false, format!("({c})"))
    };
    if negative {
        out.push('-');
    } else if !first {
        out.push('+');
    }
    out.push_str(&coeff);
    if !m.is_one() {
        if !coeff.is_empty() {
            out.push('*');
        }
        let _ = write!(out, "{m}");
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().iter().enumerate() {
            write_term(&mut out, i == 0, c, *m);
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(num_bigint::BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>, PolyError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            tokens.push(Token::Int(digits.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            tokens.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            tokens.push(Token::Op(c));
            i += 1;
        } else {
            return Err(PolyError::Parse(format!("unexpected character `{c}`")));
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

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.term()?;
        loop {
            if self.eat_op('+') {
                acc = &acc + &self.term()?;
            } else if self.eat_op('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_op('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat_op('/') {
                match self.tokens.get(self.pos).cloned() {
                    Some(Token::Int(d)) if !d.is_zero() => {
                        self.pos += 1;
                        acc = acc.scale(&Scalar::from_rational(BigRational::new(1.into(), d)));
                    }
                    _ => return Err(PolyError::Parse("can only divide by a nonzero integer".into())),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly, PolyError> {
        if self.eat_op('-') {
            return Ok(-self.unary()?);
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<MPoly, PolyError> {
        let base = self.atom()?;
        if self.eat_op('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Int(k)) => {
                    self.pos += 1;
                    let k: u32 = k.try_into().map_err(|_| PolyError::Parse("exponent too large".into()))?;
                    return Ok(base.pow(k));
                }
                _ => return Err(PolyError::Parse("expected integer exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly, PolyError> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Token::Int(n)) => {
                if self.eat_op('/') {
                    match self.tokens.get(self.pos).cloned() {
                        Some(Token::Int(d)) if !d.is_zero() => {
                            self.pos += 1;
                            Ok(MPoly::constant(Scalar::from_rational(BigRational::new(n, d))))
                        }
                        _ => Err(PolyError::Parse("expected nonzero denominator".into())),
                    }
                } else {
                    Ok(MPoly::constant(Scalar::from_bigint(n)))
                }
            }
            Some(Token::Ident(name)) => {
                if name == "sqrt3" {
                    return Ok(MPoly::constant(Scalar::sqrt3()));
                }
                Var::from_name(&name)
                    .map(MPoly::var)
                    .ok_or_else(|| PolyError::Parse(format!("unknown symbol `{name}`")))
            }
            Some(Token::Op('(')) => {
                let inner = self.expr()?;
                if !self.eat_op(')') {
                    return Err(PolyError::Parse("missing `)`".into()));
                }
                Ok(inner)
            }
            other => Err(PolyError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

impl FromStr for MPoly {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parser = Parser { tokens: tokenize(s)?, pos: 0 };
        if parser.tokens.is_empty() {
            return Err(PolyError::Parse("empty polynomial".into()));
        }
        let p = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(PolyError::Parse(format!("trailing input at token {}", parser.pos)));
        }
        Ok(p)
    }
}

/// One term of the JSON form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: [u32; NUM_VARS],
    pub rat: String,
    pub sqrt3: String,
}

/// `{"terms":[{"exp":[...], "rat":"p/q", "sqrt3":"r/s"}]}`, terms in the
/// same order as the text form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

impl From<&MPoly> for PolyJson {
    fn from(p: &MPoly) -> Self {
        PolyJson {
            terms: p
                .terms()
                .iter()
                .map(|(m, c)| TermJson {
                    exp: m.exponents(),
                    rat: fmt_ratio(c.rat_part()),
                    sqrt3: fmt_ratio(c.sqrt3_part()),
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolyJson> for MPoly {
    type Error = PolyError;

    fn try_from(j: &PolyJson) -> Result<Self, Self::Error> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            let rat: Scalar = t.rat.parse()?;
            let s3: Scalar = t.sqrt3.parse()?;
            if !rat.is_rational() || !s3.is_rational() {
                return Err(PolyError::Parse("JSON coefficient parts must be rational".into()));
            }
            let c = Scalar::new(rat.rat_part().clone(), s3.rat_part().clone());
            terms.push((Monomial::from_exponents(&t.exp), c));
        }
        Ok(MPoly::from_terms(terms))
    }
}
