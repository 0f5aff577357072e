//! Text form of polynomials.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := int ['/' int] | var ['^' int]
//! ```
//!
//! Formatting produces terms in decreasing monomial order, so formatting a
//! parsed polynomial and parsing it again is a fixed point.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::PolyError;
use crate::poly::{Monomial, Rat, RatPoly, Ring};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, PolyError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' | '-' | '*' | '^' | '/' => {
                out.push((
                    match c {
                        '+' => Tok::Plus,
                        '-' => Tok::Minus,
                        '*' => Tok::Star,
                        '^' => Tok::Caret,
                        _ => Tok::Slash,
                    },
                    pos,
                ));
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|(_, c)| *c).collect();
                out.push((Tok::Int(s.parse().expect("digits")), pos));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '\'') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|(_, c)| *c).collect();
                out.push((Tok::Ident(s), pos));
            }
            other => {
                return Err(PolyError::Syntax { pos, msg: format!("unexpected character `{other}`") });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    ring: &'a Arc<Ring>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn int(&mut self) -> Result<BigInt, PolyError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.at += 1;
                Ok(n)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn exponent(&mut self) -> Result<u32, PolyError> {
        let pos = self.pos();
        let n = self.int()?;
        u32::try_from(n).map_err(|_| PolyError::Syntax { pos, msg: "exponent out of range".into() })
    }

    fn term(&mut self) -> Result<(Monomial, Rat), PolyError> {
        let mut coeff = Rat::one();
        let mut mono = vec![0u32; self.ring.nvars()];
        loop {
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.at += 1;
                    let mut c = Rat::from_integer(n);
                    if self.peek() == Some(&Tok::Slash) {
                        self.at += 1;
                        let pos = self.pos();
                        let d = self.int()?;
                        if d.is_zero() {
                            return Err(PolyError::Syntax { pos, msg: "zero denominator".into() });
                        }
                        c /= Rat::from_integer(d);
                    }
                    coeff *= c;
                }
                Some(Tok::Ident(name)) => {
                    let pos = self.pos();
                    self.at += 1;
                    let idx =
                        self.ring.index_of(&name).ok_or(PolyError::UnknownVariable { name: name.clone(), pos })?;
                    let mut e = 1;
                    if self.peek() == Some(&Tok::Caret) {
                        self.at += 1;
                        e = self.exponent()?;
                    }
                    mono[idx] += e;
                }
                _ => return self.err("expected a number or a variable"),
            }
            if self.peek() == Some(&Tok::Star) {
                self.at += 1;
            } else {
                break;
            }
        }
        Ok((Monomial::from_exponents(mono), coeff))
    }

    fn poly(&mut self) -> Result<RatPoly, PolyError> {
        let mut terms = Vec::new();
        let mut sign = Rat::one();
        match self.peek() {
            Some(Tok::Minus) => {
                sign = -sign;
                self.at += 1;
            }
            Some(Tok::Plus) => self.at += 1,
            _ => {}
        }
        loop {
            let (m, c) = self.term()?;
            terms.push((m, c * &sign));
            match self.peek() {
                None => break,
                Some(Tok::Plus) => sign = Rat::one(),
                Some(Tok::Minus) => sign = -Rat::one(),
                _ => return self.err("expected `+`, `-` or end of input"),
            }
            self.at += 1;
        }
        Ok(RatPoly::from_terms(self.ring, terms))
    }
}

/// Parses `text` into a polynomial over `ring`.
pub fn parse_poly(text: &str, ring: &Arc<Ring>) -> Result<RatPoly, PolyError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(PolyError::Syntax { pos: 0, msg: "empty polynomial".into() });
    }
    let mut p = Parser { toks, at: 0, end: text.len(), ring };
    p.poly()
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (v, &e) in vars.iter().zip(m.exponents()) {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                fmt_monomial(f, self.ring().vars(), m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};

    #[test]
    fn reads_simple_polynomial() {
        let r = Ring::grevlex(["x", "y"]);
        let p = parse_poly("x^2 - 2*y", &r).unwrap();
        assert_eq!(p.nterms(), 2);
        assert_eq!(p.coeff(&Monomial::from_exponents(vec![2, 0])), rat(1));
        assert_eq!(p.coeff(&Monomial::from_exponents(vec![0, 1])), rat(-2));
    }

    #[test]
    fn zero_polynomial() {
        let r = Ring::grevlex(["x"]);
        assert!(parse_poly("0", &r).unwrap().is_zero());
        assert!(parse_poly("x - x", &r).unwrap().is_zero());
    }

    #[test]
    fn twisted_cubic_generator() {
        let r = Ring::grevlex(["x", "y", "z", "w"]);
        let p = parse_poly("x*z - y^2", &r).unwrap();
        assert_eq!(p.to_string(), "-y^2 + x*z");
        assert!(p.is_homogeneous());
    }

    #[test]
    fn rational_coefficients() {
        let r = Ring::grevlex(["x", "y"]);
        let p = parse_poly("1/2*x*y - 3/4 + 2/4 * y", &r).unwrap();
        assert_eq!(p.coeff(&Monomial::from_exponents(vec![1, 1])), ratio(1, 2));
        assert_eq!(p.coeff(&Monomial::from_exponents(vec![0, 1])), ratio(1, 2));
        assert_eq!(p.to_string(), "1/2*x*y + 1/2*y - 3/4");
    }

    #[test]
    fn errors_report_positions() {
        let r = Ring::grevlex(["x", "y"]);
        assert_eq!(parse_poly("x + q", &r), Err(PolyError::UnknownVariable { name: "q".into(), pos: 4 }));
        assert!(matches!(parse_poly("x + * y", &r), Err(PolyError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_poly("x^", &r), Err(PolyError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_poly("1/0", &r), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("", &r), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("x $ y", &r), Err(PolyError::Syntax { pos: 2, .. })));
    }
}
