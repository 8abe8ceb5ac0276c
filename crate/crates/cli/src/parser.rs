//! Parser for the polynomial text grammar.
//!
//! Terms are joined by `+` and `-`; a term multiplies factors with an
//! explicit `*` (no juxtaposition); a factor is an integer, a rational
//! literal `p/q`, a variable, or a parenthesized polynomial, optionally
//! raised with `^` to a nonnegative integer. A leading `-` negates the
//! first term. `/` is only legal between two integer literals.

use std::fmt;

use derivlab_core::{Polynomial, Rational};
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(s) => write!(f, "integer `{s}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, message: message.into() }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = *self.src.get(self.pos)?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        while let Some(&b) = self.src.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.bump();
                continue;
            }
            let (line, col) = (self.line, self.col);
            let tok = match b {
                b'+' => {
                    self.bump();
                    Tok::Plus
                }
                b'-' => {
                    self.bump();
                    Tok::Minus
                }
                b'*' => {
                    self.bump();
                    Tok::Star
                }
                b'/' => {
                    self.bump();
                    Tok::Slash
                }
                b'^' => {
                    self.bump();
                    Tok::Caret
                }
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b'0'..=b'9' => {
                    let mut s = String::new();
                    while let Some(&c) = self.src.get(self.pos) {
                        if c.is_ascii_digit() {
                            s.push(c as char);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Int(s)
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let mut s = String::new();
                    while let Some(&c) = self.src.get(self.pos) {
                        if c.is_ascii_alphanumeric() || c == b'_' {
                            s.push(c as char);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Ident(s)
                }
                other => {
                    return Err(self.error(format!("unexpected character `{}`", other as char)));
                }
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    ring: &'a [String],
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|&(_, l, c)| (l, c)).unwrap_or(self.end)
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, message: message.into() }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t == want => {
                self.next();
                Ok(())
            }
            Some(t) => Err(self.error_here(format!("expected {want}, found {t}"))),
            None => Err(self.error_here(format!("expected {want}, found end of input"))),
        }
    }

    fn arity(&self) -> usize {
        self.ring.len()
    }

    fn poly(&mut self) -> Result<Polynomial, ParseError> {
        let negate = if self.peek() == Some(&Tok::Minus) {
            self.next();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.try_add(&t).expect("one ring");
                }
                Some(Tok::Minus) => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.try_sub(&t).expect("one ring");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.next();
            let f = self.factor()?;
            acc = acc.try_mul(&f).expect("one ring");
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.next();
        if self.peek() == Some(&Tok::Minus) {
            return Err(self.error_here("negative exponent"));
        }
        let (line, col) = self.here();
        match self.next() {
            Some(Tok::Int(s)) => {
                let e: u32 = s.parse().map_err(|_| ParseError {
                    line,
                    col,
                    message: format!("exponent `{s}` is too large"),
                })?;
                Ok(base.pow(e))
            }
            Some(t) => Err(ParseError {
                line,
                col,
                message: format!("expected a nonnegative integer exponent, found {t}"),
            }),
            None => Err(ParseError {
                line,
                col,
                message: "expected a nonnegative integer exponent, found end of input".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let (line, col) = self.here();
        match self.next() {
            Some(Tok::Int(numer)) => {
                let n: BigInt = numer.parse().expect("lexer only emits digits");
                // optional rational literal p/q
                if self.peek() == Some(&Tok::Slash) {
                    self.next();
                    let (dl, dc) = self.here();
                    match self.next() {
                        Some(Tok::Int(denom)) => {
                            let d: BigInt = denom.parse().expect("lexer only emits digits");
                            if d.is_zero() {
                                return Err(ParseError {
                                    line: dl,
                                    col: dc,
                                    message: "zero denominator".into(),
                                });
                            }
                            Ok(Polynomial::constant(self.arity(), Rational::new(n, d)))
                        }
                        other => Err(ParseError {
                            line: dl,
                            col: dc,
                            message: format!(
                                "`/` is only allowed between integer literals, found {}",
                                other.map_or("end of input".to_string(), |t| t.to_string())
                            ),
                        }),
                    }
                } else {
                    Ok(Polynomial::constant(self.arity(), Rational::from_integer(n)))
                }
            }
            Some(Tok::Ident(name)) => match self.ring.iter().position(|v| v == &name) {
                Some(idx) => Ok(Polynomial::var(self.arity(), idx + 1).expect("in range")),
                None => Err(ParseError {
                    line,
                    col,
                    message: format!("unknown variable `{name}`"),
                }),
            },
            Some(Tok::LParen) => {
                let inner = self.poly()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            Some(t) => Err(ParseError {
                line,
                col,
                message: format!("expected a coefficient, variable, or `(`, found {t}"),
            }),
            None => Err(ParseError {
                line,
                col,
                message: "expected a coefficient, variable, or `(`, found end of input".into(),
            }),
        }
    }
}

/// Parses `text` over the given ring of variable names.
pub fn parse_polynomial(text: &str, ring: &[String]) -> Result<Polynomial, ParseError> {
    let lexer = Lexer::new(text);
    let end_line = text.bytes().filter(|&b| b == b'\n').count() + 1;
    let end_col = text.len() - text.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
    let toks = lexer.tokens()?;
    let mut p = Parser { toks, pos: 0, ring, end: (end_line, end_col) };
    let poly = p.poly()?;
    if p.peek().is_some() {
        return Err(p.error_here(format!(
            "unexpected {} after the polynomial",
            p.peek().unwrap()
        )));
    }
    Ok(poly)
}

/// Parses a bare rational constant such as `-1`, `2`, or `1/2`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let p = parse_polynomial(text, &[])?;
    Ok(p.constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;
    use derivlab_core::rat;

    fn ring(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_family_image() {
        let r = ring(&["x1", "x2"]);
        let p = parse_polynomial("1 + x1^2*x2", &r).unwrap();
        let expect =
            Polynomial::from_terms(2, [(rat(1), vec![0, 0]), (rat(1), vec![2, 1])]);
        assert_eq!(p, expect);
    }

    #[test]
    fn parses_rational_witness() {
        let r = ring(&["x", "y"]);
        let p = parse_polynomial("-1/2*x^2 + y", &r).unwrap();
        let expect = Polynomial::from_terms(
            2,
            [(Rational::new((-1).into(), 2.into()), vec![2, 0]), (rat(1), vec![0, 1])],
        );
        assert_eq!(p, expect);
    }

    #[test]
    fn unknown_variable_has_position() {
        let r = ring(&["x1", "x2"]);
        let e = parse_polynomial("x1 + x3", &r).unwrap_err();
        assert_eq!((e.line, e.col), (1, 6));
        assert!(e.message.contains("unknown variable"));
    }

    #[test]
    fn negative_exponent_is_rejected() {
        let r = ring(&["x"]);
        let e = parse_polynomial("x^-2", &r).unwrap_err();
        assert!(e.message.contains("negative exponent"));
    }

    #[test]
    fn juxtaposition_is_rejected() {
        let r = ring(&["x", "y"]);
        let e = parse_polynomial("2 x", &r).unwrap_err();
        assert!(e.message.contains("after the polynomial"), "{e}");
        assert!(parse_polynomial("x y", &r).is_err());
    }

    #[test]
    fn slash_outside_literals_is_rejected() {
        let r = ring(&["x"]);
        assert!(parse_polynomial("x/2", &r).is_err());
        let e = parse_polynomial("1/x", &r).unwrap_err();
        assert!(e.message.contains("integer literals"), "{e}");
        assert!(parse_polynomial("1/0", &r).unwrap_err().message.contains("zero denominator"));
    }

    #[test]
    fn parentheses_and_powers() {
        let r = ring(&["x", "y"]);
        let p = parse_polynomial("(x + y)^2 - 2*x*y", &r).unwrap();
        let expect = Polynomial::from_terms(2, [(rat(1), vec![2, 0]), (rat(1), vec![0, 2])]);
        assert_eq!(p, expect);
    }

    #[test]
    fn display_round_trips() {
        let r = ring(&["x1", "x2", "x3"]);
        for text in [
            "0",
            "-3/4",
            "2*x1^3 + x1^2*x2",
            "-1/2*x1^2 + x2",
            "x1*x2*x3 - x3^5 + 1/7",
            "-x1 - 5",
        ] {
            let p = parse_polynomial(text, &r).unwrap();
            let printed = p.display_with(&r).to_string();
            let again = parse_polynomial(&printed, &r).unwrap();
            assert_eq!(p, again, "round-trip through `{printed}`");
        }
    }

    #[test]
    fn constants_parse_standalone() {
        assert_eq!(parse_rational("-1").unwrap(), rat(-1));
        assert_eq!(parse_rational("1/2").unwrap(), Rational::new(1.into(), 2.into()));
    }
}
