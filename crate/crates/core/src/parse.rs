//! Recursive-descent parser for the scalar expression language.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' integer)?
//! base   := number | ident | '(' expr ')' | '-' base | func '(' expr ')'
//! ```

use num_rational::Rational64;

use crate::chart::Chart;
use crate::expr::{Func, ScalarField};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("non-integer exponent at {pos}")]
    NonIntegerExponent { pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == '.') {
                i += 1;
            }
            out.push((Tok::Num(bytes[start..i].iter().collect()), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(bytes[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

/// Parses a decimal literal exactly, e.g. `0.25` becomes 1/4.
fn parse_decimal(text: &str, pos: usize) -> Result<Rational64, ParseError> {
    let bad = || ParseError::Syntax {
        pos,
        msg: format!("malformed number `{text}`"),
    };
    let (int_part, frac_part) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if (int_part.is_empty() && frac_part.is_empty()) || frac_part.contains('.') {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i64 = digits.parse().map_err(|_| bad())?;
    let denom = 10i64.checked_pow(frac_part.len() as u32).ok_or_else(bad)?;
    Ok(Rational64::new(numer, denom))
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    chart: &'a Chart,
    src_len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.src_len, |(_, p)| *p)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), ParseError> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                pos: self.pos(),
                msg: format!("expected `{op}`"),
            })
        }
    }

    fn expr(&mut self) -> Result<ScalarField, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = lhs + self.term()?;
            } else if self.eat('-') {
                lhs = lhs - self.term()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ScalarField, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = lhs * self.factor()?;
            } else if self.eat('/') {
                lhs = lhs / self.factor()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<ScalarField, ParseError> {
        let base = self.base()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        let negative = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Num(text)) => {
                self.at += 1;
                if text.contains('.') {
                    return Err(ParseError::NonIntegerExponent { pos });
                }
                let n: i32 = text.parse().map_err(|_| ParseError::Syntax {
                    pos,
                    msg: "exponent out of range".into(),
                })?;
                Ok(base.powi(if negative { -n } else { n }))
            }
            _ => Err(ParseError::NonIntegerExponent { pos }),
        }
    }

    fn base(&mut self) -> Result<ScalarField, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(text)) => {
                self.at += 1;
                Ok(ScalarField::constant(parse_decimal(&text, pos)?))
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.at += 1;
                Ok(-self.base()?)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if let Some(f) = Func::from_name(&name) {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(arg.apply(f));
                }
                match self.chart.coord_index(&name) {
                    Some(i) => Ok(ScalarField::var(i)),
                    None => Err(ParseError::UnknownIdentifier { name, pos }),
                }
            }
            Some(Tok::Op(c)) => Err(ParseError::Syntax {
                pos,
                msg: format!("unexpected `{c}`"),
            }),
            None => Err(ParseError::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

/// Parses `src` into a scalar field on `chart`.
pub fn parse_scalar(src: &str, chart: &Chart) -> Result<ScalarField, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
        chart,
        src_len: src.chars().count(),
    };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return Err(ParseError::Syntax {
            pos: p.pos(),
            msg: "trailing input".into(),
        });
    }
    Ok(e)
}
