//! Infix parser for potential/generator expressions.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | atom ('^' int)?
//! atom   := number | 'i' | 'z' | 'w' | 'zbar' | 'wbar'
//!         | func '(' expr ')' | '|' expr '|' '^2' | '(' expr ')'
//! func   := 'exp' | 'log' | 'Re' | 'Im' | 'conj' | 'neg'
//! ```
//!
//! `Re`, `Im`, `|.|^2` and `conj` are lowered here, so the returned tree
//! contains only the four leaf symbols. Constant subtrees fold on
//! construction; nothing else is simplified.

use super::{conjugate, Expr, ExprRef, Sym};
use num_complex::Complex64;

/// Parse failure with the byte offset of the offending input.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" | "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("invalid number `{text}` at byte {offset}")]
    InvalidNumber { offset: usize, text: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Pipe,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(_, t) => format!("number `{}`", t),
            Tok::Ident(s) => format!("`{}`", s),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b'|' => {
                toks.push((Tok::Pipe, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value = text.parse::<f64>().map_err(|_| ParseError::InvalidNumber {
                    offset: start,
                    text: text.to_string(),
                })?;
                toks.push((Tok::Num(value, text.to_string()), start));
            }
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                return Err(ParseError::Syntax {
                    offset: i,
                    expected: vec!["token"],
                    found: format!("`{}`", &src[i..i + utf8_len(b)]),
                });
            }
        }
    }
    toks.push((Tok::Eof, src.len()));
    Ok(toks)
}

fn utf8_len(b: u8) -> usize {
    match b {
        0x00..=0x7f => 1,
        0xc0..=0xdf => 2,
        0xe0..=0xef => 3,
        _ => 4,
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            expected,
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.err(vec![name]))
        }
    }

    fn expr(&mut self) -> Result<ExprRef, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprRef, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::mul(lhs, self.factor()?);
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::div(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<ExprRef, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::neg(self.factor()?));
        }
        let atom = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let n = self.integer()?;
            return Ok(Expr::pow(atom, n));
        }
        Ok(atom)
    }

    fn integer(&mut self) -> Result<i32, ParseError> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Num(_, text) => {
                let n: i32 = text.parse().map_err(|_| ParseError::Syntax {
                    offset: self.offset(),
                    expected: vec!["integer exponent"],
                    found: format!("number `{}`", text),
                })?;
                self.bump();
                Ok(if negative { -n } else { n })
            }
            _ => Err(self.err(vec!["integer exponent"])),
        }
    }

    fn atom(&mut self) -> Result<ExprRef, ParseError> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Num(value, _) => {
                self.bump();
                Ok(Expr::real(value))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Pipe => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::Pipe, "`|`")?;
                self.expect(Tok::Caret, "`^2`")?;
                match self.peek().clone() {
                    Tok::Num(_, text) if text == "2" => {
                        self.bump();
                        Ok(Expr::mul(inner.clone(), conjugate(&inner)))
                    }
                    _ => Err(self.err(vec!["`2` (modulus is only available squared)"])),
                }
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "z" => Ok(Expr::var(Sym::Z)),
                    "zbar" => Ok(Expr::var(Sym::ZBar)),
                    "w" => Ok(Expr::var(Sym::W)),
                    "wbar" => Ok(Expr::var(Sym::WBar)),
                    "i" => Ok(Expr::constant(Complex64::new(0.0, 1.0))),
                    "exp" | "log" | "Re" | "Im" | "conj" | "neg" => {
                        self.expect(Tok::LParen, "`(`")?;
                        let arg = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(lower_call(&name, arg))
                    }
                    _ => Err(ParseError::UnknownIdentifier { offset, name }),
                }
            }
            _ => Err(self.err(vec!["number", "`i`", "variable", "function", "`(`", "`|`"])),
        }
    }
}

fn lower_call(name: &str, arg: ExprRef) -> ExprRef {
    match name {
        "exp" => Expr::exp(arg),
        "log" => Expr::log(arg),
        // Re(e) -> (e + conj(e))/2, Im(e) -> (e - conj(e))/(2i)
        "Re" => Expr::div(Expr::add(arg.clone(), conjugate(&arg)), Expr::real(2.0)),
        "Im" => Expr::div(
            Expr::sub(arg.clone(), conjugate(&arg)),
            Expr::constant(Complex64::new(0.0, 2.0)),
        ),
        "conj" => conjugate(&arg),
        "neg" => Expr::neg(arg),
        _ => unreachable!("lower_call on non-function"),
    }
}

/// Parse source text into a lowered expression tree.
pub fn parse(src: &str) -> Result<ExprRef, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.err(vec!["end of input", "operator"]));
    }
    Ok(e)
}
