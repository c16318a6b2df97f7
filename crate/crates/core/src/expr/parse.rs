//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := unary (("*"|"/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" unary)?
//! atom   := number | "x" | "e" | "pi" | func "(" expr ")" | "(" expr ")"
//! func   := "exp" | "ln" | "sin" | "cos" | "abs" | "sqrt" | "sign"
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-x^2`
//! parses as `-(x^2)`. `sign` is accepted on input so printed derivatives of
//! `abs` round-trip; it is not needed for hand-written sources.

use super::Expression;
use std::fmt;
use thiserror::Error;

/// Parse failure with the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseDiagnostic {
    /// Byte offset into the source text; always `<= source.len()`.
    pub offset: usize,
    pub message: String,
    /// Hint describing what the parser expected at `offset`.
    pub expected: Option<String>,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)?;
        if let Some(exp) = &self.expected {
            write!(f, " (expected {exp})")?;
        }
        Ok(())
    }
}

impl ParseDiagnostic {
    fn new(offset: usize, message: impl Into<String>, expected: Option<&str>) -> Self {
        ParseDiagnostic {
            offset,
            message: message.into(),
            expected: expected.map(str::to_owned),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseDiagnostic> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            if lx.pos >= lx.src.len() {
                break;
            }
            let start = lx.pos;
            let c = lx.src[lx.pos];
            let tok = match c {
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'/' => {
                    lx.pos += 1;
                    Tok::Slash
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b'0'..=b'9' => lx.number(start)?,
                b'a'..=b'z' | b'A'..=b'Z' => lx.ident(start),
                other => {
                    return Err(ParseDiagnostic::new(
                        start,
                        format!("unexpected character '{}'", other as char),
                        None,
                    ))
                }
            };
            out.push((tok, start));
        }
        Ok(out)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn digits(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
    }

    fn number(&mut self, start: usize) -> Result<Tok, ParseDiagnostic> {
        self.digits();
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            self.digits();
        }
        // exponent part only if at least one digit follows; otherwise the
        // 'e' belongs to the next token (e.g. "2*e" written without '*'
        // is still a parse error, not a mangled literal)
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                self.pos += 1;
            }
            if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.digits();
            } else {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value: f64 = text
            .parse()
            .map_err(|_| ParseDiagnostic::new(start, format!("invalid number '{text}'"), None))?;
        if !value.is_finite() {
            return Err(ParseDiagnostic::new(
                start,
                format!("numeric literal '{text}' out of range"),
                None,
            ));
        }
        Ok(Tok::Number(value))
    }

    fn ident(&mut self, start: usize) -> Tok {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        Tok::Ident(
            std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .to_owned(),
        )
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    eof: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.idx).map_or(self.eof, |(_, o)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(t, _)| t.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseDiagnostic> {
        if self.peek() == Some(&tok) {
            self.idx += 1;
            Ok(())
        } else {
            Err(ParseDiagnostic::new(
                self.offset(),
                format!("unexpected {}", self.describe_current()),
                Some(what),
            ))
        }
    }

    fn describe_current(&self) -> String {
        match self.peek() {
            None => "end of input".to_owned(),
            Some(Tok::Number(n)) => format!("number {n:?}"),
            Some(Tok::Ident(s)) => format!("identifier '{s}'"),
            Some(Tok::Plus) => "'+'".to_owned(),
            Some(Tok::Minus) => "'-'".to_owned(),
            Some(Tok::Star) => "'*'".to_owned(),
            Some(Tok::Slash) => "'/'".to_owned(),
            Some(Tok::Caret) => "'^'".to_owned(),
            Some(Tok::LParen) => "'('".to_owned(),
            Some(Tok::RParen) => "')'".to_owned(),
        }
    }

    fn expr(&mut self) -> Result<Expression, ParseDiagnostic> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.idx += 1;
                    acc = Expression::add(acc, self.term()?);
                }
                Some(Tok::Minus) => {
                    self.idx += 1;
                    acc = Expression::sub(acc, self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expression, ParseDiagnostic> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.idx += 1;
                    acc = Expression::mul(acc, self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.idx += 1;
                    acc = Expression::div(acc, self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expression, ParseDiagnostic> {
        if self.peek() == Some(&Tok::Minus) {
            self.idx += 1;
            return Ok(Expression::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression, ParseDiagnostic> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.idx += 1;
            let exponent = self.unary()?;
            return Ok(Expression::pow(base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expression, ParseDiagnostic> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Number(n)) => Ok(Expression::Constant(n)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => Ok(Expression::Variable),
                "e" => Ok(Expression::Constant(std::f64::consts::E)),
                "pi" => Ok(Expression::Constant(std::f64::consts::PI)),
                "exp" | "ln" | "sin" | "cos" | "abs" | "sqrt" | "sign" => {
                    self.expect(Tok::LParen, "'(' after function name")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(match name.as_str() {
                        "exp" => Expression::exp(arg),
                        "ln" => Expression::ln(arg),
                        "sin" => Expression::sin(arg),
                        "cos" => Expression::cos(arg),
                        "abs" => Expression::abs(arg),
                        "sqrt" => Expression::sqrt(arg),
                        _ => Expression::signum(arg),
                    })
                }
                other => Err(ParseDiagnostic::new(
                    offset,
                    format!("unknown identifier '{other}'"),
                    Some("x, e, pi, or a function name"),
                )),
            },
            Some(_) => {
                self.idx -= 1;
                Err(ParseDiagnostic::new(
                    offset,
                    format!("unexpected {}", self.describe_current()),
                    Some("number, 'x', constant, function call, or '('"),
                ))
            }
            None => Err(ParseDiagnostic::new(
                offset,
                "unexpected end of input".to_owned(),
                Some("number, 'x', constant, function call, or '('"),
            )),
        }
    }
}

/// Parse a source string into an expression tree.
///
/// The constructors applied while parsing perform light constant folding and
/// normalize non-constant exponents, so the returned tree may be smaller than
/// the literal source shape; printing it always re-parses to the same tree.
pub fn parse(source: &str) -> Result<Expression, ParseDiagnostic> {
    let toks = Lexer::tokenize(source)?;
    if toks.is_empty() {
        return Err(ParseDiagnostic::new(
            0,
            "empty input".to_owned(),
            Some("an expression"),
        ));
    }
    let mut parser = Parser {
        toks,
        idx: 0,
        eof: source.len(),
    };
    let e = parser.expr()?;
    if parser.idx < parser.toks.len() {
        return Err(ParseDiagnostic::new(
            parser.offset(),
            format!("trailing {}", parser.describe_current()),
            Some("end of input"),
        ));
    }
    Ok(e)
}
