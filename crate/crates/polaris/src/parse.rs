//! Text format for polynomial maps.
//!
//! ```text
//! # comments and blank lines are ignored
//! vars x y z s t
//! y*s
//! x*t - z*s
//! y*t
//! 0
//! 0
//! ```
//!
//! Expressions use `+ - * / ^` and parentheses. Multiplication is always
//! explicit, literals are integers, and `/` only divides by a nonzero
//! constant, so `1/2*x^2` and `(3/4)*x*y` are both fine.

use num_bigint::BigInt;
use num_traits::Zero;
use polaris_core::{PolyMap, Polynomial, Rational};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("expected a `vars` declaration")]
    MissingVars,
    #[error("invalid variable name `{0}`")]
    BadName(String),
    #[error("variable `{0}` declared twice")]
    DuplicateVar(String),
    #[error("undeclared variable `{0}`")]
    Undeclared(String),
    #[error("invalid coefficient `{0}`")]
    BadCoefficient(String),
    #[error("unexpected {0}")]
    Unexpected(String),
    #[error("division by a non-constant expression")]
    NonConstantDivisor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent `{0}` is too large")]
    ExponentTooLarge(String),
    #[error("expected {expected} components, found {found}")]
    ComponentCount { expected: usize, found: usize },
}

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 64;

/// A map as written: declared variables and one expression per component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapDocument {
    pub vars: Vec<String>,
    pub components: Vec<String>,
    /// 1-based source line of each component.
    lines: Vec<usize>,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(is_ident_start) && cs.all(is_ident_char) && s != "vars"
}

impl MapDocument {
    /// Splits the text into the declaration and component lines. Component
    /// expressions are checked by [`MapDocument::to_map`].
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut vars: Option<Vec<String>> = None;
        let mut components = Vec::new();
        let mut lines = Vec::new();
        let mut last_line = 1;
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            last_line = line;
            if vars.is_none() {
                let start = body.len() - body.trim_start().len();
                let mut words = body.split_whitespace();
                if words.next() != Some("vars") {
                    return Err(ParseError { line, column: start + 1, kind: ParseErrorKind::MissingVars });
                }
                let mut declared: Vec<String> = Vec::new();
                let mut offset = start + 4;
                for w in words {
                    let col = body[offset..].find(w).map_or(offset, |p| p + offset) + 1;
                    offset = col - 1 + w.len();
                    if !valid_name(w) {
                        return Err(ParseError { line, column: col, kind: ParseErrorKind::BadName(w.into()) });
                    }
                    if declared.iter().any(|d| d == w) {
                        return Err(ParseError {
                            line,
                            column: col,
                            kind: ParseErrorKind::DuplicateVar(w.into()),
                        });
                    }
                    declared.push(w.into());
                }
                vars = Some(declared);
            } else {
                components.push(body.trim_end().to_string());
                lines.push(line);
            }
        }
        let Some(vars) = vars else {
            return Err(ParseError { line: 1, column: 1, kind: ParseErrorKind::MissingVars });
        };
        if components.len() != vars.len() {
            return Err(ParseError {
                line: last_line,
                column: 1,
                kind: ParseErrorKind::ComponentCount { expected: vars.len(), found: components.len() },
            });
        }
        Ok(MapDocument { vars, components, lines })
    }

    pub fn to_map(&self) -> Result<PolyMap, ParseError> {
        let comps = self
            .components
            .iter()
            .zip(&self.lines)
            .map(|(src, &line)| parse_expression(src, &self.vars, line))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolyMap::new(comps).expect("component count checked"))
    }
}

/// Parses a whole map document.
pub fn parse_map(text: &str) -> Result<(Vec<String>, PolyMap), ParseError> {
    let doc = MapDocument::parse(text)?;
    let map = doc.to_map()?;
    Ok((doc.vars, map))
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(s) => format!("number `{s}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of line".into(),
        }
    }
}

fn lex(src: &str, line: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '.' || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            if !s.chars().all(|c| c.is_ascii_digit()) {
                return Err(ParseError { line, column: col, kind: ParseErrorKind::BadCoefficient(s) });
            }
            out.push((Tok::Num(s), col));
        } else if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            return Err(ParseError { line, column: col, kind: ParseErrorKind::BadCoefficient(s) });
        } else {
            return Err(ParseError { line, column: col, kind: ParseErrorKind::Unexpected(format!("`{c}`")) });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [String],
    line: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column, kind }
    }

    fn unexpected(&self) -> ParseError {
        self.error(self.column(), ParseErrorKind::Unexpected(self.peek().describe()))
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    let col = self.column();
                    let divisor = self.unary()?;
                    let Some(c) = divisor.as_constant() else {
                        return Err(self.error(col, ParseErrorKind::NonConstantDivisor));
                    };
                    if c.is_zero() {
                        return Err(self.error(col, ParseErrorKind::DivisionByZero));
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            (Tok::Num(s), col) => {
                let e = s.parse::<u32>().ok().filter(|&e| e <= MAX_EXPONENT);
                match e {
                    Some(e) => Ok(base.pow(e)),
                    None => Err(self.error(col, ParseErrorKind::ExponentTooLarge(s))),
                }
            }
            (t, col) => Err(self.error(col, ParseErrorKind::Unexpected(t.describe()))),
        }
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let col = self.column();
        match self.peek().clone() {
            Tok::Num(s) => {
                self.bump();
                let v: BigInt = s.parse().expect("lexer only emits digits");
                Ok(Polynomial::constant(self.nvars(), Rational::from_integer(v)))
            }
            Tok::Ident(name) => {
                self.bump();
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Polynomial::var(self.nvars(), i)),
                    None => Err(self.error(col, ParseErrorKind::Undeclared(name))),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected());
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses one component expression over the declared variables. `line` is
/// only used for error positions.
pub fn parse_expression(src: &str, vars: &[String], line: usize) -> Result<Polynomial, ParseError> {
    let toks = lex(src, line)?;
    let mut p = Parser { toks, pos: 0, vars, line };
    let poly = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected());
    }
    Ok(poly)
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}
