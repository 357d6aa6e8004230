//! Text parser for equation systems.
//!
//! Grammar (UTF-8, one equation per line, `#` starts a comment):
//!
//! ```text
//! equation := poly '=' poly
//! poly     := ['-'] term (('+' | '-') term)*
//! term     := ['-'] integer ('*' ident)* | ident ('*' ident)*
//! ident    := [A-Za-z][A-Za-z0-9_']*
//! ```
//!
//! Integers are arbitrary precision. Variable names are mapped to indices in
//! lexicographic order over the whole input.

use num_bigint::BigInt;

use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

use super::{NcEquation, NcPolynomial, NcSystem, Word};

/// A parse failure, with 1-based line and column.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownToken(char),
    UnexpectedToken(String),
    ExpectedEquals,
    SecondEquals,
    MissingTerm,
    MissingRhs,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownToken(c) => write!(f, "unknown token {c:?}"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected token {t}"),
            ParseErrorKind::ExpectedEquals => write!(f, "expected '=' between two polynomials"),
            ParseErrorKind::SecondEquals => write!(f, "more than one '=' in an equation"),
            ParseErrorKind::MissingTerm => write!(f, "expected a term"),
            ParseErrorKind::MissingRhs => write!(f, "missing right-hand side"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Equals,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize_line(text: &str, line_no: usize) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0usize;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
            }
            '+' => {
                out.push(Spanned { tok: Tok::Plus, line: line_no, col });
                i += 1;
            }
            '-' => {
                out.push(Spanned { tok: Tok::Minus, line: line_no, col });
                i += 1;
            }
            '*' => {
                out.push(Spanned { tok: Tok::Star, line: line_no, col });
                i += 1;
            }
            '=' => {
                out.push(Spanned { tok: Tok::Equals, line: line_no, col });
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Spanned {
                    tok: Tok::Int(s.parse().expect("digits")),
                    line: line_no,
                    col,
                });
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                i += 1;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: line_no,
                    col,
                });
            }
            other => {
                return Err(ParseError {
                    line: line_no,
                    col,
                    kind: ParseErrorKind::UnknownToken(other),
                })
            }
        }
    }
    Ok(out)
}

struct LineParser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    line: usize,
    lookup: &'a dyn Fn(&str) -> usize,
}

impl<'a> LineParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => (
                self.line,
                self.toks.last().map_or(1, |s| s.col + 1),
            ),
        }
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, kind }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    /// term := ['-'] integer ('*' ident)* | ident ('*' ident)*
    fn term(&mut self) -> Result<(BigInt, Word), ParseError> {
        let mut sign = BigInt::from(1);
        if matches!(self.peek(), Some(Tok::Minus)) {
            sign = -sign;
            self.bump();
        }
        let mut coeff = sign;
        let mut letters = Vec::new();
        match self.peek() {
            Some(Tok::Int(_)) => {
                let Some(Tok::Int(n)) = self.bump() else { unreachable!() };
                coeff *= n;
            }
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(name)) = self.bump() else { unreachable!() };
                letters.push((self.lookup)(&name));
            }
            _ => return Err(self.err(ParseErrorKind::MissingTerm)),
        }
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            match self.bump() {
                Some(Tok::Ident(name)) => letters.push((self.lookup)(&name)),
                Some(t) => {
                    self.pos -= 1;
                    return Err(self.err(ParseErrorKind::UnexpectedToken(describe(&t))));
                }
                None => return Err(self.err(ParseErrorKind::MissingTerm)),
            }
        }
        Ok((coeff, Word::new(letters)))
    }

    /// poly := ['-'] term (('+' | '-') term)*
    fn poly(&mut self) -> Result<NcPolynomial, ParseError> {
        let mut out = NcPolynomial::zero();
        let (c, w) = self.term()?;
        out.add_term(w, c);
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let (c, w) = self.term()?;
                    out.add_term(w, c);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let (c, w) = self.term()?;
                    out.add_term(w, -c);
                }
                _ => break,
            }
        }
        Ok(out)
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("integer {n}"),
        Tok::Ident(s) => format!("identifier {s}"),
        Tok::Plus => "'+'".to_string(),
        Tok::Minus => "'-'".to_string(),
        Tok::Star => "'*'".to_string(),
        Tok::Equals => "'='".to_string(),
    }
}

/// Parses an equation system from text. Variable names are collected over
/// the whole input and assigned indices in lexicographic order.
pub fn parse_system(text: &str) -> Result<NcSystem, ParseError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        lines.push(tokenize_line(raw, i + 1)?);
    }

    let mut names: BTreeSet<String> = BTreeSet::new();
    for line in &lines {
        for s in line {
            if let Tok::Ident(name) = &s.tok {
                names.insert(name.clone());
            }
        }
    }
    let var_names: Vec<String> = names.into_iter().collect();
    let lookup = |name: &str| -> usize {
        var_names
            .binary_search_by(|n| n.as_str().cmp(name))
            .expect("all names collected")
    };

    let mut equations = Vec::new();
    for (i, toks) in lines.iter().enumerate() {
        if toks.is_empty() {
            continue;
        }
        let mut p = LineParser {
            toks,
            pos: 0,
            line: i + 1,
            lookup: &lookup,
        };
        let lhs = p.poly()?;
        match p.bump() {
            Some(Tok::Equals) => {}
            Some(t) => {
                p.pos -= 1;
                return Err(p.err(ParseErrorKind::UnexpectedToken(describe(&t))));
            }
            None => {
                p.pos -= 1;
                return Err(p.err(ParseErrorKind::ExpectedEquals));
            }
        }
        if p.peek().is_none() {
            return Err(p.err(ParseErrorKind::MissingRhs));
        }
        let rhs = p.poly()?;
        match p.peek() {
            None => {}
            Some(Tok::Equals) => return Err(p.err(ParseErrorKind::SecondEquals)),
            Some(t) => {
                let t = t.clone();
                return Err(p.err(ParseErrorKind::UnexpectedToken(describe(&t))));
            }
        }
        equations.push(NcEquation { lhs, rhs });
    }

    Ok(NcSystem::new(var_names, equations))
}
