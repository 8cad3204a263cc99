//! Line-oriented text format for TBoxes, ABoxes and examples.
//!
//! ```text
//! line    := "ci:" concept ("<=" | "==") concept | "ri:" IDENT "<=" IDENT
//! concept := term { "&" term }
//! term    := "top" | IDENT | "some" "(" IDENT "," concept ")" | "(" concept ")"
//! ```
//!
//! `#` starts a comment, blank lines are ignored. ABox lines are `A(a)` or
//! `r(a, b)`. A data example is written on one line as
//! `iq: A(a), r(a, b) |- C(a)`.

use std::fmt;

use thiserror::Error;

use crate::syntax::{
    validate_identifier, ABox, Assertion, Axiom, Concept, ConceptName, IndividualName, Iq, NameError, RoleName, TBox,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    Unexpected { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    Reserved(String),
    UnknownDirective(String),
    Equivalence,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::Unexpected { found, expected } => write!(f, "expected {expected}, found `{found}`"),
            ParseErrorKind::UnexpectedEnd { expected } => write!(f, "expected {expected}, found end of line"),
            ParseErrorKind::Reserved(w) => write!(f, "reserved word `{w}` used as an identifier"),
            ParseErrorKind::UnknownDirective(d) => write!(f, "unknown line kind `{d}` (expected `ci:` or `ri:`)"),
            ParseErrorKind::Equivalence => f.write_str("`==` expands to two axioms; a single axiom is required here"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Colon,
    Le,
    EqEq,
    Amp,
    LParen,
    RParen,
    Comma,
    Turnstile,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => f.write_str(s),
            Tok::Colon => f.write_str(":"),
            Tok::Le => f.write_str("<="),
            Tok::EqEq => f.write_str("=="),
            Tok::Amp => f.write_str("&"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::Comma => f.write_str(","),
            Tok::Turnstile => f.write_str("|-"),
        }
    }
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = line.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let err = |kind| ParseError { line: line_no, column, kind };
        match c {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            ':' => {
                toks.push((Tok::Colon, column));
                i += 1;
            }
            '&' => {
                toks.push((Tok::Amp, column));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, column));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, column));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, column));
                i += 1;
            }
            '<' if chars.get(i + 1) == Some(&'=') => {
                toks.push((Tok::Le, column));
                i += 2;
            }
            '=' if chars.get(i + 1) == Some(&'=') => {
                toks.push((Tok::EqEq, column));
                i += 2;
            }
            '|' if chars.get(i + 1) == Some(&'-') => {
                toks.push((Tok::Turnstile, column));
                i += 2;
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if word.starts_with(|c: char| c.is_ascii_digit()) {
                    return Err(err(ParseErrorKind::UnexpectedChar(c)));
                }
                toks.push((Tok::Ident(word), column));
            }
            other => return Err(err(ParseErrorKind::UnexpectedChar(other))),
        }
    }
    Ok(toks)
}

struct Cursor<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [(Tok, usize)], line: usize, line_len: usize) -> Self {
        Cursor { toks, pos: 0, line, end_column: line_len + 1 }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.pos + offset).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_column)
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column: self.column(), kind }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(ParseErrorKind::Unexpected { found: t.to_string(), expected }),
            None => self.error(ParseErrorKind::UnexpectedEnd { expected }),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn ident(&mut self, expected: &'static str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(word)) => {
                let word = word.clone();
                if let Err(NameError::Reserved(w)) = validate_identifier(&word) {
                    return Err(self.error(ParseErrorKind::Reserved(w)));
                }
                self.pos += 1;
                Ok(word)
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    fn concept(&mut self) -> Result<Concept, ParseError> {
        let mut parts = vec![self.term()?];
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            parts.push(self.term()?);
        }
        Ok(Concept::and(parts))
    }

    fn term(&mut self) -> Result<Concept, ParseError> {
        match self.peek() {
            Some(Tok::Ident(w)) if w == "top" => {
                self.pos += 1;
                Ok(Concept::Top)
            }
            Some(Tok::Ident(w)) if w == "some" => {
                self.pos += 1;
                self.expect(Tok::LParen, "`(` after `some`")?;
                let role = RoleName::new_unchecked(&self.ident("a role name")?);
                self.expect(Tok::Comma, "`,`")?;
                let filler = self.concept()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Concept::exists(role, filler))
            }
            Some(Tok::Ident(_)) => Ok(Concept::Name(ConceptName::new_unchecked(&self.ident("a concept name")?))),
            Some(Tok::LParen) => {
                self.pos += 1;
                let c = self.concept()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(c)
            }
            _ => Err(self.unexpected("a concept")),
        }
    }

    fn directive(&mut self) -> Result<String, ParseError> {
        let column = self.column();
        let word = match self.peek() {
            Some(Tok::Ident(w)) => w.clone(),
            _ => return Err(self.unexpected("`ci:` or `ri:`")),
        };
        self.pos += 1;
        if self.peek() != Some(&Tok::Colon) {
            return Err(ParseError { line: self.line, column, kind: ParseErrorKind::UnknownDirective(word) });
        }
        self.pos += 1;
        Ok(word)
    }

    /// One `ci:`/`ri:` line; `==` yields two axioms.
    fn axiom_line(&mut self) -> Result<Vec<Axiom>, ParseError> {
        let column = self.column();
        let directive = self.directive()?;
        match directive.as_str() {
            "ci" => {
                let lhs = self.concept()?;
                let equiv = match self.peek() {
                    Some(Tok::Le) => false,
                    Some(Tok::EqEq) => true,
                    _ => return Err(self.unexpected("`<=` or `==`")),
                };
                self.pos += 1;
                let rhs = self.concept()?;
                self.finish()?;
                if equiv {
                    Ok(vec![Axiom::Ci(lhs.clone(), rhs.clone()), Axiom::Ci(rhs, lhs)])
                } else {
                    Ok(vec![Axiom::Ci(lhs, rhs)])
                }
            }
            "ri" => {
                let r = RoleName::new_unchecked(&self.ident("a role name")?);
                self.expect(Tok::Le, "`<=`")?;
                let s = RoleName::new_unchecked(&self.ident("a role name")?);
                self.finish()?;
                Ok(vec![Axiom::Ri(r, s)])
            }
            _ => Err(ParseError { line: self.line, column, kind: ParseErrorKind::UnknownDirective(directive) }),
        }
    }

    fn assertion(&mut self) -> Result<Assertion, ParseError> {
        let head = self.ident("a concept or role name")?;
        self.expect(Tok::LParen, "`(`")?;
        let a = IndividualName::new_unchecked(&self.ident("an individual name")?);
        let out = if self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            let b = IndividualName::new_unchecked(&self.ident("an individual name")?);
            Assertion::Role(RoleName::new_unchecked(&head), a, b)
        } else {
            Assertion::Concept(ConceptName::new_unchecked(&head), a)
        };
        self.expect(Tok::RParen, "`)`")?;
        Ok(out)
    }

    fn query(&mut self) -> Result<Iq, ParseError> {
        // `r(a, b)` is a role query; anything else is `C(a)`.
        if let (Some(Tok::Ident(head)), Some(Tok::LParen), Some(Tok::Ident(_)), Some(Tok::Comma)) =
            (self.peek(), self.peek_at(1), self.peek_at(2), self.peek_at(3))
        {
            if head == "some" {
                return self.concept_query();
            }
            if let Assertion::Role(r, a, b) = self.assertion()? {
                return Ok(Iq::Role(r, a, b));
            }
        }
        self.concept_query()
    }

    fn concept_query(&mut self) -> Result<Iq, ParseError> {
        let c = self.concept()?;
        self.expect(Tok::LParen, "`(` before the query individual")?;
        let a = IndividualName::new_unchecked(&self.ident("an individual name")?);
        self.expect(Tok::RParen, "`)`")?;
        Ok(Iq::Concept(c, a))
    }
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l))
}

pub fn parse_tbox(text: &str) -> Result<TBox, ParseError> {
    let mut t = TBox::new();
    for (line_no, line) in lines(text) {
        let toks = tokenize(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(&toks, line_no, line.chars().count());
        t.extend(cur.axiom_line()?);
    }
    Ok(t)
}

/// Parses a single axiom line; `==` is rejected.
pub fn parse_axiom(text: &str) -> Result<Axiom, ParseError> {
    let line = text.trim_end_matches(['\n', '\r']);
    let toks = tokenize(line, 1)?;
    let mut cur = Cursor::new(&toks, 1, line.chars().count());
    let mut axioms = cur.axiom_line()?;
    if axioms.len() != 1 {
        return Err(ParseError { line: 1, column: 1, kind: ParseErrorKind::Equivalence });
    }
    Ok(axioms.pop().unwrap())
}

pub fn parse_concept(text: &str) -> Result<Concept, ParseError> {
    let toks = tokenize(text, 1)?;
    let mut cur = Cursor::new(&toks, 1, text.chars().count());
    let c = cur.concept()?;
    cur.finish()?;
    Ok(c)
}

pub fn parse_abox(text: &str) -> Result<ABox, ParseError> {
    let mut abox = ABox::new();
    for (line_no, line) in lines(text) {
        let toks = tokenize(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(&toks, line_no, line.chars().count());
        abox.insert(cur.assertion()?);
        cur.finish()?;
    }
    Ok(abox)
}

/// Parses `iq: A(a), r(a, b) |- C(a)`.
pub fn parse_data_example(text: &str) -> Result<(ABox, Iq), ParseError> {
    let line = text.trim_end_matches(['\n', '\r']);
    let toks = tokenize(line, 1)?;
    let mut cur = Cursor::new(&toks, 1, line.chars().count());
    let column = cur.column();
    let directive = cur.directive()?;
    if directive != "iq" {
        return Err(ParseError { line: 1, column, kind: ParseErrorKind::UnknownDirective(directive) });
    }
    let mut abox = ABox::new();
    if cur.peek() != Some(&Tok::Turnstile) {
        abox.insert(cur.assertion()?);
        while cur.peek() == Some(&Tok::Comma) {
            cur.pos += 1;
            abox.insert(cur.assertion()?);
        }
    }
    cur.expect(Tok::Turnstile, "`|-`")?;
    let q = cur.query()?;
    cur.finish()?;
    Ok((abox, q))
}

pub fn print_data_example(abox: &ABox, q: &Iq) -> String {
    let assertions: Vec<String> = abox.iter().map(ToString::to_string).collect();
    if assertions.is_empty() {
        format!("iq: |- {q}")
    } else {
        format!("iq: {} |- {q}", assertions.join(", "))
    }
}
