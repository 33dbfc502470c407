//! Concrete syntax and file formats.
//!
//! * patterns: see [`pattern`] for the grammar,
//! * `.mlth` theory files: [`theory`],
//! * `.mlmodel` model files: [`model`],
//! * `.mlproof` proof objects (canonical JSON): [`proof`].

pub mod lexer;
pub mod model;
pub mod pattern;
pub mod printer;
pub mod proof;
pub mod theory;

use std::fmt;

use thiserror::Error;

use crate::syntax::{NotationEnv, Pattern, Signature};
pub use lexer::Loc;
pub use pattern::{Cursor, PatternParser, HOLE};
pub use printer::print_pattern;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub loc: Loc,
    pub message: String,
}

impl ParseError {
    pub fn new(loc: Loc, message: impl Into<String>) -> Self {
        ParseError {
            loc,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.loc, self.message)
    }
}

/// What the parser needs to know: declared symbols and notations.
#[derive(Clone, Debug, Default)]
pub struct Syntax {
    pub signature: Signature,
    pub notations: NotationEnv,
}

impl Syntax {
    pub fn new(signature: Signature, notations: NotationEnv) -> Self {
        Syntax {
            signature,
            notations,
        }
    }
}

fn end_loc(src: &str) -> Loc {
    let line = src.lines().count().max(1);
    let col = src.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
    Loc { line, col }
}

/// Parses a complete pattern.
pub fn parse_pattern(text: &str, syntax: &Syntax) -> Result<Pattern, ParseError> {
    let toks = lexer::tokenize(text, false)?;
    let mut c = Cursor::new(&toks, end_loc(text));
    let p = PatternParser::new(syntax).expr(&mut c)?;
    if !c.at_end() {
        return Err(c.unexpected("end of input"));
    }
    Ok(p)
}

/// Parses a pattern that may contain one context hole `[]`.
pub fn parse_context_pattern(text: &str, syntax: &Syntax) -> Result<Pattern, ParseError> {
    let toks = lexer::tokenize(text, false)?;
    let mut c = Cursor::new(&toks, end_loc(text));
    let p = PatternParser::new(syntax).with_holes().expr(&mut c)?;
    if !c.at_end() {
        return Err(c.unexpected("end of input"));
    }
    Ok(p)
}
