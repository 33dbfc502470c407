//! Pattern grammar.
//!
//! ```text
//! expr    ::= imp [ "<--->" imp ]
//! imp     ::= or [ "--->" imp ]                      (right associative)
//! or      ::= and { "or" and }                       (left associative)
//! and     ::= rel { "and" rel }                      (left associative)
//! rel     ::= unary [ relop unary ]
//! relop   ::= "=" | "!=" | "in" | "notin" | "subseteq" | "notsubseteq"
//! unary   ::= "!" unary | binder | app
//! binder  ::= ("exists" | "mu" | "forall" | "nu") [ident] "." expr
//! app     ::= atom { ["$"] atom }                    (left associative)
//! atom    ::= "(" expr ")" | "Bot" | "Top" | "b"<n> | "S"<n> | ident
//!           | ident "(" expr { "," expr } ")"       (notation call)
//!           | "⌈" expr "⌉" | "⌊" expr "⌋" | "<" expr "," expr ">"
//! ```
//!
//! Binders extend as far right as possible. Identifiers are symbols when
//! declared in the signature, otherwise free variables: set variables when
//! they start with an uppercase letter, element variables otherwise. A name
//! after a binder keyword (`exists x . x`) is elaborated to de Bruijn
//! indices, so binder names never reach the AST.

use super::lexer::{Loc, Tok, Token};
use super::{ParseError, Syntax};
use crate::syntax::{DbIndex, NotationError, Pattern};

/// Name of the reserved set variable standing for a context hole.
pub const HOLE: &str = "□";

#[derive(Clone, Copy, PartialEq, Eq)]
enum BinderKind {
    Element,
    Set,
}

/// A position in a token slice.
pub struct Cursor<'t> {
    toks: &'t [Token],
    pos: usize,
    end: Loc,
}

impl<'t> Cursor<'t> {
    pub fn new(toks: &'t [Token], end: Loc) -> Self {
        Cursor { toks, pos: 0, end }
    }

    pub fn peek(&self) -> Option<&'t Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    pub fn peek_at(&self, offset: usize) -> Option<&'t Tok> {
        self.toks.get(self.pos + offset).map(|t| &t.tok)
    }

    pub fn loc(&self) -> Loc {
        self.toks.get(self.pos).map(|t| t.loc).unwrap_or(self.end)
    }

    pub fn bump(&mut self) -> Option<&'t Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.tok);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_ident(&mut self, word: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == word) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    pub fn unexpected(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(self.loc(), format!("expected {expected}, found {t}")),
            None => ParseError::new(self.loc(), format!("expected {expected}, found end of input")),
        }
    }
}

const KEYWORDS: &[&str] = &[
    "exists",
    "mu",
    "forall",
    "nu",
    "and",
    "or",
    "in",
    "notin",
    "subseteq",
    "notsubseteq",
];

pub(crate) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s) || s == "Bot" || s == "Top"
}

/// `b<n>` / `S<n>` literal, if `s` has that shape.
pub(crate) fn index_literal(s: &str, prefix: char) -> Option<&str> {
    let digits = s.strip_prefix(prefix)?;
    (!digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())).then_some(digits)
}

pub struct PatternParser<'s> {
    syntax: &'s Syntax,
    scope: Vec<(BinderKind, Option<String>)>,
    params: Vec<String>,
    allow_hole: bool,
}

impl<'s> PatternParser<'s> {
    pub fn new(syntax: &'s Syntax) -> Self {
        PatternParser {
            syntax,
            scope: Vec::new(),
            params: Vec::new(),
            allow_hole: false,
        }
    }

    /// Identifiers in `params` parse as template placeholders.
    pub fn with_params(mut self, params: Vec<String>) -> Self {
        self.params = params;
        self
    }

    /// Accept `[]` / `□` as a context hole.
    pub fn with_holes(mut self) -> Self {
        self.allow_hole = true;
        self
    }

    pub fn expr(&mut self, c: &mut Cursor<'_>) -> Result<Pattern, ParseError> {
        let lhs = self.imp(c)?;
        if c.peek() == Some(&Tok::Iff) {
            let loc = c.loc();
            c.bump();
            let rhs = self.imp(c)?;
            return self.notation(loc, "iff", vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn imp(&mut self, c: &mut Cursor<'_>) -> Result<Pattern, ParseError> {
        let lhs = self.or(c)?;
        if c.eat(&Tok::Arrow) {
            let rhs = self.imp(c)?;
            return Ok(Pattern::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self, c: &mut Cursor<'_>) -> Result<Pattern, ParseError> {
        let mut lhs = self.and(c)?;
        loop {
            let loc = c.loc();
            if c.eat_ident("or") || c.eat(&Tok::OrSym) {
                let rhs = self.and(c)?;
                lhs = self.notation(loc, "or", vec![lhs, rhs])?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn and(&mut self, c: &mut Cursor<'_>) -> Result<Pattern, ParseError> {
        let mut lhs = self.rel(c)?;
        loop {
            let loc = c.loc();
            if c.eat_ident("and") || c.eat(&Tok::AndSym) {
                let rhs = self.rel(c)?;
                lhs = self.notation(loc, "and", vec![lhs, rhs])?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn relop(c: &Cursor<'_>) -> Option<&'static str> {
        Some(match c.peek()? {
            Tok::Eq => "equal",
            Tok::Neq => "neq",
            Tok::InSym => "in",
            Tok::NotInSym => "notin",
            Tok::SubsetSym => "subseteq",
            Tok::NotSubsetSym => "notsubseteq",
            Tok::Ident(s) => match s.as_str() {
                "in" => "in",
                "notin" => "notin",
                "subseteq" => "subseteq",
                "notsubseteq" => "notsubseteq",
                _ => return None,
            },
            _ => return None,
        })
    }

    fn rel(&mut self, c: &mut Cursor<'_>) -> Result<Pattern, ParseError> {
        let lhs = self.unary(c)?;
        if let Some(name) = Self::relop(c) {
            let loc = c.loc();
            c.bump();
            let rhs = self.unary(c)?;
            return self.notation(loc, name, vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn binder_keyword(c: &Cursor<'_>) -> Option<(&'static str, BinderKind)> {
        Some(match c.peek()? {
            Tok::ExistsSym => ("exists", BinderKind::Element),
            Tok::MuSym => ("mu", BinderKind::Set),
            Tok::ForallSym => ("forall", BinderKind::Element),
            Tok::NuSym => ("nu", BinderKind::Set),
            Tok::Ident(s) => match s.as_str() {
                "exists" => ("exists", BinderKind::Element),
                "mu" => ("mu", BinderKind::Set),
                "forall" => ("forall", BinderKind::Element),
                "nu" => ("nu", BinderKind::Set),
                _ => return None,
            },
            _ => return None,
        })
    }

    fn unary(&mut self, c: &mut Cursor<'_>) -> Result<Pattern, ParseError> {
        let loc = c.loc();
        if c.eat(&Tok::Bang) {
            let arg = self.unary(c)?;
            return self.notation(loc, "not", vec![arg]);
        }
        if let Some((kw, kind)) = Self::binder_keyword(c) {
            c.bump();
            let name = match (c.peek(), c.peek_at(1)) {
                (Some(Tok::Ident(n)), Some(Tok::Dot)) => {
                    c.bump();
                    Some(n.clone())
                }
                _ => None,
            };
            c.expect(&Tok::Dot)?;
            self.scope.push((kind, name));
            let body = self.expr(c);
            self.scope.pop();
            let body = body?;
            return match kw {
                "exists" => Ok(Pattern::exists(body)),
                "mu" => Ok(Pattern::mu(body)),
                other => self.notation(loc, other, vec![body]),
            };
        }
        self.app(c)
    }

    fn starts_atom(c: &Cursor<'_>) -> bool {
        match c.peek() {
            Some(Tok::Ident(s)) => !KEYWORDS.contains(&s.as_str()),
            Some(
                Tok::LParen
                | Tok::BotSym
                | Tok::TopSym
                | Tok::CeilOpen
                | Tok::FloorOpen
                | Tok::Lt
                | Tok::Hole,
            ) => true,
            _ => false,
        }
    }

    fn app(&mut self, c: &mut Cursor<'_>) -> Result<Pattern, ParseError> {
        let mut lhs = self.atom(c)?;
        loop {
            // `$` is optional: juxtaposition also applies
            if c.eat(&Tok::Dollar) || Self::starts_atom(c) {
                let rhs = self.atom(c)?;
                lhs = Pattern::app(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn atom(&mut self, c: &mut Cursor<'_>) -> Result<Pattern, ParseError> {
        let loc = c.loc();
        match c.peek() {
            Some(Tok::LParen) => {
                c.bump();
                let e = self.expr(c)?;
                c.expect(&Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::BotSym) => {
                c.bump();
                Ok(Pattern::Bot)
            }
            Some(Tok::TopSym) => {
                c.bump();
                self.notation(loc, "top", vec![])
            }
            Some(Tok::CeilOpen) => {
                c.bump();
                let e = self.expr(c)?;
                c.expect(&Tok::CeilClose)?;
                self.notation(loc, "ceil", vec![e])
            }
            Some(Tok::FloorOpen) => {
                c.bump();
                let e = self.expr(c)?;
                c.expect(&Tok::FloorClose)?;
                self.notation(loc, "floor", vec![e])
            }
            Some(Tok::Lt) => {
                c.bump();
                let a = self.expr(c)?;
                c.expect(&Tok::Comma)?;
                let b = self.expr(c)?;
                c.expect(&Tok::Gt)?;
                if !self.syntax.signature.contains("pair") {
                    return Err(ParseError::new(loc, "pair syntax `<_, _>` needs a declared symbol `pair`"));
                }
                Ok(Pattern::app(Pattern::app(Pattern::sym("pair"), a), b))
            }
            Some(Tok::Hole) if self.allow_hole => {
                c.bump();
                Ok(Pattern::svar(HOLE))
            }
            Some(Tok::Ident(name)) if !KEYWORDS.contains(&name.as_str()) => {
                c.bump();
                self.identifier(c, loc, name)
            }
            _ => Err(c.unexpected("a pattern")),
        }
    }

    fn identifier(&mut self, c: &mut Cursor<'_>, loc: Loc, name: &str) -> Result<Pattern, ParseError> {
        if name == "Bot" {
            return Ok(Pattern::Bot);
        }
        if name == "Top" {
            return self.notation(loc, "top", vec![]);
        }
        if let Some(digits) = index_literal(name, 'b') {
            return Ok(Pattern::BoundEVar(parse_index(loc, digits)?));
        }
        if let Some(digits) = index_literal(name, 'S') {
            return Ok(Pattern::BoundSVar(parse_index(loc, digits)?));
        }
        if let Some(p) = self.lookup_scope(name) {
            return Ok(p);
        }
        if let Some(i) = self.params.iter().position(|p| p == name) {
            return Ok(crate::syntax::notation::param(i));
        }
        if c.peek() == Some(&Tok::LParen) && self.syntax.notations.get(name).is_some() {
            c.bump();
            let mut args = Vec::new();
            if !c.eat(&Tok::RParen) {
                loop {
                    args.push(self.expr(c)?);
                    if c.eat(&Tok::RParen) {
                        break;
                    }
                    c.expect(&Tok::Comma)?;
                }
            }
            return self.notation(loc, name, args);
        }
        if self.syntax.signature.contains(name) {
            return Ok(Pattern::sym(name));
        }
        if let Some(def) = self.syntax.notations.get(name) {
            if def.arity() == 0 {
                return self.notation(loc, name, vec![]);
            }
        }
        if name.starts_with(|ch: char| ch.is_ascii_uppercase()) {
            Ok(Pattern::svar(name))
        } else {
            Ok(Pattern::evar(name))
        }
    }

    fn lookup_scope(&self, name: &str) -> Option<Pattern> {
        let mut ex: DbIndex = 0;
        let mut mu: DbIndex = 0;
        for (kind, binder) in self.scope.iter().rev() {
            if binder.as_deref() == Some(name) {
                return Some(match kind {
                    BinderKind::Element => Pattern::BoundEVar(ex),
                    BinderKind::Set => Pattern::BoundSVar(mu),
                });
            }
            match kind {
                BinderKind::Element => ex += 1,
                BinderKind::Set => mu += 1,
            }
        }
        None
    }

    fn notation(&self, loc: Loc, name: &str, args: Vec<Pattern>) -> Result<Pattern, ParseError> {
        match self.syntax.notations.apply(name, args) {
            None => Err(ParseError::new(loc, format!("unknown notation `{name}`"))),
            Some(Err(NotationError::Arity(n, want, got))) => Err(ParseError::new(
                loc,
                format!("notation `{n}` expects {want} argument(s), got {got}"),
            )),
            Some(Err(e)) => Err(ParseError::new(loc, e.to_string())),
            Some(Ok(p)) => Ok(p),
        }
    }
}

fn parse_index(loc: Loc, digits: &str) -> Result<DbIndex, ParseError> {
    digits
        .parse::<DbIndex>()
        .map_err(|_| ParseError::new(loc, format!("malformed de Bruijn index `{digits}`")))
}
