//! Tactic syntax.
//!
//! ```text
//! tactic ::= "mlIntro" [name] | "mlRevertLast" | "mlClear" name
//!          | "mlDestructOr" name "as" name name | "mlApply" name
//!          | "mlApplyMeta" lemma | "mlRewrite" lemma ["at" num]
//!          | "mlExact" name | "mlTauto" | "mlUnfold" ident {ident}
//!          | "remember" ident "as" ident
//! lemma  ::= ident [ "(" expr { "," expr } ")" ]
//! name   ::= string | ident
//! ```
//!
//! A trailing `.` is accepted, as in the Coq scripts the syntax mirrors.
//! Lemma arguments may contain a context hole `[]`.

use std::fmt;

use crate::format::lexer::{tokenize, Tok};
use crate::format::{Cursor, ParseError, PatternParser, Syntax};
use crate::syntax::Pattern;

/// A reference to a lemma from outside the proof state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaRef {
    pub name: String,
    pub args: Vec<Pattern>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tactic {
    Intro(Option<String>),
    RevertLast,
    Clear(String),
    DestructOr { hyp: String, left: String, right: String },
    Apply(String),
    ApplyMeta(LemmaRef),
    Rewrite { lemma: LemmaRef, at: usize },
    Exact(String),
    Tauto,
    /// Unfolds the named notations in the goal. Changes only the display.
    Unfold(Vec<String>),
    /// Shows the free element variable `var` as `alias` from now on.
    Remember { var: String, alias: String },
}

impl Tactic {
    pub fn name(&self) -> &'static str {
        match self {
            Tactic::Intro(_) => "mlIntro",
            Tactic::RevertLast => "mlRevertLast",
            Tactic::Clear(_) => "mlClear",
            Tactic::DestructOr { .. } => "mlDestructOr",
            Tactic::Apply(_) => "mlApply",
            Tactic::ApplyMeta(_) => "mlApplyMeta",
            Tactic::Rewrite { .. } => "mlRewrite",
            Tactic::Exact(_) => "mlExact",
            Tactic::Tauto => "mlTauto",
            Tactic::Unfold(_) => "mlUnfold",
            Tactic::Remember { .. } => "remember",
        }
    }

    /// Parses one tactic. Patterns are read with `syntax`.
    pub fn parse(text: &str, syntax: &Syntax) -> Result<Tactic, ParseError> {
        let mut toks = tokenize(text, false)?;
        if matches!(toks.last(), Some(t) if t.tok == Tok::Dot) {
            toks.pop();
        }
        let end = crate::format::Loc {
            line: 1,
            col: text.chars().count() + 1,
        };
        let mut c = Cursor::new(&toks, end);
        let head = c.ident()?;
        let t = match head.as_str() {
            "mlIntro" => Tactic::Intro(if c.at_end() { None } else { Some(name(&mut c)?) }),
            "mlRevertLast" => Tactic::RevertLast,
            "mlClear" => Tactic::Clear(name(&mut c)?),
            "mlDestructOr" => {
                let hyp = name(&mut c)?;
                if !c.eat_ident("as") {
                    return Err(c.unexpected("`as`"));
                }
                let left = name(&mut c)?;
                let right = name(&mut c)?;
                Tactic::DestructOr { hyp, left, right }
            }
            "mlApply" => Tactic::Apply(name(&mut c)?),
            "mlApplyMeta" => Tactic::ApplyMeta(lemma(&mut c, syntax)?),
            "mlRewrite" => {
                let lemma = lemma(&mut c, syntax)?;
                let at = if c.eat_ident("at") {
                    match c.bump() {
                        Some(Tok::Num(n)) if *n > 0 => *n as usize,
                        _ => return Err(ParseError::new(c.loc(), "expected a positive occurrence number")),
                    }
                } else {
                    1
                };
                Tactic::Rewrite { lemma, at }
            }
            "mlExact" => Tactic::Exact(name(&mut c)?),
            "mlTauto" => Tactic::Tauto,
            "mlUnfold" => {
                let mut names = vec![c.ident()?];
                while c.eat(&Tok::Comma) || matches!(c.peek(), Some(Tok::Ident(_))) {
                    names.push(c.ident()?);
                }
                Tactic::Unfold(names)
            }
            "remember" => {
                let var = c.ident()?;
                if !c.eat_ident("as") {
                    return Err(c.unexpected("`as`"));
                }
                Tactic::Remember { var, alias: c.ident()? }
            }
            other => {
                return Err(ParseError::new(
                    toks[0].loc,
                    format!("unknown tactic `{other}`"),
                ))
            }
        };
        if !c.at_end() {
            return Err(c.unexpected("end of tactic"));
        }
        Ok(t)
    }
}

fn name(c: &mut Cursor<'_>) -> Result<String, ParseError> {
    match c.peek() {
        Some(Tok::Str(s)) => {
            c.bump();
            Ok(s.clone())
        }
        Some(Tok::Ident(_)) => c.ident(),
        _ => Err(c.unexpected("hypothesis name")),
    }
}

fn lemma(c: &mut Cursor<'_>, syntax: &Syntax) -> Result<LemmaRef, ParseError> {
    let name = c.ident()?;
    let mut args = Vec::new();
    if c.eat(&Tok::LParen) {
        loop {
            args.push(PatternParser::new(syntax).with_holes().expr(c)?);
            if c.eat(&Tok::Comma) {
                continue;
            }
            c.expect(&Tok::RParen)?;
            break;
        }
    }
    Ok(LemmaRef { name, args })
}

fn quote(s: &str) -> String {
    format!("{s:?}")
}

impl fmt::Display for LemmaRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            let args: Vec<String> = self.args.iter().map(|a| a.to_string()).collect();
            write!(f, "({})", args.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Display for Tactic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        match self {
            Tactic::Intro(Some(n)) | Tactic::Clear(n) | Tactic::Apply(n) | Tactic::Exact(n) => {
                write!(f, " {}", quote(n))
            }
            Tactic::DestructOr { hyp, left, right } => {
                write!(f, " {} as {} {}", quote(hyp), quote(left), quote(right))
            }
            Tactic::ApplyMeta(l) => write!(f, " {l}"),
            Tactic::Rewrite { lemma, at } => write!(f, " {lemma} at {at}"),
            Tactic::Unfold(names) => write!(f, " {}", names.join(" ")),
            Tactic::Remember { var, alias } => write!(f, " {var} as {alias}"),
            Tactic::Intro(None) | Tactic::RevertLast | Tactic::Tauto => Ok(()),
        }
    }
}
