//! `.mlmodel` model files.
//!
//! ```text
//! model NAME
//!   elements one, two, f
//!   symbol one = {one}
//!   app f one = *
//!   app default = {}
//! endmodel
//! ```
//!
//! `*` is the whole carrier. Every pair of elements needs an `app` entry
//! unless an `app default` line supplies the missing ones. Symbols without a
//! `symbol` line are uninterpreted; evaluating them is an error.

use std::collections::BTreeMap;

use indexmap::IndexMap;

use super::lexer::{tokenize, Loc, Tok};
use super::pattern::Cursor;
use super::theory::{end_of_line, skip_newlines};
use super::{end_loc, ParseError};
use crate::semantics::{ElemSet, Model};
use crate::syntax::Symbol;

/// A set literal as written: `*` or a list of element names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetExpr {
    All,
    Elems(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFile {
    pub name: String,
    pub elements: Vec<String>,
    pub symbols: IndexMap<String, SetExpr>,
    pub app: IndexMap<(String, String), SetExpr>,
    pub default_app: Option<SetExpr>,
}

impl ModelFile {
    fn resolve(&self, s: &SetExpr, m_full: ElemSet, loc: &str) -> Result<ElemSet, String> {
        match s {
            SetExpr::All => Ok(m_full),
            SetExpr::Elems(names) => names
                .iter()
                .map(|n| {
                    self.elements
                        .iter()
                        .position(|e| e == n)
                        .ok_or_else(|| format!("{loc}: unknown element `{n}`"))
                })
                .collect(),
        }
    }

    /// Builds the model, checking that the application table is total.
    pub fn to_model(&self) -> Result<Model, String> {
        let n = self.elements.len();
        if n == 0 {
            return Err("the carrier must be nonempty".into());
        }
        if n > crate::semantics::MAX_CARRIER {
            return Err(format!(
                "carrier of {n} elements exceeds the supported maximum of {}",
                crate::semantics::MAX_CARRIER
            ));
        }
        let full = ElemSet::full(n);
        let default = match &self.default_app {
            Some(s) => Some(self.resolve(s, full, "app default")?),
            None => None,
        };
        let mut table = vec![None; n * n];
        for ((a, b), s) in &self.app {
            let ia = self.index(a)?;
            let ib = self.index(b)?;
            table[ia * n + ib] = Some(self.resolve(s, full, &format!("app {a} {b}"))?);
        }
        let mut filled = Vec::with_capacity(n * n);
        for (i, t) in table.into_iter().enumerate() {
            match t.or(default) {
                Some(s) => filled.push(s),
                None => {
                    return Err(format!(
                        "application table is not total: missing entry for ({}, {})",
                        self.elements[i / n],
                        self.elements[i % n]
                    ))
                }
            }
        }
        let mut symbols = BTreeMap::new();
        for (s, set) in &self.symbols {
            symbols.insert(Symbol::new(s), self.resolve(set, full, &format!("symbol {s}"))?);
        }
        Model::new(self.name.clone(), self.elements.clone(), |a, b| filled[a * n + b], symbols)
            .map_err(|e| e.to_string())
    }

    fn index(&self, e: &str) -> Result<usize, String> {
        self.elements
            .iter()
            .position(|x| x == e)
            .ok_or_else(|| format!("unknown element `{e}`"))
    }

    /// Renders a model file for `m` with an explicit, total table.
    pub fn from_model(m: &Model) -> ModelFile {
        let set = |s: ElemSet| {
            if s == m.full() && m.size() > 1 {
                SetExpr::All
            } else {
                SetExpr::Elems(m.names_of(s))
            }
        };
        let mut app = IndexMap::new();
        for a in 0..m.size() {
            for b in 0..m.size() {
                app.insert(
                    (m.element_name(a).to_owned(), m.element_name(b).to_owned()),
                    set(m.app(a, b)),
                );
            }
        }
        ModelFile {
            name: m.name().to_owned(),
            elements: m.elements().to_vec(),
            symbols: m.symbols().map(|(k, v)| (k.to_string(), set(v))).collect(),
            app,
            default_app: None,
        }
    }

    pub fn render(&self) -> String {
        let set = |s: &SetExpr| match s {
            SetExpr::All => "*".to_owned(),
            SetExpr::Elems(v) => format!("{{{}}}", v.join(", ")),
        };
        let mut out = format!("model {}\n  elements {}\n", self.name, self.elements.join(", "));
        for (k, v) in &self.symbols {
            out.push_str(&format!("  symbol {k} = {}\n", set(v)));
        }
        for ((a, b), v) in &self.app {
            out.push_str(&format!("  app {a} {b} = {}\n", set(v)));
        }
        if let Some(d) = &self.default_app {
            out.push_str(&format!("  app default = {}\n", set(d)));
        }
        out.push_str("endmodel\n");
        out
    }
}

pub fn parse_model(text: &str) -> Result<ModelFile, ParseError> {
    let toks = tokenize(text, true)?;
    let mut c = Cursor::new(&toks, end_loc(text));
    skip_newlines(&mut c);
    if !c.eat_ident("model") {
        return Err(c.unexpected("`model`"));
    }
    let name = c.ident()?;
    end_of_line(&mut c)?;
    let mut file = ModelFile {
        name,
        elements: Vec::new(),
        symbols: IndexMap::new(),
        app: IndexMap::new(),
        default_app: None,
    };
    let mut seen_elements = false;
    loop {
        skip_newlines(&mut c);
        let loc = c.loc();
        let kw = c.ident().map_err(|_| c.unexpected("a declaration or `endmodel`"))?;
        match kw.as_str() {
            "endmodel" => break,
            "elements" => {
                if seen_elements {
                    return Err(ParseError::new(loc, "duplicate `elements` line"));
                }
                seen_elements = true;
                loop {
                    let e = c.ident()?;
                    if file.elements.contains(&e) {
                        return Err(ParseError::new(loc, format!("duplicate element `{e}`")));
                    }
                    file.elements.push(e);
                    if !c.eat(&Tok::Comma) {
                        break;
                    }
                }
            }
            "symbol" => {
                let s = c.ident()?;
                c.expect(&Tok::Eq)?;
                let set = set_expr(&mut c, &file, loc)?;
                if file.symbols.insert(s.clone(), set).is_some() {
                    return Err(ParseError::new(loc, format!("duplicate symbol `{s}`")));
                }
            }
            "app" => {
                let a = c.ident()?;
                if a == "default" && c.peek() == Some(&Tok::Eq) {
                    c.expect(&Tok::Eq)?;
                    let set = set_expr(&mut c, &file, loc)?;
                    if file.default_app.replace(set).is_some() {
                        return Err(ParseError::new(loc, "duplicate `app default`"));
                    }
                } else {
                    let b = c.ident()?;
                    for e in [&a, &b] {
                        check_element(&file, e, loc)?;
                    }
                    c.expect(&Tok::Eq)?;
                    let set = set_expr(&mut c, &file, loc)?;
                    if file.app.insert((a.clone(), b.clone()), set).is_some() {
                        return Err(ParseError::new(loc, format!("duplicate entry `app {a} {b}`")));
                    }
                }
            }
            other => {
                return Err(ParseError::new(loc, format!("unknown declaration `{other}`")));
            }
        }
        end_of_line(&mut c)?;
    }
    skip_newlines(&mut c);
    if !c.at_end() {
        return Err(c.unexpected("end of file"));
    }
    if file.elements.is_empty() {
        return Err(ParseError::new(end_loc(text), "the carrier must be nonempty"));
    }
    if let Err(e) = file.to_model() {
        return Err(ParseError::new(end_loc(text), e));
    }
    Ok(file)
}

fn check_element(file: &ModelFile, e: &str, loc: Loc) -> Result<(), ParseError> {
    if file.elements.iter().any(|x| x == e) {
        Ok(())
    } else {
        Err(ParseError::new(loc, format!("unknown element `{e}`")))
    }
}

fn set_expr(c: &mut Cursor<'_>, file: &ModelFile, loc: Loc) -> Result<SetExpr, ParseError> {
    if c.eat(&Tok::Star) {
        return Ok(SetExpr::All);
    }
    c.expect(&Tok::LBrace)?;
    let mut elems = Vec::new();
    if !c.eat(&Tok::RBrace) {
        loop {
            let e = c.ident()?;
            check_element(file, &e, loc)?;
            if !elems.contains(&e) {
                elems.push(e);
            }
            if c.eat(&Tok::RBrace) {
                break;
            }
            c.expect(&Tok::Comma)?;
        }
    }
    Ok(SetExpr::Elems(elems))
}
