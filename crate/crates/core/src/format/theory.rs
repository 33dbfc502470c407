//! `.mlth` theory files.
//!
//! ```text
//! spec DEF
//!   symbol def
//!   notation ceil(p) := def $ p
//!   notation floor(p) := ! ⌈ ! p ⌉
//!   axiom Definedness : def $ x
//! endspec
//! ```
//!
//! One declaration per line; `--` starts a comment. `import NAME` brings in
//! the symbols, notations and axioms of another theory, which the caller
//! resolves.

use indexmap::IndexMap;

use super::lexer::{tokenize, Tok};
use super::pattern::{index_literal, is_keyword, Cursor, PatternParser};
use super::{end_loc, ParseError, Syntax};
use crate::syntax::{expand, well_formed, NotationDef, Pattern, Symbol};

/// A parsed theory. `syntax` already contains everything imported.
#[derive(Clone, Debug)]
pub struct TheoryFile {
    pub name: String,
    pub imports: Vec<String>,
    /// Symbols declared in this file (not counting imports).
    pub symbols: Vec<Symbol>,
    /// Notations declared in this file (not counting imports).
    pub notations: Vec<String>,
    /// Axioms declared in this file, folded as written.
    pub axioms: IndexMap<String, Pattern>,
    /// Axioms reachable through imports.
    pub imported_axioms: IndexMap<String, Pattern>,
    pub syntax: Syntax,
}

impl TheoryFile {
    /// Own and imported axioms, imported first.
    pub fn all_axioms(&self) -> IndexMap<String, Pattern> {
        let mut all = self.imported_axioms.clone();
        all.extend(self.axioms.iter().map(|(k, v)| (k.clone(), v.clone())));
        all
    }
}

/// Parses a theory without imports.
pub fn parse_theory(text: &str) -> Result<TheoryFile, ParseError> {
    parse_theory_with(text, &|_| None)
}

/// Parses a theory, resolving `import` lines through `resolve`.
pub fn parse_theory_with(
    text: &str,
    resolve: &dyn Fn(&str) -> Option<TheoryFile>,
) -> Result<TheoryFile, ParseError> {
    let toks = tokenize(text, true)?;
    let mut c = Cursor::new(&toks, end_loc(text));
    skip_newlines(&mut c);
    if !c.eat_ident("spec") {
        return Err(c.unexpected("`spec`"));
    }
    let name = c.ident()?;
    end_of_line(&mut c)?;
    let mut file = TheoryFile {
        name,
        imports: Vec::new(),
        symbols: Vec::new(),
        notations: Vec::new(),
        axioms: IndexMap::new(),
        imported_axioms: IndexMap::new(),
        syntax: Syntax::default(),
    };
    loop {
        skip_newlines(&mut c);
        let loc = c.loc();
        let kw = c.ident().map_err(|_| c.unexpected("a declaration or `endspec`"))?;
        match kw.as_str() {
            "endspec" => break,
            "import" => {
                let dep = c.ident()?;
                let imported = resolve(&dep)
                    .ok_or_else(|| ParseError::new(loc, format!("cannot resolve import `{dep}`")))?;
                file.syntax.signature.merge(&imported.syntax.signature);
                file.syntax.notations.import(&imported.syntax.notations);
                for (k, v) in imported.all_axioms() {
                    file.imported_axioms.entry(k).or_insert(v);
                }
                file.imports.push(dep);
            }
            "symbol" => loop {
                let s = c.ident()?;
                if is_keyword(&s) || index_literal(&s, 'b').is_some() || index_literal(&s, 'S').is_some() {
                    return Err(ParseError::new(loc, format!("`{s}` is reserved and cannot be a symbol")));
                }
                if !file.syntax.signature.declare(s.as_str()) {
                    return Err(ParseError::new(loc, format!("duplicate symbol `{s}`")));
                }
                file.symbols.push(Symbol::new(&s));
                if !c.eat(&Tok::Comma) {
                    break;
                }
            },
            "notation" => {
                let nname = c.ident()?;
                c.expect(&Tok::LParen)?;
                let mut params = Vec::new();
                if !c.eat(&Tok::RParen) {
                    loop {
                        params.push(c.ident()?);
                        if c.eat(&Tok::RParen) {
                            break;
                        }
                        c.expect(&Tok::Comma)?;
                    }
                }
                c.expect(&Tok::Assign)?;
                let arity = params.len();
                let body = PatternParser::new(&file.syntax)
                    .with_params(params)
                    .expr(&mut c)?;
                let def = NotationDef::template(nname.clone(), arity, body)
                    .map_err(|e| ParseError::new(loc, e.to_string()))?;
                file.syntax
                    .notations
                    .define(def)
                    .map_err(|e| ParseError::new(loc, e.to_string()))?;
                file.notations.push(nname);
            }
            "axiom" => {
                let aname = c.ident()?;
                c.expect(&Tok::Colon)?;
                let p = PatternParser::new(&file.syntax).expr(&mut c)?;
                if !well_formed(&expand(&p)) {
                    return Err(ParseError::new(loc, format!("axiom `{aname}` is not well-formed")));
                }
                if file.axioms.contains_key(&aname) || file.imported_axioms.contains_key(&aname) {
                    return Err(ParseError::new(loc, format!("duplicate axiom `{aname}`")));
                }
                file.axioms.insert(aname, p);
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
    Ok(file)
}

pub(crate) fn skip_newlines(c: &mut Cursor<'_>) {
    while c.eat(&Tok::Newline) {}
}

pub(crate) fn end_of_line(c: &mut Cursor<'_>) -> Result<(), ParseError> {
    if c.at_end() || c.eat(&Tok::Newline) {
        Ok(())
    } else {
        Err(c.unexpected("end of line"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_theory() {
        let t = parse_theory("spec T\n symbol a, b\n axiom A1 : a ---> a\nendspec\n").unwrap();
        assert_eq!(t.name, "T");
        assert_eq!(t.symbols.len(), 2);
        assert_eq!(t.axioms.len(), 1);
        assert_eq!(
            t.axioms["A1"],
            Pattern::imp(Pattern::sym("a"), Pattern::sym("a"))
        );
    }

    #[test]
    fn rejects_duplicate_axioms() {
        let err = parse_theory("spec T\naxiom A : Bot\naxiom A : Bot\nendspec").unwrap_err();
        assert!(err.message.contains("duplicate axiom"));
        assert_eq!(err.loc.line, 3);
    }

    #[test]
    fn rejects_ill_formed_axioms() {
        let err = parse_theory("spec T\naxiom A : exists . b1\nendspec").unwrap_err();
        assert!(err.message.contains("not well-formed"));
    }

    #[test]
    fn unresolved_import() {
        let err = parse_theory("spec T\nimport DEF\nendspec").unwrap_err();
        assert!(err.message.contains("cannot resolve import `DEF`"));
    }

    #[test]
    fn imports_bring_syntax_and_axioms() {
        let base = parse_theory("spec B\nsymbol s\nnotation twice(p) := s $ (s $ p)\naxiom Ax : s\nendspec").unwrap();
        let t = parse_theory_with(
            "spec T\nimport B\naxiom Mine : twice(Bot)\nendspec",
            &|n| (n == "B").then(|| base.clone()),
        )
        .unwrap();
        assert_eq!(t.imports, vec!["B".to_string()]);
        assert_eq!(t.all_axioms().len(), 2);
        assert_eq!(
            expand(&t.axioms["Mine"]),
            Pattern::app(Pattern::sym("s"), Pattern::app(Pattern::sym("s"), Pattern::Bot))
        );
    }
}
