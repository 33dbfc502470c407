//! Shipped theories and models, and the semantic facts checked on them.
//!
//! The fixtures live in the workspace `theories/` directory and are also
//! compiled in, so they can be loaded by name without a file system.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

use crate::derived::definedness::{ceil_core, floor_core, DEF_SYMBOL};
use crate::format::model::parse_model;
use crate::format::theory::{parse_theory_with, TheoryFile};
use crate::format::{ParseError, Syntax};
use crate::kernel::Theory;
use crate::semantics::{eval, holds, ElemSet, EvalError, Model, Valuation};
use crate::syntax::notation::{and, iff, or};
use crate::syntax::{expand, DbIndex, NotationEnv, Pattern};

pub const DEF_MLTH: &str = include_str!("../../../../theories/def.mlth");
pub const REL_MLTH: &str = include_str!("../../../../theories/relations.mlth");
pub const COUNTEREXAMPLE_MLMODEL: &str = include_str!("../../../../theories/counterexample.mlmodel");
pub const COUNTEREXAMPLE_DEF_MLMODEL: &str =
    include_str!("../../../../theories/counterexample_def.mlmodel");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("unknown theory `{0}`")]
    UnknownTheory(String),
    #[error("{file}: {error}")]
    Parse { file: String, error: ParseError },
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Model(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A theory ready for use: its concrete syntax and its kernel axioms.
#[derive(Clone, Debug)]
pub struct LoadedTheory {
    pub file: TheoryFile,
    pub theory: Arc<Theory>,
}

impl LoadedTheory {
    pub fn from_file(file: TheoryFile) -> Self {
        let theory = Arc::new(Theory::new(file.name.clone(), file.all_axioms()));
        LoadedTheory { file, theory }
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn syntax(&self) -> &Syntax {
        &self.file.syntax
    }

    /// The theory with no axioms and only the built-in notations.
    pub fn empty() -> Self {
        let file = parse_theory_with("spec empty\nendspec\n", &|_| None).expect("empty theory");
        LoadedTheory::from_file(file)
    }
}

/// Theories by name. Sources are kept so imports resolve in any order.
#[derive(Clone, Debug, Default)]
pub struct TheoryLibrary {
    sources: IndexMap<String, (String, String)>,
}

impl TheoryLibrary {
    /// The empty theory, DEF and REL.
    pub fn builtin() -> Self {
        let mut lib = TheoryLibrary::default();
        lib.sources.insert("empty".into(), ("<builtin>".into(), "spec empty\nendspec\n".into()));
        lib.add_source("def.mlth", DEF_MLTH).expect("builtin DEF");
        lib.add_source("relations.mlth", REL_MLTH).expect("builtin REL");
        lib
    }

    /// Registers a theory source under the name its `spec` line declares.
    pub fn add_source(&mut self, file: &str, text: &str) -> Result<String, TheoryError> {
        let name = spec_name(text).ok_or_else(|| TheoryError::Parse {
            file: file.into(),
            error: ParseError::new(crate::format::Loc { line: 1, col: 1 }, "expected `spec NAME`"),
        })?;
        self.sources.insert(name.clone(), (file.into(), text.into()));
        Ok(name)
    }

    /// Adds every `.mlth` file of a directory.
    pub fn add_dir(&mut self, dir: &Path) -> Result<(), TheoryError> {
        let entries = std::fs::read_dir(dir).map_err(|e| TheoryError::Io(format!("{}: {e}", dir.display())))?;
        let mut paths: Vec<_> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "mlth"))
            .collect();
        paths.sort();
        for p in paths {
            let text = std::fs::read_to_string(&p).map_err(|e| TheoryError::Io(format!("{}: {e}", p.display())))?;
            self.add_source(&p.display().to_string(), &text)?;
        }
        Ok(())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.sources.keys().map(String::as_str)
    }

    pub fn load(&self, name: &str) -> Result<LoadedTheory, TheoryError> {
        self.parse(name, &mut Vec::new()).map(LoadedTheory::from_file)
    }

    fn parse(&self, name: &str, stack: &mut Vec<String>) -> Result<TheoryFile, TheoryError> {
        let (file, text) = self
            .sources
            .get(name)
            .ok_or_else(|| TheoryError::UnknownTheory(name.into()))?;
        if stack.iter().any(|s| s == name) {
            return Err(TheoryError::Precondition(format!("import cycle through `{name}`")));
        }
        stack.push(name.into());
        // resolve imports eagerly so the parser callback stays infallible
        let mut deps = BTreeMap::new();
        for dep in import_names(text) {
            if let Ok(t) = self.parse(&dep, stack) {
                deps.insert(dep, t);
            }
        }
        stack.pop();
        parse_theory_with(text, &|d| deps.get(d).cloned()).map_err(|error| TheoryError::Parse {
            file: file.clone(),
            error,
        })
    }
}

fn spec_name(text: &str) -> Option<String> {
    text.lines()
        .map(|l| l.split("--").next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .and_then(|l| l.strip_prefix("spec "))
        .map(|n| n.trim().to_owned())
}

fn import_names(text: &str) -> Vec<String> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix("import "))
        .map(|n| n.split("--").next().unwrap_or("").trim().to_owned())
        .collect()
}

/// Parses one of the shipped models.
pub fn builtin_model(name: &str) -> Result<Model, TheoryError> {
    let text = match name {
        "counterexample" => COUNTEREXAMPLE_MLMODEL,
        "counterexample_def" => COUNTEREXAMPLE_DEF_MLMODEL,
        other => return Err(TheoryError::Model(format!("unknown model `{other}`"))),
    };
    let file = parse_model(text).map_err(|error| TheoryError::Parse {
        file: format!("{name}.mlmodel"),
        error,
    })?;
    file.to_model().map_err(TheoryError::Model)
}

/// The definedness axiom `⌈ x ⌉` in core form.
pub fn definedness_axiom() -> Pattern {
    ceil_core(&Pattern::evar("x"))
}

/// `M ⊨ ⌈ x ⌉`
pub fn satisfies_def(m: &Model) -> Result<bool, TheoryError> {
    if m.symbol(&crate::syntax::Symbol::new(DEF_SYMBOL)).is_none() {
        return Ok(false);
    }
    Ok(holds(m, &definedness_axiom())?)
}

fn require_def(m: &Model) -> Result<(), TheoryError> {
    if satisfies_def(m)? {
        Ok(())
    } else {
        Err(TheoryError::Precondition(format!(
            "model `{}` does not satisfy the definedness axiom",
            m.name()
        )))
    }
}

/// Both sides of a semantic equivalence and whether they agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    pub lhs: bool,
    pub rhs: bool,
}

impl LemmaCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// `⟦φ⟧ ≠ ∅` and `⟦⌈ φ ⌉⟧ = M`, without checking that `M` satisfies DEF.
pub fn definedness_sides(m: &Model, rho: &Valuation, p: &Pattern) -> Result<LemmaCheck, TheoryError> {
    Ok(LemmaCheck {
        lhs: !eval(m, rho, p)?.is_empty(),
        rhs: eval(m, rho, &ceil_core(&expand(p)))? == m.full(),
    })
}

/// `⟦φ⟧ ≠ ∅ ⟺ ⟦⌈ φ ⌉⟧ = M` on a model of DEF.
pub fn definedness_not_empty_iff(m: &Model, rho: &Valuation, p: &Pattern) -> Result<LemmaCheck, TheoryError> {
    require_def(m)?;
    definedness_sides(m, rho, p)
}

/// `⟦φ⟧ ≠ M ⟺ ⟦⌊ φ ⌋⟧ = ∅` on a model of DEF.
pub fn totality_not_full_iff(m: &Model, rho: &Valuation, p: &Pattern) -> Result<LemmaCheck, TheoryError> {
    require_def(m)?;
    Ok(LemmaCheck {
        lhs: eval(m, rho, p)? != m.full(),
        rhs: eval(m, rho, &floor_core(&expand(p)))?.is_empty(),
    })
}

/// `φ₁ = φ₂ ≡ ⌊ φ₁ <---> φ₂ ⌋` in core form.
pub fn equal_core(p: &Pattern, q: &Pattern) -> Pattern {
    floor_core(&expand(&iff(p.clone(), q.clone())))
}

/// `⟦φ₁ = φ₂⟧ = M ⟺ ⟦φ₁⟧ = ⟦φ₂⟧` on a model of DEF.
pub fn equal_iff_interpr_same(
    m: &Model,
    rho: &Valuation,
    p: &Pattern,
    q: &Pattern,
) -> Result<LemmaCheck, TheoryError> {
    require_def(m)?;
    Ok(LemmaCheck {
        lhs: eval(m, rho, &equal_core(p, q))? == m.full(),
        rhs: eval(m, rho, p)? == eval(m, rho, q)?,
    })
}

/// What [`counterexample_suite`] finds in the counterexample model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleReport {
    /// `M ⊨ ∃ . (f x <---> b0)`
    pub exists_iff_holds: bool,
    pub f_one: ElemSet,
    pub f_two: ElemSet,
    pub carrier: ElemSet,
    /// `|⟦f $ one⟧| = 1`
    pub f_functional_on_one: bool,
}

/// The pattern `∃ . (f x <---> b0)`.
pub fn function_like_pattern() -> Pattern {
    Pattern::exists(iff(
        Pattern::app(Pattern::sym("f"), Pattern::evar("x")),
        Pattern::BoundEVar(0),
    ))
}

/// Loads the counterexample model and evaluates the claims made about it.
pub fn counterexample_suite() -> Result<CounterexampleReport, TheoryError> {
    let m = builtin_model("counterexample")?;
    let rho = Valuation::new();
    let f_one = eval(&m, &rho, &Pattern::app(Pattern::sym("f"), Pattern::sym("one")))?;
    let f_two = eval(&m, &rho, &Pattern::app(Pattern::sym("f"), Pattern::sym("two")))?;
    Ok(CounterexampleReport {
        exists_iff_holds: holds(&m, &function_like_pattern())?,
        f_one,
        f_two,
        carrier: m.full(),
        f_functional_on_one: f_one.len() == 1,
    })
}

/// `x ∈ φ ≡ ⌈ x and φ ⌉` in core form.
pub fn member_core(x: &Pattern, p: &Pattern) -> Pattern {
    ceil_core(&expand(&and(x.clone(), p.clone())))
}

/// `⟨ a, b ⟩`
pub fn pair(a: Pattern, b: Pattern) -> Pattern {
    Pattern::app(Pattern::app(Pattern::sym("pair"), a), b)
}

/// `μ . R or ∃ . ∃ . ∃ . ⟨b2, b0⟩ and ⟨b2, b1⟩ ∈ S0 and ⟨b1, b0⟩ ∈ S0`,
/// the transitive closure of a relation `r` given as a set of pairs.
/// Membership is the `in` notation of `env`.
pub fn transitive_closure(env: &NotationEnv, r: &Pattern, pair_symbol: &str) -> Result<Pattern, TheoryError> {
    let member = env
        .get("in")
        .ok_or_else(|| TheoryError::Precondition("the membership notation `in` is not defined".into()))?;
    let b = |i: DbIndex| Pattern::BoundEVar(i);
    let pr = |x, y| Pattern::app(Pattern::app(Pattern::sym(pair_symbol), x), y);
    let inn = |x: Pattern| member.apply(vec![x, Pattern::BoundSVar(0)]).expect("`in` is binary");
    let body = and(
        and(pr(b(2), b(0)), inn(pr(b(2), b(1)))),
        inn(pr(b(1), b(0))),
    );
    Ok(Pattern::mu(or(
        r.clone(),
        Pattern::exists(Pattern::exists(Pattern::exists(body))),
    )))
}
