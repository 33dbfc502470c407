//! Derived notations as explicit AST nodes.
//!
//! A notation node keeps its arguments folded so that printing can show
//! `⌈ φ ⌉` or `φ = ψ` instead of their (much larger) expansion. The kernel
//! never sees notation nodes: everything is run through [`expand`] first.
//!
//! Notations are defined by templates whose parameters are the reserved set
//! variables `#0`, `#1`, .... Instantiation plugs arguments in *without*
//! index shifting, which is exactly what binder notations such as `∀` need:
//! the argument's dangling `b0` refers to the binder the template introduces.
//! For every parameter the definition records how many `∃` and `μ` binders
//! sit above it, so that substitution can be pushed through a folded node.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock};

use indexmap::IndexMap;
use thiserror::Error;

use super::pattern::{DbIndex, Pattern};

const PARAM_PREFIX: char = '#';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotationError {
    #[error("notation `{0}`: parameter #{1} out of range")]
    ParamOutOfRange(String, usize),
    #[error("notation `{0}`: parameter #{1} occurs under different binder depths")]
    InconsistentDepth(String, usize),
    #[error("notation `{0}`: parameter #{1} is never used")]
    UnusedParam(String, usize),
    #[error("notation `{0}`: template must not contain free variables or dangling indices")]
    NotClosed(String),
    #[error("notation `{0}` expects {1} argument(s), got {2}")]
    Arity(String, usize, usize),
    #[error("notation `{0}` is already defined")]
    Duplicate(String),
}

#[derive(Clone)]
enum Body {
    Template(Pattern),
    /// `ν . φ ≡ ! μ . ! φ[! S̄0 / S̄0]`
    GreatestFixpoint,
}

/// The definition of a derived notation.
#[derive(Clone)]
pub struct NotationDef {
    name: String,
    arity: usize,
    body: Body,
    /// Per parameter: number of `∃` binders above it in the expansion.
    ex_offsets: Vec<DbIndex>,
    /// Per parameter: number of `μ` binders above it in the expansion.
    mu_offsets: Vec<DbIndex>,
}

impl PartialEq for NotationDef {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.arity == other.arity
    }
}

impl Eq for NotationDef {}

impl Hash for NotationDef {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state);
        self.arity.hash(state);
    }
}

impl fmt::Debug for NotationDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NotationDef({}/{})", self.name, self.arity)
    }
}

/// A folded notation applied to its arguments.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NotationApp {
    pub def: Arc<NotationDef>,
    pub args: Vec<Pattern>,
}

/// The template placeholder for parameter `i`.
pub fn param(i: usize) -> Pattern {
    Pattern::svar(format!("{PARAM_PREFIX}{i}"))
}

fn param_index(p: &Pattern) -> Option<usize> {
    match p {
        Pattern::FreeSVar(x) => x.as_str().strip_prefix(PARAM_PREFIX)?.parse().ok(),
        _ => None,
    }
}

impl NotationDef {
    /// Defines a notation from a template over the placeholders `#0..#arity`.
    pub fn template(
        name: impl Into<String>,
        arity: usize,
        body: Pattern,
    ) -> Result<NotationDef, NotationError> {
        let name = name.into();
        let mut ex = vec![None; arity];
        let mut mu = vec![None; arity];
        scan_template(&name, &body, 0, 0, &mut ex, &mut mu)?;
        let mut ex_offsets = Vec::with_capacity(arity);
        let mut mu_offsets = Vec::with_capacity(arity);
        for i in 0..arity {
            match (ex[i], mu[i]) {
                (Some(e), Some(m)) => {
                    ex_offsets.push(e);
                    mu_offsets.push(m);
                }
                _ => return Err(NotationError::UnusedParam(name, i)),
            }
        }
        Ok(NotationDef {
            name,
            arity,
            body: Body::Template(body),
            ex_offsets,
            mu_offsets,
        })
    }

    fn greatest_fixpoint() -> NotationDef {
        NotationDef {
            name: "nu".into(),
            arity: 1,
            body: Body::GreatestFixpoint,
            ex_offsets: vec![0],
            mu_offsets: vec![1],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of `∃` binders the expansion places above argument `i`.
    pub fn ex_offset(&self, i: usize) -> DbIndex {
        self.ex_offsets[i]
    }

    /// Number of `μ` binders the expansion places above argument `i`.
    pub fn mu_offset(&self, i: usize) -> DbIndex {
        self.mu_offsets[i]
    }

    /// The template with placeholders, if this is a template notation.
    pub fn template_body(&self) -> Option<&Pattern> {
        match &self.body {
            Body::Template(t) => Some(t),
            Body::GreatestFixpoint => None,
        }
    }

    /// Builds a folded node. Fails on an arity mismatch.
    pub fn apply(self: &Arc<Self>, args: Vec<Pattern>) -> Result<Pattern, NotationError> {
        if args.len() != self.arity {
            return Err(NotationError::Arity(self.name.clone(), self.arity, args.len()));
        }
        Ok(Pattern::Notation(Arc::new(NotationApp {
            def: Arc::clone(self),
            args,
        })))
    }

    /// One unfolding step. The result may still contain notation nodes
    /// (both from the template and inside the arguments).
    pub fn unfold(&self, args: &[Pattern]) -> Pattern {
        match &self.body {
            Body::Template(t) => plug_params(t, args),
            Body::GreatestFixpoint => {
                let negated = negate_bound_svar(&args[0], 0);
                not(Pattern::mu(not(negated)))
            }
        }
    }
}

fn scan_template(
    name: &str,
    p: &Pattern,
    ex: DbIndex,
    mu: DbIndex,
    ex_seen: &mut [Option<DbIndex>],
    mu_seen: &mut [Option<DbIndex>],
) -> Result<(), NotationError> {
    if let Some(i) = param_index(p) {
        if i >= ex_seen.len() {
            return Err(NotationError::ParamOutOfRange(name.into(), i));
        }
        for (seen, depth) in [(&mut ex_seen[i], ex), (&mut mu_seen[i], mu)] {
            match seen {
                Some(d) if *d != depth => {
                    return Err(NotationError::InconsistentDepth(name.into(), i))
                }
                _ => *seen = Some(depth),
            }
        }
        return Ok(());
    }
    match p {
        Pattern::FreeEVar(_) | Pattern::FreeSVar(_) => Err(NotationError::NotClosed(name.into())),
        Pattern::BoundEVar(n) if *n >= ex => Err(NotationError::NotClosed(name.into())),
        Pattern::BoundSVar(n) if *n >= mu => Err(NotationError::NotClosed(name.into())),
        Pattern::App(l, r) | Pattern::Imp(l, r) => {
            scan_template(name, l, ex, mu, ex_seen, mu_seen)?;
            scan_template(name, r, ex, mu, ex_seen, mu_seen)
        }
        Pattern::Exists(b) => scan_template(name, b, ex + 1, mu, ex_seen, mu_seen),
        Pattern::Mu(b) => scan_template(name, b, ex, mu + 1, ex_seen, mu_seen),
        Pattern::Notation(n) => {
            for (i, a) in n.args.iter().enumerate() {
                scan_template(
                    name,
                    a,
                    ex + n.def.ex_offset(i),
                    mu + n.def.mu_offset(i),
                    ex_seen,
                    mu_seen,
                )?;
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

fn plug_params(t: &Pattern, args: &[Pattern]) -> Pattern {
    if let Some(i) = param_index(t) {
        return args[i].clone();
    }
    match t {
        Pattern::App(l, r) => Pattern::app(plug_params(l, args), plug_params(r, args)),
        Pattern::Imp(l, r) => Pattern::imp(plug_params(l, args), plug_params(r, args)),
        Pattern::Exists(b) => Pattern::exists(plug_params(b, args)),
        Pattern::Mu(b) => Pattern::mu(plug_params(b, args)),
        Pattern::Notation(n) => Pattern::Notation(Arc::new(NotationApp {
            def: Arc::clone(&n.def),
            args: n.args.iter().map(|a| plug_params(a, args)).collect(),
        })),
        other => other.clone(),
    }
}

/// Replaces every occurrence of the set index bound `depth` binders up by its
/// negation. Used by the `ν` expansion.
fn negate_bound_svar(p: &Pattern, depth: DbIndex) -> Pattern {
    match p {
        Pattern::BoundSVar(n) if *n == depth => not(p.clone()),
        Pattern::App(l, r) => {
            Pattern::app(negate_bound_svar(l, depth), negate_bound_svar(r, depth))
        }
        Pattern::Imp(l, r) => {
            Pattern::imp(negate_bound_svar(l, depth), negate_bound_svar(r, depth))
        }
        Pattern::Exists(b) => Pattern::exists(negate_bound_svar(b, depth)),
        Pattern::Mu(b) => Pattern::mu(negate_bound_svar(b, depth + 1)),
        Pattern::Notation(n) => Pattern::Notation(Arc::new(NotationApp {
            def: Arc::clone(&n.def),
            args: n
                .args
                .iter()
                .enumerate()
                .map(|(i, a)| negate_bound_svar(a, depth + n.def.mu_offset(i)))
                .collect(),
        })),
        other => other.clone(),
    }
}

/// Removes every notation node, producing a core pattern.
pub fn expand(p: &Pattern) -> Pattern {
    if !p.has_notation() {
        return p.clone();
    }
    match p {
        Pattern::App(l, r) => Pattern::app(expand(l), expand(r)),
        Pattern::Imp(l, r) => Pattern::imp(expand(l), expand(r)),
        Pattern::Exists(b) => Pattern::exists(expand(b)),
        Pattern::Mu(b) => Pattern::mu(expand(b)),
        Pattern::Notation(n) => expand(&n.def.unfold(&n.args)),
        other => other.clone(),
    }
}

/// Unfolds notation nodes at the root until a core constructor shows up.
pub fn unfold_head(p: &Pattern) -> Pattern {
    let mut cur = p.clone();
    while let Pattern::Notation(n) = &cur {
        cur = n.def.unfold(&n.args);
    }
    cur
}

/// Unfolds the head and the spine of right-nested implications, keeping the
/// premises folded. `! ⌊ φ ⌋` becomes `⌊ φ ⌋ ---> ⊥`.
pub fn unfold_imp_spine(p: &Pattern) -> Pattern {
    match unfold_head(p) {
        Pattern::Imp(l, r) => Pattern::Imp(l, Arc::new(unfold_imp_spine(&r))),
        other => other,
    }
}

// Built-in notations. Their names double as keys for the concrete syntax.

macro_rules! builtin {
    ($id:ident, $name:literal, $arity:literal, $body:expr) => {
        static $id: LazyLock<Arc<NotationDef>> = LazyLock::new(|| {
            Arc::new(NotationDef::template($name, $arity, $body).expect("builtin notation"))
        });
    };
}

builtin!(NOT, "not", 1, Pattern::imp(param(0), Pattern::Bot));
builtin!(OR, "or", 2, Pattern::imp(not(param(0)), param(1)));
builtin!(AND, "and", 2, not(or(not(param(0)), not(param(1)))));
builtin!(
    IFF,
    "iff",
    2,
    and(
        Pattern::imp(param(0), param(1)),
        Pattern::imp(param(1), param(0))
    )
);
builtin!(TOP, "top", 0, not(Pattern::Bot));
builtin!(FORALL, "forall", 1, not(Pattern::exists(not(param(0)))));
static NU: LazyLock<Arc<NotationDef>> = LazyLock::new(|| Arc::new(NotationDef::greatest_fixpoint()));

fn fold(def: &Arc<NotationDef>, args: Vec<Pattern>) -> Pattern {
    def.apply(args).expect("builtin arity")
}

/// `! φ`
pub fn not(p: Pattern) -> Pattern {
    fold(&NOT, vec![p])
}

/// `φ or ψ ≡ ! φ ---> ψ`
pub fn or(p: Pattern, q: Pattern) -> Pattern {
    fold(&OR, vec![p, q])
}

/// `φ and ψ ≡ ! (! φ or ! ψ)`
pub fn and(p: Pattern, q: Pattern) -> Pattern {
    fold(&AND, vec![p, q])
}

/// `φ <---> ψ`
pub fn iff(p: Pattern, q: Pattern) -> Pattern {
    fold(&IFF, vec![p, q])
}

/// `⊤ ≡ ! ⊥`
pub fn top() -> Pattern {
    fold(&TOP, vec![])
}

/// `forall . φ ≡ ! exists . ! φ`
pub fn forall(body: Pattern) -> Pattern {
    fold(&FORALL, vec![body])
}

/// `nu . φ`, the greatest fixpoint.
pub fn nu(body: Pattern) -> Pattern {
    fold(&NU, vec![body])
}

/// Named notation definitions available to the parser and printer.
#[derive(Clone, Debug)]
pub struct NotationEnv {
    defs: IndexMap<String, Arc<NotationDef>>,
}

impl Default for NotationEnv {
    fn default() -> Self {
        Self::core()
    }
}

impl NotationEnv {
    /// The propositional and binder notations every theory gets.
    pub fn core() -> NotationEnv {
        let defs = [&NOT, &OR, &AND, &IFF, &TOP, &FORALL, &NU]
            .into_iter()
            .map(|d| (d.name().to_owned(), Arc::clone(d)))
            .collect();
        NotationEnv { defs }
    }

    pub fn get(&self, name: &str) -> Option<&Arc<NotationDef>> {
        self.defs.get(name)
    }

    pub fn define(&mut self, def: NotationDef) -> Result<Arc<NotationDef>, NotationError> {
        if self.defs.contains_key(def.name()) {
            return Err(NotationError::Duplicate(def.name.clone()));
        }
        let def = Arc::new(def);
        self.defs.insert(def.name().to_owned(), Arc::clone(&def));
        Ok(def)
    }

    /// Merges another environment, skipping names already present.
    pub fn import(&mut self, other: &NotationEnv) {
        for (k, v) in &other.defs {
            self.defs.entry(k.clone()).or_insert_with(|| Arc::clone(v));
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(String::as_str)
    }

    pub fn is_core(name: &str) -> bool {
        static CORE: LazyLock<HashSet<&'static str>> = LazyLock::new(|| {
            ["not", "or", "and", "iff", "top", "forall", "nu"].into_iter().collect()
        });
        CORE.contains(name)
    }

    /// Applies the named notation, checking arity.
    pub fn apply(&self, name: &str, args: Vec<Pattern>) -> Option<Result<Pattern, NotationError>> {
        self.get(name).map(|d| d.apply(args))
    }
}
