//! The locally nameless pattern AST.
//!
//! Free variables are named, bound variables are de Bruijn indices. Each
//! binder (`∃` or `μ`) only counts binders of its own kind, so `BoundEVar(n)`
//! refers to the `n`-th enclosing `∃` and `BoundSVar(n)` to the `n`-th
//! enclosing `μ`.
//!
//! A [`Pattern`] is a *pseudo*-pattern: nothing is checked at construction
//! time. Well-formedness lives in [`crate::syntax::wf`].

use std::fmt;
use std::sync::Arc;

use super::notation::NotationApp;

/// De Bruijn indices are 64-bit. The parser rejects literals that overflow.
pub type DbIndex = u64;

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: impl AsRef<str>) -> Self {
                $name(Arc::from(name.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name(Arc::from(s))
            }
        }
    };
}

name_type!(
    /// Name of a free element variable.
    EVar
);
name_type!(
    /// Name of a free set variable.
    SVar
);
name_type!(
    /// A constant symbol of the signature.
    Symbol
);

/// A matching logic pseudo-pattern.
///
/// Children are reference counted so that cloning is cheap; derivations share
/// large sub-patterns freely.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Pattern {
    FreeEVar(EVar),
    FreeSVar(SVar),
    BoundEVar(DbIndex),
    BoundSVar(DbIndex),
    Sym(Symbol),
    App(Arc<Pattern>, Arc<Pattern>),
    Bot,
    Imp(Arc<Pattern>, Arc<Pattern>),
    Exists(Arc<Pattern>),
    Mu(Arc<Pattern>),
    /// A folded derived notation. See [`crate::syntax::notation`].
    Notation(Arc<NotationApp>),
}

impl Pattern {
    pub fn evar(name: impl AsRef<str>) -> Pattern {
        Pattern::FreeEVar(EVar::new(name))
    }

    pub fn svar(name: impl AsRef<str>) -> Pattern {
        Pattern::FreeSVar(SVar::new(name))
    }

    pub fn sym(name: impl AsRef<str>) -> Pattern {
        Pattern::Sym(Symbol::new(name))
    }

    pub fn app(left: Pattern, right: Pattern) -> Pattern {
        Pattern::App(Arc::new(left), Arc::new(right))
    }

    pub fn imp(lhs: Pattern, rhs: Pattern) -> Pattern {
        Pattern::Imp(Arc::new(lhs), Arc::new(rhs))
    }

    pub fn exists(body: Pattern) -> Pattern {
        Pattern::Exists(Arc::new(body))
    }

    pub fn mu(body: Pattern) -> Pattern {
        Pattern::Mu(Arc::new(body))
    }

    /// `φ ---> ⊥`, built from core constructors (no notation node).
    pub fn neg_core(p: Pattern) -> Pattern {
        Pattern::imp(p, Pattern::Bot)
    }

    /// Number of constructor nodes, counting a notation node as one plus its
    /// arguments.
    pub fn size(&self) -> usize {
        match self {
            Pattern::App(l, r) | Pattern::Imp(l, r) => 1 + l.size() + r.size(),
            Pattern::Exists(b) | Pattern::Mu(b) => 1 + b.size(),
            Pattern::Notation(n) => 1 + n.args.iter().map(Pattern::size).sum::<usize>(),
            _ => 1,
        }
    }

    /// `true` if this is a notation node anywhere in the tree.
    pub fn has_notation(&self) -> bool {
        match self {
            Pattern::Notation(_) => true,
            Pattern::App(l, r) | Pattern::Imp(l, r) => l.has_notation() || r.has_notation(),
            Pattern::Exists(b) | Pattern::Mu(b) => b.has_notation(),
            _ => false,
        }
    }

    /// Splits `a ---> b` into its two sides (core implication only).
    pub fn as_imp(&self) -> Option<(&Pattern, &Pattern)> {
        match self {
            Pattern::Imp(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn as_app(&self) -> Option<(&Pattern, &Pattern)> {
        match self {
            Pattern::App(l, r) => Some((l, r)),
            _ => None,
        }
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::FreeEVar(x) => write!(f, "FreeEVar({x})"),
            Pattern::FreeSVar(x) => write!(f, "FreeSVar({x})"),
            Pattern::BoundEVar(n) => write!(f, "BoundEVar({n})"),
            Pattern::BoundSVar(n) => write!(f, "BoundSVar({n})"),
            Pattern::Sym(s) => write!(f, "Sym({s})"),
            Pattern::App(l, r) => write!(f, "App({l:?}, {r:?})"),
            Pattern::Bot => write!(f, "Bot"),
            Pattern::Imp(l, r) => write!(f, "Imp({l:?}, {r:?})"),
            Pattern::Exists(b) => write!(f, "Exists({b:?})"),
            Pattern::Mu(b) => write!(f, "Mu({b:?})"),
            Pattern::Notation(n) => {
                write!(f, "{}(", n.def.name())?;
                for (i, a) in n.args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a:?}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::print_pattern(self, true))
    }
}
