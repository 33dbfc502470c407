//! Signatures, locally nameless patterns, notations and substitution.

pub mod notation;
pub mod pattern;
pub mod subst;
pub mod wf;

use indexmap::IndexSet;

pub use notation::{expand, NotationDef, NotationEnv, NotationError};
pub use pattern::{DbIndex, EVar, Pattern, SVar, Symbol};
pub use subst::{
    bevar_subst, bsvar_subst, evar_close, evar_open, fevar_subst, free_evars, free_svars,
    fresh_evar, fresh_evar_avoiding, fresh_svar, fresh_svar_avoiding, fsvar_subst, svar_close, svar_open, SubstError,
};
pub use wf::{is_closed, well_formed, wf_closed_ex, wf_closed_mu, wf_positive};

/// The symbol part of a signature. Variable universes are the (infinite)
/// string name spaces of [`EVar`] and [`SVar`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: IndexSet<Symbol>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a symbol; returns `false` if it was already declared.
    pub fn declare(&mut self, s: impl Into<Symbol>) -> bool {
        self.symbols.insert(s.into())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains(&Symbol::new(name))
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.iter()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn merge(&mut self, other: &Signature) {
        self.symbols.extend(other.symbols.iter().cloned());
    }
}

impl<S: Into<Symbol>> FromIterator<S> for Signature {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Signature {
            symbols: iter.into_iter().map(Into::into).collect(),
        }
    }
}
