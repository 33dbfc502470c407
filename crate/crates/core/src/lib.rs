//! A matching logic workbench.
//!
//! Patterns use a locally nameless representation ([`syntax`]), are read and
//! printed through [`format`], evaluated in finite models by [`semantics`],
//! and proved with the Hilbert-style checker in [`kernel`], the derived
//! rules in [`derived`] and the tactic engine in [`proofmode`].

pub mod format;
pub mod semantics;
pub mod syntax;
pub mod kernel;
pub mod derived;
pub mod theories;
pub mod proofmode;
