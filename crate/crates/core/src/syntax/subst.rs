//! Free variables, fresh names, substitution and opening.
//!
//! Bound substitution follows the decrementing convention: replacing index
//! `k` also lowers every dangling index above `k` by one, so that opening
//! `∃ . φ` yields a body whose remaining dangling indices refer to the
//! binders *outside* the removed quantifier.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use super::notation::NotationApp;
use super::pattern::{DbIndex, EVar, Pattern, SVar};
use super::wf::is_closed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("substituted pattern must be closed (no dangling de Bruijn indices)")]
    NotClosed,
}

pub fn free_evars(p: &Pattern) -> BTreeSet<EVar> {
    let mut out = BTreeSet::new();
    collect_evars(p, &mut out);
    out
}

pub fn free_svars(p: &Pattern) -> BTreeSet<SVar> {
    let mut out = BTreeSet::new();
    collect_svars(p, &mut out);
    out
}

pub(crate) fn collect_evars(p: &Pattern, out: &mut BTreeSet<EVar>) {
    match p {
        Pattern::FreeEVar(x) => {
            out.insert(x.clone());
        }
        Pattern::App(l, r) | Pattern::Imp(l, r) => {
            collect_evars(l, out);
            collect_evars(r, out);
        }
        Pattern::Exists(b) | Pattern::Mu(b) => collect_evars(b, out),
        Pattern::Notation(n) => n.args.iter().for_each(|a| collect_evars(a, out)),
        _ => {}
    }
}

pub(crate) fn collect_svars(p: &Pattern, out: &mut BTreeSet<SVar>) {
    match p {
        Pattern::FreeSVar(x) => {
            out.insert(x.clone());
        }
        Pattern::App(l, r) | Pattern::Imp(l, r) => {
            collect_svars(l, out);
            collect_svars(r, out);
        }
        Pattern::Exists(b) | Pattern::Mu(b) => collect_svars(b, out),
        Pattern::Notation(n) => n.args.iter().for_each(|a| collect_svars(a, out)),
        _ => {}
    }
}

/// The longest (then lexicographically greatest) name with a `'` appended.
/// Strictly longer than every name in `used`, hence not in it.
fn fresh_name<'a>(default: &str, used: impl Iterator<Item = &'a str>) -> String {
    match used.max_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b))) {
        None => default.to_owned(),
        Some(longest) => format!("{longest}'"),
    }
}

/// A deterministic element variable not free in `p`.
pub fn fresh_evar(p: &Pattern) -> EVar {
    fresh_evar_avoiding(&free_evars(p))
}

pub fn fresh_evar_avoiding(used: &BTreeSet<EVar>) -> EVar {
    EVar::from(fresh_name("x", used.iter().map(EVar::as_str)))
}

/// A deterministic set variable not free in `p`.
pub fn fresh_svar(p: &Pattern) -> SVar {
    fresh_svar_avoiding(&free_svars(p))
}

pub fn fresh_svar_avoiding(used: &BTreeSet<SVar>) -> SVar {
    SVar::from(fresh_name("X", used.iter().map(SVar::as_str)))
}

fn map_notation(n: &NotationApp, mut f: impl FnMut(usize, &Pattern) -> Pattern) -> Pattern {
    Pattern::Notation(Arc::new(NotationApp {
        def: Arc::clone(&n.def),
        args: n.args.iter().enumerate().map(|(i, a)| f(i, a)).collect(),
    }))
}

/// Replaces the dangling element index `k` by `psi` and decrements dangling
/// element indices above `k`. `psi` is inserted as is.
pub fn bevar_subst(p: &Pattern, psi: &Pattern, k: DbIndex) -> Pattern {
    match p {
        Pattern::BoundEVar(n) if *n == k => psi.clone(),
        Pattern::BoundEVar(n) if *n > k => Pattern::BoundEVar(n - 1),
        Pattern::App(l, r) => Pattern::app(bevar_subst(l, psi, k), bevar_subst(r, psi, k)),
        Pattern::Imp(l, r) => Pattern::imp(bevar_subst(l, psi, k), bevar_subst(r, psi, k)),
        Pattern::Exists(b) => Pattern::exists(bevar_subst(b, psi, k + 1)),
        Pattern::Mu(b) => Pattern::mu(bevar_subst(b, psi, k)),
        Pattern::Notation(n) => map_notation(n, |i, a| bevar_subst(a, psi, k + n.def.ex_offset(i))),
        other => other.clone(),
    }
}

/// Set-variable counterpart of [`bevar_subst`]; the target shifts under `μ`.
pub fn bsvar_subst(p: &Pattern, psi: &Pattern, k: DbIndex) -> Pattern {
    match p {
        Pattern::BoundSVar(n) if *n == k => psi.clone(),
        Pattern::BoundSVar(n) if *n > k => Pattern::BoundSVar(n - 1),
        Pattern::App(l, r) => Pattern::app(bsvar_subst(l, psi, k), bsvar_subst(r, psi, k)),
        Pattern::Imp(l, r) => Pattern::imp(bsvar_subst(l, psi, k), bsvar_subst(r, psi, k)),
        Pattern::Exists(b) => Pattern::exists(bsvar_subst(b, psi, k)),
        Pattern::Mu(b) => Pattern::mu(bsvar_subst(b, psi, k + 1)),
        Pattern::Notation(n) => map_notation(n, |i, a| bsvar_subst(a, psi, k + n.def.mu_offset(i))),
        other => other.clone(),
    }
}

/// `open_ele`: instantiate bound index `k` with the free variable `x`.
pub fn evar_open(k: DbIndex, x: &EVar, p: &Pattern) -> Pattern {
    bevar_subst(p, &Pattern::FreeEVar(x.clone()), k)
}

/// `open_set`: instantiate bound set index `k` with the free variable `x`.
pub fn svar_open(k: DbIndex, x: &SVar, p: &Pattern) -> Pattern {
    bsvar_subst(p, &Pattern::FreeSVar(x.clone()), k)
}

/// Replaces the free element variable `x` by the closed pattern `psi`.
pub fn fevar_subst(p: &Pattern, psi: &Pattern, x: &EVar) -> Result<Pattern, SubstError> {
    if !is_closed(psi) {
        return Err(SubstError::NotClosed);
    }
    Ok(fevar_subst_unchecked(p, psi, x))
}

fn fevar_subst_unchecked(p: &Pattern, psi: &Pattern, x: &EVar) -> Pattern {
    match p {
        Pattern::FreeEVar(y) if y == x => psi.clone(),
        Pattern::App(l, r) => {
            Pattern::app(fevar_subst_unchecked(l, psi, x), fevar_subst_unchecked(r, psi, x))
        }
        Pattern::Imp(l, r) => {
            Pattern::imp(fevar_subst_unchecked(l, psi, x), fevar_subst_unchecked(r, psi, x))
        }
        Pattern::Exists(b) => Pattern::exists(fevar_subst_unchecked(b, psi, x)),
        Pattern::Mu(b) => Pattern::mu(fevar_subst_unchecked(b, psi, x)),
        Pattern::Notation(n) => map_notation(n, |_, a| fevar_subst_unchecked(a, psi, x)),
        other => other.clone(),
    }
}

/// Replaces the free set variable `x` by the closed pattern `psi`.
pub fn fsvar_subst(p: &Pattern, psi: &Pattern, x: &SVar) -> Result<Pattern, SubstError> {
    if !is_closed(psi) {
        return Err(SubstError::NotClosed);
    }
    Ok(fsvar_subst_unchecked(p, psi, x))
}

fn fsvar_subst_unchecked(p: &Pattern, psi: &Pattern, x: &SVar) -> Pattern {
    match p {
        Pattern::FreeSVar(y) if y == x => psi.clone(),
        Pattern::App(l, r) => {
            Pattern::app(fsvar_subst_unchecked(l, psi, x), fsvar_subst_unchecked(r, psi, x))
        }
        Pattern::Imp(l, r) => {
            Pattern::imp(fsvar_subst_unchecked(l, psi, x), fsvar_subst_unchecked(r, psi, x))
        }
        Pattern::Exists(b) => Pattern::exists(fsvar_subst_unchecked(b, psi, x)),
        Pattern::Mu(b) => Pattern::mu(fsvar_subst_unchecked(b, psi, x)),
        Pattern::Notation(n) => map_notation(n, |_, a| fsvar_subst_unchecked(a, psi, x)),
        other => other.clone(),
    }
}

/// Inverse of [`evar_open`] for a variable that does not occur bound:
/// turns every free `x` into the index of the binder `k` levels up.
pub fn evar_close(k: DbIndex, x: &EVar, p: &Pattern) -> Pattern {
    match p {
        Pattern::FreeEVar(y) if y == x => Pattern::BoundEVar(k),
        Pattern::App(l, r) => Pattern::app(evar_close(k, x, l), evar_close(k, x, r)),
        Pattern::Imp(l, r) => Pattern::imp(evar_close(k, x, l), evar_close(k, x, r)),
        Pattern::Exists(b) => Pattern::exists(evar_close(k + 1, x, b)),
        Pattern::Mu(b) => Pattern::mu(evar_close(k, x, b)),
        Pattern::Notation(n) => map_notation(n, |i, a| evar_close(k + n.def.ex_offset(i), x, a)),
        other => other.clone(),
    }
}

/// Set-variable counterpart of [`evar_close`].
pub fn svar_close(k: DbIndex, x: &SVar, p: &Pattern) -> Pattern {
    match p {
        Pattern::FreeSVar(y) if y == x => Pattern::BoundSVar(k),
        Pattern::App(l, r) => Pattern::app(svar_close(k, x, l), svar_close(k, x, r)),
        Pattern::Imp(l, r) => Pattern::imp(svar_close(k, x, l), svar_close(k, x, r)),
        Pattern::Exists(b) => Pattern::exists(svar_close(k, x, b)),
        Pattern::Mu(b) => Pattern::mu(svar_close(k + 1, x, b)),
        Pattern::Notation(n) => map_notation(n, |i, a| svar_close(k + n.def.mu_offset(i), x, a)),
        other => other.clone(),
    }
}
