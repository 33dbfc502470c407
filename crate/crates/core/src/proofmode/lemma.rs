//! Lemmas that `mlApplyMeta` and `mlRewrite` can refer to.

use std::sync::Arc;

use super::tactic::LemmaRef;
use super::ProofModeError;
use crate::derived::{self, definedness, DeriveError, ProofBuilder, TautoOutcome};
use crate::format::HOLE;
use crate::kernel::{AppContext, Theorem, Theory};
use crate::syntax::notation::{and, not};
use crate::syntax::{expand, fsvar_subst, NotationEnv, Pattern, SVar};

/// Names accepted besides the axioms of the theory.
pub const LEMMAS: &[(&str, &str)] = &[
    ("tauto", "tauto(φ): φ when its propositional skeleton is a tautology"),
    ("imp_refl", "imp_refl(φ): φ ---> φ"),
    ("total_and", "total_and(φ, ψ): ⌊ φ and ψ ⌋ <---> ⌊ φ ⌋ and ⌊ ψ ⌋"),
    ("singleton", "singleton(x, φ, C₁, C₂): ! (C₁[x and φ] and C₂[x and ! φ])"),
];

fn arity(r: &LemmaRef, n: usize) -> Result<(), ProofModeError> {
    if r.args.len() == n {
        Ok(())
    } else {
        Err(ProofModeError::BadLemma(format!(
            "`{}` takes {n} argument(s), got {}",
            r.name,
            r.args.len()
        )))
    }
}

fn hole() -> Pattern {
    Pattern::FreeSVar(SVar::new(HOLE))
}

fn no_hole(r: &LemmaRef) -> Result<(), ProofModeError> {
    let h = SVar::new(HOLE);
    if r.args.iter().any(|a| crate::syntax::free_svars(a).contains(&h)) {
        return Err(ProofModeError::BadLemma(format!("`{}` takes no context arguments", r.name)));
    }
    Ok(())
}

fn context(p: &Pattern) -> Result<AppContext, ProofModeError> {
    AppContext::from_pattern(&expand(p), &hole()).ok_or_else(|| {
        ProofModeError::BadLemma(format!(
            "{p} is not an application context with one hole"
        ))
    })
}

/// Instantiates a lemma reference to a checked theorem.
pub fn resolve(theory: &Arc<Theory>, env: &NotationEnv, r: &LemmaRef) -> Result<Theorem, ProofModeError> {
    let a = &r.args;
    match r.name.as_str() {
        "tauto" => {
            arity(r, 1)?;
            no_hole(r)?;
            match derived::tauto(theory, &a[0])? {
                TautoOutcome::Proved(t) => Ok(t),
                TautoOutcome::NotTautology(v) => Err(ProofModeError::NotTautology(render_assignment(&v))),
            }
        }
        "imp_refl" => {
            arity(r, 1)?;
            no_hole(r)?;
            Ok(derived::build_imp_refl(theory, &a[0])?)
        }
        "total_and" => {
            arity(r, 2)?;
            no_hole(r)?;
            Ok(derived::build_total_and(theory, env, &a[0], &a[1])?)
        }
        "singleton" => {
            arity(r, 4)?;
            let x = match &a[0] {
                Pattern::FreeEVar(x) => x.clone(),
                other => {
                    return Err(ProofModeError::BadLemma(format!(
                        "singleton: {other} is not an element variable"
                    )))
                }
            };
            let (c1, c2) = (context(&a[2])?, context(&a[3])?);
            let mut b = ProofBuilder::new(Arc::clone(theory));
            let id = definedness::singleton(&mut b, &c1, &c2, &x, &a[1])?;
            // the conclusion with the contexts as written
            let h = SVar::new(HOLE);
            let plug = |c: &Pattern, q: Pattern| fsvar_subst(c, &q, &h).ok();
            let xp = and(a[0].clone(), a[1].clone());
            let xnp = and(a[0].clone(), not(a[1].clone()));
            let display = match (plug(&a[2], xp), plug(&a[3], xnp)) {
                (Some(l), Some(r)) => Some(not(and(l, r))),
                _ => None,
            };
            let display = display.filter(|d| expand(d) == *b.concl(id));
            Ok(b.finish(id, display.as_ref())?)
        }
        name => {
            let Some(ax) = theory.axiom(name) else {
                return Err(ProofModeError::BadLemma(format!("unknown lemma or axiom `{name}`")));
            };
            arity(r, 0)?;
            let ax = ax.clone();
            let mut b = ProofBuilder::new(Arc::clone(theory));
            let id = b.axiom(name)?;
            Ok(b.finish(id, Some(&ax))?)
        }
    }
}

pub(crate) fn render_assignment(v: &[(Pattern, bool)]) -> String {
    v.iter()
        .map(|(p, t)| format!("{p} := {}", if *t { "true" } else { "false" }))
        .collect::<Vec<_>>()
        .join(", ")
}

impl From<DeriveError> for ProofModeError {
    fn from(e: DeriveError) -> Self {
        match e {
            DeriveError::Kernel(k) => ProofModeError::Kernel(k.to_string()),
            DeriveError::Internal(m) => ProofModeError::Internal(m),
            DeriveError::IllFormed(m) => ProofModeError::IllFormed(m),
            other => ProofModeError::BadLemma(other.to_string()),
        }
    }
}
