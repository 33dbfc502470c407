//! Derived rules: lemmas built by composing kernel rules.
//!
//! Every builder here produces an explicit derivation that goes through
//! [`crate::kernel::check`] before a [`Theorem`] is returned. The lower
//! level functions work on a shared [`ProofBuilder`] so that lemmas used
//! many times are derived once.

pub mod builder;
pub mod congruence;
pub mod contexts;
pub mod definedness;
pub mod prop;

use std::sync::Arc;

use thiserror::Error;

pub use builder::{HTerm, ProofBuilder};
pub use congruence::{hole_path, occurrences, replace_at, Occurrence, Step};
pub use prop::{Prop, TautoResult, MAX_ATOMS};

use crate::kernel::{AppContext, CheckError, ErrorKind, NodeId, Theorem, Theory};
use crate::syntax::notation::{iff, or};
use crate::syntax::{expand, fsvar_subst, well_formed, EVar, NotationEnv, Pattern, SVar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("{0}")]
    Precondition(String),
    #[error("ill-formed parameter: {0}")]
    IllFormed(String),
    #[error("the propositional skeleton has {0} atoms; at most {1} are supported")]
    TooManyAtoms(usize, usize),
    #[error("kernel rejected a derived proof: {0}")]
    Kernel(CheckError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<CheckError> for DeriveError {
    fn from(e: CheckError) -> Self {
        if e.kind == ErrorKind::IllFormed {
            DeriveError::IllFormed(e.message)
        } else {
            DeriveError::Kernel(e)
        }
    }
}

fn require_wf(what: &str, p: &Pattern) -> Result<(), DeriveError> {
    if well_formed(&expand(p)) {
        Ok(())
    } else {
        Err(DeriveError::IllFormed(format!("{what} {p}")))
    }
}

/// `⊢ φ ---> φ`
pub fn build_imp_refl(theory: &Arc<Theory>, p: &Pattern) -> Result<Theorem, DeriveError> {
    require_wf("φ =", p)?;
    let mut b = ProofBuilder::new(Arc::clone(theory));
    let id = builder::imp_refl(&mut b, &expand(p))?;
    b.finish(id, Some(&Pattern::imp(p.clone(), p.clone())))
}

/// From `⊢ φ₁ ---> χ` and `⊢ φ₂ ---> χ`, `⊢ (φ₁ or φ₂) ---> χ`.
pub fn build_destruct_or(theory: &Arc<Theory>, left: &Theorem, right: &Theorem) -> Result<Theorem, DeriveError> {
    let (p1, c1) = split_folded(left.conclusion())?;
    let (p2, c2) = split_folded(right.conclusion())?;
    if expand(&c1) != expand(&c2) {
        return Err(DeriveError::Precondition(format!(
            "the two cases prove different conclusions: {c1} and {c2}"
        )));
    }
    let mut b = ProofBuilder::new(Arc::clone(theory));
    let l = b.import(left)?;
    let r = b.import(right)?;
    let id = or_elim(&mut b, l, r)?;
    b.finish(id, Some(&Pattern::imp(or(p1, p2), c1)))
}

/// From `⊢ a ---> c` and `⊢ b ---> c` in the builder, `⊢ (a or b) ---> c`.
pub fn or_elim(b: &mut ProofBuilder, l: NodeId, r: NodeId) -> Result<NodeId, DeriveError> {
    let (a, c) = builder::split_imp(b.concl(l))?;
    let (a2, _) = builder::split_imp(b.concl(r))?;
    let (x, y, z) = (Prop::Atom(0), Prop::Atom(1), Prop::Atom(2));
    let s = Prop::imp(
        Prop::imp(x.clone(), z.clone()),
        Prop::imp(Prop::imp(y.clone(), z.clone()), Prop::imp(Prop::or(x, y), z)),
    );
    let k = prop::schema(b, &s, &[a, a2, c])?;
    prop::apply_chain(b, k, &[l, r])
}

fn split_folded(p: &Pattern) -> Result<(Pattern, Pattern), DeriveError> {
    match crate::syntax::notation::unfold_head(p) {
        Pattern::Imp(a, c) => Ok(((*a).clone(), (*c).clone())),
        _ => Err(DeriveError::Precondition(format!("{p} is not an implication"))),
    }
}

/// From `⊢ p <---> q`, `⊢ C[p] <---> C[q]`, where the context `ctx`
/// contains the set variable `hole` once, not under a binder.
pub fn build_congruence(
    theory: &Arc<Theory>,
    ctx: &Pattern,
    hole: &SVar,
    eq: &Theorem,
) -> Result<Theorem, DeriveError> {
    let hole_p = Pattern::FreeSVar(hole.clone());
    let path = hole_path(ctx, &hole_p)?;
    let (p, q) = prop::as_iff(eq.conclusion())
        .ok_or_else(|| DeriveError::Precondition(format!("{} is not an equivalence", eq.conclusion())))?;
    let plug = |x: &Pattern| replace_at(&expand(ctx), &path, x);
    let (cp, cq) = (plug(&p), plug(&q));
    require_wf("C[p] =", &cp)?;
    require_wf("C[q] =", &cq)?;
    let mut b = ProofBuilder::new(Arc::clone(theory));
    let e = b.import(eq)?;
    let id = congruence::congruence(&mut b, &cp, &path, e)?;
    // keep the notations of the context and of the equivalence if possible
    let display = match folded_sides(eq.conclusion()) {
        Some((fp, fq)) => match (fsvar_subst(ctx, &fp, hole), fsvar_subst(ctx, &fq, hole)) {
            (Ok(a), Ok(c)) => iff(a, c),
            _ => iff(cp, cq),
        },
        None => iff(cp, cq),
    };
    b.finish(id, Some(&display))
}

fn folded_sides(p: &Pattern) -> Option<(Pattern, Pattern)> {
    match p {
        Pattern::Notation(n) if n.def.name() == "iff" => Some((n.args[0].clone(), n.args[1].clone())),
        _ => None,
    }
}

/// `⊢ ⌊ φ and ψ ⌋ <---> ⌊ φ ⌋ and ⌊ ψ ⌋`. Needs the definedness axiom.
/// With `floor` available in `env`, the conclusion is shown folded.
pub fn build_total_and(
    theory: &Arc<Theory>,
    env: &NotationEnv,
    p: &Pattern,
    q: &Pattern,
) -> Result<Theorem, DeriveError> {
    require_wf("φ =", p)?;
    require_wf("ψ =", q)?;
    let mut b = ProofBuilder::new(Arc::clone(theory));
    let id = definedness::total_and(&mut b, p, q)?;
    let display = env.get("floor").map(|floor| {
        let fl = |x: Pattern| floor.apply(vec![x]).expect("floor is unary");
        let and = crate::syntax::notation::and;
        iff(fl(and(p.clone(), q.clone())), and(fl(p.clone()), fl(q.clone())))
    });
    b.finish(id, display.as_ref())
}

/// `⊢ ! (C₁[x and φ] and C₂[x and ! φ])`
pub fn build_singleton(
    theory: &Arc<Theory>,
    ctx1: &AppContext,
    ctx2: &AppContext,
    x: &EVar,
    p: &Pattern,
) -> Result<Theorem, DeriveError> {
    require_wf("φ =", p)?;
    let mut b = ProofBuilder::new(Arc::clone(theory));
    let id = definedness::singleton(&mut b, ctx1, ctx2, x, p)?;
    b.finish(id, None)
}

/// Result of [`tauto`].
#[derive(Debug, Clone)]
pub enum TautoOutcome {
    Proved(Theorem),
    /// The skeleton is falsified by this assignment to its atoms.
    NotTautology(Vec<(Pattern, bool)>),
}

/// Decides the propositional skeleton of `p`, treating every maximal
/// subpattern that is not built from `⊥` and implication as an atom, and
/// proves `p` when the skeleton is a tautology.
pub fn tauto(theory: &Arc<Theory>, p: &Pattern) -> Result<TautoOutcome, DeriveError> {
    require_wf("φ =", p)?;
    let mut b = ProofBuilder::new(Arc::clone(theory));
    Ok(match prop::tauto(&mut b, p)? {
        TautoResult::Proved(id) => TautoOutcome::Proved(b.finish(id, Some(p))?),
        TautoResult::Refuted(v) => TautoOutcome::NotTautology(v),
    })
}
