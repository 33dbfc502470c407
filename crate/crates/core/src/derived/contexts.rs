//! Single-context forms of framing and propagation, derived from the
//! left/right rules by induction on the context.

use super::builder::{syllogism, ProofBuilder};
use super::prop::{schema, Prop};
use super::DeriveError;
use crate::kernel::{AppContext, CtxStep, NodeId, Rule};
use crate::syntax::{fresh_evar_avoiding, free_evars, Pattern};

/// From `⊢ a ---> c`, `⊢ C[a] ---> C[c]`.
pub fn frame(b: &mut ProofBuilder, ctx: &AppContext, premise: NodeId) -> Result<NodeId, DeriveError> {
    let ctx = ctx.expand();
    ctx.path.iter().rev().try_fold(premise, |acc, step| {
        b.add(match step {
            CtxStep::Left(side) => Rule::FramingLeft {
                premise: acc,
                frame: side.clone(),
            },
            CtxStep::Right(side) => Rule::FramingRight {
                premise: acc,
                frame: side.clone(),
            },
        })
    })
}

/// `⊢ C[⊥] ---> ⊥`
pub fn propagation_bot(b: &mut ProofBuilder, ctx: &AppContext) -> Result<NodeId, DeriveError> {
    let ctx = ctx.expand();
    let mut acc: Option<NodeId> = None;
    for step in ctx.path.iter().rev() {
        let (framed, prop) = match step {
            CtxStep::Left(side) => (
                acc.map(|a| Rule::FramingLeft { premise: a, frame: side.clone() }),
                Rule::PropagationBotLeft { p: side.clone() },
            ),
            CtxStep::Right(side) => (
                acc.map(|a| Rule::FramingRight { premise: a, frame: side.clone() }),
                Rule::PropagationBotRight { p: side.clone() },
            ),
        };
        let prop = b.add(prop)?;
        acc = Some(match framed {
            Some(r) => {
                let f = b.add(r)?;
                syllogism(b, f, prop)?
            }
            None => prop,
        });
    }
    match acc {
        Some(id) => Ok(id),
        None => super::builder::imp_refl(b, &Pattern::Bot),
    }
}

/// `⊢ C[φ or ψ] ---> C[φ] or C[ψ]`
pub fn propagation_or(
    b: &mut ProofBuilder,
    ctx: &AppContext,
    p: &Pattern,
    q: &Pattern,
) -> Result<NodeId, DeriveError> {
    let ctx = ctx.expand();
    let (p, q) = (crate::syntax::expand(p), crate::syntax::expand(q));
    let disj = Prop::or(Prop::Atom(0), Prop::Atom(1));
    let mut acc = super::builder::imp_refl(b, &disj.to_pattern(&[p.clone(), q.clone()]))?;
    // inner context, growing outwards
    let mut inner = AppContext::identity();
    for step in ctx.path.iter().rev() {
        let (dp, dq) = (inner.plug(&p), inner.plug(&q));
        let (framed, prop) = match step {
            CtxStep::Left(side) => (
                Rule::FramingLeft { premise: acc, frame: side.clone() },
                Rule::PropagationOrLeft { p1: dp, p2: dq, p3: side.clone() },
            ),
            CtxStep::Right(side) => (
                Rule::FramingRight { premise: acc, frame: side.clone() },
                Rule::PropagationOrRight { p1: side.clone(), p2: dp, p3: dq },
            ),
        };
        let f = b.add(framed)?;
        let pr = b.add(prop)?;
        acc = syllogism(b, f, pr)?;
        inner = AppContext::new(std::iter::once(step.clone()).chain(inner.path).collect());
    }
    Ok(acc)
}

/// `⊢ C[φ] or C[ψ] ---> C[φ or ψ]`, the converse of [`propagation_or`].
pub fn propagation_or_converse(
    b: &mut ProofBuilder,
    ctx: &AppContext,
    p: &Pattern,
    q: &Pattern,
) -> Result<NodeId, DeriveError> {
    let ctx = ctx.expand();
    let (p, q) = (crate::syntax::expand(p), crate::syntax::expand(q));
    let (a0, a1) = (Prop::Atom(0), Prop::Atom(1));
    let atoms = [p.clone(), q.clone()];
    let left = schema(b, &Prop::imp(a0.clone(), Prop::or(a0.clone(), a1.clone())), &atoms)?;
    let right = schema(b, &Prop::imp(a1.clone(), Prop::or(a0, a1)), &atoms)?;
    let fl = frame(b, &ctx, left)?;
    let fr = frame(b, &ctx, right)?;
    // (a ---> c) ---> (b ---> c) ---> (a or b ---> c)
    let (x, y, z) = (Prop::Atom(0), Prop::Atom(1), Prop::Atom(2));
    let elim = Prop::imp(
        Prop::imp(x.clone(), z.clone()),
        Prop::imp(Prop::imp(y.clone(), z.clone()), Prop::imp(Prop::or(x, y), z)),
    );
    let whole = crate::syntax::expand(&crate::syntax::notation::or(p, q));
    let k = schema(b, &elim, &[ctx.plug(&atoms[0]), ctx.plug(&atoms[1]), ctx.plug(&whole)])?;
    let t = b.mp(fl, k)?;
    b.mp(fr, t)
}

/// `⊢ C[∃ . φ] ---> ∃ . C[φ]`. The context's side patterns are closed, so
/// the body's `b0` keeps pointing at the quantifier.
pub fn propagation_ex(b: &mut ProofBuilder, ctx: &AppContext, body: &Pattern) -> Result<NodeId, DeriveError> {
    let ctx = ctx.expand();
    let body = crate::syntax::expand(body);
    let mut acc = super::builder::imp_refl(b, &Pattern::exists(body.clone()))?;
    let mut inner = AppContext::identity();
    for step in ctx.path.iter().rev() {
        let db = inner.plug(&body);
        let (framed, prop) = match step {
            CtxStep::Left(side) => (
                Rule::FramingLeft { premise: acc, frame: side.clone() },
                Rule::PropagationExLeft { body: db, p: side.clone() },
            ),
            CtxStep::Right(side) => (
                Rule::FramingRight { premise: acc, frame: side.clone() },
                Rule::PropagationExRight { p: side.clone(), body: db },
            ),
        };
        let f = b.add(framed)?;
        let pr = b.add(prop)?;
        acc = syllogism(b, f, pr)?;
        inner = AppContext::new(std::iter::once(step.clone()).chain(inner.path).collect());
    }
    Ok(acc)
}

/// `⊢ (∃ . C[φ]) ---> C[∃ . φ]`, the converse of [`propagation_ex`].
pub fn propagation_ex_converse(
    b: &mut ProofBuilder,
    ctx: &AppContext,
    body: &Pattern,
) -> Result<NodeId, DeriveError> {
    let ctx = ctx.expand();
    let body = crate::syntax::expand(body);
    let target = ctx.plug(&Pattern::exists(body.clone()));
    let mut used = free_evars(&target);
    used.extend(free_evars(&body));
    let x = fresh_evar_avoiding(&used);
    // open(φ, x) ---> ∃ . φ, framed through C
    let q = b.add(Rule::ExQuantifier { body: body.clone(), x: x.clone() })?;
    let framed = frame(b, &ctx, q)?;
    b.add(Rule::ExGen {
        premise: framed,
        body: ctx.plug(&body),
        x,
    })
}
