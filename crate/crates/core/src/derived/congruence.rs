//! Replacing equivalents: from `⊢ p <---> q`, `⊢ C[p] <---> C[q]` for
//! contexts built from applications and implications.

use super::builder::ProofBuilder;
use super::prop::{as_iff, iff_elim, iff_intro, schema, Prop};
use super::DeriveError;
use crate::kernel::{NodeId, Rule};
use crate::syntax::{expand, Pattern};

/// One step from a core pattern to a direct subpattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    AppL,
    AppR,
    ImpL,
    ImpR,
}

impl Step {
    pub fn child(self, p: &Pattern) -> Option<&Pattern> {
        match (self, p) {
            (Step::AppL, Pattern::App(l, _)) | (Step::ImpL, Pattern::Imp(l, _)) => Some(l),
            (Step::AppR, Pattern::App(_, r)) | (Step::ImpR, Pattern::Imp(_, r)) => Some(r),
            _ => None,
        }
    }

    fn rebuild(self, p: &Pattern, child: Pattern) -> Pattern {
        match (self, p) {
            (Step::AppL, Pattern::App(_, r)) => Pattern::app(child, (**r).clone()),
            (Step::AppR, Pattern::App(l, _)) => Pattern::app((**l).clone(), child),
            (Step::ImpL, Pattern::Imp(_, r)) => Pattern::imp(child, (**r).clone()),
            (Step::ImpR, Pattern::Imp(l, _)) => Pattern::imp((**l).clone(), child),
            _ => unreachable!("step does not fit the pattern"),
        }
    }
}

/// The subpattern at `path`.
pub fn subpattern<'p>(p: &'p Pattern, path: &[Step]) -> Option<&'p Pattern> {
    path.iter().try_fold(p, |cur, s| s.child(cur))
}

/// `p` with the subpattern at `path` replaced.
pub fn replace_at(p: &Pattern, path: &[Step], q: &Pattern) -> Pattern {
    match path.split_first() {
        None => q.clone(),
        Some((s, rest)) => {
            let child = s.child(p).expect("path fits the pattern");
            s.rebuild(p, replace_at(child, rest, q))
        }
    }
}

/// An occurrence of a subpattern, in pre-order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Occurrence {
    At(Vec<Step>),
    /// Below an `∃` or `μ` binder; congruence does not reach it.
    UnderBinder,
}

/// All occurrences of `needle` in the core pattern `hay`, left to right,
/// depth first.
pub fn occurrences(hay: &Pattern, needle: &Pattern) -> Vec<Occurrence> {
    fn go(p: &Pattern, needle: &Pattern, path: &mut Vec<Step>, binder: bool, out: &mut Vec<Occurrence>) {
        if p == needle {
            out.push(if binder {
                Occurrence::UnderBinder
            } else {
                Occurrence::At(path.clone())
            });
        }
        match p {
            Pattern::App(l, r) | Pattern::Imp(l, r) => {
                let (sl, sr) = if matches!(p, Pattern::App(..)) {
                    (Step::AppL, Step::AppR)
                } else {
                    (Step::ImpL, Step::ImpR)
                };
                path.push(sl);
                go(l, needle, path, binder, out);
                path.pop();
                path.push(sr);
                go(r, needle, path, binder, out);
                path.pop();
            }
            Pattern::Exists(b) | Pattern::Mu(b) => go(b, needle, path, true, out),
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(hay, needle, &mut Vec::new(), false, &mut out);
    out
}

/// The path to the unique occurrence of `hole` in a context pattern.
pub fn hole_path(ctx: &Pattern, hole: &Pattern) -> Result<Vec<Step>, DeriveError> {
    let core = expand(ctx);
    let occ = occurrences(&core, hole);
    match occ.as_slice() {
        [Occurrence::At(path)] => Ok(path.clone()),
        [Occurrence::UnderBinder] => Err(DeriveError::Precondition(
            "the context hole is under a binder; congruence does not cross binders".into(),
        )),
        [] => Err(DeriveError::Precondition("the context has no hole".into())),
        _ => Err(DeriveError::Precondition("the context has more than one hole".into())),
    }
}

/// From `eq : ⊢ p <---> q` where `p` sits at `path` in `whole`,
/// `⊢ whole <---> whole[q at path]`.
pub fn congruence(
    b: &mut ProofBuilder,
    whole: &Pattern,
    path: &[Step],
    eq: NodeId,
) -> Result<NodeId, DeriveError> {
    let (p, _) = as_iff(b.concl(eq))
        .ok_or_else(|| DeriveError::Internal(format!("{} is not an equivalence", b.concl(eq))))?;
    match subpattern(whole, path) {
        Some(found) if *found == p => {}
        _ => {
            return Err(DeriveError::Internal(format!(
                "{p} does not occur at the given position of {whole}"
            )))
        }
    }
    go(b, whole, path, eq)
}

fn go(b: &mut ProofBuilder, whole: &Pattern, path: &[Step], eq: NodeId) -> Result<NodeId, DeriveError> {
    let Some((step, rest)) = path.split_first() else {
        return Ok(eq);
    };
    let child = step.child(whole).expect("path fits the pattern");
    let inner = go(b, child, rest, eq)?;
    let (c, c2) = as_iff(b.concl(inner)).expect("congruence yields equivalences");
    let atoms = |x: &Pattern| vec![c.clone(), c2.clone(), x.clone()];
    let a = Prop::Atom(0);
    let a2 = Prop::Atom(1);
    let other = Prop::Atom(2);
    match (step, whole) {
        (Step::AppL, Pattern::App(_, r)) | (Step::AppR, Pattern::App(r, _)) => {
            let fwd = iff_elim(b, inner, false)?;
            let bwd = iff_elim(b, inner, true)?;
            let (f1, f2) = if *step == Step::AppL {
                (
                    b.add(Rule::FramingLeft { premise: fwd, frame: (**r).clone() })?,
                    b.add(Rule::FramingLeft { premise: bwd, frame: (**r).clone() })?,
                )
            } else {
                (
                    b.add(Rule::FramingRight { premise: fwd, frame: (**r).clone() })?,
                    b.add(Rule::FramingRight { premise: bwd, frame: (**r).clone() })?,
                )
            };
            iff_intro(b, f1, f2)
        }
        (Step::ImpL, Pattern::Imp(_, r)) => {
            let s = Prop::imp(
                Prop::iff(a.clone(), a2.clone()),
                Prop::iff(Prop::imp(a, other.clone()), Prop::imp(a2, other)),
            );
            let k = schema(b, &s, &atoms(r))?;
            b.mp(inner, k)
        }
        (Step::ImpR, Pattern::Imp(l, _)) => {
            let s = Prop::imp(
                Prop::iff(a.clone(), a2.clone()),
                Prop::iff(Prop::imp(other.clone(), a), Prop::imp(other, a2)),
            );
            let k = schema(b, &s, &atoms(l))?;
            b.mp(inner, k)
        }
        _ => unreachable!("step does not fit the pattern"),
    }
}
