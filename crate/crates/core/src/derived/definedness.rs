//! Lemmas about definedness and totality, for theories that declare the
//! `def` symbol and the `Definedness` axiom `def $ x`.

use super::builder::ProofBuilder;
use super::congruence::{congruence, Step};
use super::contexts::propagation_or;
use super::prop::{apply_chain, schema, Prop};
use super::DeriveError;
use crate::kernel::{AppContext, CtxStep, NodeId, Rule, Theory};
use crate::syntax::{expand, EVar, Pattern};

/// The definedness symbol.
pub const DEF_SYMBOL: &str = "def";

/// `⌈ φ ⌉` in core form.
pub fn ceil_core(p: &Pattern) -> Pattern {
    Pattern::app(Pattern::sym(DEF_SYMBOL), p.clone())
}

/// `⌊ φ ⌋ ≡ ! ⌈ ! φ ⌉` in core form.
pub fn floor_core(p: &Pattern) -> Pattern {
    Pattern::neg_core(ceil_core(&Pattern::neg_core(p.clone())))
}

/// Name of the axiom `def $ x` of `theory`, for some element variable x.
pub fn definedness_axiom(theory: &Theory) -> Option<&str> {
    theory.axioms().iter().find_map(|(name, p)| match expand(p) {
        Pattern::App(l, r)
            if *l == Pattern::sym(DEF_SYMBOL) && matches!(*r, Pattern::FreeEVar(_)) =>
        {
            Some(name.as_str())
        }
        _ => None,
    })
}

fn require_def(b: &ProofBuilder) -> Result<(), DeriveError> {
    match definedness_axiom(b.theory()) {
        Some(_) => Ok(()),
        None => Err(DeriveError::Precondition(format!(
            "theory `{}` has no definedness axiom `def $ x`",
            b.theory().name()
        ))),
    }
}

/// `⊢ ⌊ φ and ψ ⌋ <---> ⌊ φ ⌋ and ⌊ ψ ⌋`
pub fn total_and(b: &mut ProofBuilder, p: &Pattern, q: &Pattern) -> Result<NodeId, DeriveError> {
    require_def(b)?;
    let (p, q) = (expand(p), expand(q));
    let (a0, a1) = (Prop::Atom(0), Prop::Atom(1));
    // ! (φ and ψ) <---> ! φ or ! ψ
    let demorgan = Prop::iff(
        Prop::not(Prop::and(a0.clone(), a1.clone())),
        Prop::or(Prop::not(a0), Prop::not(a1)),
    );
    let dm = schema(b, &demorgan, &[p.clone(), q.clone()])?;
    let neg_and = Prop::not(Prop::and(Prop::Atom(0), Prop::Atom(1))).to_pattern(&[p.clone(), q.clone()]);
    let np = Pattern::neg_core(p.clone());
    let nq = Pattern::neg_core(q.clone());
    // ⌈ ! (φ and ψ) ⌉ <---> ⌈ ! φ or ! ψ ⌉
    let x_eq_y = congruence(b, &ceil_core(&neg_and), &[Step::AppR], dm)?;
    let def_ctx = AppContext::new(vec![CtxStep::Right(Pattern::sym(DEF_SYMBOL))]);
    let y_to_ab = propagation_or(b, &def_ctx, &np, &nq)?;
    let ab_to_y = super::contexts::propagation_or_converse(b, &def_ctx, &np, &nq)?;
    let (x, y, a, c) = (Prop::Atom(0), Prop::Atom(1), Prop::Atom(2), Prop::Atom(3));
    let ab = Prop::or(a.clone(), c.clone());
    let glue = Prop::imp(
        Prop::iff(x.clone(), y.clone()),
        Prop::imp(
            Prop::imp(y.clone(), ab.clone()),
            Prop::imp(
                Prop::imp(ab, y),
                Prop::iff(Prop::not(x), Prop::and(Prop::not(a), Prop::not(c))),
            ),
        ),
    );
    let atoms = [
        ceil_core(&neg_and),
        ceil_core(&expand(&crate::syntax::notation::or(np.clone(), nq.clone()))),
        ceil_core(&np),
        ceil_core(&nq),
    ];
    let k = schema(b, &glue, &atoms)?;
    apply_chain(b, k, &[x_eq_y, y_to_ab, ab_to_y])
}

/// `⊢ ! (C₁[x and φ] and C₂[x and ! φ])`
pub fn singleton(
    b: &mut ProofBuilder,
    ctx1: &AppContext,
    ctx2: &AppContext,
    x: &EVar,
    p: &Pattern,
) -> Result<NodeId, DeriveError> {
    b.add(Rule::Singleton {
        ctx1: ctx1.expand(),
        ctx2: ctx2.expand(),
        x: x.clone(),
        p: expand(p),
    })
}
