use std::sync::Arc;

use ml_core::derived::{
    self, build_congruence, build_destruct_or, build_imp_refl, build_singleton, build_total_and,
    contexts, tauto, DeriveError, ProofBuilder, TautoOutcome,
};
use ml_core::format::{parse_context_pattern, parse_pattern, HOLE};
use ml_core::kernel::{check, AppContext, CtxStep, Rule, Theorem, Theory};
use ml_core::semantics::{eval, Valuation};
use ml_core::syntax::{expand, well_formed, EVar, Pattern, SVar};
use ml_core::theories::{builtin_model, LoadedTheory, TheoryLibrary};

fn empty() -> Arc<Theory> {
    Arc::new(Theory::empty())
}

fn def() -> LoadedTheory {
    TheoryLibrary::builtin().load("DEF").unwrap()
}

fn pat(s: &str) -> Pattern {
    parse_pattern(s, &Default::default()).unwrap()
}

fn recheck(t: &Theorem) {
    let again = check(&Arc::new(t.theory().clone()), t.derivation()).expect("re-check");
    assert_eq!(&again, t);
}

#[test]
fn imp_refl_on_bot_and_existence() {
    for s in ["Bot", "exists . b0"] {
        let p = pat(s);
        let t = build_imp_refl(&empty(), &p).unwrap();
        assert_eq!(*t.conclusion(), Pattern::imp(p.clone(), p));
        assert!(t.derivation().nodes.iter().all(|n| matches!(
            n.rule,
            Rule::Prop1 { .. } | Rule::Prop2 { .. } | Rule::Prop3 { .. } | Rule::ModusPonens { .. }
        )));
        recheck(&t);
    }
}

#[test]
fn imp_refl_rejects_ill_formed() {
    let err = build_imp_refl(&empty(), &Pattern::BoundEVar(0)).unwrap_err();
    assert!(matches!(err, DeriveError::IllFormed(_)));
}

#[test]
fn tauto_reproduces_proposition_one() {
    let p = pat("a ---> (B ---> a)");
    match tauto(&empty(), &p).unwrap() {
        TautoOutcome::Proved(t) => {
            assert_eq!(*t.conclusion(), p);
            recheck(&t);
        }
        TautoOutcome::NotTautology(_) => panic!("Prop1 is a tautology"),
    }
}

#[test]
fn tauto_proves_peirce() {
    let p = pat("((p ---> q) ---> p) ---> p");
    assert!(matches!(tauto(&empty(), &p).unwrap(), TautoOutcome::Proved(_)));
}

#[test]
fn tauto_refutes_bare_implication() {
    match tauto(&empty(), &pat("p ---> q")).unwrap() {
        TautoOutcome::NotTautology(v) => {
            assert_eq!(v, vec![(pat("p"), true), (pat("q"), false)]);
        }
        TautoOutcome::Proved(_) => panic!("p ---> q is not a tautology"),
    }
}

#[test]
fn tauto_treats_binders_as_atoms() {
    let p = pat("(exists . b0) or ! (exists . b0)");
    assert!(matches!(tauto(&empty(), &p).unwrap(), TautoOutcome::Proved(_)));
}

#[test]
fn tauto_atom_cap() {
    let atoms: Vec<String> = (0..17).map(|i| format!("a{i}")).collect();
    let text = atoms.join(" ---> ");
    let err = tauto(&empty(), &pat(&text)).unwrap_err();
    assert_eq!(err, DeriveError::TooManyAtoms(17, 16));
}

fn theorem_of(theory: &Arc<Theory>, p: &str) -> Theorem {
    match tauto(theory, &pat(p)).unwrap() {
        TautoOutcome::Proved(t) => t,
        TautoOutcome::NotTautology(v) => panic!("{p} refuted by {v:?}"),
    }
}

#[test]
fn destruct_or_instances() {
    let th = empty();
    for (l, r) in [
        ("a ---> a or b", "b ---> a or b"),
        ("Bot ---> c", "c ---> c"),
        ("(a and b) ---> a", "(a and ! b) ---> a"),
    ] {
        let t = build_destruct_or(&th, &theorem_of(&th, l), &theorem_of(&th, r)).unwrap();
        recheck(&t);
        let (p1, c) = expand(&pat(l)).as_imp().map(|(a, c)| (a.clone(), c.clone())).unwrap();
        let p2 = expand(&pat(r)).as_imp().unwrap().0.clone();
        let expected = Pattern::imp(
            Pattern::imp(Pattern::imp(p1, Pattern::Bot), p2),
            c,
        );
        assert_eq!(expand(t.conclusion()), expected);
    }
}

#[test]
fn destruct_or_requires_same_conclusion() {
    let th = empty();
    let err = build_destruct_or(&th, &theorem_of(&th, "a ---> a"), &theorem_of(&th, "b ---> b")).unwrap_err();
    assert!(matches!(err, DeriveError::Precondition(_)));
}

fn congruence_with(ctx: &str, eq: &str) -> Theorem {
    let th = empty();
    let eq = theorem_of(&th, eq);
    let ctx = parse_context_pattern(ctx, &Default::default()).unwrap();
    build_congruence(&th, &ctx, &SVar::new(HOLE), &eq).unwrap()
}

#[test]
fn congruence_identity_context() {
    let t = congruence_with("[]", "(a ---> b) <---> (! b ---> ! a)");
    assert_eq!(expand(t.conclusion()), expand(&pat("(a ---> b) <---> (! b ---> ! a)")));
}

#[test]
fn congruence_through_framing_left() {
    let t = congruence_with("[] $ psi", "! ! a <---> a");
    assert!(t.derivation().nodes.iter().any(|n| matches!(n.rule, Rule::FramingLeft { .. })));
    assert_eq!(
        expand(t.conclusion()),
        expand(&pat("((! ! a) $ psi) <---> (a $ psi)"))
    );
    recheck(&t);
}

#[test]
fn congruence_through_negation() {
    let t = congruence_with("! []", "(a and b) <---> (b and a)");
    assert_eq!(expand(t.conclusion()), expand(&pat("! (a and b) <---> ! (b and a)")));
}

#[test]
fn congruence_refuses_binders() {
    let th = empty();
    let eq = theorem_of(&th, "a <---> ! ! a");
    let ctx = parse_context_pattern("exists . []", &Default::default()).unwrap();
    assert!(matches!(
        build_congruence(&th, &ctx, &SVar::new(HOLE), &eq),
        Err(DeriveError::Precondition(_))
    ));
}

#[test]
fn total_and_on_top() {
    let d = def();
    let top = pat("Top");
    let t = build_total_and(&d.theory, &d.syntax().notations, &top, &top).unwrap();
    assert_eq!(t.conclusion().to_string(), "⌊ Top and Top ⌋ <---> ⌊ Top ⌋ and ⌊ Top ⌋");
    recheck(&t);
}

#[test]
fn total_and_fig4_instance() {
    let d = def();
    let p = parse_pattern("pY ---> pX", d.syntax()).unwrap();
    let q = parse_pattern("pX ---> pY", d.syntax()).unwrap();
    let t = build_total_and(&d.theory, &d.syntax().notations, &p, &q).unwrap();
    assert_eq!(
        t.conclusion().to_string(),
        "⌊ (pY ---> pX) and (pX ---> pY) ⌋ <---> ⌊ pY ---> pX ⌋ and ⌊ pX ---> pY ⌋"
    );
    // the conclusion is valid in the DEF model for every valuation
    let m = builtin_model("counterexample_def").unwrap();
    assert!(ml_core::semantics::holds(&m, t.conclusion()).unwrap());
}

#[test]
fn total_and_needs_definedness() {
    let d = def();
    let th = Arc::new(Theory::new("nodef", Default::default()));
    let err = build_total_and(&th, &d.syntax().notations, &pat("a"), &pat("b")).unwrap_err();
    assert!(matches!(err, DeriveError::Precondition(_)));
}

#[test]
fn singleton_instance() {
    let d = def();
    let ctx = AppContext::new(vec![CtxStep::Right(Pattern::sym("def"))]);
    let t = build_singleton(&d.theory, &ctx, &ctx, &EVar::new("y"), &pat("x")).unwrap();
    let m = builtin_model("counterexample_def").unwrap();
    assert!(ml_core::semantics::holds(&m, t.conclusion()).unwrap());
}

fn contexts_under_test() -> Vec<AppContext> {
    let s = |n: &str| Pattern::sym(n);
    vec![
        AppContext::identity(),
        AppContext::new(vec![CtxStep::Left(s("c"))]),
        AppContext::new(vec![CtxStep::Right(s("c"))]),
        AppContext::new(vec![CtxStep::Left(s("c")), CtxStep::Right(s("d"))]),
        AppContext::new(vec![
            CtxStep::Right(s("c")),
            CtxStep::Left(Pattern::app(s("d"), s("c"))),
            CtxStep::Right(Pattern::imp(s("c"), Pattern::Bot)),
        ]),
    ]
}

fn finish(b: &ProofBuilder, id: usize) -> Theorem {
    b.finish(id, None).unwrap()
}

#[test]
fn single_context_propagation_both_directions() {
    let th = empty();
    let p = pat("a");
    let q = pat("B");
    let body = pat("b0 $ a");
    for ctx in contexts_under_test() {
        let mut b = ProofBuilder::new(Arc::clone(&th));
        let bot = contexts::propagation_bot(&mut b, &ctx).unwrap();
        assert_eq!(*b.concl(bot), Pattern::imp(ctx.plug(&Pattern::Bot), Pattern::Bot));
        let or_ = contexts::propagation_or(&mut b, &ctx, &p, &q).unwrap();
        let or_back = contexts::propagation_or_converse(&mut b, &ctx, &p, &q).unwrap();
        let disj = |x: Pattern, y: Pattern| Pattern::imp(Pattern::imp(x, Pattern::Bot), y);
        let split = disj(ctx.plug(&p), ctx.plug(&q));
        let joined = ctx.plug(&disj(p.clone(), q.clone()));
        assert_eq!(*b.concl(or_), Pattern::imp(joined.clone(), split.clone()));
        assert_eq!(*b.concl(or_back), Pattern::imp(split, joined));
        let ex = contexts::propagation_ex(&mut b, &ctx, &body).unwrap();
        let ex_back = contexts::propagation_ex_converse(&mut b, &ctx, &body).unwrap();
        let inside = ctx.plug(&Pattern::exists(body.clone()));
        let outside = Pattern::exists(ctx.plug(&body));
        assert_eq!(*b.concl(ex), Pattern::imp(inside.clone(), outside.clone()));
        assert_eq!(*b.concl(ex_back), Pattern::imp(outside, inside));
        for id in [bot, or_, or_back, ex, ex_back] {
            let t = finish(&b, id);
            assert!(well_formed(t.conclusion()));
        }
    }
}

#[test]
fn one_step_forms_coincide_with_the_table() {
    // the single-context form on a one-step context is the table's rule
    let th = empty();
    let mut b = ProofBuilder::new(Arc::clone(&th));
    let c = Pattern::sym("c");
    let ctx = AppContext::new(vec![CtxStep::Left(c.clone())]);
    let derived = contexts::propagation_bot(&mut b, &ctx).unwrap();
    let primitive = b.add(Rule::PropagationBotLeft { p: c }).unwrap();
    assert_eq!(b.concl(derived), b.concl(primitive));
}

#[test]
fn builder_shares_identical_steps() {
    let mut b = ProofBuilder::new(empty());
    let a = derived::builder::imp_refl(&mut b, &Pattern::Bot).unwrap();
    let n = b.len();
    let again = derived::builder::imp_refl(&mut b, &Pattern::Bot).unwrap();
    assert_eq!(a, again);
    assert_eq!(b.len(), n);
}

#[test]
fn total_and_is_semantically_valid_on_random_instances() {
    use rand::{Rng, SeedableRng};
    let d = def();
    let m = builtin_model("counterexample_def").unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let leaves = ["one", "two", "f", "x", "Bot", "f $ x", "⌈ f $ one ⌉"];
    for _ in 0..20 {
        let mut pick = || {
            let a = leaves[rng.gen_range(0..leaves.len())];
            let b = leaves[rng.gen_range(0..leaves.len())];
            parse_pattern(&format!("({a}) ---> ! ({b})"), d.syntax()).unwrap()
        };
        let (p, q) = (pick(), pick());
        let t = build_total_and(&d.theory, &d.syntax().notations, &p, &q).unwrap();
        for x in 0..m.size() {
            let rho = Valuation::new().with_evar(EVar::new("x"), x);
            assert_eq!(eval(&m, &rho, t.conclusion()).unwrap(), m.full());
        }
    }
}
