mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::relations::{pair_model, warshall};
use common::{random_model, random_valuation, Gen};
use ml_core::format::parse_pattern;
use ml_core::semantics::{eval, holds, ElemSet, Valuation};
use ml_core::syntax::{expand, Pattern};
use ml_core::theories::{
    builtin_model, counterexample_suite, definedness_not_empty_iff, definedness_sides,
    equal_iff_interpr_same, satisfies_def, totality_not_full_iff, transitive_closure, TheoryError,
    TheoryLibrary,
};

#[test]
fn def_loads_by_name() {
    let lib = TheoryLibrary::builtin();
    let d = lib.load("DEF").unwrap();
    assert_eq!(d.theory.axioms().len(), 1);
    assert_eq!(
        expand(d.theory.axiom("Definedness").unwrap()),
        Pattern::app(Pattern::sym("def"), Pattern::evar("x"))
    );
    assert!(matches!(lib.load("NOPE"), Err(TheoryError::UnknownTheory(_))));
}

#[test]
fn def_notations_match_the_definition_table() {
    let d = TheoryLibrary::builtin().load("DEF").unwrap();
    let s = d.syntax();
    let p = |t: &str| parse_pattern(t, s).unwrap();
    // notation use on the left, its defining right-hand side spelled out
    let table = [
        ("⌈ A ⌉", "def $ A"),
        ("⌊ A ⌋", "! ⌈ ! A ⌉"),
        ("A = B", "⌊ A <---> B ⌋"),
        ("A != B", "! (A = B)"),
        ("x in A", "⌈ x and A ⌉"),
        ("A subseteq B", "⌊ A ---> B ⌋"),
        ("x notin A", "! (x in A)"),
        ("A notsubseteq B", "! (A subseteq B)"),
    ];
    for (lhs, rhs) in table {
        let l = p(lhs);
        assert!(matches!(l, Pattern::Notation(_)), "{lhs} should stay folded");
        let Pattern::Notation(n) = &l else { unreachable!() };
        let unfolded = n.def.unfold(&n.args);
        assert_eq!(unfolded, p(rhs), "{lhs}");
        assert_eq!(unfolded.to_string(), p(rhs).to_string());
    }
}

#[test]
fn definedness_examples() {
    let m = builtin_model("counterexample_def").unwrap();
    let rho = Valuation::new();
    let bot = definedness_not_empty_iff(&m, &rho, &Pattern::Bot).unwrap();
    assert!(!bot.lhs && !bot.rhs);
    let x = definedness_not_empty_iff(&m, &rho, &Pattern::evar("x")).unwrap();
    assert!(x.lhs && x.rhs);
}

#[test]
fn lemmas_require_a_def_model() {
    let m = builtin_model("counterexample").unwrap();
    assert!(!satisfies_def(&m).unwrap());
    let err = definedness_not_empty_iff(&m, &Valuation::new(), &Pattern::Bot).unwrap_err();
    assert!(matches!(err, TheoryError::Precondition(_)));
}

#[test]
fn random_definedness_totality_equality() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let gen = Gen::new(&["a", "b"]).depth(4);
    for i in 0..1000 {
        let n = 2 + i % 3;
        let m = random_model(&mut rng, n, &["a", "b"], true);
        assert!(satisfies_def(&m).unwrap());
        let rho = random_valuation(&mut rng, &m);
        let p = gen.pattern(&mut rng);
        let q = gen.pattern(&mut rng);
        assert!(definedness_not_empty_iff(&m, &rho, &p).unwrap().holds(), "{p}");
        assert!(totality_not_full_iff(&m, &rho, &p).unwrap().holds(), "{p}");
        assert!(equal_iff_interpr_same(&m, &rho, &p, &q).unwrap().holds(), "{p} = {q}");
        assert!(equal_iff_interpr_same(&m, &rho, &p, &p).unwrap().lhs);
    }
}

#[test]
fn only_if_direction_without_def() {
    // ⌈ φ ⌉ = M forces φ ≠ ∅ in any model: application to ∅ is ∅
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let gen = Gen::new(&["a", "def"]).depth(3);
    for i in 0..500 {
        let m = random_model(&mut rng, 1 + i % 4, &["a", "def"], false);
        let rho = random_valuation(&mut rng, &m);
        let p = gen.pattern(&mut rng);
        let c = definedness_sides(&m, &rho, &p).unwrap();
        assert!(!c.rhs || c.lhs, "{p}");
    }
}

#[test]
fn counterexample_model() {
    let r = counterexample_suite().unwrap();
    assert!(r.exists_iff_holds);
    assert_eq!(r.f_one, r.carrier);
    assert_eq!(r.carrier.len(), 3);
    assert_eq!(r.f_two, ElemSet::EMPTY);
    assert!(!r.f_functional_on_one);
}

#[test]
fn equality_separates_f_one_and_f_two() {
    let m = builtin_model("counterexample_def").unwrap();
    let d = TheoryLibrary::builtin().load("DEF").unwrap();
    let mut syn = d.syntax().clone();
    for s in ["f", "one", "two"] {
        syn.signature.declare(s);
    }
    let fo = parse_pattern("f $ one", &syn).unwrap();
    let ft = parse_pattern("f $ two", &syn).unwrap();
    assert_eq!(fo, Pattern::app(Pattern::sym("f"), Pattern::sym("one")));
    let rho = Valuation::new();
    let c = equal_iff_interpr_same(&m, &rho, &fo, &ft).unwrap();
    assert!(!c.lhs && !c.rhs);
    let eq = parse_pattern("f $ one = f $ two", &syn).unwrap();
    assert_eq!(eval(&m, &rho, &eq).unwrap(), ElemSet::EMPTY);
}

#[test]
fn transitive_closure_matches_the_display() {
    let rel = TheoryLibrary::builtin().load("REL").unwrap();
    let r = Pattern::sym("R");
    let tc = transitive_closure(&rel.syntax().notations, &r, "pair").unwrap();
    let display = parse_pattern(
        "mu . R or exists . exists . exists . <b2, b0> and <b2, b1> in S0 and <b1, b0> in S0",
        rel.syntax(),
    )
    .unwrap();
    assert_eq!(tc, display);
    assert!(ml_core::syntax::well_formed(&expand(&tc)));
}

#[test]
fn transitive_closure_agrees_with_warshall() {
    let rel_theory = TheoryLibrary::builtin().load("REL").unwrap();
    let tc = transitive_closure(&rel_theory.syntax().notations, &Pattern::sym("R"), "pair").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [2usize, 3, 3, 4] {
        let rel: Vec<(usize, usize)> = (0..n * n)
            .filter(|_| rng.gen_ratio(1, 3))
            .map(|i| (i / n, i % n))
            .collect();
        let (m, pair_el) = pair_model(n, &rel);
        assert!(satisfies_def(&m).unwrap());
        let got = eval(&m, &Valuation::new(), &tc).unwrap();
        let closure = warshall(n, &rel);
        let expected: ElemSet = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| closure[a][b])
            .map(|(a, b)| pair_el(a, b))
            .collect();
        assert_eq!(got, expected, "relation {rel:?}");
    }
}

#[test]
fn fixture_files_parse_from_disk() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../theories");
    let mut lib = TheoryLibrary::default();
    lib.add_dir(&dir).unwrap();
    let names: Vec<&str> = lib.names().collect();
    assert!(names.contains(&"DEF") && names.contains(&"REL"));
    assert!(holds(&builtin_model("counterexample").unwrap(), &Pattern::exists(Pattern::BoundEVar(0))).unwrap());
}
