//! Differential soundness: every checked derivation over a random theory
//! proves something valid in every suite model of that theory.

mod common;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::derivations::{random_world, DerivationGen};
use ml_core::kernel::{check, RULE_NAMES};
use ml_core::semantics::{find_countervaluation, EvalOptions};
use ml_core::syntax::well_formed;

#[test]
fn checked_derivations_are_valid_in_models_of_the_theory() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut rules: BTreeMap<&str, usize> = BTreeMap::new();
    let mut model_checks = 0;
    for case in 0..1000 {
        let world = random_world(&mut rng);
        let d = DerivationGen::new(&world).run(&mut rng, 12);
        let t = check(&world.theory, &d).unwrap_or_else(|e| panic!("case {case}: {e}"));
        assert!(well_formed(t.conclusion()));
        for n in &d.nodes {
            *rules.entry(n.rule.name()).or_default() += 1;
        }
        for m in &world.models {
            // every node is itself a theorem
            for n in &d.nodes {
                let w = find_countervaluation(m, &n.conclusion, &EvalOptions::default()).unwrap();
                assert!(
                    w.is_none(),
                    "case {case}: {} concludes {} which fails in {}",
                    n.rule.name(),
                    n.conclusion,
                    m.name()
                );
                model_checks += 1;
            }
        }
    }
    // the generator reaches every rule
    for r in RULE_NAMES {
        assert!(rules.get(r).copied().unwrap_or(0) > 0, "rule {r} never generated: {rules:?}");
    }
    assert!(model_checks > 1000);
}

#[test]
fn tampered_conclusions_are_rejected() {
    // swapping the claimed conclusion of a node for another node's is caught
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut rejected = 0;
    for _ in 0..100 {
        let world = random_world(&mut rng);
        let mut d = DerivationGen::new(&world).run(&mut rng, 8);
        if d.len() < 2 {
            continue;
        }
        let (i, j) = (d.len() - 1, 0);
        if d.nodes[i].conclusion == d.nodes[j].conclusion {
            continue;
        }
        d.nodes[i].conclusion = d.nodes[j].conclusion.clone();
        assert!(check(&world.theory, &d).is_err());
        rejected += 1;
    }
    assert!(rejected > 50);
}
