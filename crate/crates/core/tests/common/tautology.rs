//! A truth-table oracle for `tauto`.

use std::sync::Arc;

use rand::Rng;

use ml_core::derived::{tauto, TautoOutcome};
use ml_core::kernel::{check, Theory};
use ml_core::syntax::notation::{and, iff, not, or};
use ml_core::syntax::{expand, Pattern};

/// Every `⊥`/`--->` formula over `atoms` of depth at most `depth`.
pub fn skeletons(atoms: &[Pattern], depth: u32) -> Vec<Pattern> {
    let base: Vec<Pattern> = atoms.iter().cloned().chain([Pattern::Bot]).collect();
    let mut level = base.clone();
    for _ in 0..depth {
        let mut next = base.clone();
        for a in &level {
            for b in &level {
                next.push(Pattern::imp(a.clone(), b.clone()));
            }
        }
        level = next;
    }
    level
}

pub fn truth(p: &Pattern, atoms: &[Pattern], row: u32) -> bool {
    match p {
        Pattern::Bot => false,
        Pattern::Imp(a, b) => !truth(a, atoms, row) || truth(b, atoms, row),
        Pattern::Notation(_) => truth(&expand(p), atoms, row),
        atom => {
            let i = atoms.iter().position(|a| a == atom).expect("known atom");
            row >> i & 1 == 1
        }
    }
}

pub fn is_tautology(p: &Pattern, atoms: &[Pattern]) -> bool {
    (0..1u32 << atoms.len()).all(|row| truth(p, atoms, row))
}

/// Compares one formula with the oracle; returns whether it was proved.
pub fn agree(theory: &Arc<Theory>, p: &Pattern, atoms: &[Pattern]) -> bool {
    let taut = is_tautology(p, atoms);
    match tauto(theory, p).unwrap() {
        TautoOutcome::Proved(t) => {
            assert!(taut, "proved a non-tautology {p}");
            assert_eq!(t.conclusion(), p);
            let again = check(theory, t.derivation()).expect("kernel re-check");
            assert_eq!(again.conclusion(), p);
            true
        }
        TautoOutcome::NotTautology(v) => {
            assert!(!taut, "missed the tautology {p}");
            // the reported assignment really falsifies the formula
            let row = v
                .iter()
                .filter(|(_, b)| *b)
                .map(|(a, _)| 1u32 << atoms.iter().position(|x| x == a).unwrap())
                .sum();
            assert!(!truth(p, atoms, row), "{p} holds under {v:?}");
            false
        }
    }
}

pub fn atoms(n: usize) -> Vec<Pattern> {
    ["a", "b", "c", "d"][..n].iter().map(Pattern::evar).collect()
}

pub fn empty() -> Arc<Theory> {
    Arc::new(Theory::empty())
}

pub fn random_formula(r: &mut impl Rng, atoms: &[Pattern], depth: u32) -> Pattern {
    if depth == 0 || r.gen_ratio(1, 5) {
        return if r.gen_ratio(1, 8) { Pattern::Bot } else { atoms[r.gen_range(0..atoms.len())].clone() };
    }
    let op = r.gen_range(0..5);
    let mut sub = || random_formula(r, atoms, depth - 1);
    match op {
        0 => Pattern::imp(sub(), sub()),
        1 => not(sub()),
        2 => and(sub(), sub()),
        3 => or(sub(), sub()),
        _ => iff(sub(), sub()),
    }
}
