//! Random well-formed patterns for the property tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;

use ml_core::semantics::{ElemSet, Model, Valuation};
use ml_core::syntax::notation::{and, forall, iff, not, nu, or, top};
use ml_core::syntax::{well_formed, EVar, Pattern, SVar, Symbol};

#[derive(Clone, Debug)]
pub struct Gen {
    pub symbols: Vec<String>,
    pub evars: Vec<String>,
    pub svars: Vec<String>,
    pub max_depth: u32,
    pub binders: bool,
    pub mu: bool,
    /// Emit folded notation nodes (not, or, and, iff, top, forall, nu).
    pub notations: bool,
}

impl Gen {
    pub fn new(symbols: &[&str]) -> Self {
        Gen {
            symbols: symbols.iter().map(|s| s.to_string()).collect(),
            evars: vec!["x".into(), "y".into()],
            svars: vec!["X".into()],
            max_depth: 4,
            binders: true,
            mu: true,
            notations: false,
        }
    }

    pub fn depth(mut self, d: u32) -> Self {
        self.max_depth = d;
        self
    }

    pub fn with_notations(mut self) -> Self {
        self.notations = true;
        self
    }

    pub fn without_mu(mut self) -> Self {
        self.mu = false;
        self
    }

    pub fn closed(mut self) -> Self {
        self.evars.clear();
        self.svars.clear();
        self
    }

    /// A well-formed pattern (positive μ bodies, no dangling indices).
    pub fn pattern(&self, rng: &mut impl Rng) -> Pattern {
        let p = self.go(rng, self.max_depth, 0, &mut Vec::new(), true);
        debug_assert!(well_formed(&ml_core::syntax::expand(&p)), "{p:?}");
        p
    }

    fn leaf(&self, rng: &mut impl Rng, ex: u32, mus: &[bool], pol: bool) -> Pattern {
        let allowed_s: Vec<u32> = (0..mus.len() as u32)
            .filter(|&i| mus[mus.len() - 1 - i as usize] == pol)
            .collect();
        loop {
            match rng.gen_range(0..7) {
                0 | 1 if !self.symbols.is_empty() => {
                    return Pattern::sym(&self.symbols[rng.gen_range(0..self.symbols.len())])
                }
                2 if !self.evars.is_empty() => {
                    return Pattern::evar(&self.evars[rng.gen_range(0..self.evars.len())])
                }
                3 if !self.svars.is_empty() => {
                    return Pattern::svar(&self.svars[rng.gen_range(0..self.svars.len())])
                }
                4 if ex > 0 => return Pattern::BoundEVar(rng.gen_range(0..ex) as _),
                5 if !allowed_s.is_empty() => {
                    return Pattern::BoundSVar(allowed_s[rng.gen_range(0..allowed_s.len())] as _)
                }
                6 => return Pattern::Bot,
                _ => {}
            }
        }
    }

    fn go(&self, rng: &mut impl Rng, depth: u32, ex: u32, mus: &mut Vec<bool>, pol: bool) -> Pattern {
        if depth == 0 || rng.gen_ratio(1, 4) {
            return self.leaf(rng, ex, mus, pol);
        }
        let d = depth - 1;
        let choices = if self.notations { 12 } else { 5 };
        match rng.gen_range(0..choices) {
            0 | 1 => Pattern::app(self.go(rng, d, ex, mus, pol), self.go(rng, d, ex, mus, pol)),
            2 => Pattern::imp(self.go(rng, d, ex, mus, !pol), self.go(rng, d, ex, mus, pol)),
            3 if self.binders => Pattern::exists(self.go(rng, d, ex + 1, mus, pol)),
            4 if self.binders && self.mu => {
                mus.push(pol);
                let body = self.go(rng, d, ex, mus, pol);
                mus.pop();
                Pattern::mu(body)
            }
            5 => not(self.go(rng, d, ex, mus, !pol)),
            6 => or(self.go(rng, d, ex, mus, pol), self.go(rng, d, ex, mus, pol)),
            7 => and(self.go(rng, d, ex, mus, pol), self.go(rng, d, ex, mus, pol)),
            8 => {
                // iff puts its arguments under both polarities, so they get
                // no bound set variables
                let mut none = vec![];
                iff(self.go(rng, d, ex, &mut none, pol), self.go(rng, d, ex, &mut none, pol))
            }
            9 => top(),
            10 if self.binders => {
                // forall . φ ≡ ! ∃ . ! φ: φ keeps its polarity
                forall(self.go(rng, d, ex + 1, mus, pol))
            }
            11 if self.binders && self.mu => {
                mus.push(pol);
                let body = self.go(rng, d, ex, mus, pol);
                mus.pop();
                nu(body)
            }
            _ => self.leaf(rng, ex, mus, pol),
        }
    }
}


/// A random model over `n` elements interpreting `symbols`. With `def`, the
/// last element is a definedness element: `def` is `{d}` and `d` applied to
/// anything is the whole carrier, so the model satisfies `⌈ x ⌉`.
pub fn random_model(rng: &mut impl Rng, n: usize, symbols: &[&str], def: bool) -> Model {
    let full = (1u128 << n) - 1;
    let table: Vec<u128> = (0..n * n)
        .map(|i| {
            if def && i / n == n - 1 {
                full
            } else {
                rng.gen_range(0..=full)
            }
        })
        .collect();
    let mut syms: BTreeMap<Symbol, ElemSet> = symbols
        .iter()
        .map(|s| (Symbol::new(s), ElemSet::from_bits(rng.gen_range(0..=full))))
        .collect();
    if def {
        syms.insert(Symbol::new("def"), ElemSet::singleton(n - 1));
    }
    let elements = (0..n).map(|i| format!("e{i}")).collect();
    Model::new(format!("random{n}"), elements, |a, b| ElemSet::from_bits(table[a * n + b]), syms)
        .expect("valid random model")
}

/// A random valuation of `x`, `y` and `X`.
pub fn random_valuation(rng: &mut impl Rng, m: &Model) -> Valuation {
    let full = (1u128 << m.size()) - 1;
    Valuation::new()
        .with_evar(EVar::new("x"), rng.gen_range(0..m.size()))
        .with_evar(EVar::new("y"), rng.gen_range(0..m.size()))
        .with_svar(SVar::new("X"), ElemSet::from_bits(rng.gen_range(0..=full)))
}

pub mod derivations;
pub mod relations;
pub mod tautology;
