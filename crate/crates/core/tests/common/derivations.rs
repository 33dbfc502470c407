//! Random theories, models satisfying them, and random kernel derivations
//! over those theories, for the soundness differential suite.

use std::sync::Arc;

use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::Rng;

use ml_core::kernel::{conclude, AppContext, CtxStep, Derivation, NodeId, Rule, Theory};
use ml_core::semantics::{find_countervaluation, EvalOptions, Model};
use ml_core::syntax::{evar_close, free_evars, svar_close, well_formed, EVar, Pattern, SVar};

use super::{random_model, Gen};

pub struct World {
    pub symbols: Vec<String>,
    pub theory: Arc<Theory>,
    /// Models of the theory; never empty.
    pub models: Vec<Model>,
}

fn valid_in(m: &Model, p: &Pattern) -> bool {
    matches!(find_countervaluation(m, p, &EvalOptions::default()), Ok(None))
}

/// Up to three symbols and three axioms. Candidate models are drawn first
/// and axioms are kept only if the first model satisfies them, so the
/// theory always has at least one model in the suite.
pub fn random_world(rng: &mut impl Rng) -> World {
    let symbols: Vec<String> = (0..rng.gen_range(1..=3)).map(|i| format!("s{i}")).collect();
    let syms: Vec<&str> = symbols.iter().map(String::as_str).collect();
    let candidates: Vec<Model> = (0..4)
        .map(|_| {
            let n = rng.gen_range(1..=4);
            random_model(rng, n, &syms, false)
        })
        .collect();
    let gen = Gen::new(&syms).depth(3);
    let mut axioms = IndexMap::new();
    let wanted = rng.gen_range(0..=3);
    for _ in 0..60 {
        if axioms.len() == wanted {
            break;
        }
        let p = gen.pattern(rng);
        if valid_in(&candidates[0], &p) {
            axioms.insert(format!("A{}", axioms.len()), p);
        }
    }
    let theory = Arc::new(Theory::new("random", axioms));
    let models = candidates
        .into_iter()
        .filter(|m| theory.axioms().values().all(|a| valid_in(m, a)))
        .collect();
    World {
        symbols,
        theory,
        models,
    }
}

pub struct DerivationGen<'a> {
    world: &'a World,
    small: Gen,
    pub d: Derivation,
    core: Vec<Pattern>,
}

fn split_imp(p: &Pattern) -> Option<(&Pattern, &Pattern)> {
    match p {
        Pattern::Imp(a, b) => Some((a, b)),
        _ => None,
    }
}

impl<'a> DerivationGen<'a> {
    pub fn new(world: &'a World) -> Self {
        let syms: Vec<&str> = world.symbols.iter().map(String::as_str).collect();
        DerivationGen {
            world,
            small: Gen::new(&syms).depth(2),
            d: Derivation::new(),
            core: Vec::new(),
        }
    }

    fn pat(&self, rng: &mut impl Rng) -> Pattern {
        self.small.pattern(rng)
    }

    /// A body with a dangling `b0`: a pattern with `x` free, closed over `x`.
    fn ex_body(&self, rng: &mut impl Rng) -> Pattern {
        let p = Pattern::imp(Pattern::evar("x"), self.pat(rng));
        let p = if rng.gen_bool(0.5) { p } else { Pattern::app(self.pat(rng), Pattern::evar("x")) };
        evar_close(0, &EVar::new("x"), &p)
    }

    /// A body positive in `S0`.
    fn mu_body(&self, rng: &mut impl Rng) -> Pattern {
        let z = SVar::new("Z");
        loop {
            let p = match rng.gen_range(0..3) {
                0 => Pattern::app(self.pat(rng), Pattern::svar("Z")),
                1 => Pattern::imp(self.pat(rng), Pattern::svar("Z")),
                _ => Pattern::imp(Pattern::imp(Pattern::svar("Z"), Pattern::Bot), self.pat(rng)),
            };
            let body = svar_close(0, &z, &p);
            if well_formed(&Pattern::mu(body.clone())) {
                return body;
            }
        }
    }

    fn push(&mut self, rule: Rule) -> Option<NodeId> {
        let id = self.d.len();
        let c = conclude(
            id,
            &rule,
            &|n| self.world.theory.axiom(n).cloned(),
            &|i| self.core.get(i).cloned(),
        )
        .ok()?;
        self.core.push(c.clone());
        Some(self.d.push(rule, c))
    }

    fn implications(&self) -> Vec<NodeId> {
        (0..self.core.len()).filter(|&i| split_imp(&self.core[i]).is_some()).collect()
    }

    fn modus_ponens(&mut self, rng: &mut impl Rng) -> Option<NodeId> {
        let mut pairs = Vec::new();
        for major in self.implications() {
            let (a, _) = split_imp(&self.core[major]).unwrap();
            for (minor, c) in self.core.iter().enumerate() {
                if c == a {
                    pairs.push((minor, major));
                }
            }
        }
        if let Some(&(minor, major)) = pairs.choose(rng) {
            return self.push(Rule::ModusPonens { minor, major });
        }
        // weaken some theorem with Prop1 and detach it
        let minor = rng.gen_range(0..self.core.len());
        let p2 = self.pat(rng);
        let major = self.push(Rule::Prop1 {
            p1: self.core[minor].clone(),
            p2,
        })?;
        self.push(Rule::ModusPonens { minor, major })
    }

    fn ex_gen(&mut self, rng: &mut impl Rng) -> Option<NodeId> {
        let mut options = Vec::new();
        for i in self.implications() {
            let (a, b) = split_imp(&self.core[i]).unwrap();
            let fb = free_evars(b);
            for x in free_evars(a).into_iter().filter(|x| !fb.contains(x)) {
                options.push((i, x));
            }
        }
        let (premise, x) = match options.choose(rng) {
            Some(o) => o.clone(),
            None => {
                let body = self.ex_body(rng);
                (self.push(Rule::ExQuantifier { body, x: EVar::new("y") })?, EVar::new("y"))
            }
        };
        let (a, _) = split_imp(&self.core[premise]).unwrap();
        let body = evar_close(0, &x, a);
        self.push(Rule::ExGen { premise, body, x })
    }

    fn context(&self, rng: &mut impl Rng) -> AppContext {
        let path = (0..rng.gen_range(0..3))
            .map(|_| {
                if rng.gen_bool(0.5) {
                    CtxStep::Left(self.pat(rng))
                } else {
                    CtxStep::Right(self.pat(rng))
                }
            })
            .collect();
        AppContext::new(path)
    }

    /// One random step; `None` if the chosen rule had no valid instance.
    pub fn step(&mut self, rng: &mut impl Rng) -> Option<NodeId> {
        let evar = |rng: &mut dyn rand::RngCore| EVar::new(["x", "y"][rng.gen_range(0..2)]);
        let have_axioms = !self.world.theory.axioms().is_empty();
        match rng.gen_range(0..21) {
            0 if have_axioms => {
                let names: Vec<String> = self.world.theory.axioms().keys().cloned().collect();
                self.push(Rule::Hypothesis {
                    axiom: names.choose(rng).unwrap().clone(),
                })
            }
            1 => {
                let (p1, p2) = (self.pat(rng), self.pat(rng));
                self.push(Rule::Prop1 { p1, p2 })
            }
            2 => {
                let (p1, p2, p3) = (self.pat(rng), self.pat(rng), self.pat(rng));
                self.push(Rule::Prop2 { p1, p2, p3 })
            }
            3 => {
                let p = self.pat(rng);
                self.push(Rule::Prop3 { p })
            }
            4..=6 if !self.core.is_empty() => self.modus_ponens(rng),
            7 => {
                let body = self.ex_body(rng);
                self.push(Rule::ExQuantifier { body, x: evar(rng) })
            }
            8 => self.ex_gen(rng),
            9 => {
                let p = self.pat(rng);
                self.push(Rule::PropagationBotLeft { p })
            }
            10 => {
                let p = self.pat(rng);
                self.push(Rule::PropagationBotRight { p })
            }
            11 => {
                let (p1, p2, p3) = (self.pat(rng), self.pat(rng), self.pat(rng));
                if rng.gen_bool(0.5) {
                    self.push(Rule::PropagationOrLeft { p1, p2, p3 })
                } else {
                    self.push(Rule::PropagationOrRight { p1, p2, p3 })
                }
            }
            12 => {
                let (body, p) = (self.ex_body(rng), self.pat(rng));
                if rng.gen_bool(0.5) {
                    self.push(Rule::PropagationExLeft { body, p })
                } else {
                    self.push(Rule::PropagationExRight { p, body })
                }
            }
            13 | 14 => {
                let premise = *self.implications().choose(rng)?;
                let frame = self.pat(rng);
                if rng.gen_bool(0.5) {
                    self.push(Rule::FramingLeft { premise, frame })
                } else {
                    self.push(Rule::FramingRight { premise, frame })
                }
            }
            15 if !self.core.is_empty() => {
                let premise = rng.gen_range(0..self.core.len());
                let psi = self.pat(rng);
                self.push(Rule::Substitution {
                    premise,
                    psi,
                    var: SVar::new("X"),
                })
            }
            16 => {
                let body = self.mu_body(rng);
                self.push(Rule::PreFixpoint { body })
            }
            17 => {
                // μ.φ → μ.φ from the prefixpoint axiom
                let body = self.mu_body(rng);
                let premise = self.push(Rule::PreFixpoint { body: body.clone() })?;
                self.push(Rule::KnasterTarski { premise, body })
            }
            18 => self.push(Rule::Existence),
            19 => {
                let (ctx1, ctx2, p) = (self.context(rng), self.context(rng), self.pat(rng));
                self.push(Rule::Singleton {
                    ctx1,
                    ctx2,
                    x: evar(rng),
                    p,
                })
            }
            _ => None,
        }
    }

    /// Runs `steps` attempts and returns the finished derivation.
    pub fn run(mut self, rng: &mut impl Rng, steps: usize) -> Derivation {
        while self.d.is_empty() {
            self.step(rng);
        }
        for _ in 0..steps {
            self.step(rng);
        }
        self.d
    }
}
