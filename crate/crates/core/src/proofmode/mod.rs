//! Interactive proof mode.
//!
//! A proof state is a list of named local hypotheses and a goal, read as the
//! implication chain `ψ₁ ---> … ---> ψₘ ---> χ` (see [`Goal::to_goal`]).
//! Tactics replace the focused goal by zero or more subgoals and record how
//! a proof of the subgoals yields a proof of the goal. Nothing is trusted:
//! [`Session::qed`] turns the recorded steps into one derivation and runs the
//! kernel checker on it.
//!
//! Patterns in a session are kept folded for display; all comparisons go
//! through [`expand`].

pub mod lemma;
pub mod script;
pub mod tactic;
mod view;

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::derived::congruence::{self, Occurrence};
use crate::derived::prop::{self, Prop};
use crate::derived::{occurrences, replace_at, HTerm, ProofBuilder, Step, TautoOutcome};
use crate::format::Syntax;
use crate::kernel::{Theorem, Theory};
use crate::syntax::notation::{or, unfold_head};
use crate::syntax::{expand, fevar_subst, free_evars, well_formed, EVar, Pattern};
use crate::theories::LoadedTheory;

pub use script::{parse_script, run_script, ScriptError, ScriptLine, ScriptRun, TranscriptEntry};
pub use tactic::{LemmaRef, Tactic};
pub use view::{GoalView, HypView, Rendered, StateView};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofModeError {
    #[error("{0}")]
    Parse(String),
    #[error("no goals left")]
    NoGoals,
    #[error("no hypothesis named {0:?}")]
    UnknownHypothesis(String),
    #[error("a hypothesis named {0:?} already exists")]
    DuplicateName(String),
    #[error("{0}")]
    ShapeMismatch(String),
    #[error("occurrence {at} requested, but the goal has {found}")]
    NoOccurrence { at: usize, found: usize },
    #[error("occurrence {0} is under a binder; rewriting there is not supported")]
    UnderBinder(usize),
    #[error("not a tautology; falsified by {0}")]
    NotTautology(String),
    #[error("{0}")]
    BadLemma(String),
    #[error("ill-formed pattern: {0}")]
    IllFormed(String),
    #[error("nothing to undo")]
    NothingToUndo,
    #[error("{0} goal(s) still open")]
    OpenGoals(usize),
    #[error("kernel rejected the assembled proof: {0}")]
    Kernel(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl ProofModeError {
    /// Stable error code.
    pub fn code(&self) -> &'static str {
        match self {
            ProofModeError::Parse(_) => "parse",
            ProofModeError::NoGoals => "no-goals",
            ProofModeError::UnknownHypothesis(_) => "unknown-hypothesis",
            ProofModeError::DuplicateName(_) => "duplicate-name",
            ProofModeError::ShapeMismatch(_) => "shape-mismatch",
            ProofModeError::NoOccurrence { .. } => "no-occurrence",
            ProofModeError::UnderBinder(_) => "under-binder",
            ProofModeError::NotTautology(_) => "not-tautology",
            ProofModeError::BadLemma(_) => "bad-lemma",
            ProofModeError::IllFormed(_) => "ill-formed",
            ProofModeError::NothingToUndo => "nothing-to-undo",
            ProofModeError::OpenGoals(_) => "open-goals",
            ProofModeError::Kernel(_) => "kernel",
            ProofModeError::Internal(_) => "internal",
        }
    }
}

/// Local hypotheses and a goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Goal {
    pub hyps: Vec<(String, Pattern)>,
    pub concl: Pattern,
}

impl Goal {
    /// `ψ₁ ---> … ---> ψₘ ---> χ`
    pub fn to_goal(&self) -> Pattern {
        self.hyps
            .iter()
            .rev()
            .fold(self.concl.clone(), |acc, (_, h)| Pattern::imp(h.clone(), acc))
    }

    fn find(&self, name: &str) -> Result<usize, ProofModeError> {
        self.hyps
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| ProofModeError::UnknownHypothesis(name.into()))
    }

    fn has(&self, name: &str) -> bool {
        self.hyps.iter().any(|(n, _)| n == name)
    }

    fn fresh_name(&self) -> String {
        (0..)
            .map(|i| format!("H{i}"))
            .find(|n| !self.has(n))
            .expect("some name is free")
    }
}

pub type GoalId = usize;

/// How the goal of a step follows from its subgoals.
#[derive(Clone, Debug)]
enum Just {
    /// Same statement, different display.
    Same,
    Intro,
    Revert,
    Clear(usize),
    DestructOr(usize),
    /// The hypothesis applied to proofs of the subgoals.
    Hyp(usize),
    /// The theorem applied to the listed hypotheses, then to the subgoals.
    Lemma { thm: Theorem, hyps: Vec<usize> },
    /// `⊢ new ---> old`
    Rewrite(Theorem),
}

#[derive(Clone, Debug)]
struct StepRecord {
    goal: GoalId,
    just: Just,
    children: Vec<GoalId>,
}

#[derive(Clone, Debug)]
struct Snapshot {
    open: Vec<GoalId>,
    goals: usize,
    steps: usize,
    aliases: Vec<(EVar, EVar)>,
    tactic: String,
}

/// One proof in progress.
#[derive(Clone, Debug)]
pub struct Session {
    theory: LoadedTheory,
    goals: Vec<Goal>,
    steps: Vec<StepRecord>,
    /// Open goals, the focused one first.
    open: Vec<GoalId>,
    /// Display names of free element variables: (variable, shown as).
    aliases: Vec<(EVar, EVar)>,
    history: Vec<Snapshot>,
}

struct Outcome {
    just: Just,
    children: Vec<Goal>,
}

impl Session {
    /// Starts a proof of `goal` in `theory`.
    pub fn new(theory: LoadedTheory, goal: Pattern) -> Result<Session, ProofModeError> {
        check_wf(&goal)?;
        Ok(Session {
            theory,
            goals: vec![Goal {
                hyps: Vec::new(),
                concl: goal,
            }],
            steps: Vec::new(),
            open: vec![0],
            aliases: Vec::new(),
            history: Vec::new(),
        })
    }

    /// Starts a proof of a goal given in concrete syntax.
    pub fn parse(theory: LoadedTheory, goal: &str) -> Result<Session, ProofModeError> {
        let g = crate::format::parse_pattern(goal, theory.syntax())
            .map_err(|e| ProofModeError::Parse(e.to_string()))?;
        Session::new(theory, g)
    }

    pub fn theory(&self) -> &LoadedTheory {
        &self.theory
    }

    pub fn syntax(&self) -> &Syntax {
        self.theory.syntax()
    }

    /// The statement being proved.
    pub fn initial_goal(&self) -> &Pattern {
        &self.goals[0].concl
    }

    /// Open goals, the focused one first.
    pub fn open_goals(&self) -> Vec<&Goal> {
        self.open.iter().map(|&g| &self.goals[g]).collect()
    }

    pub fn focused(&self) -> Option<&Goal> {
        self.open.first().map(|&g| &self.goals[g])
    }

    pub fn is_complete(&self) -> bool {
        self.open.is_empty()
    }

    /// Applied tactics, oldest first.
    pub fn script(&self) -> Vec<&str> {
        self.history.iter().map(|s| s.tactic.as_str()).collect()
    }

    /// Number of goal-changing steps taken.
    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    /// Parses and applies one tactic. On error the session is unchanged.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ProofModeError> {
        let t = Tactic::parse(text, self.syntax()).map_err(|e| ProofModeError::Parse(e.to_string()))?;
        self.apply_as(&t, text.trim())
    }

    pub fn apply(&mut self, t: &Tactic) -> Result<(), ProofModeError> {
        self.apply_as(t, &t.to_string())
    }

    fn apply_as(&mut self, t: &Tactic, text: &str) -> Result<(), ProofModeError> {
        let snapshot = Snapshot {
            open: self.open.clone(),
            goals: self.goals.len(),
            steps: self.steps.len(),
            aliases: self.aliases.clone(),
            tactic: text.to_owned(),
        };
        if let Tactic::Remember { var, alias } = t {
            self.check_alias(var, alias)?;
            self.history.push(snapshot);
            self.aliases.push((EVar::new(var), EVar::new(alias)));
            return Ok(());
        }
        let &gid = self.open.first().ok_or(ProofModeError::NoGoals)?;
        let out = self.run(&self.goals[gid], t)?;
        for g in &out.children {
            check_goal_wf(g)?;
        }
        self.history.push(snapshot);
        let ids: Vec<GoalId> = (self.goals.len()..self.goals.len() + out.children.len()).collect();
        self.goals.extend(out.children);
        self.steps.push(StepRecord {
            goal: gid,
            just: out.just,
            children: ids.clone(),
        });
        self.open.splice(0..1, ids);
        Ok(())
    }

    /// Reverts the last tactic.
    pub fn undo(&mut self) -> Result<(), ProofModeError> {
        let s = self.history.pop().ok_or(ProofModeError::NothingToUndo)?;
        self.open = s.open;
        self.goals.truncate(s.goals);
        self.steps.truncate(s.steps);
        self.aliases = s.aliases;
        Ok(())
    }

    fn check_alias(&self, var: &str, alias: &str) -> Result<(), ProofModeError> {
        let mut used: BTreeSet<EVar> = BTreeSet::new();
        for g in &self.goals {
            used.extend(free_evars(&g.to_goal()));
        }
        let alias_v = EVar::new(alias);
        if used.contains(&alias_v) || self.aliases.iter().any(|(a, b)| *a == alias_v || *b == alias_v) {
            return Err(ProofModeError::DuplicateName(alias.into()));
        }
        if self.aliases.iter().any(|(a, _)| a.as_str() == var) {
            return Err(ProofModeError::DuplicateName(var.into()));
        }
        Ok(())
    }

    /// `p` with aliases shown.
    pub fn show(&self, p: &Pattern) -> Pattern {
        self.aliases.iter().fold(p.clone(), |acc, (real, shown)| {
            fevar_subst(&acc, &Pattern::FreeEVar(shown.clone()), real).unwrap_or(acc)
        })
    }

    /// `p` as typed by the user, with aliases replaced by their variables.
    pub fn unshow(&self, p: &Pattern) -> Pattern {
        self.aliases.iter().rev().fold(p.clone(), |acc, (real, shown)| {
            fevar_subst(&acc, &Pattern::FreeEVar(real.clone()), shown).unwrap_or(acc)
        })
    }

    fn resolve(&self, r: &LemmaRef) -> Result<Theorem, ProofModeError> {
        let r = LemmaRef {
            name: r.name.clone(),
            args: r.args.iter().map(|a| self.unshow(a)).collect(),
        };
        lemma::resolve(&self.theory.theory, &self.syntax().notations, &r)
    }

    fn run(&self, g: &Goal, t: &Tactic) -> Result<Outcome, ProofModeError> {
        let one = |just: Just, child: Goal| Outcome {
            just,
            children: vec![child],
        };
        match t {
            Tactic::Intro(name) => {
                let Pattern::Imp(a, c) = unfold_head(&g.concl) else {
                    return Err(ProofModeError::ShapeMismatch(format!(
                        "mlIntro: the goal {} is not an implication",
                        self.show(&g.concl)
                    )));
                };
                let name = match name {
                    Some(n) if g.has(n) => return Err(ProofModeError::DuplicateName(n.clone())),
                    Some(n) => n.clone(),
                    None => g.fresh_name(),
                };
                let mut hyps = g.hyps.clone();
                hyps.push((name, (*a).clone()));
                Ok(one(
                    Just::Intro,
                    Goal {
                        hyps,
                        concl: (*c).clone(),
                    },
                ))
            }
            Tactic::RevertLast => {
                let mut hyps = g.hyps.clone();
                let (_, h) = hyps
                    .pop()
                    .ok_or_else(|| ProofModeError::ShapeMismatch("mlRevertLast: no hypotheses".into()))?;
                Ok(one(
                    Just::Revert,
                    Goal {
                        hyps,
                        concl: Pattern::imp(h, g.concl.clone()),
                    },
                ))
            }
            Tactic::Clear(name) => {
                let i = g.find(name)?;
                let mut hyps = g.hyps.clone();
                hyps.remove(i);
                Ok(one(
                    Just::Clear(i),
                    Goal {
                        hyps,
                        concl: g.concl.clone(),
                    },
                ))
            }
            Tactic::DestructOr { hyp, left, right } => {
                let i = g.find(hyp)?;
                let (a, b) = disjuncts(&g.hyps[i].1).ok_or_else(|| {
                    ProofModeError::ShapeMismatch(format!(
                        "mlDestructOr: {hyp:?} : {} is not a disjunction",
                        self.show(&g.hyps[i].1)
                    ))
                })?;
                let mut children = Vec::new();
                for (name, part) in [(left, a), (right, b)] {
                    if g.hyps.iter().enumerate().any(|(j, (n, _))| j != i && n == name) {
                        return Err(ProofModeError::DuplicateName(name.clone()));
                    }
                    let mut hyps = g.hyps.clone();
                    hyps[i] = (name.clone(), part);
                    children.push(Goal {
                        hyps,
                        concl: g.concl.clone(),
                    });
                }
                Ok(Outcome {
                    just: Just::DestructOr(i),
                    children,
                })
            }
            Tactic::Apply(name) | Tactic::Exact(name) => {
                let i = g.find(name)?;
                let h = &g.hyps[i].1;
                let (premises, shown) = spine_match(h, &expand(&g.concl)).ok_or_else(|| {
                    ProofModeError::ShapeMismatch(format!(
                        "{}: the conclusion of {name:?} : {} does not match the goal {}",
                        t.name(),
                        self.show(h),
                        self.show(&g.concl)
                    ))
                })?;
                if matches!(t, Tactic::Exact(_)) && !premises.is_empty() {
                    return Err(ProofModeError::ShapeMismatch(format!(
                        "mlExact: {name:?} : {} is not the goal {}",
                        self.show(h),
                        self.show(&g.concl)
                    )));
                }
                let mut hyps = g.hyps.clone();
                hyps[i].1 = shown;
                let children = premises
                    .into_iter()
                    .map(|p| Goal {
                        hyps: hyps.clone(),
                        concl: p,
                    })
                    .collect();
                Ok(Outcome {
                    just: Just::Hyp(i),
                    children,
                })
            }
            Tactic::ApplyMeta(r) => {
                let thm = self.resolve(r)?;
                let (premises, _) = spine_match(thm.conclusion(), &expand(&g.concl)).ok_or_else(|| {
                    ProofModeError::ShapeMismatch(format!(
                        "mlApplyMeta: the conclusion of {} does not match the goal {}",
                        self.show(thm.conclusion()),
                        self.show(&g.concl)
                    ))
                })?;
                let children = premises
                    .into_iter()
                    .map(|p| Goal {
                        hyps: g.hyps.clone(),
                        concl: p,
                    })
                    .collect();
                Ok(Outcome {
                    just: Just::Lemma { thm, hyps: vec![] },
                    children,
                })
            }
            Tactic::Rewrite { lemma, at } => self.rewrite(g, lemma, *at),
            Tactic::Tauto => match crate::derived::tauto(&self.theory.theory, &g.to_goal())? {
                TautoOutcome::Proved(thm) => Ok(Outcome {
                    just: Just::Lemma {
                        thm,
                        hyps: (0..g.hyps.len()).collect(),
                    },
                    children: vec![],
                }),
                TautoOutcome::NotTautology(v) => {
                    let v: Vec<_> = v.into_iter().map(|(p, b)| (self.show(&p), b)).collect();
                    Err(ProofModeError::NotTautology(lemma::render_assignment(&v)))
                }
            },
            Tactic::Unfold(names) => {
                let mut found = false;
                let concl = unfold_named(&g.concl, names, &mut found);
                if !found {
                    return Err(ProofModeError::ShapeMismatch(format!(
                        "mlUnfold: no {} in the goal",
                        names.join(" or ")
                    )));
                }
                Ok(one(
                    Just::Same,
                    Goal {
                        hyps: g.hyps.clone(),
                        concl,
                    },
                ))
            }
            Tactic::Remember { .. } => unreachable!("handled by apply"),
        }
    }

    fn rewrite(&self, g: &Goal, r: &LemmaRef, at: usize) -> Result<Outcome, ProofModeError> {
        let thm = self.resolve(r)?;
        let (p, q) = prop::as_iff(thm.conclusion()).ok_or_else(|| {
            ProofModeError::BadLemma(format!(
                "mlRewrite: {} is not an equivalence",
                self.show(thm.conclusion())
            ))
        })?;
        let core = expand(&g.concl);
        let occ = occurrences(&core, &p);
        let path = match occ.get(at - 1) {
            None => return Err(ProofModeError::NoOccurrence { at, found: occ.len() }),
            Some(Occurrence::UnderBinder) => return Err(ProofModeError::UnderBinder(at)),
            Some(Occurrence::At(path)) => path.clone(),
        };
        let mut b = ProofBuilder::new(Arc::clone(&self.theory.theory));
        let e = b.import(&thm)?;
        let c = congruence::congruence(&mut b, &core, &path, e)?;
        let back = prop::iff_elim(&mut b, c, true)?;
        let conn = b.finish(back, None)?;
        let new_core = replace_at(&core, &path, &q);
        let q_folded = match thm.conclusion() {
            Pattern::Notation(n) if n.def.name() == "iff" => n.args[1].clone(),
            _ => q,
        };
        let folded = refold(&g.concl, &path, &q_folded);
        let concl = if expand(&folded) == new_core { folded } else { new_core };
        Ok(Outcome {
            just: Just::Rewrite(conn),
            children: vec![Goal {
                hyps: g.hyps.clone(),
                concl,
            }],
        })
    }

    fn closing_step(&self, gid: GoalId) -> Result<&StepRecord, ProofModeError> {
        self.steps
            .iter()
            .find(|s| s.goal == gid)
            .ok_or_else(|| ProofModeError::Internal(format!("goal {gid} was never closed")))
    }

    fn term(&self, b: &mut ProofBuilder, gid: GoalId) -> Result<HTerm, ProofModeError> {
        let step = self.closing_step(gid)?;
        let kids = step
            .children
            .iter()
            .map(|&c| self.term(b, c))
            .collect::<Result<Vec<_>, _>>()?;
        self.justify(b, step, kids)
    }

    /// A term over the hypotheses of the step's goal, from terms for its
    /// subgoals (each over the subgoal's hypotheses).
    fn justify(&self, b: &mut ProofBuilder, step: &StepRecord, kids: Vec<HTerm>) -> Result<HTerm, ProofModeError> {
        let parent = &self.goals[step.goal];
        let hyp = |i: usize| HTerm::hyp(i, expand(&parent.hyps[i].1));
        let n = parent.hyps.len();
        let mut kids = kids.into_iter();
        let mut next = || {
            kids.next()
                .ok_or_else(|| ProofModeError::Internal("missing subgoal proof".into()))
        };
        Ok(match &step.just {
            Just::Same => next()?,
            Just::Intro => {
                let child = &self.goals[step.children[0]];
                next()?.discharge(b, n + 1, &expand(&child.hyps[n].1))?
            }
            Just::Revert => HTerm::mp(hyp(n - 1), next()?)?,
            Just::Clear(i) => {
                let i = *i;
                next()?.reindex(&|j| if j >= i { j + 1 } else { j })
            }
            Just::DestructOr(i) => {
                let i = *i;
                let mut sides = Vec::new();
                let mut parts = Vec::new();
                for &c in &step.children {
                    let part = expand(&self.goals[c].hyps[i].1);
                    let moved = next()?.reindex(&|j| if j == i { n } else { j });
                    sides.push(moved.discharge(b, n + 1, &part)?);
                    parts.push(part);
                }
                let (x, y, z) = (Prop::Atom(0), Prop::Atom(1), Prop::Atom(2));
                let s = Prop::imp(
                    Prop::imp(x.clone(), z.clone()),
                    Prop::imp(Prop::imp(y.clone(), z.clone()), Prop::imp(Prop::or(x, y), z)),
                );
                let k = prop::schema(b, &s, &[parts[0].clone(), parts[1].clone(), expand(&parent.concl)])?;
                let mut t = HTerm::node(b, k);
                for side in sides {
                    t = HTerm::mp(side, t)?;
                }
                HTerm::mp(hyp(i), t)?
            }
            Just::Hyp(i) => {
                let mut t = hyp(*i);
                for _ in &step.children {
                    t = HTerm::mp(next()?, t)?;
                }
                t
            }
            Just::Lemma { thm, hyps } => {
                let id = b.import(thm)?;
                let mut t = HTerm::node(b, id);
                for &i in hyps {
                    t = HTerm::mp(hyp(i), t)?;
                }
                for _ in &step.children {
                    t = HTerm::mp(next()?, t)?;
                }
                t
            }
            Just::Rewrite(conn) => {
                let id = b.import(conn)?;
                HTerm::mp(next()?, HTerm::node(b, id))?
            }
        })
    }

    /// Assembles the steps into one derivation and checks it.
    pub fn qed(&self) -> Result<Theorem, ProofModeError> {
        if !self.open.is_empty() {
            return Err(ProofModeError::OpenGoals(self.open.len()));
        }
        let mut b = ProofBuilder::new(Arc::clone(&self.theory.theory));
        let t = self.term(&mut b, 0)?;
        let id = t.materialize(&mut b)?;
        b.finish(id, Some(&self.goals[0].concl))
            .map_err(|e| ProofModeError::Kernel(e.to_string()))
    }

    /// Kernel evidence for one step: a proof of the step's `to_goal` in the
    /// theory extended with the `to_goal` of every subgoal as an axiom.
    pub fn step_certificate(&self, index: usize) -> Result<Theorem, ProofModeError> {
        let step = self
            .steps
            .get(index)
            .ok_or_else(|| ProofModeError::Internal(format!("no step {index}")))?;
        let mut axioms = self.theory.theory.axioms().clone();
        let names: Vec<String> = (0..step.children.len()).map(|j| format!("subgoal#{j}")).collect();
        for (name, &c) in names.iter().zip(&step.children) {
            axioms.insert(name.clone(), self.goals[c].to_goal());
        }
        let ext = Arc::new(Theory::new(self.theory.theory.name(), axioms));
        let mut b = ProofBuilder::new(ext);
        let mut kids = Vec::new();
        for (name, &c) in names.iter().zip(&step.children) {
            let id = b.axiom(name)?;
            let mut t = HTerm::node(&b, id);
            for (k, (_, h)) in self.goals[c].hyps.iter().enumerate() {
                t = HTerm::mp(HTerm::hyp(k, expand(h)), t)?;
            }
            kids.push(t);
        }
        let mut t = self.justify(&mut b, step, kids)?;
        let parent = &self.goals[step.goal];
        for k in (0..parent.hyps.len()).rev() {
            t = t.discharge(&mut b, k + 1, &expand(&parent.hyps[k].1))?;
        }
        let id = t.materialize(&mut b)?;
        b.finish(id, Some(&parent.to_goal()))
            .map_err(|e| ProofModeError::Kernel(e.to_string()))
    }

    /// The current state for display.
    pub fn view(&self) -> StateView {
        view::render(self)
    }
}

fn check_wf(p: &Pattern) -> Result<(), ProofModeError> {
    if well_formed(&expand(p)) {
        Ok(())
    } else {
        Err(ProofModeError::IllFormed(p.to_string()))
    }
}

fn check_goal_wf(g: &Goal) -> Result<(), ProofModeError> {
    check_wf(&g.concl)?;
    g.hyps.iter().try_for_each(|(_, h)| check_wf(h))
}

/// `a or b`, also written `! a ---> b`.
fn disjuncts(p: &Pattern) -> Option<(Pattern, Pattern)> {
    if let Pattern::Notation(n) = p {
        if n.def.name() == "or" {
            return Some((n.args[0].clone(), n.args[1].clone()));
        }
    }
    let Pattern::Imp(na, b) = unfold_head(p) else {
        return None;
    };
    let a = match &*na {
        Pattern::Notation(n) if n.def.name() == "not" => n.args[0].clone(),
        other => match unfold_head(other) {
            Pattern::Imp(a, bot) if *bot == Pattern::Bot => (*a).clone(),
            _ => return None,
        },
    };
    let b = (*b).clone();
    (expand(&or(a.clone(), b.clone())) == expand(p)).then_some((a, b))
}

/// Peels implications off `h` until what is left expands to `goal`.
/// Returns the premises and `h` with the peeled spine shown unfolded.
fn spine_match(h: &Pattern, goal: &Pattern) -> Option<(Vec<Pattern>, Pattern)> {
    let mut premises = Vec::new();
    let mut cur = h.clone();
    loop {
        if expand(&cur) == *goal {
            if premises.is_empty() {
                return Some((premises, h.clone()));
            }
            let shown = premises
                .iter()
                .rev()
                .fold(cur, |acc, a: &Pattern| Pattern::imp(a.clone(), acc));
            return Some((premises, shown));
        }
        match unfold_head(&cur) {
            Pattern::Imp(a, c) => {
                premises.push((*a).clone());
                cur = (*c).clone();
            }
            _ => return None,
        }
    }
}

fn unfold_named(p: &Pattern, names: &[String], found: &mut bool) -> Pattern {
    match p {
        Pattern::Notation(n) => {
            let args: Vec<Pattern> = n.args.iter().map(|a| unfold_named(a, names, found)).collect();
            if names.iter().any(|m| m == n.def.name()) {
                *found = true;
                unfold_named(&n.def.unfold(&args), names, found)
            } else {
                n.def.apply(args).expect("same arity")
            }
        }
        Pattern::App(l, r) => Pattern::app(unfold_named(l, names, found), unfold_named(r, names, found)),
        Pattern::Imp(l, r) => Pattern::imp(unfold_named(l, names, found), unfold_named(r, names, found)),
        Pattern::Exists(b) => Pattern::exists(unfold_named(b, names, found)),
        Pattern::Mu(b) => Pattern::mu(unfold_named(b, names, found)),
        other => other.clone(),
    }
}

/// Replaces the subpattern at the core `path` of `p` by `q`, keeping as
/// many of `p`'s notations as possible. A notation survives when the path
/// enters one of its arguments; otherwise it is unfolded one level.
fn refold(p: &Pattern, path: &[Step], q: &Pattern) -> Pattern {
    let Some((step, rest)) = path.split_first() else {
        return q.clone();
    };
    match p {
        Pattern::Notation(n) => {
            let holes: Vec<Pattern> = (0..n.args.len())
                .map(|i| Pattern::svar(format!("\u{1}arg{i}")))
                .collect();
            let t = expand(&n.def.unfold(&holes));
            for (i, h) in holes.iter().enumerate() {
                if let [Occurrence::At(at)] = occurrences(&t, h).as_slice() {
                    if path.starts_with(at) {
                        let mut args = n.args.clone();
                        args[i] = refold(&args[i], &path[at.len()..], q);
                        return n.def.apply(args).expect("same arity");
                    }
                }
            }
            refold(&n.def.unfold(&n.args), path, q)
        }
        Pattern::App(l, r) => match step {
            Step::AppL => Pattern::app(refold(l, rest, q), (**r).clone()),
            Step::AppR => Pattern::app((**l).clone(), refold(r, rest, q)),
            _ => p.clone(),
        },
        Pattern::Imp(l, r) => match step {
            Step::ImpL => Pattern::imp(refold(l, rest, q), (**r).clone()),
            Step::ImpR => Pattern::imp((**l).clone(), refold(r, rest, q)),
            _ => p.clone(),
        },
        _ => p.clone(),
    }
}
