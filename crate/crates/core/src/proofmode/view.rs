//! Rendering of proof states: structured for clients, and as text in the
//! usual layout (hypotheses above the line, goal below).

use std::fmt;

use serde::Serialize;

use super::Session;
use crate::format::print_pattern;
use crate::syntax::{expand, Pattern};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rendered {
    pub folded: String,
    pub expanded: String,
}

impl Rendered {
    fn of(p: &Pattern) -> Rendered {
        Rendered {
            folded: print_pattern(p, true),
            expanded: print_pattern(&expand(p), false),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypView {
    pub name: String,
    pub pattern: Rendered,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoalView {
    /// Well-formedness obligations, all discharged when the goal was made.
    pub meta: Vec<String>,
    pub hypotheses: Vec<HypView>,
    pub goal: Rendered,
    /// The goal with the hypotheses folded in.
    pub to_goal: Rendered,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateView {
    pub theory: String,
    /// Axiom names and statements of the theory.
    pub axioms: Vec<(String, String)>,
    /// Open goals, the focused one first.
    pub goals: Vec<GoalView>,
    pub complete: bool,
}

pub(super) fn render(s: &Session) -> StateView {
    let goals = s
        .open_goals()
        .into_iter()
        .map(|g| {
            let hyps: Vec<(String, Pattern)> = g.hyps.iter().map(|(n, h)| (n.clone(), s.show(h))).collect();
            let concl = s.show(&g.concl);
            let mut meta: Vec<String> = hyps
                .iter()
                .map(|(_, h)| format!("well_formed({h})"))
                .collect();
            meta.push(format!("well_formed({concl})"));
            GoalView {
                meta,
                hypotheses: hyps
                    .iter()
                    .map(|(n, h)| HypView {
                        name: n.clone(),
                        pattern: Rendered::of(h),
                    })
                    .collect(),
                goal: Rendered::of(&concl),
                to_goal: Rendered::of(&s.show(&g.to_goal())),
            }
        })
        .collect::<Vec<_>>();
    StateView {
        theory: s.theory().name().to_owned(),
        axioms: s
            .theory()
            .theory
            .axioms()
            .iter()
            .map(|(n, p)| (n.clone(), p.to_string()))
            .collect(),
        complete: goals.is_empty(),
        goals,
    }
}

const RULE: &str = "______________________________________";
const SEPARATOR: &str = "--------------------------------------";

impl fmt::Display for StateView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.goals.is_empty() {
            return writeln!(f, "No more goals.");
        }
        let n = self.goals.len();
        for (i, g) in self.goals.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "{RULE}({}/{n})", i + 1)?;
            writeln!(f, "{} ⊢", self.theory)?;
            for h in &g.hypotheses {
                writeln!(f, "{:?} : {},", h.name, h.pattern.folded)?;
            }
            if !g.hypotheses.is_empty() {
                writeln!(f, "{SEPARATOR}")?;
            }
            writeln!(f, "{}", g.goal.folded)?;
        }
        Ok(())
    }
}
