//! Application contexts: a hole reachable from the root through
//! applications only.

use crate::syntax::{expand, well_formed, Pattern};

/// One step from the root towards the hole.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CtxStep {
    /// The hole is in the left operand: `C ψ`.
    Left(Pattern),
    /// The hole is in the right operand: `ψ C`.
    Right(Pattern),
}

impl CtxStep {
    pub fn side(&self) -> &Pattern {
        match self {
            CtxStep::Left(p) | CtxStep::Right(p) => p,
        }
    }
}

/// An application context. The empty path is the identity context `□`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AppContext {
    pub path: Vec<CtxStep>,
}

impl AppContext {
    pub fn identity() -> Self {
        AppContext { path: Vec::new() }
    }

    pub fn new(path: Vec<CtxStep>) -> Self {
        AppContext { path }
    }

    /// Extends the context at the hole.
    pub fn then(mut self, step: CtxStep) -> Self {
        self.path.push(step);
        self
    }

    /// `C[φ]`
    pub fn plug(&self, p: &Pattern) -> Pattern {
        self.path.iter().rev().fold(p.clone(), |acc, step| match step {
            CtxStep::Left(side) => Pattern::app(acc, side.clone()),
            CtxStep::Right(side) => Pattern::app(side.clone(), acc),
        })
    }

    /// All side patterns are well-formed, so plugging a well-formed pattern
    /// yields a well-formed pattern.
    pub fn well_formed(&self) -> bool {
        self.path.iter().all(|s| well_formed(&expand(s.side())))
    }

    pub fn expand(&self) -> AppContext {
        AppContext {
            path: self
                .path
                .iter()
                .map(|s| match s {
                    CtxStep::Left(p) => CtxStep::Left(expand(p)),
                    CtxStep::Right(p) => CtxStep::Right(expand(p)),
                })
                .collect(),
        }
    }

    /// Reads a context from a pattern containing the hole variable exactly
    /// once, reached through applications only.
    pub fn from_pattern(p: &Pattern, hole: &Pattern) -> Option<AppContext> {
        let mut path = Vec::new();
        let mut cur = p.clone();
        loop {
            if &cur == hole {
                return Some(AppContext { path });
            }
            let (l, r) = match &cur {
                Pattern::App(l, r) => ((**l).clone(), (**r).clone()),
                _ => return None,
            };
            let in_l = contains(&l, hole);
            let in_r = contains(&r, hole);
            match (in_l, in_r) {
                (true, false) => {
                    path.push(CtxStep::Left(r));
                    cur = l;
                }
                (false, true) => {
                    path.push(CtxStep::Right(l));
                    cur = r;
                }
                _ => return None,
            }
        }
    }
}

fn contains(p: &Pattern, q: &Pattern) -> bool {
    if p == q {
        return true;
    }
    match p {
        Pattern::App(l, r) | Pattern::Imp(l, r) => contains(l, q) || contains(r, q),
        Pattern::Exists(b) | Pattern::Mu(b) => contains(b, q),
        Pattern::Notation(n) => n.args.iter().any(|a| contains(a, q)),
        _ => false,
    }
}
