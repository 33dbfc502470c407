//! The trusted proof checker.
//!
//! A [`Derivation`] is a flat list of rule applications whose premises point
//! to earlier nodes, so sub-proofs can be shared. [`check`] recomputes every
//! conclusion from the rule instantiation and compares it with the claimed
//! one; the last node is the root. A [`Theorem`] can only be obtained from
//! [`check`] (or [`import`], which decodes and then checks), which is what
//! makes it trustworthy.

mod context;
mod error;
mod rule;

use std::sync::Arc;

use indexmap::IndexMap;

pub use context::{AppContext, CtxStep};
pub use error::{CheckError, ErrorKind};
pub use rule::{conclude, NodeId, Rule, RULE_NAMES};

use crate::syntax::{expand, well_formed, Pattern};

/// A named set of axioms Γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    name: String,
    axioms: IndexMap<String, Pattern>,
}

impl Theory {
    pub fn new(name: impl Into<String>, axioms: IndexMap<String, Pattern>) -> Self {
        Theory {
            name: name.into(),
            axioms,
        }
    }

    /// The theory without axioms.
    pub fn empty() -> Self {
        Theory::new("empty", IndexMap::new())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn axioms(&self) -> &IndexMap<String, Pattern> {
        &self.axioms
    }

    pub fn axiom(&self, name: &str) -> Option<&Pattern> {
        self.axioms.get(name)
    }

    /// Name of an axiom equal to `p` after expansion.
    pub fn find_axiom(&self, p: &Pattern) -> Option<&str> {
        let core = expand(p);
        self.axioms
            .iter()
            .find(|(_, a)| expand(a) == core)
            .map(|(k, _)| k.as_str())
    }
}

/// A rule application with its claimed conclusion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub rule: Rule,
    pub conclusion: Pattern,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub nodes: Vec<Node>,
}

impl Derivation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, rule: Rule, conclusion: Pattern) -> NodeId {
        self.nodes.push(Node { rule, conclusion });
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> Option<&Node> {
        self.nodes.last()
    }

    /// Keeps only the nodes the root depends on, renumbered in order.
    pub fn prune(&self) -> Derivation {
        let n = self.nodes.len();
        if n == 0 {
            return Derivation::new();
        }
        let mut live = vec![false; n];
        live[n - 1] = true;
        for i in (0..n).rev() {
            if live[i] {
                for p in self.nodes[i].rule.premises() {
                    if p < n {
                        live[p] = true;
                    }
                }
            }
        }
        let mut map = vec![usize::MAX; n];
        let mut out = Derivation::new();
        for i in 0..n {
            if live[i] {
                let node = &self.nodes[i];
                map[i] = out.push(node.rule.map_premises(|p| map[p]), node.conclusion.clone());
            }
        }
        out
    }
}

/// A checked judgment `Γ ⊢ φ`.
#[derive(Clone, Debug)]
pub struct Theorem {
    theory: Arc<Theory>,
    conclusion: Pattern,
    derivation: Arc<Derivation>,
}

impl Theorem {
    pub fn conclusion(&self) -> &Pattern {
        &self.conclusion
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn derivation(&self) -> &Derivation {
        &self.derivation
    }

    /// The proof object of this theorem.
    pub fn export(&self) -> crate::format::proof::ProofObject {
        crate::format::proof::ProofObject {
            theory: self.theory.name().to_owned(),
            derivation: (*self.derivation).clone(),
        }
    }
}

impl PartialEq for Theorem {
    fn eq(&self, other: &Self) -> bool {
        self.theory == other.theory
            && self.conclusion == other.conclusion
            && self.derivation == other.derivation
    }
}

impl Eq for Theorem {}

/// Checks every node of `d` against `gamma` and returns the theorem proved
/// by the last node.
pub fn check(gamma: &Arc<Theory>, d: &Derivation) -> Result<Theorem, CheckError> {
    if d.is_empty() {
        return Err(CheckError::new(0, ErrorKind::Empty, "the derivation has no nodes"));
    }
    let mut core: Vec<Pattern> = Vec::with_capacity(d.len());
    for (i, node) in d.nodes.iter().enumerate() {
        let computed = conclude(
            i,
            &node.rule,
            &|name| gamma.axiom(name).cloned(),
            &|id| core.get(id).cloned(),
        )?;
        let claimed = expand(&node.conclusion);
        if claimed != computed {
            return Err(CheckError::new(
                i,
                ErrorKind::Shape,
                format!(
                    "{} yields {computed}, but the node claims {}",
                    node.rule, node.conclusion
                ),
            ));
        }
        debug_assert!(well_formed(&computed));
        core.push(computed);
    }
    let root = d.root().expect("nonempty");
    Ok(Theorem {
        theory: Arc::clone(gamma),
        conclusion: root.conclusion.clone(),
        derivation: Arc::new(d.clone()),
    })
}

/// Re-checks a decoded proof object against `gamma`, whose name must match
/// the one recorded in the object.
pub fn import(
    gamma: &Arc<Theory>,
    proof: &crate::format::proof::ProofObject,
) -> Result<Theorem, CheckError> {
    if proof.theory != gamma.name() {
        return Err(CheckError::new(
            0,
            ErrorKind::TheoryMismatch,
            format!(
                "the proof is for theory `{}`, not `{}`",
                proof.theory,
                gamma.name()
            ),
        ));
    }
    check(gamma, &proof.derivation)
}
