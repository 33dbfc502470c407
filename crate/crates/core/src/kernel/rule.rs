//! The proof rules and the computation of their conclusions.

use std::fmt;

use super::context::AppContext;
use super::error::{CheckError, ErrorKind};
use crate::syntax::notation::{and, not, or};
use crate::syntax::{
    bsvar_subst, evar_open, expand, free_evars, fsvar_subst, well_formed, EVar, Pattern, SVar,
};

/// Index of a node in a [`super::Derivation`].
pub type NodeId = usize;

/// One rule application. Premises refer to earlier nodes of the same
/// derivation; every other field is an instantiation of the rule schema.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// An axiom of the theory, by name.
    Hypothesis { axiom: String },
    /// `φ₁ → (φ₂ → φ₁)`
    Prop1 { p1: Pattern, p2: Pattern },
    /// `(φ₁ → (φ₂ → φ₃)) → (φ₁ → φ₂) → (φ₁ → φ₃)`
    Prop2 { p1: Pattern, p2: Pattern, p3: Pattern },
    /// `((φ → ⊥) → ⊥) → φ`
    Prop3 { p: Pattern },
    /// From `φ₁` and `φ₁ → φ₂`, `φ₂`.
    ModusPonens { minor: NodeId, major: NodeId },
    /// `open(φ, x) → ∃ . φ`
    ExQuantifier { body: Pattern, x: EVar },
    /// From `open(φ₁, x) → φ₂`, `(∃ . φ₁) → φ₂`.
    ExGen { premise: NodeId, body: Pattern, x: EVar },
    /// `⊥ φ → ⊥`
    PropagationBotLeft { p: Pattern },
    /// `φ ⊥ → ⊥`
    PropagationBotRight { p: Pattern },
    /// `(φ₁ ∨ φ₂) φ₃ → (φ₁ φ₃) ∨ (φ₂ φ₃)`
    PropagationOrLeft { p1: Pattern, p2: Pattern, p3: Pattern },
    /// `φ₁ (φ₂ ∨ φ₃) → (φ₁ φ₂) ∨ (φ₁ φ₃)`
    PropagationOrRight { p1: Pattern, p2: Pattern, p3: Pattern },
    /// `(∃ . φ₁) φ₂ → ∃ . φ₁ φ₂`
    PropagationExLeft { body: Pattern, p: Pattern },
    /// `φ₁ (∃ . φ₂) → ∃ . φ₁ φ₂`
    PropagationExRight { p: Pattern, body: Pattern },
    /// From `φ₁ → φ₂`, `φ₁ φ₃ → φ₂ φ₃`.
    FramingLeft { premise: NodeId, frame: Pattern },
    /// From `φ₂ → φ₃`, `φ₁ φ₂ → φ₁ φ₃`.
    FramingRight { premise: NodeId, frame: Pattern },
    /// From `φ`, `φ[ψ/X]`.
    Substitution { premise: NodeId, psi: Pattern, var: SVar },
    /// `φ[(μ . φ)/S0] → μ . φ`
    PreFixpoint { body: Pattern },
    /// From `φ₁[φ₂/S0] → φ₂`, `(μ . φ₁) → φ₂`.
    KnasterTarski { premise: NodeId, body: Pattern },
    /// `∃ . b0`
    Existence,
    /// `¬(C₁[x ∧ φ] ∧ C₂[x ∧ ¬φ])`
    Singleton {
        ctx1: AppContext,
        ctx2: AppContext,
        x: EVar,
        p: Pattern,
    },
}

/// Stable rule tags, as used in proof objects.
pub const RULE_NAMES: &[&str] = &[
    "Hypothesis",
    "Proposition 1",
    "Proposition 2",
    "Proposition 3",
    "Modus Ponens",
    "∃-Quantifier",
    "∃-Generalization",
    "Propagation Left_⊥",
    "Propagation Right_⊥",
    "Propagation Left_∨",
    "Propagation Right_∨",
    "Propagation Left_∃",
    "Propagation Right_∃",
    "Framing Left",
    "Framing Right",
    "Substitution",
    "Pre-Fixpoint",
    "Knaster-Tarski",
    "Existence",
    "Singleton",
];

impl Rule {
    pub fn name(&self) -> &'static str {
        RULE_NAMES[match self {
            Rule::Hypothesis { .. } => 0,
            Rule::Prop1 { .. } => 1,
            Rule::Prop2 { .. } => 2,
            Rule::Prop3 { .. } => 3,
            Rule::ModusPonens { .. } => 4,
            Rule::ExQuantifier { .. } => 5,
            Rule::ExGen { .. } => 6,
            Rule::PropagationBotLeft { .. } => 7,
            Rule::PropagationBotRight { .. } => 8,
            Rule::PropagationOrLeft { .. } => 9,
            Rule::PropagationOrRight { .. } => 10,
            Rule::PropagationExLeft { .. } => 11,
            Rule::PropagationExRight { .. } => 12,
            Rule::FramingLeft { .. } => 13,
            Rule::FramingRight { .. } => 14,
            Rule::Substitution { .. } => 15,
            Rule::PreFixpoint { .. } => 16,
            Rule::KnasterTarski { .. } => 17,
            Rule::Existence => 18,
            Rule::Singleton { .. } => 19,
        }]
    }

    /// Premise node references, in schema order.
    pub fn premises(&self) -> Vec<NodeId> {
        match self {
            Rule::ModusPonens { minor, major } => vec![*minor, *major],
            Rule::ExGen { premise, .. }
            | Rule::FramingLeft { premise, .. }
            | Rule::FramingRight { premise, .. }
            | Rule::Substitution { premise, .. }
            | Rule::KnasterTarski { premise, .. } => vec![*premise],
            _ => Vec::new(),
        }
    }

    /// Renumbers premise references.
    pub fn map_premises(&self, f: impl Fn(NodeId) -> NodeId) -> Rule {
        let mut r = self.clone();
        match &mut r {
            Rule::ModusPonens { minor, major } => {
                *minor = f(*minor);
                *major = f(*major);
            }
            Rule::ExGen { premise, .. }
            | Rule::FramingLeft { premise, .. }
            | Rule::FramingRight { premise, .. }
            | Rule::Substitution { premise, .. }
            | Rule::KnasterTarski { premise, .. } => *premise = f(*premise),
            _ => {}
        }
        r
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn wf(node: NodeId, what: &str, p: &Pattern) -> Result<Pattern, CheckError> {
    let core = expand(p);
    if well_formed(&core) {
        Ok(core)
    } else {
        Err(CheckError::new(
            node,
            ErrorKind::IllFormed,
            format!("{what} is not well-formed: {p}"),
        ))
    }
}

fn wf_binder(
    node: NodeId,
    what: &str,
    body: &Pattern,
    wrap: fn(Pattern) -> Pattern,
) -> Result<Pattern, CheckError> {
    let core = expand(body);
    if well_formed(&wrap(core.clone())) {
        Ok(core)
    } else {
        Err(CheckError::new(
            node,
            ErrorKind::IllFormed,
            format!("{what} is not well-formed under its binder: {body}"),
        ))
    }
}

fn shape(node: NodeId, msg: impl Into<String>) -> CheckError {
    CheckError::new(node, ErrorKind::Shape, msg)
}

fn split_imp(node: NodeId, what: &str, p: &Pattern) -> Result<(Pattern, Pattern), CheckError> {
    match p {
        Pattern::Imp(l, r) => Ok(((**l).clone(), (**r).clone())),
        _ => Err(shape(node, format!("{what} must be an implication, found {p}"))),
    }
}

/// Core (notation-free) conclusion of `rule` at `node`, given the core
/// conclusions of earlier nodes and the axioms of the theory.
pub fn conclude(
    node: NodeId,
    rule: &Rule,
    axiom: &dyn Fn(&str) -> Option<Pattern>,
    premise: &dyn Fn(NodeId) -> Option<Pattern>,
) -> Result<Pattern, CheckError> {
    let get = |id: NodeId| {
        if id >= node {
            return Err(CheckError::new(
                node,
                ErrorKind::BadReference,
                format!("premise #{id} does not precede node #{node}"),
            ));
        }
        premise(id).ok_or_else(|| {
            CheckError::new(node, ErrorKind::BadReference, format!("no node #{id}"))
        })
    };
    Ok(match rule {
        Rule::Hypothesis { axiom: name } => {
            let p = axiom(name).ok_or_else(|| {
                CheckError::new(node, ErrorKind::UnknownAxiom, format!("unknown axiom `{name}`"))
            })?;
            wf(node, "axiom", &p)?
        }
        Rule::Prop1 { p1, p2 } => {
            let (a, b) = (wf(node, "φ₁", p1)?, wf(node, "φ₂", p2)?);
            Pattern::imp(a.clone(), Pattern::imp(b, a))
        }
        Rule::Prop2 { p1, p2, p3 } => {
            let (a, b, c) = (wf(node, "φ₁", p1)?, wf(node, "φ₂", p2)?, wf(node, "φ₃", p3)?);
            Pattern::imp(
                Pattern::imp(a.clone(), Pattern::imp(b.clone(), c.clone())),
                Pattern::imp(Pattern::imp(a.clone(), b), Pattern::imp(a, c)),
            )
        }
        Rule::Prop3 { p } => {
            let a = wf(node, "φ", p)?;
            Pattern::imp(Pattern::neg_core(Pattern::neg_core(a.clone())), a)
        }
        Rule::ModusPonens { minor, major } => {
            let a = get(*minor)?;
            let (l, r) = split_imp(node, "the major premise", &get(*major)?)?;
            if l != a {
                return Err(shape(
                    node,
                    format!("the minor premise {a} does not match the antecedent {l}"),
                ));
            }
            r
        }
        Rule::ExQuantifier { body, x } => {
            let b = wf_binder(node, "φ", body, Pattern::exists)?;
            Pattern::imp(evar_open(0, x, &b), Pattern::exists(b))
        }
        Rule::ExGen { premise, body, x } => {
            let b = wf_binder(node, "φ₁", body, Pattern::exists)?;
            let (l, r) = split_imp(node, "the premise", &get(*premise)?)?;
            if l != evar_open(0, x, &b) {
                return Err(shape(
                    node,
                    format!("the premise antecedent {l} is not the opening of {b} with {x}"),
                ));
            }
            if free_evars(&r).contains(x) {
                return Err(CheckError::new(
                    node,
                    ErrorKind::SideCondition,
                    format!("x ∉ FV(φ₂) violated: {x} is free in {r}"),
                ));
            }
            if free_evars(&b).contains(x) {
                return Err(CheckError::new(
                    node,
                    ErrorKind::SideCondition,
                    format!("x ∉ FV(φ₁) violated: {x} is free in the body {b}"),
                ));
            }
            Pattern::imp(Pattern::exists(b), r)
        }
        Rule::PropagationBotLeft { p } => {
            let a = wf(node, "φ", p)?;
            Pattern::imp(Pattern::app(Pattern::Bot, a), Pattern::Bot)
        }
        Rule::PropagationBotRight { p } => {
            let a = wf(node, "φ", p)?;
            Pattern::imp(Pattern::app(a, Pattern::Bot), Pattern::Bot)
        }
        Rule::PropagationOrLeft { p1, p2, p3 } => {
            let (a, b, c) = (wf(node, "φ₁", p1)?, wf(node, "φ₂", p2)?, wf(node, "φ₃", p3)?);
            expand(&Pattern::imp(
                Pattern::app(or(a.clone(), b.clone()), c.clone()),
                or(Pattern::app(a, c.clone()), Pattern::app(b, c)),
            ))
        }
        Rule::PropagationOrRight { p1, p2, p3 } => {
            let (a, b, c) = (wf(node, "φ₁", p1)?, wf(node, "φ₂", p2)?, wf(node, "φ₃", p3)?);
            expand(&Pattern::imp(
                Pattern::app(a.clone(), or(b.clone(), c.clone())),
                or(Pattern::app(a.clone(), b), Pattern::app(a, c)),
            ))
        }
        Rule::PropagationExLeft { body, p } => {
            let b = wf_binder(node, "φ₁", body, Pattern::exists)?;
            let a = wf(node, "φ₂", p)?;
            Pattern::imp(
                Pattern::app(Pattern::exists(b.clone()), a.clone()),
                Pattern::exists(Pattern::app(b, a)),
            )
        }
        Rule::PropagationExRight { p, body } => {
            let a = wf(node, "φ₁", p)?;
            let b = wf_binder(node, "φ₂", body, Pattern::exists)?;
            Pattern::imp(
                Pattern::app(a.clone(), Pattern::exists(b.clone())),
                Pattern::exists(Pattern::app(a, b)),
            )
        }
        Rule::FramingLeft { premise, frame } => {
            let c = wf(node, "φ₃", frame)?;
            let (a, b) = split_imp(node, "the premise", &get(*premise)?)?;
            Pattern::imp(Pattern::app(a, c.clone()), Pattern::app(b, c))
        }
        Rule::FramingRight { premise, frame } => {
            let a = wf(node, "φ₁", frame)?;
            let (b, c) = split_imp(node, "the premise", &get(*premise)?)?;
            Pattern::imp(Pattern::app(a.clone(), b), Pattern::app(a, c))
        }
        Rule::Substitution { premise, psi, var } => {
            let s = wf(node, "ψ", psi)?;
            let p = get(*premise)?;
            fsvar_subst(&p, &s, var).map_err(|e| {
                CheckError::new(node, ErrorKind::SideCondition, format!("ψ must be closed: {e}"))
            })?
        }
        Rule::PreFixpoint { body } => {
            let b = wf_binder(node, "φ", body, Pattern::mu)?;
            let mu = Pattern::mu(b.clone());
            Pattern::imp(bsvar_subst(&b, &mu, 0), mu)
        }
        Rule::KnasterTarski { premise, body } => {
            let b = wf_binder(node, "φ₁", body, Pattern::mu)?;
            let (l, r) = split_imp(node, "the premise", &get(*premise)?)?;
            if l != bsvar_subst(&b, &r, 0) {
                return Err(shape(
                    node,
                    format!("the premise antecedent {l} is not {b} with {r} for S0"),
                ));
            }
            Pattern::imp(Pattern::mu(b), r)
        }
        Rule::Existence => Pattern::exists(Pattern::BoundEVar(0)),
        Rule::Singleton { ctx1, ctx2, x, p } => {
            let a = wf(node, "φ", p)?;
            if !ctx1.well_formed() || !ctx2.well_formed() {
                return Err(CheckError::new(
                    node,
                    ErrorKind::IllFormed,
                    "context side patterns must be well-formed",
                ));
            }
            let (c1, c2) = (ctx1.expand(), ctx2.expand());
            let xv = Pattern::FreeEVar(x.clone());
            expand(&not(and(
                c1.plug(&and(xv.clone(), a.clone())),
                c2.plug(&and(xv, not(a))),
            )))
        }
    })
}
