//! Incremental construction of derivations.
//!
//! [`ProofBuilder`] appends rule applications and computes their conclusions
//! with the same function the checker uses, so a builder bug shows up at
//! construction time instead of as a rejected proof. Identical rule
//! applications are shared.

use std::collections::HashMap;
use std::sync::Arc;

use super::DeriveError;
use crate::kernel::{check, conclude, Derivation, NodeId, Rule, Theorem, Theory};
use crate::syntax::{expand, Pattern};

pub struct ProofBuilder {
    theory: Arc<Theory>,
    d: Derivation,
    core: Vec<Pattern>,
    memo: HashMap<Rule, NodeId>,
    /// Lemma instances already built, keyed by lemma name and instance.
    pub(crate) lemmas: HashMap<(&'static str, Pattern), NodeId>,
}

impl ProofBuilder {
    pub fn new(theory: Arc<Theory>) -> Self {
        ProofBuilder {
            theory,
            d: Derivation::new(),
            core: Vec::new(),
            memo: HashMap::new(),
            lemmas: HashMap::new(),
        }
    }

    pub fn theory(&self) -> &Arc<Theory> {
        &self.theory
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// The core conclusion of node `id`.
    pub fn concl(&self, id: NodeId) -> &Pattern {
        &self.core[id]
    }

    pub fn add(&mut self, rule: Rule) -> Result<NodeId, DeriveError> {
        if let Some(&id) = self.memo.get(&rule) {
            return Ok(id);
        }
        let id = self.d.len();
        let theory = &self.theory;
        let core = &self.core;
        let c = conclude(
            id,
            &rule,
            &|name| theory.axiom(name).cloned(),
            &|i| core.get(i).cloned(),
        )?;
        self.d.push(rule.clone(), c.clone());
        self.core.push(c);
        self.memo.insert(rule, id);
        Ok(id)
    }

    pub fn mp(&mut self, minor: NodeId, major: NodeId) -> Result<NodeId, DeriveError> {
        self.add(Rule::ModusPonens { minor, major })
    }

    pub fn prop1(&mut self, p1: &Pattern, p2: &Pattern) -> Result<NodeId, DeriveError> {
        self.add(Rule::Prop1 {
            p1: p1.clone(),
            p2: p2.clone(),
        })
    }

    pub fn prop2(&mut self, p1: &Pattern, p2: &Pattern, p3: &Pattern) -> Result<NodeId, DeriveError> {
        self.add(Rule::Prop2 {
            p1: p1.clone(),
            p2: p2.clone(),
            p3: p3.clone(),
        })
    }

    pub fn prop3(&mut self, p: &Pattern) -> Result<NodeId, DeriveError> {
        self.add(Rule::Prop3 { p: p.clone() })
    }

    pub fn axiom(&mut self, name: &str) -> Result<NodeId, DeriveError> {
        self.add(Rule::Hypothesis {
            axiom: name.to_owned(),
        })
    }

    /// Copies the nodes of a checked theorem into this builder and returns
    /// the node of its conclusion. The theorem must be over the same theory.
    pub fn import(&mut self, t: &Theorem) -> Result<NodeId, DeriveError> {
        if t.theory().name() != self.theory.name() {
            return Err(DeriveError::Precondition(format!(
                "theorem over `{}` used in a proof over `{}`",
                t.theory().name(),
                self.theory.name()
            )));
        }
        let mut map = Vec::with_capacity(t.derivation().len());
        for node in &t.derivation().nodes {
            let id = self.add(node.rule.map_premises(|p| map[p]))?;
            map.push(id);
        }
        Ok(*map.last().expect("theorems have a root"))
    }

    /// Checks the derivation rooted at `root` and returns its theorem. With
    /// `display`, the root claims that (folded) pattern instead of the core
    /// conclusion; it must expand to the same thing.
    pub fn finish(&self, root: NodeId, display: Option<&Pattern>) -> Result<Theorem, DeriveError> {
        let mut d = Derivation {
            nodes: self.d.nodes[..=root].to_vec(),
        }
        .prune();
        if let Some(p) = display {
            if expand(p) != self.core[root] {
                return Err(DeriveError::Internal(format!(
                    "display form {p} does not expand to the proved {}",
                    self.core[root]
                )));
            }
            d.nodes.last_mut().expect("nonempty").conclusion = p.clone();
        }
        check(&self.theory, &d).map_err(DeriveError::Kernel)
    }
}

/// A proof of a pattern under local hypotheses `h₀ … hₙ₋₁`, on its way to
/// becoming a closed derivation. Hypotheses are discharged from the last one
/// with the usual combinator translation.
#[derive(Clone)]
pub struct HTerm(Arc<HInner>);

struct HInner {
    kind: HKind,
    concl: Pattern,
    /// One past the largest hypothesis index used.
    uses: usize,
}

enum HKind {
    Hyp(usize),
    Node(NodeId),
    Mp(HTerm, HTerm),
}

impl HTerm {
    pub fn hyp(i: usize, concl: Pattern) -> HTerm {
        HTerm(Arc::new(HInner {
            kind: HKind::Hyp(i),
            concl,
            uses: i + 1,
        }))
    }

    pub fn node(b: &ProofBuilder, id: NodeId) -> HTerm {
        HTerm(Arc::new(HInner {
            kind: HKind::Node(id),
            concl: b.concl(id).clone(),
            uses: 0,
        }))
    }

    /// From `a` and `a ---> c`, `c`.
    pub fn mp(minor: HTerm, major: HTerm) -> Result<HTerm, DeriveError> {
        let concl = match major.concl().as_imp() {
            Some((a, c)) if a == minor.concl() => c.clone(),
            _ => {
                return Err(DeriveError::Internal(format!(
                    "cannot apply {} to {}",
                    major.concl(),
                    minor.concl()
                )))
            }
        };
        let uses = minor.0.uses.max(major.0.uses);
        Ok(HTerm(Arc::new(HInner {
            kind: HKind::Mp(minor, major),
            concl,
            uses,
        })))
    }

    /// Core conclusion.
    pub fn concl(&self) -> &Pattern {
        &self.0.concl
    }

    /// One past the largest hypothesis used.
    pub fn uses(&self) -> usize {
        self.0.uses
    }

    fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Renumbers hypotheses through `f`, looking hypothesis conclusions up
    /// in nothing: the caller guarantees the new context agrees.
    pub fn reindex(&self, f: &dyn Fn(usize) -> usize) -> HTerm {
        let mut memo = HashMap::new();
        self.reindex_memo(f, &mut memo)
    }

    fn reindex_memo(&self, f: &dyn Fn(usize) -> usize, memo: &mut HashMap<usize, HTerm>) -> HTerm {
        if self.uses() == 0 {
            return self.clone();
        }
        if let Some(t) = memo.get(&self.key()) {
            return t.clone();
        }
        let out = match &self.0.kind {
            HKind::Hyp(i) => HTerm::hyp(f(*i), self.concl().clone()),
            HKind::Node(_) => self.clone(),
            HKind::Mp(a, b) => {
                let a = a.reindex_memo(f, memo);
                let b = b.reindex_memo(f, memo);
                let uses = a.uses().max(b.uses());
                HTerm(Arc::new(HInner {
                    kind: HKind::Mp(a, b),
                    concl: self.concl().clone(),
                    uses,
                }))
            }
        };
        memo.insert(self.key(), out.clone());
        out
    }

    /// Discharges hypothesis `n - 1` with conclusion `h`: from a term over
    /// `h₀ … hₙ₋₁` proving `c`, a term over `h₀ … hₙ₋₂` proving `h ---> c`.
    pub fn discharge(&self, b: &mut ProofBuilder, n: usize, h: &Pattern) -> Result<HTerm, DeriveError> {
        debug_assert!(n > 0 && self.uses() <= n);
        let mut memo = HashMap::new();
        self.discharge_memo(b, n - 1, h, &mut memo)
    }

    fn discharge_memo(
        &self,
        b: &mut ProofBuilder,
        last: usize,
        h: &Pattern,
        memo: &mut HashMap<usize, HTerm>,
    ) -> Result<HTerm, DeriveError> {
        if let Some(t) = memo.get(&self.key()) {
            return Ok(t.clone());
        }
        let out = if self.uses() <= last {
            // c, c ---> (h ---> c)
            let k = b.prop1(self.concl(), h)?;
            HTerm::mp(self.clone(), HTerm::node(b, k))?
        } else {
            match &self.0.kind {
                HKind::Hyp(_) => {
                    let id = imp_refl(b, h)?;
                    HTerm::node(b, id)
                }
                HKind::Node(_) => unreachable!("closed terms use no hypothesis"),
                HKind::Mp(minor, major) => {
                    if minor.uses() == last + 1
                        && matches!(minor.0.kind, HKind::Hyp(i) if i == last)
                        && major.uses() <= last
                    {
                        // major already proves h ---> c
                        major.clone()
                    } else {
                        // h ---> a, h ---> (a ---> c) give h ---> c
                        let ha = minor.discharge_memo(b, last, h, memo)?;
                        let hac = major.discharge_memo(b, last, h, memo)?;
                        let k = b.prop2(h, minor.concl(), self.concl())?;
                        let t = HTerm::mp(hac, HTerm::node(b, k))?;
                        HTerm::mp(ha, t)?
                    }
                }
            }
        };
        memo.insert(self.key(), out.clone());
        Ok(out)
    }

    /// Turns a term without hypotheses into builder nodes.
    pub fn materialize(&self, b: &mut ProofBuilder) -> Result<NodeId, DeriveError> {
        if self.uses() > 0 {
            return Err(DeriveError::Internal(
                "materializing a term with open hypotheses".into(),
            ));
        }
        let mut memo = HashMap::new();
        self.materialize_memo(b, &mut memo)
    }

    fn materialize_memo(
        &self,
        b: &mut ProofBuilder,
        memo: &mut HashMap<usize, NodeId>,
    ) -> Result<NodeId, DeriveError> {
        if let Some(&id) = memo.get(&self.key()) {
            return Ok(id);
        }
        let id = match &self.0.kind {
            HKind::Hyp(_) => unreachable!("checked by uses()"),
            HKind::Node(id) => *id,
            HKind::Mp(minor, major) => {
                let a = minor.materialize_memo(b, memo)?;
                let c = major.materialize_memo(b, memo)?;
                b.mp(a, c)?
            }
        };
        memo.insert(self.key(), id);
        Ok(id)
    }
}

/// `⊢ φ ---> φ`
pub fn imp_refl(b: &mut ProofBuilder, p: &Pattern) -> Result<NodeId, DeriveError> {
    if let Some(&id) = b.lemmas.get(&("imp_refl", p.clone())) {
        return Ok(id);
    }
    let pp = Pattern::imp(p.clone(), p.clone());
    // (p ---> ((p ---> p) ---> p)) ---> ((p ---> (p ---> p)) ---> (p ---> p))
    let s = b.prop2(p, &pp, p)?;
    let k1 = b.prop1(p, &pp)?;
    let t = b.mp(k1, s)?;
    let k2 = b.prop1(p, p)?;
    let id = b.mp(k2, t)?;
    b.lemmas.insert(("imp_refl", p.clone()), id);
    Ok(id)
}

/// From `⊢ a ---> b` and `⊢ b ---> c`, `⊢ a ---> c`.
pub fn syllogism(b: &mut ProofBuilder, ab: NodeId, bc: NodeId) -> Result<NodeId, DeriveError> {
    let (a, b1) = split_imp(b.concl(ab))?;
    let (b2, c) = split_imp(b.concl(bc))?;
    if b1 != b2 {
        return Err(DeriveError::Internal(format!(
            "syllogism: {b1} and {b2} differ"
        )));
    }
    let bc_p = b.concl(bc).clone();
    let k = b.prop1(&bc_p, &a)?;
    let abc = b.mp(bc, k)?;
    let s = b.prop2(&a, &b1, &c)?;
    let t = b.mp(abc, s)?;
    b.mp(ab, t)
}

pub(crate) fn split_imp(p: &Pattern) -> Result<(Pattern, Pattern), DeriveError> {
    p.as_imp()
        .map(|(a, c)| (a.clone(), c.clone()))
        .ok_or_else(|| DeriveError::Internal(format!("{p} is not an implication")))
}
