//! The propositional toolkit and a proof-producing tautology checker.
//!
//! Formulas over atoms are decided by three-valued evaluation under a
//! partial assignment. Once the value is forced to true, a Kalmár-style
//! derivation is produced from the literals assumed so far; otherwise the
//! checker splits on an atom and joins both branches with case analysis.

use std::collections::HashMap;
use std::sync::Arc;

use super::builder::{imp_refl, HTerm, ProofBuilder};
use super::DeriveError;
use crate::kernel::NodeId;
use crate::syntax::{expand, Pattern};

/// Most distinct atoms [`tauto`] accepts.
pub const MAX_ATOMS: usize = 16;

/// A propositional formula over numbered atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Prop {
    Atom(usize),
    Bot,
    Imp(Arc<Prop>, Arc<Prop>),
}

impl Prop {
    pub fn imp(a: Prop, b: Prop) -> Prop {
        Prop::Imp(Arc::new(a), Arc::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Prop) -> Prop {
        Prop::imp(a, Prop::Bot)
    }

    /// Mirrors the `or` notation.
    pub fn or(a: Prop, b: Prop) -> Prop {
        Prop::imp(Prop::not(a), b)
    }

    /// Mirrors the `and` notation.
    pub fn and(a: Prop, b: Prop) -> Prop {
        Prop::not(Prop::or(Prop::not(a), Prop::not(b)))
    }

    /// Mirrors the `iff` notation.
    pub fn iff(a: Prop, b: Prop) -> Prop {
        Prop::and(Prop::imp(a.clone(), b.clone()), Prop::imp(b, a))
    }

    pub fn top() -> Prop {
        Prop::not(Prop::Bot)
    }

    pub fn depth(&self) -> usize {
        match self {
            Prop::Imp(a, b) => 1 + a.depth().max(b.depth()),
            _ => 0,
        }
    }

    /// Classical truth value.
    pub fn eval(&self, v: &[bool]) -> bool {
        match self {
            Prop::Atom(i) => v[*i],
            Prop::Bot => false,
            Prop::Imp(a, b) => !a.eval(v) || b.eval(v),
        }
    }

    /// Value under a partial assignment, if already determined.
    pub fn eval3(&self, v: &[Option<bool>]) -> Option<bool> {
        match self {
            Prop::Atom(i) => v[*i],
            Prop::Bot => Some(false),
            Prop::Imp(a, b) => match (a.eval3(v), b.eval3(v)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
        }
    }

    /// One more than the largest atom index.
    pub fn atom_bound(&self) -> usize {
        match self {
            Prop::Atom(i) => i + 1,
            Prop::Bot => 0,
            Prop::Imp(a, b) => a.atom_bound().max(b.atom_bound()),
        }
    }

    /// Instantiates atoms with core patterns.
    pub fn to_pattern(&self, atoms: &[Pattern]) -> Pattern {
        match self {
            Prop::Atom(i) => atoms[*i].clone(),
            Prop::Bot => Pattern::Bot,
            Prop::Imp(a, b) => Pattern::imp(a.to_pattern(atoms), b.to_pattern(atoms)),
        }
    }

    /// The propositional skeleton of a core pattern: every maximal subpattern
    /// that is neither `⊥` nor an implication becomes an atom, numbered in
    /// order of first occurrence.
    pub fn skeleton(p: &Pattern) -> (Prop, Vec<Pattern>) {
        fn go(p: &Pattern, atoms: &mut Vec<Pattern>, index: &mut HashMap<Pattern, usize>) -> Prop {
            match p {
                Pattern::Bot => Prop::Bot,
                Pattern::Imp(a, b) => {
                    let a = go(a, atoms, index);
                    Prop::imp(a, go(b, atoms, index))
                }
                other => {
                    let i = *index.entry(other.clone()).or_insert_with(|| {
                        atoms.push(other.clone());
                        atoms.len() - 1
                    });
                    Prop::Atom(i)
                }
            }
        }
        let mut atoms = Vec::new();
        let mut index = HashMap::new();
        let prop = go(&expand(p), &mut atoms, &mut index);
        (prop, atoms)
    }

    fn first_unassigned(&self, v: &[Option<bool>]) -> Option<usize> {
        match self {
            Prop::Atom(i) if v[*i].is_none() => Some(*i),
            Prop::Imp(a, b) => a.first_unassigned(v).or_else(|| b.first_unassigned(v)),
            _ => None,
        }
    }
}

/// Outcome of [`tauto`].
pub enum TautoResult {
    Proved(NodeId),
    /// A falsifying assignment to the skeleton's atoms, in atom order.
    Refuted(Vec<(Pattern, bool)>),
}

fn lemma(
    b: &mut ProofBuilder,
    name: &'static str,
    key: Pattern,
    build: impl FnOnce(&mut ProofBuilder) -> Result<NodeId, DeriveError>,
) -> Result<NodeId, DeriveError> {
    if let Some(&id) = b.lemmas.get(&(name, key.clone())) {
        return Ok(id);
    }
    let id = build(b)?;
    b.lemmas.insert((name, key), id);
    Ok(id)
}

/// Closes a term over hypotheses `ctx` by discharging all of them.
pub fn close(b: &mut ProofBuilder, ctx: &[Pattern], t: HTerm) -> Result<NodeId, DeriveError> {
    let mut t = t;
    for n in (1..=ctx.len()).rev() {
        t = t.discharge(b, n, &ctx[n - 1])?;
    }
    t.materialize(b)
}

fn neg(p: &Pattern) -> Pattern {
    Pattern::neg_core(p.clone())
}

/// `⊢ ⊥ ---> φ`
pub fn bot_elim(b: &mut ProofBuilder, p: &Pattern) -> Result<NodeId, DeriveError> {
    lemma(b, "bot_elim", p.clone(), |b| {
        // ⊥ ---> ! ! φ, then double negation elimination
        let k = b.prop1(&Pattern::Bot, &neg(p))?;
        let d = b.prop3(p)?;
        super::builder::syllogism(b, k, d)
    })
}

/// `⊢ ! a ---> (a ---> c)`
pub fn explode(b: &mut ProofBuilder, a: &Pattern, c: &Pattern) -> Result<NodeId, DeriveError> {
    lemma(b, "explode", Pattern::imp(a.clone(), c.clone()), |b| {
        let ctx = [neg(a), a.clone()];
        let na = HTerm::hyp(0, ctx[0].clone());
        let ha = HTerm::hyp(1, ctx[1].clone());
        let bot = HTerm::mp(ha, na)?;
        let be = bot_elim(b, c)?;
        let t = HTerm::mp(bot, HTerm::node(b, be))?;
        close(b, &ctx, t)
    })
}

/// `⊢ a ---> (! c ---> ! (a ---> c))`
pub fn imp_false(b: &mut ProofBuilder, a: &Pattern, c: &Pattern) -> Result<NodeId, DeriveError> {
    lemma(b, "imp_false", Pattern::imp(a.clone(), c.clone()), |b| {
        let ctx = [a.clone(), neg(c), Pattern::imp(a.clone(), c.clone())];
        let ha = HTerm::hyp(0, ctx[0].clone());
        let nc = HTerm::hyp(1, ctx[1].clone());
        let ac = HTerm::hyp(2, ctx[2].clone());
        let t = HTerm::mp(HTerm::mp(ha, ac)?, nc)?;
        close(b, &ctx, t)
    })
}

/// `⊢ (p ---> φ) ---> ((! p ---> φ) ---> φ)`
pub fn case_split(b: &mut ProofBuilder, p: &Pattern, f: &Pattern) -> Result<NodeId, DeriveError> {
    lemma(b, "case_split", Pattern::imp(p.clone(), f.clone()), |b| {
        let ctx = [
            Pattern::imp(p.clone(), f.clone()),
            Pattern::imp(neg(p), f.clone()),
            neg(f),
            p.clone(),
        ];
        let h = |i: usize| HTerm::hyp(i, ctx[i].clone());
        // p gives f, contradicting ! f
        let bot = HTerm::mp(HTerm::mp(h(3), h(0))?, h(2))?;
        let np = bot.discharge(b, 4, &ctx[3])?;
        let bot2 = HTerm::mp(HTerm::mp(np, h(1))?, h(2))?;
        let nnf = bot2.discharge(b, 3, &ctx[2])?;
        let k = b.prop3(f)?;
        let t = HTerm::mp(nnf, HTerm::node(b, k))?;
        close(b, &ctx[..2], t)
    })
}

/// `⊢ φ ---> (ψ ---> φ)`-style weakening of a proved `φ`: `⊢ ψ ---> φ`.
pub fn weaken(b: &mut ProofBuilder, proof: NodeId, extra: &Pattern) -> Result<NodeId, DeriveError> {
    let p = b.concl(proof).clone();
    let k = b.prop1(&p, extra)?;
    b.mp(proof, k)
}

/// Kalmár's lemma: a proof of `f` or of `! f` (whichever is true under the
/// assignment) from the literal hypotheses in `lits`.
fn kalmar(
    b: &mut ProofBuilder,
    f: &Prop,
    atoms: &[Pattern],
    v: &[Option<bool>],
    lits: &[Option<HTerm>],
    memo: &mut HashMap<*const Prop, HTerm>,
) -> Result<HTerm, DeriveError> {
    let key = f as *const Prop;
    if let Some(t) = memo.get(&key) {
        return Ok(t.clone());
    }
    let out = match f {
        Prop::Atom(i) => lits[*i].clone().expect("assigned atom"),
        Prop::Bot => {
            let id = imp_refl(b, &Pattern::Bot)?;
            HTerm::node(b, id)
        }
        Prop::Imp(x, y) => {
            let xp = x.to_pattern(atoms);
            let yp = y.to_pattern(atoms);
            if y.eval3(v) == Some(true) {
                let ty = kalmar(b, y, atoms, v, lits, memo)?;
                let k = b.prop1(&yp, &xp)?;
                HTerm::mp(ty, HTerm::node(b, k))?
            } else if x.eval3(v) == Some(false) {
                let tnx = kalmar(b, x, atoms, v, lits, memo)?;
                let k = explode(b, &xp, &yp)?;
                HTerm::mp(tnx, HTerm::node(b, k))?
            } else {
                let tx = kalmar(b, x, atoms, v, lits, memo)?;
                let tny = kalmar(b, y, atoms, v, lits, memo)?;
                let k = imp_false(b, &xp, &yp)?;
                HTerm::mp(tny, HTerm::mp(tx, HTerm::node(b, k))?)?
            }
        }
    };
    memo.insert(key, out.clone());
    Ok(out)
}

struct Search<'a> {
    atoms: &'a [Pattern],
    v: Vec<Option<bool>>,
    ctx: Vec<Pattern>,
    lits: Vec<Option<HTerm>>,
}

impl Search<'_> {
    fn run(&mut self, b: &mut ProofBuilder, f: &Prop) -> Result<Result<HTerm, Vec<bool>>, DeriveError> {
        match f.eval3(&self.v) {
            Some(true) => {
                let mut memo = HashMap::new();
                Ok(Ok(kalmar(b, f, self.atoms, &self.v, &self.lits, &mut memo)?))
            }
            Some(false) => Ok(Err(self.v.iter().map(|x| x.unwrap_or(false)).collect())),
            None => {
                let a = f.first_unassigned(&self.v).expect("undetermined formula has a free atom");
                let ap = self.atoms[a].clone();
                let fp = f.to_pattern(self.atoms);
                let mut branches = Vec::with_capacity(2);
                for (value, lit) in [(true, ap.clone()), (false, neg(&ap))] {
                    self.v[a] = Some(value);
                    self.ctx.push(lit.clone());
                    self.lits[a] = Some(HTerm::hyp(self.ctx.len() - 1, lit.clone()));
                    let r = self.run(b, f);
                    let n = self.ctx.len();
                    self.ctx.pop();
                    self.lits[a] = None;
                    self.v[a] = None;
                    match r? {
                        Ok(t) => branches.push(t.discharge(b, n, &lit)?),
                        Err(cex) => return Ok(Err(cex)),
                    }
                }
                let neg_branch = branches.pop().expect("two branches");
                let pos_branch = branches.pop().expect("two branches");
                let k = case_split(b, &ap, &fp)?;
                let t = HTerm::mp(pos_branch, HTerm::node(b, k))?;
                Ok(Ok(HTerm::mp(neg_branch, t)?))
            }
        }
    }
}

/// Proves a propositional formula instantiated with `atoms`, or returns a
/// falsifying assignment.
pub fn prove_prop(
    b: &mut ProofBuilder,
    f: &Prop,
    atoms: &[Pattern],
) -> Result<Result<NodeId, Vec<bool>>, DeriveError> {
    let n = f.atom_bound();
    if n > MAX_ATOMS {
        return Err(DeriveError::TooManyAtoms(n, MAX_ATOMS));
    }
    let key = f.to_pattern(atoms);
    if let Some(&id) = b.lemmas.get(&("tauto", key.clone())) {
        return Ok(Ok(id));
    }
    let mut s = Search {
        atoms,
        v: vec![None; n],
        ctx: Vec::new(),
        lits: vec![None; n],
    };
    match s.run(b, f)? {
        Ok(t) => {
            let id = t.materialize(b)?;
            b.lemmas.insert(("tauto", key), id);
            Ok(Ok(id))
        }
        Err(cex) => Ok(Err(cex)),
    }
}

/// Decides the propositional skeleton of `p` and proves `p` if it is a
/// tautology.
pub fn tauto(b: &mut ProofBuilder, p: &Pattern) -> Result<TautoResult, DeriveError> {
    let (f, atoms) = Prop::skeleton(p);
    if atoms.len() > MAX_ATOMS {
        return Err(DeriveError::TooManyAtoms(atoms.len(), MAX_ATOMS));
    }
    Ok(match prove_prop(b, &f, &atoms)? {
        Ok(id) => TautoResult::Proved(id),
        Err(v) => TautoResult::Refuted(atoms.into_iter().zip(v).collect()),
    })
}

/// Proves an instance of a schema that must be a tautology.
pub(crate) fn schema(b: &mut ProofBuilder, f: &Prop, atoms: &[Pattern]) -> Result<NodeId, DeriveError> {
    match prove_prop(b, f, atoms)? {
        Ok(id) => Ok(id),
        Err(_) => Err(DeriveError::Internal("schema is not a tautology".into())),
    }
}

/// Applies a proved implication chain `a₁ ---> … ---> aₙ ---> c` to proofs
/// of its premises.
pub fn apply_chain(b: &mut ProofBuilder, major: NodeId, minors: &[NodeId]) -> Result<NodeId, DeriveError> {
    minors.iter().try_fold(major, |acc, &m| b.mp(m, acc))
}

fn atom(i: usize) -> Prop {
    Prop::Atom(i)
}

/// From `⊢ a ---> c` and `⊢ c ---> a`, `⊢ a <---> c`.
pub fn iff_intro(b: &mut ProofBuilder, ac: NodeId, ca: NodeId) -> Result<NodeId, DeriveError> {
    let (a, c) = super::builder::split_imp(b.concl(ac))?;
    let s = Prop::imp(
        Prop::imp(atom(0), atom(1)),
        Prop::imp(Prop::imp(atom(1), atom(0)), Prop::iff(atom(0), atom(1))),
    );
    let k = schema(b, &s, &[a, c])?;
    apply_chain(b, k, &[ac, ca])
}

/// From `⊢ a <---> c`, `⊢ a ---> c` (or `⊢ c ---> a` with `backwards`).
pub fn iff_elim(b: &mut ProofBuilder, iff: NodeId, backwards: bool) -> Result<NodeId, DeriveError> {
    let (a, c) = as_iff(b.concl(iff))
        .ok_or_else(|| DeriveError::Internal(format!("{} is not an equivalence", b.concl(iff))))?;
    let goal = if backwards {
        Prop::imp(atom(1), atom(0))
    } else {
        Prop::imp(atom(0), atom(1))
    };
    let k = schema(b, &Prop::imp(Prop::iff(atom(0), atom(1)), goal), &[a, c])?;
    b.mp(iff, k)
}

/// Recognizes the expansion of `a <---> c`.
pub fn as_iff(p: &Pattern) -> Option<(Pattern, Pattern)> {
    // ! (! ! (a ---> c) ---> ! (c ---> a))
    let neg_of = |p: &Pattern| -> Option<Pattern> {
        match p {
            Pattern::Imp(x, r) if **r == Pattern::Bot => Some((**x).clone()),
            _ => None,
        }
    };
    let inner = neg_of(&expand(p))?;
    let (l, r) = inner.as_imp()?;
    let ac = neg_of(&neg_of(l)?)?;
    let ca = neg_of(r)?;
    let (a, c) = ac.as_imp()?;
    let (c2, a2) = ca.as_imp()?;
    (a == a2 && c == c2).then(|| (a.clone(), c.clone()))
}
