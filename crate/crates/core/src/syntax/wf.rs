//! Well-formedness: positivity of `μ` bodies and closedness of indices.

use super::notation::expand;
use super::pattern::{DbIndex, Pattern};

/// Every `μ`-bound index occurs only positively (under an even number of
/// implication left-hand sides) inside its binder.
pub fn wf_positive(p: &Pattern) -> bool {
    match p {
        Pattern::App(l, r) | Pattern::Imp(l, r) => wf_positive(l) && wf_positive(r),
        Pattern::Exists(b) => wf_positive(b),
        Pattern::Mu(b) => !occurs_negatively(b, 0) && wf_positive(b),
        Pattern::Notation(_) => wf_positive(&expand(p)),
        _ => true,
    }
}

fn occurs_negatively(p: &Pattern, idx: DbIndex) -> bool {
    match p {
        Pattern::App(l, r) => occurs_negatively(l, idx) || occurs_negatively(r, idx),
        Pattern::Imp(l, r) => occurs_positively(l, idx) || occurs_negatively(r, idx),
        Pattern::Exists(b) => occurs_negatively(b, idx),
        Pattern::Mu(b) => occurs_negatively(b, idx + 1),
        Pattern::Notation(_) => occurs_negatively(&expand(p), idx),
        _ => false,
    }
}

fn occurs_positively(p: &Pattern, idx: DbIndex) -> bool {
    match p {
        Pattern::BoundSVar(n) => *n == idx,
        Pattern::App(l, r) => occurs_positively(l, idx) || occurs_positively(r, idx),
        Pattern::Imp(l, r) => occurs_negatively(l, idx) || occurs_positively(r, idx),
        Pattern::Exists(b) => occurs_positively(b, idx),
        Pattern::Mu(b) => occurs_positively(b, idx + 1),
        Pattern::Notation(_) => occurs_positively(&expand(p), idx),
        _ => false,
    }
}

/// Every dangling element index is below `bound` (plus the enclosing `∃`s).
pub fn wf_closed_ex(p: &Pattern, bound: DbIndex) -> bool {
    match p {
        Pattern::BoundEVar(n) => *n < bound,
        Pattern::App(l, r) | Pattern::Imp(l, r) => wf_closed_ex(l, bound) && wf_closed_ex(r, bound),
        Pattern::Exists(b) => wf_closed_ex(b, bound + 1),
        Pattern::Mu(b) => wf_closed_ex(b, bound),
        Pattern::Notation(n) => n
            .args
            .iter()
            .enumerate()
            .all(|(i, a)| wf_closed_ex(a, bound + n.def.ex_offset(i))),
        _ => true,
    }
}

/// Every dangling set index is below `bound` (plus the enclosing `μ`s).
pub fn wf_closed_mu(p: &Pattern, bound: DbIndex) -> bool {
    match p {
        Pattern::BoundSVar(n) => *n < bound,
        Pattern::App(l, r) | Pattern::Imp(l, r) => wf_closed_mu(l, bound) && wf_closed_mu(r, bound),
        Pattern::Exists(b) => wf_closed_mu(b, bound),
        Pattern::Mu(b) => wf_closed_mu(b, bound + 1),
        Pattern::Notation(n) => n
            .args
            .iter()
            .enumerate()
            .all(|(i, a)| wf_closed_mu(a, bound + n.def.mu_offset(i))),
        _ => true,
    }
}

/// No dangling indices of either kind.
pub fn is_closed(p: &Pattern) -> bool {
    wf_closed_ex(p, 0) && wf_closed_mu(p, 0)
}

pub fn well_formed(p: &Pattern) -> bool {
    is_closed(p) && wf_positive(p)
}
