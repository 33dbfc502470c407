//! Pattern evaluation.
//!
//! Binder bodies are opened with a fresh name and evaluated under an updated
//! valuation, so the recursion is on pattern size rather than on structure.
//! Least fixpoints use Kleene iteration from the empty set.

use std::sync::atomic::{AtomicBool, Ordering};

use thiserror::Error;

use super::model::{ElemSet, Model, Valuation};
use crate::syntax::{
    expand, fresh_evar_avoiding, fresh_svar_avoiding, svar_open, evar_open, wf_positive, DbIndex,
    Pattern, Symbol,
};

/// Default cap on the number of valuations enumerated by [`super::holds`].
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Largest carrier for which non-positive fixpoints may be enumerated.
pub const MAX_ENUMERATION_CARRIER: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("dangling element index b{0}")]
    DanglingEVar(DbIndex),
    #[error("dangling set index S{0}")]
    DanglingSVar(DbIndex),
    #[error("mu body is not positive")]
    NonPositive,
    #[error("prefixpoint enumeration needs a carrier of at most {MAX_ENUMERATION_CARRIER} elements, got {0}")]
    CarrierTooLargeForEnumeration(usize),
    #[error("symbol `{0}` is not interpreted by the model")]
    Uninterpreted(Symbol),
    #[error("fixpoint iteration did not stabilize within {0} steps")]
    NotStabilized(usize),
    #[error("enumeration budget exceeded: {needed} valuations needed, budget is {budget}")]
    Budget { needed: String, budget: u64 },
    #[error("evaluation cancelled")]
    Cancelled,
}

#[derive(Debug, Clone, Copy)]
pub struct EvalOptions<'c> {
    /// Evaluate non-positive `mu` bodies as the intersection of all
    /// prefixpoints (exhaustive, small carriers only).
    pub prefixpoint_enumeration: bool,
    /// Cap on valuations enumerated when checking validity.
    pub budget: u64,
    pub cancel: Option<&'c AtomicBool>,
}

impl Default for EvalOptions<'_> {
    fn default() -> Self {
        EvalOptions {
            prefixpoint_enumeration: false,
            budget: DEFAULT_BUDGET,
            cancel: None,
        }
    }
}

impl<'c> EvalOptions<'c> {
    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_prefixpoints(mut self) -> Self {
        self.prefixpoint_enumeration = true;
        self
    }

    pub fn with_cancel(mut self, flag: &'c AtomicBool) -> Self {
        self.cancel = Some(flag);
        self
    }

    pub(crate) fn check_cancel(&self) -> Result<(), EvalError> {
        match self.cancel {
            Some(f) if f.load(Ordering::Relaxed) => Err(EvalError::Cancelled),
            _ => Ok(()),
        }
    }
}

/// `⟦p⟧` under `rho`.
pub fn eval(m: &Model, rho: &Valuation, p: &Pattern) -> Result<ElemSet, EvalError> {
    eval_with(m, rho, p, &EvalOptions::default())
}

pub fn eval_with(
    m: &Model,
    rho: &Valuation,
    p: &Pattern,
    opts: &EvalOptions<'_>,
) -> Result<ElemSet, EvalError> {
    let core = expand(p);
    let positive = wf_positive(&core);
    if !positive && !opts.prefixpoint_enumeration {
        return Err(EvalError::NonPositive);
    }
    let mut ev = Evaluator {
        m,
        opts,
        all_positive: positive,
    };
    let mut rho = rho.clone();
    ev.go(&mut rho, &core)
}

struct Evaluator<'a, 'c> {
    m: &'a Model,
    opts: &'a EvalOptions<'c>,
    all_positive: bool,
}

impl Evaluator<'_, '_> {
    fn go(&mut self, rho: &mut Valuation, p: &Pattern) -> Result<ElemSet, EvalError> {
        Ok(match p {
            Pattern::FreeEVar(x) => ElemSet::singleton(rho.evar(x)),
            Pattern::FreeSVar(x) => rho.svar(x),
            Pattern::BoundEVar(n) => return Err(EvalError::DanglingEVar(*n)),
            Pattern::BoundSVar(n) => return Err(EvalError::DanglingSVar(*n)),
            Pattern::Sym(s) => self
                .m
                .symbol(s)
                .ok_or_else(|| EvalError::Uninterpreted(s.clone()))?,
            Pattern::Bot => ElemSet::EMPTY,
            Pattern::Imp(l, r) => {
                let a = self.go(rho, l)?;
                let b = self.go(rho, r)?;
                self.m.full().difference(a.difference(b))
            }
            Pattern::App(l, r) => {
                let a = self.go(rho, l)?;
                let b = self.go(rho, r)?;
                self.m.app_sets(a, b)
            }
            Pattern::Exists(body) => {
                self.opts.check_cancel()?;
                let mut used = crate::syntax::free_evars(body);
                used.extend(rho.evars.keys().cloned());
                let x = fresh_evar_avoiding(&used);
                let opened = evar_open(0, &x, body);
                let mut out = ElemSet::EMPTY;
                for a in 0..self.m.size() {
                    rho.set_evar(x.clone(), a);
                    let r = self.go(rho, &opened);
                    if r.is_err() {
                        rho.restore_evar(&x, None);
                    }
                    out = out.union(r?);
                    if out == self.m.full() {
                        break;
                    }
                }
                rho.restore_evar(&x, None);
                out
            }
            Pattern::Mu(body) => {
                self.opts.check_cancel()?;
                let mut used = crate::syntax::free_svars(body);
                used.extend(rho.svars.keys().cloned());
                let x = fresh_svar_avoiding(&used);
                let opened = svar_open(0, &x, body);
                let positive = self.all_positive || wf_positive(p);
                let n = self.m.size();
                let result = {
                    let mut f = |a: ElemSet| -> Result<ElemSet, EvalError> {
                        self.opts.check_cancel()?;
                        rho.set_svar(x.clone(), a);
                        self.go(rho, &opened)
                    };
                    if positive {
                        lfp_kleene(&mut f, n)
                    } else if n > MAX_ENUMERATION_CARRIER {
                        Err(EvalError::CarrierTooLargeForEnumeration(n))
                    } else {
                        lfp_prefixpoints(&mut f, n)
                    }
                };
                rho.restore_svar(&x, None);
                result?
            }
            Pattern::Notation(_) => {
                let core = expand(p);
                self.go(rho, &core)?
            }
        })
    }
}

/// Least fixpoint by Kleene iteration from the empty set. A monotone `f`
/// stabilizes within `n` steps on an `n`-element carrier.
pub fn lfp_kleene<F>(f: &mut F, n: usize) -> Result<ElemSet, EvalError>
where
    F: FnMut(ElemSet) -> Result<ElemSet, EvalError>,
{
    let mut cur = ElemSet::EMPTY;
    for _ in 0..=n + 1 {
        let next = f(cur)?;
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Err(EvalError::NotStabilized(n + 1))
}

/// Greatest fixpoint by downward iteration from the full carrier.
pub fn gfp_kleene<F>(f: &mut F, n: usize) -> Result<ElemSet, EvalError>
where
    F: FnMut(ElemSet) -> Result<ElemSet, EvalError>,
{
    let mut cur = ElemSet::full(n);
    for _ in 0..=n + 1 {
        let next = f(cur)?;
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Err(EvalError::NotStabilized(n + 1))
}

/// Intersection of all prefixpoints (`f(A) ⊆ A`), enumerating all `2^n`
/// subsets. Defined for any `f`, monotone or not.
pub fn lfp_prefixpoints<F>(f: &mut F, n: usize) -> Result<ElemSet, EvalError>
where
    F: FnMut(ElemSet) -> Result<ElemSet, EvalError>,
{
    assert!(n < 32, "prefixpoint enumeration over 2^{n} subsets");
    let mut out = ElemSet::full(n);
    for bits in 0..(1u128 << n) {
        let a = ElemSet::from_bits(bits);
        if f(a)?.is_subset(a) {
            out = out.intersection(a);
        }
    }
    Ok(out)
}

/// `|⟦p⟧| = 1`
pub fn is_functional(m: &Model, rho: &Valuation, p: &Pattern) -> Result<bool, EvalError> {
    Ok(eval(m, rho, p)?.len() == 1)
}

/// `⟦p⟧ ∈ {∅, M}`
pub fn is_predicate(m: &Model, rho: &Valuation, p: &Pattern) -> Result<bool, EvalError> {
    let s = eval(m, rho, p)?;
    Ok(s.is_empty() || s == m.full())
}
