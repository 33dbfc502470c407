//! Satisfaction `M ⊨ φ` and entailment over an explicit model suite.

use std::collections::BTreeMap;

use serde::Serialize;

use super::eval::{eval_with, EvalError, EvalOptions};
use super::model::{ElemSet, Model, Valuation};
use crate::syntax::{expand, free_evars, free_svars, EVar, Pattern, SVar};

/// A valuation under which a pattern does not denote the whole carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub valuation: Valuation,
    pub denotation: ElemSet,
}

/// Number of valuations of the free variables of `p` over `m`, if it fits
/// in a `u128`.
pub fn valuation_count(m: &Model, p: &Pattern) -> Option<u128> {
    let core = expand(p);
    let n = m.size() as u128;
    let fev = free_evars(&core).len() as u32;
    let fsv = free_svars(&core).len() as u32;
    let evs = n.checked_pow(fev)?;
    let bits = (m.size() as u32).checked_mul(fsv)?;
    let svs = if bits >= 128 { return None } else { 1u128 << bits };
    evs.checked_mul(svs)
}

/// Searches for a valuation of the free variables of `p` under which `p`
/// is not the whole carrier. `Ok(None)` means `M ⊨ p`.
pub fn find_countervaluation(
    m: &Model,
    p: &Pattern,
    opts: &EvalOptions<'_>,
) -> Result<Option<Witness>, EvalError> {
    let core = expand(p);
    let count = valuation_count(m, &core);
    match count {
        Some(c) if c <= opts.budget as u128 => {}
        _ => {
            return Err(EvalError::Budget {
                needed: count.map_or_else(|| "more than 2^128".to_owned(), |c| c.to_string()),
                budget: opts.budget,
            })
        }
    }
    let evars: Vec<EVar> = free_evars(&core).into_iter().collect();
    let svars: Vec<SVar> = free_svars(&core).into_iter().collect();
    let n = m.size();
    let set_count = if n < 128 { 1u128 << n } else { u128::MAX };
    let mut ev_idx = vec![0usize; evars.len()];
    let mut sv_idx = vec![0u128; svars.len()];
    loop {
        opts.check_cancel()?;
        let mut rho = Valuation::new();
        for (x, &e) in evars.iter().zip(&ev_idx) {
            rho.set_evar(x.clone(), e);
        }
        for (x, &s) in svars.iter().zip(&sv_idx) {
            rho.set_svar(x.clone(), ElemSet::from_bits(s));
        }
        let d = eval_with(m, &rho, &core, opts)?;
        if d != m.full() {
            return Ok(Some(Witness {
                valuation: rho,
                denotation: d,
            }));
        }
        // odometer step: element variables first, then set variables
        let mut carried = true;
        for i in ev_idx.iter_mut() {
            *i += 1;
            if *i < n {
                carried = false;
                break;
            }
            *i = 0;
        }
        if carried {
            for s in sv_idx.iter_mut() {
                *s += 1;
                if *s < set_count {
                    carried = false;
                    break;
                }
                *s = 0;
            }
        }
        if carried {
            return Ok(None);
        }
    }
}

/// `M ⊨ p`
pub fn holds(m: &Model, p: &Pattern) -> Result<bool, EvalError> {
    holds_with(m, p, &EvalOptions::default())
}

pub fn holds_with(m: &Model, p: &Pattern, opts: &EvalOptions<'_>) -> Result<bool, EvalError> {
    Ok(find_countervaluation(m, p, opts)?.is_none())
}

/// `M ⊨ Γ`: every axiom holds.
pub fn holds_all<'p>(
    m: &Model,
    gamma: impl IntoIterator<Item = &'p Pattern>,
    opts: &EvalOptions<'_>,
) -> Result<bool, EvalError> {
    for p in gamma {
        if !holds_with(m, p, opts)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Countermodel report, serialized as the JSON the CLI prints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Countermodel {
    pub model: String,
    pub valuation: BTreeMap<String, String>,
    pub denotation: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntailmentReport {
    pub holds: bool,
    /// Models of the suite that satisfy the theory.
    pub checked: Vec<String>,
    /// Models skipped because they do not satisfy the theory (or do not
    /// interpret all of its symbols).
    pub skipped: Vec<String>,
    pub countermodel: Option<Countermodel>,
}

/// Suite-relative entailment: every model of the suite that satisfies
/// `gamma` also satisfies `phi`. The first countermodel in suite order is
/// reported.
pub fn entails_over(
    models: &[Model],
    gamma: &[Pattern],
    phi: &Pattern,
    opts: &EvalOptions<'_>,
) -> Result<EntailmentReport, EvalError> {
    let mut report = EntailmentReport {
        holds: true,
        checked: Vec::new(),
        skipped: Vec::new(),
        countermodel: None,
    };
    for m in models {
        // a model that leaves a theory symbol uninterpreted is over another
        // signature, so it is not a model of the theory either
        let sat = match holds_all(m, gamma, opts) {
            Err(EvalError::Uninterpreted(_)) => false,
            r => r?,
        };
        if !sat {
            report.skipped.push(m.name().to_owned());
            continue;
        }
        report.checked.push(m.name().to_owned());
        if let Some(w) = find_countervaluation(m, phi, opts)? {
            report.holds = false;
            report.countermodel = Some(Countermodel {
                model: m.name().to_owned(),
                valuation: w.valuation.describe(m),
                denotation: m.names_of(w.denotation),
            });
            break;
        }
    }
    Ok(report)
}
