//! Finite models and the evaluation of patterns in them.

mod eval;
mod holds;
mod model;

pub use eval::{
    eval, eval_with, gfp_kleene, is_functional, is_predicate, lfp_kleene, lfp_prefixpoints,
    EvalError, EvalOptions, DEFAULT_BUDGET, MAX_ENUMERATION_CARRIER,
};
pub use holds::{
    entails_over, find_countervaluation, holds, holds_all, holds_with, valuation_count,
    Countermodel, EntailmentReport, Witness,
};
pub use model::{Elem, ElemSet, Model, ModelError, Valuation, MAX_CARRIER};
