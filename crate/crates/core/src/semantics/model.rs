//! Finite models, element sets and valuations.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::syntax::{EVar, SVar, Symbol};

/// Largest supported carrier.
pub const MAX_CARRIER: usize = 128;

/// Index of a carrier element.
pub type Elem = usize;

/// A subset of a carrier with at most [`MAX_CARRIER`] elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ElemSet(u128);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    /// `{0, .., n-1}`
    pub fn full(n: usize) -> ElemSet {
        if n >= 128 {
            ElemSet(u128::MAX)
        } else {
            ElemSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(e: Elem) -> ElemSet {
        ElemSet(1u128 << e)
    }

    pub fn from_bits(bits: u128) -> ElemSet {
        ElemSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn contains(self, e: Elem) -> bool {
        e < 128 && self.0 & (1u128 << e) != 0
    }

    pub fn insert(&mut self, e: Elem) {
        self.0 |= 1u128 << e;
    }

    pub fn union(self, o: ElemSet) -> ElemSet {
        ElemSet(self.0 | o.0)
    }

    pub fn intersection(self, o: ElemSet) -> ElemSet {
        ElemSet(self.0 & o.0)
    }

    pub fn difference(self, o: ElemSet) -> ElemSet {
        ElemSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: ElemSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Elem> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }
}

impl FromIterator<Elem> for ElemSet {
    fn from_iter<I: IntoIterator<Item = Elem>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("the carrier must be nonempty")]
    EmptyCarrier,
    #[error("carrier of {0} elements exceeds the supported maximum of {MAX_CARRIER}")]
    CarrierTooLarge(usize),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("application table is not total: missing entry for ({0}, {1})")]
    MissingApp(String, String),
    #[error("set refers to an element outside the carrier")]
    OutOfCarrier,
}

/// A finite model: carrier, application into subsets, symbol interpretation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    name: String,
    elements: Vec<String>,
    app: Vec<ElemSet>,
    symbols: BTreeMap<Symbol, ElemSet>,
}

impl Model {
    /// `app(a, b)` is queried for every pair of carrier elements.
    pub fn new(
        name: impl Into<String>,
        elements: Vec<String>,
        app: impl Fn(Elem, Elem) -> ElemSet,
        symbols: BTreeMap<Symbol, ElemSet>,
    ) -> Result<Model, ModelError> {
        let n = elements.len();
        if n == 0 {
            return Err(ModelError::EmptyCarrier);
        }
        if n > MAX_CARRIER {
            return Err(ModelError::CarrierTooLarge(n));
        }
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].contains(e) {
                return Err(ModelError::DuplicateElement(e.clone()));
            }
        }
        let full = ElemSet::full(n);
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let s = app(a, b);
                if !s.is_subset(full) {
                    return Err(ModelError::OutOfCarrier);
                }
                table.push(s);
            }
        }
        if symbols.values().any(|s| !s.is_subset(full)) {
            return Err(ModelError::OutOfCarrier);
        }
        Ok(Model {
            name: name.into(),
            elements,
            app: table,
            symbols,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn full(&self) -> ElemSet {
        ElemSet::full(self.size())
    }

    pub fn element_name(&self, e: Elem) -> &str {
        &self.elements[e]
    }

    pub fn element(&self, name: &str) -> Option<Elem> {
        self.elements.iter().position(|e| e == name)
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn app(&self, a: Elem, b: Elem) -> ElemSet {
        self.app[a * self.size() + b]
    }

    /// Pointwise extension of application to sets.
    pub fn app_sets(&self, a: ElemSet, b: ElemSet) -> ElemSet {
        let mut out = ElemSet::EMPTY;
        for x in a.iter() {
            for y in b.iter() {
                out = out.union(self.app(x, y));
            }
        }
        out
    }

    pub fn symbol(&self, s: &Symbol) -> Option<ElemSet> {
        self.symbols.get(s).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&Symbol, ElemSet)> {
        self.symbols.iter().map(|(k, v)| (k, *v))
    }

    /// Element names of a set, in carrier order.
    pub fn names_of(&self, s: ElemSet) -> Vec<String> {
        s.iter().map(|e| self.elements[e].clone()).collect()
    }

    /// `{a, b}` rendering of a set.
    pub fn show(&self, s: ElemSet) -> String {
        format!("{{{}}}", self.names_of(s).join(", "))
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Model {
        self.name = name.into();
        self
    }
}

/// Variable valuation. Unmapped element variables default to the first
/// carrier element, unmapped set variables to the empty set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Valuation {
    pub evars: BTreeMap<EVar, Elem>,
    pub svars: BTreeMap<SVar, ElemSet>,
}

impl Serialize for EVar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl Serialize for SVar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl Serialize for ElemSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn evar(&self, x: &EVar) -> Elem {
        self.evars.get(x).copied().unwrap_or(0)
    }

    pub fn svar(&self, x: &SVar) -> ElemSet {
        self.svars.get(x).copied().unwrap_or(ElemSet::EMPTY)
    }

    pub fn with_evar(mut self, x: EVar, e: Elem) -> Self {
        self.evars.insert(x, e);
        self
    }

    pub fn with_svar(mut self, x: SVar, s: ElemSet) -> Self {
        self.svars.insert(x, s);
        self
    }

    pub fn set_evar(&mut self, x: EVar, e: Elem) -> Option<Elem> {
        self.evars.insert(x, e)
    }

    pub fn set_svar(&mut self, x: SVar, s: ElemSet) -> Option<ElemSet> {
        self.svars.insert(x, s)
    }

    /// Restores a binding previously replaced by `set_evar`.
    pub fn restore_evar(&mut self, x: &EVar, old: Option<Elem>) {
        match old {
            Some(e) => {
                self.evars.insert(x.clone(), e);
            }
            None => {
                self.evars.remove(x);
            }
        }
    }

    pub fn restore_svar(&mut self, x: &SVar, old: Option<ElemSet>) {
        match old {
            Some(s) => {
                self.svars.insert(x.clone(), s);
            }
            None => {
                self.svars.remove(x);
            }
        }
    }

    /// Readable form with element names.
    pub fn describe(&self, m: &Model) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for (x, e) in &self.evars {
            out.insert(x.to_string(), m.element_name(*e).to_owned());
        }
        for (x, s) in &self.svars {
            out.insert(x.to_string(), m.show(*s));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elemset_basics() {
        let s: ElemSet = [0, 2, 5].into_iter().collect();
        assert_eq!(s.len(), 3);
        assert!(s.contains(2) && !s.contains(1));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 2, 5]);
        assert!(s.is_subset(ElemSet::full(6)));
        assert!(!s.is_subset(ElemSet::full(5)));
        assert_eq!(ElemSet::full(128).len(), 128);
    }

    #[test]
    fn carrier_must_be_nonempty() {
        let err = Model::new("m", vec![], |_, _| ElemSet::EMPTY, BTreeMap::new()).unwrap_err();
        assert_eq!(err, ModelError::EmptyCarrier);
    }

    #[test]
    fn app_sets_is_pointwise_union() {
        let names = vec!["a".into(), "b".into()];
        let m = Model::new("m", names, |x, y| ElemSet::singleton((x + y) % 2), BTreeMap::new()).unwrap();
        assert_eq!(m.app_sets(ElemSet::full(2), ElemSet::singleton(0)), ElemSet::full(2));
        assert_eq!(m.app_sets(ElemSet::EMPTY, ElemSet::full(2)), ElemSet::EMPTY);
    }
}
