use std::fmt;

use thiserror::Error;

/// Failure categories. The codes are part of the public contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    /// The premises or the claimed conclusion do not fit the rule schema.
    Shape,
    /// A freshness or closedness side condition fails.
    SideCondition,
    /// An instantiation pattern is not well-formed.
    IllFormed,
    /// `Hypothesis` names an axiom the theory does not have.
    UnknownAxiom,
    /// A premise reference is missing or does not point backwards.
    BadReference,
    /// The derivation has no nodes.
    Empty,
    /// A proof object names a different theory.
    TheoryMismatch,
}

impl ErrorKind {
    pub fn code(self) -> &'static str {
        match self {
            ErrorKind::Shape => "rule-shape",
            ErrorKind::SideCondition => "side-condition",
            ErrorKind::IllFormed => "ill-formed",
            ErrorKind::UnknownAxiom => "unknown-axiom",
            ErrorKind::BadReference => "bad-reference",
            ErrorKind::Empty => "empty-derivation",
            ErrorKind::TheoryMismatch => "theory-mismatch",
        }
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("node #{node}: {kind}: {message}")]
pub struct CheckError {
    pub node: usize,
    pub kind: ErrorKind,
    pub message: String,
}

impl CheckError {
    pub fn new(node: usize, kind: ErrorKind, message: impl Into<String>) -> Self {
        CheckError {
            node,
            kind,
            message: message.into(),
        }
    }
}
