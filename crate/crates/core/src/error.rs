//! Error types shared across the engine.

use thiserror::Error;

/// Which configurable resource limit was exhausted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetKind {
    /// S-pairs processed by a single basis computation.
    SPairs,
    /// Total number of terms held by a basis computation.
    Terms,
}

impl std::fmt::Display for BudgetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BudgetKind::SPairs => write!(f, "s-pairs"),
            BudgetKind::Terms => write!(f, "terms"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("computation budget exceeded ({kind}, limit {limit})")]
    BudgetExceeded { kind: BudgetKind, limit: u64 },

    #[error("order does not eliminate a front block of {front} variables")]
    NotEliminationOrder { front: usize },

    #[error("map is not well defined: defining relation #{index} has nonzero image")]
    MapNotWellDefined { index: usize },

    #[error("no finiteness certificate: {cap} cap {limit} reached before the span closed")]
    NotFinite { cap: &'static str, limit: u64 },

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("hopf axiom `{axiom}` fails on generator `{generator}`")]
    HopfAxiomFailure { axiom: &'static str, generator: String },

    #[error("coaction axiom `{axiom}` fails on generator `{generator}`")]
    CoactionAxiomFailure { axiom: &'static str, generator: String },

    #[error("group order is divisible by the field characteristic; supply invariant generators directly")]
    ModularCase,

    #[error("generator #{index} is not invariant under the groupoid")]
    NotInvariant { index: usize },

    #[error("invalid finiteness certificate: {0}")]
    CertificateInvalid(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("validation: {0}")]
    Validation(String),

    #[error("internal invariant violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
