use thiserror::Error;

/// Errors raised by the combinatorial constructions in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two maps were composed whose codomain and domain disagree.
    #[error("cannot compose: codomain {cod} does not match domain {dom}")]
    CompositionMismatch { cod: String, dom: String },

    /// A face, degeneracy or edge index fell outside its valid range.
    #[error("{what} index {index} out of range (valid: {valid})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        valid: String,
    },

    /// Raw data does not describe a map of the claimed kind.
    #[error("invalid map: {0}")]
    InvalidMap(String),

    /// Raw data does not describe a morphism of fat Delta.
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    /// An operation was called outside its documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Input text or JSON could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// The free relative semicategory on a graph with a cycle has infinitely
    /// many morphisms.
    #[error("unbounded free object: graph has a cycle; use relgraph::free_bounded for truncated path queries")]
    UnboundedFreeObject,

    /// A concatenation would leave the materialized truncation.
    #[error("path of length {length} exceeds truncation bound {bound}")]
    TruncationOverflow { length: usize, bound: usize },

    /// A semicategory table failed validation.
    #[error("semicategory violation: {0}")]
    Semicategory(#[from] crate::semicat::Violation),

    /// A presheaf table failed validation.
    #[error("presheaf violation: {0}")]
    Presheaf(String),

    /// Two truncated presheaves live over different truncations.
    #[error("bound mismatch: {0} vs {1}")]
    BoundMismatch(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
