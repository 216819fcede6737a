//! Finite, executable combinatorics of the fat Delta category.
//!
//! The simplex category and its epimorphism-presented fattening, relative
//! graphs and semicategories with their free monads, nerves with a Segal
//! checker, and bounded verifiers for the active–inert and hypermoment
//! structure. Everything is a finite table; every check is an exhaustive sweep
//! up to an explicit bound.

pub mod arities;
pub mod delta;
pub mod error;
pub mod fat;
pub mod hypermoment;
pub mod nerve;
pub mod nerve_corpus;
pub mod relgraph;
pub mod semicat;
pub mod verify;

pub use error::{Error, Result};
