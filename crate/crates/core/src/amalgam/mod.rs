//! Arithmetic in the free product with amalgamation `F* = L *_H G`.
//!
//! Elements are stored in the normal form `h·t₁⋯tₙ`: `h ∈ H`, and the
//! `tᵢ` alternate between the factors and are the minimal-index
//! representatives of their right cosets `Htᵢ`, never the identity. Equality
//! of elements is structural equality of normal forms.

mod analysis;
mod context;
pub(crate) mod ops;
mod spec;
mod word;

pub use analysis::{Factorization, ReductionStatus};
pub use context::AmalgamContext;
pub use spec::{AmalgamSpec, GroupRef, SpecError};
pub use word::{parse_raw, AmalgamWord, Letter, Side, Syllable};

use thiserror::Error;

use crate::fingroup::FinGroupError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmalgamError {
    #[error("bad embedding of H into {side} at ({a}, {b}): {reason}")]
    BadEmbedding { side: Side, a: usize, b: usize, reason: String },
    #[error(transparent)]
    Group(#[from] FinGroupError),
    #[error("word does not belong to this context: {0}")]
    ContextMismatch(String),
    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: &'static str },
}

#[cfg(test)]
mod tests;
