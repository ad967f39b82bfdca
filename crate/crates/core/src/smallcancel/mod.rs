//! Small cancellation over `L *_H G`: symmetrized hulls, pieces and the
//! condition `C'(λ)`, Greendlinger matches, Dehn's algorithm, and checks on
//! the quotient by the normal closure of a relator set.
//!
//! `λ` is always an exact [`Rational64`].

mod dehn;
mod pieces;
mod relators;

pub use dehn::{
    dehn_membership, greendlinger_search, is_in_gn, verify_qlg, DehnStep, DehnTrace, GreendlingerMatch, QlgReport,
    Quotient, SolverStats,
};
pub use pieces::{
    check_cprime, enumerate_pieces, CprimeVerdict, CprimeViolation, PieceMode, PieceReport, PieceWitness,
};
pub use relators::{hull, hull_closure, hull_of_set, HullMode, PrefixKey, RelatorSet, Symmetrization};

use num_rational::Rational64;
use thiserror::Error;

use crate::amalgam::{AmalgamError, AmalgamWord};

/// Seed used for every sampled check unless the caller overrides it.
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScError {
    #[error("relator {word} is not cyclically reduced of length at least 2")]
    NotCyclicallyReduced { word: AmalgamWord },
    #[error("precondition not established: {0}")]
    PreconditionUnverified(String),
    #[error("lambda must satisfy {0}")]
    InvalidLambda(String),
    #[error(transparent)]
    Amalgam(#[from] AmalgamError),
}

/// Renders a rational as `p/q` (or `p` when integral).
pub fn fmt_ratio(r: Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or an integer; the denominator must be positive.
pub fn parse_ratio(text: &str) -> Option<Rational64> {
    let text = text.trim();
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim().parse::<i64>().ok()?, q.trim().parse::<i64>().ok()?),
        None => (text.parse::<i64>().ok()?, 1),
    };
    (q > 0).then(|| Rational64::new(p, q))
}
