//! The special relator families over `L *_H G` and executable checks of
//! what the small-cancellation lemmas promise for them: the piece bound,
//! the two amalgamation lemmas, malnormality of `G` in the quotient, and
//! the trivial-amalgam embedding.

mod families;
mod verify;

pub use families::{
    build_explicit_hull, build_special_relators, explicit_hull_families, free_product_embed, is_half_hminus_separated,
    malnormality_counterexample, words_up_to, HalfSeparation,
};
pub use verify::{
    certified_hull, embedding_stage, verify_amalgamation, verify_amalgamation2, verify_cprime_lemma,
    verify_malnormal_preservation, CheckMode, Conclusion, Presentation, VerdictMode, VerificationReport, REPORT_SCHEMA,
};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amalgam::{AmalgamContext, AmalgamError, Side};
use crate::fingroup::FinGroupError;
use crate::smallcancel::{fmt_ratio, parse_ratio, ScError, DEFAULT_SEED};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShelahError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("{sequence} is not H±-separated: positions {i} and {j}")]
    SeparatednessViolated { sequence: &'static str, i: usize, j: usize },
    #[error("{what} is not H-malnormal")]
    MalnormalityViolated { what: String },
    #[error("hypothesis failed: {hypothesis} ({witness})")]
    HypothesisFailed { hypothesis: String, witness: String },
    #[error(transparent)]
    SmallCancellation(#[from] ScError),
    #[error(transparent)]
    Amalgam(#[from] AmalgamError),
    #[error(transparent)]
    Group(#[from] FinGroupError),
}

impl ShelahError {
    /// Parameter problems restated as failed lemma hypotheses.
    pub(crate) fn into_hypothesis(self) -> ShelahError {
        match self {
            ShelahError::Precondition(p) => ShelahError::HypothesisFailed { hypothesis: p, witness: String::new() },
            ShelahError::SeparatednessViolated { sequence, i, j } => ShelahError::HypothesisFailed {
                hypothesis: format!("{sequence} is H±-separated"),
                witness: format!("positions {i} and {j}"),
            },
            ShelahError::MalnormalityViolated { what } => {
                ShelahError::HypothesisFailed { hypothesis: "H-malnormality".into(), witness: what }
            }
            ShelahError::Group(FinGroupError::ElementInH(i)) => ShelahError::HypothesisFailed {
                hypothesis: "sequence lies outside H".into(),
                witness: format!("position {i}"),
            },
            other => other,
        }
    }
}

/// Sample sizes and length bounds for the bounded checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budgets {
    pub samples: usize,
    /// Longest conjugator tried for malnormality of `G` in the quotient.
    pub conjugator_len: usize,
    /// Largest `n` in the products `l g c₁ ⋯ l g cₙ`.
    pub product_n: usize,
    /// Longest `x` sampled by the malnormality-preservation check.
    pub malnormal_len: usize,
    pub seed: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { samples: 100, conjugator_len: 2, product_n: 3, malnormal_len: 12, seed: DEFAULT_SEED }
    }
}

/// Parameters of the special relators `a₀xa₁x⋯a_{n−1}x` (`x ∈ G∖H`) and
/// `b⁻¹x₀ax₁a⋯x_{n−1}a`. Elements are indices in `L`, `G` and `H`; `λ` is
/// written `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShelahParams {
    pub n: usize,
    #[serde(serialize_with = "ser_ratio", deserialize_with = "de_ratio")]
    pub lambda: Rational64,
    pub a_seq: Vec<usize>,
    pub x_seq: Vec<usize>,
    pub a: usize,
    pub b: usize,
    #[serde(default)]
    pub budgets: Budgets,
}

pub(crate) fn ser_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_ratio(*r))
}

fn de_ratio<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
    let text = String::deserialize(d)?;
    parse_ratio(&text).ok_or_else(|| serde::de::Error::custom(format!("`{text}` is not a rational p/q with q > 0")))
}

pub(crate) fn check_sequence_pm(
    ctx: &AmalgamContext,
    side: Side,
    seq: &[usize],
    name: &'static str,
) -> Result<(), ShelahError> {
    let rep = ctx.embedding(side).is_pm_separated(seq)?;
    if let Some((i, j)) = rep.witness {
        return Err(ShelahError::SeparatednessViolated { sequence: name, i, j });
    }
    Ok(())
}

impl ShelahParams {
    /// `x̃₀ = b⁻¹x₀`, `x̃ₖ = xₖ` otherwise.
    pub fn x_tilde(&self, ctx: &AmalgamContext) -> Vec<usize> {
        let g = ctx.g();
        let mut xs = self.x_seq.clone();
        if let Some(x0) = xs.first_mut() {
            *x0 = g.mul(g.inv(ctx.h_image(Side::G, self.b)), *x0);
        }
        xs
    }

    /// The structural hypotheses: `n ≥ 3`, both sequences of length `n`
    /// and `H±`-separated, `aᵢ` and `a` outside `H` and `H`-malnormal in
    /// `L`, `b ∈ H`.
    pub fn validate_structure(&self, ctx: &AmalgamContext) -> Result<(), ShelahError> {
        if self.n < 3 {
            return Err(ShelahError::Precondition(format!("n ≥ 3, got {}", self.n)));
        }
        if self.a_seq.len() != self.n || self.x_seq.len() != self.n {
            return Err(ShelahError::Precondition(format!(
                "sequences of length n = {}, got {} and {}",
                self.n,
                self.a_seq.len(),
                self.x_seq.len()
            )));
        }
        if self.b >= ctx.h_order() {
            return Err(ShelahError::Precondition(format!("b = {} is not an element of H", self.b)));
        }
        ctx.l().check_element(self.a)?;
        if ctx.in_h(Side::L, self.a) {
            return Err(ShelahError::Precondition("a ∈ L∖H".into()));
        }
        check_sequence_pm(ctx, Side::L, &self.a_seq, "a-sequence")?;
        check_sequence_pm(ctx, Side::G, &self.x_seq, "x-sequence")?;
        let emb = ctx.embedding(Side::L);
        if let Some(i) = emb.first_non_malnormal(&self.a_seq) {
            return Err(ShelahError::MalnormalityViolated { what: format!("a-sequence position {i}") });
        }
        if !emb.is_element_malnormal(self.a) {
            return Err(ShelahError::MalnormalityViolated { what: "a".into() });
        }
        Ok(())
    }

    /// Structure plus `λ > 5/(2n)`.
    pub fn validate(&self, ctx: &AmalgamContext) -> Result<(), ShelahError> {
        self.validate_structure(ctx)?;
        let bound = Rational64::new(5, 2 * self.n as i64);
        if self.lambda <= bound {
            return Err(ShelahError::Precondition(format!(
                "λ > 5/(2n) = {}, got {}",
                fmt_ratio(bound),
                fmt_ratio(self.lambda)
            )));
        }
        Ok(())
    }
}

/// Exponents `e₁…eₙ` of a generator of `Z_m`, valid when `eᵢ ≢ 0` and
/// `eᵢ ± eⱼ ≢ 0 (mod m)` for `i ≠ j`, i.e. the powers are `{e}±`-separated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentSequence {
    order: usize,
    exponents: Vec<usize>,
}

impl ExponentSequence {
    pub fn new(order: usize, exponents: Vec<usize>) -> Result<ExponentSequence, ShelahError> {
        if order == 0 {
            return Err(ShelahError::Precondition("order must be positive".into()));
        }
        let red: Vec<usize> = exponents.iter().map(|e| e % order).collect();
        if let Some(i) = red.iter().position(|&e| e == 0) {
            return Err(ShelahError::Group(FinGroupError::ElementInH(i)));
        }
        for i in 0..red.len() {
            for j in 0..red.len() {
                if i != j && (red[i] == red[j] || (red[i] + red[j]).is_multiple_of(order)) {
                    return Err(ShelahError::SeparatednessViolated { sequence: "exponent sequence", i, j });
                }
            }
        }
        Ok(ExponentSequence { order, exponents: red })
    }

    /// `1, 2, …, n` modulo `order`.
    pub fn consecutive(order: usize, n: usize) -> Result<ExponentSequence, ShelahError> {
        Self::new(order, (1..=n).collect())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The powers as elements of `Z_m` (element `k` is the `k`-th power).
    pub fn elements(&self) -> &[usize] {
        &self.exponents
    }

    pub fn sum_mod(&self) -> usize {
        self.exponents.iter().sum::<usize>() % self.order
    }

    /// `λ^{e₁}gλ^{e₂}g⋯λ^{eₙ}g = e` at `g = e` holds iff `m | Σeᵢ`.
    pub fn trivial_at_identity(&self) -> bool {
        self.sum_mod() == 0
    }
}

#[cfg(test)]
mod tests;
