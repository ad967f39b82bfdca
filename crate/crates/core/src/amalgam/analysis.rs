use serde::Serialize;

use super::{AmalgamContext, AmalgamWord, Letter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionStatus {
    CyclicallyReduced,
    /// Weakly cyclically reduced but not cyclically reduced.
    WeaklyOnly,
    Neither,
}

/// `word = left·right` with `|left| + |right| - slack = |word|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub left: AmalgamWord,
    pub right: AmalgamWord,
    pub slack: u8,
}

impl AmalgamContext {
    /// Words of length at most 1 and words whose end letters lie in
    /// different factors are cyclically reduced. Otherwise the word is
    /// weakly cyclically reduced when `xₙx₁ ∉ H` for a canonical
    /// representation `x₁⋯xₙ`. With `x₁ = h·t₁` and `xₙ = tₙ`, inner
    /// `H`-twists conjugate `xₙx₁` by an element of `H`, so the test does
    /// not depend on the representation.
    pub fn reduction_status(&self, w: &AmalgamWord) -> ReductionStatus {
        let n = w.len();
        if n <= 1 {
            return ReductionStatus::CyclicallyReduced;
        }
        let first = w.letters[0];
        let last = w.letters[n - 1];
        if first.side() != last.side() {
            return ReductionStatus::CyclicallyReduced;
        }
        let side = first.side();
        let f = self.factor(side);
        let x1 = f.mul(self.h_image(side, w.h()), first.elem());
        if self.in_h(side, f.mul(last.elem(), x1)) {
            ReductionStatus::Neither
        } else {
            ReductionStatus::WeaklyOnly
        }
    }

    pub fn is_weakly_cyclically_reduced(&self, w: &AmalgamWord) -> bool {
        self.reduction_status(w) != ReductionStatus::Neither
    }

    pub fn is_cyclically_reduced(&self, w: &AmalgamWord) -> bool {
        self.reduction_status(w) == ReductionStatus::CyclicallyReduced
    }

    /// `w ≐ p·x` for some `x`, i.e. `|p| + |p⁻¹w| ≤ |w| + 1`.
    pub fn is_semi_prefix(&self, p: &AmalgamWord, w: &AmalgamWord) -> bool {
        let rest = self.mul(&self.invert(p), w);
        p.len() + rest.len() <= w.len() + 1
    }

    /// Candidate prefixes of length `k ≥ 1`: `w_{<k}·c` for every `c` in
    /// the factor of the `k`-th letter and outside `H`, where `w_{<k}` is
    /// the prefix `h·t₁⋯t_{k-1}` (for `k = 1`, the identity).
    pub fn candidate_prefixes(&self, w: &AmalgamWord, k: usize) -> Vec<AmalgamWord> {
        assert!(k >= 1 && k <= w.len(), "prefix length {k} out of range");
        let side = w.letters[k - 1].side();
        let base = if k == 1 { AmalgamWord::identity() } else { self.prefix(w, k - 1) };
        self.outside_h(side).into_iter().map(|c| self.mul(&base, &self.letter_word(side, c))).collect()
    }

    /// All factorizations `w = b·c` with `b` the identity or a candidate
    /// prefix; each has slack 0 or 1. `(e, w)` comes first and `(w, e)` is
    /// always present.
    pub fn semi_factorizations(&self, w: &AmalgamWord) -> Vec<Factorization> {
        let mut out = vec![Factorization { left: AmalgamWord::identity(), right: w.clone(), slack: 0 }];
        for k in 1..=w.len() {
            for b in self.candidate_prefixes(w, k) {
                let c = self.mul(&self.invert(&b), w);
                let slack = b.len() + c.len() - w.len();
                debug_assert!(slack <= 1);
                out.push(Factorization { left: b, right: c, slack: slack as u8 });
            }
        }
        out
    }

    /// `{h·t₁, t₂, …, tₙ}` as sorted distinct letters; empty for elements
    /// of `H`.
    pub fn support(&self, w: &AmalgamWord) -> Vec<Letter> {
        let mut s = self.canonical_letters(w);
        s.sort_unstable();
        s.dedup();
        s
    }
}
