use rayon::prelude::*;
use serde::Serialize;

use crate::amalgam::{AmalgamContext, AmalgamWord, Side, Syllable};
use crate::fingroup::{FiniteGroup, SubgroupEmbedding};
use crate::smallcancel::{RelatorSet, Symmetrization};

use super::{ShelahError, ShelahParams};

/// `{a₀xa₁x⋯a_{n−1}x : x ∈ G∖H} ∪ {b⁻¹x₀ax₁a⋯x_{n−1}a}`, in that order.
pub fn build_special_relators(ctx: &AmalgamContext, params: &ShelahParams) -> Result<Vec<AmalgamWord>, ShelahError> {
    params.validate_structure(ctx)?;
    let mut out = Vec::new();
    for x in ctx.outside_h(Side::G) {
        let raw: Vec<Syllable> = params.a_seq.iter().flat_map(|&a| [Syllable::L(a), Syllable::G(x)]).collect();
        out.push(ctx.normalize(&raw)?);
    }
    let mut raw = vec![Syllable::H(ctx.h_group().inv(params.b))];
    raw.extend(params.x_seq.iter().flat_map(|&x| [Syllable::G(x), Syllable::L(params.a)]));
    out.push(ctx.normalize(&raw)?);
    Ok(out)
}

/// `c·y₀⋯y_{n−1}·c⁻¹` over the conjugators `c` of `side` with `c·y₀ ∉ H`.
fn conjugates(ctx: &AmalgamContext, side: Side, body: &[Syllable], out: &mut Vec<AmalgamWord>) {
    let f = ctx.factor(side);
    let first = match body[0] {
        Syllable::L(x) | Syllable::G(x) => x,
        Syllable::H(_) => unreachable!("bodies start with a letter"),
    };
    let mut raw = Vec::with_capacity(body.len() + 2);
    for c in f.elements() {
        if ctx.in_h(side, f.mul(c, first)) {
            continue;
        }
        raw.clear();
        raw.push(Syllable::letter(side, c));
        raw.extend_from_slice(body);
        raw.push(Syllable::letter(side, f.inv(c)));
        out.push(ctx.normalize(&raw).expect("parameters validated"));
    }
}

/// The eight families `R₁ … R₈` enumerated from their formulas, with the
/// `x̃`-sequence in `R₃, R₄, R₇, R₈`. Families are sorted and deduplicated.
pub fn explicit_hull_families(
    ctx: &AmalgamContext,
    params: &ShelahParams,
) -> Result<[Vec<AmalgamWord>; 8], ShelahError> {
    params.validate_structure(ctx)?;
    let n = params.n;
    let (l, g) = (ctx.l(), ctx.g());
    let a_seq = &params.a_seq;
    let xt = params.x_tilde(ctx);
    let a = params.a;
    let ai = l.inv(a);
    let at = |i: usize, k: usize| a_seq[(i + k) % n];
    let at_back = |i: usize, k: usize| l.inv(a_seq[(i + n - k % n) % n]);
    let xs = ctx.outside_h(Side::G);
    let fam = |k: usize| -> Vec<AmalgamWord> {
        let mut out = Vec::new();
        for i in 0..n {
            match k {
                // l a_i x a_{i⊕1} x ⋯ a_{i⊕(n−1)} x l⁻¹
                0 => {
                    for &x in &xs {
                        let body: Vec<Syllable> =
                            (0..n).flat_map(|k| [Syllable::L(at(i, k)), Syllable::G(x)]).collect();
                        conjugates(ctx, Side::L, &body, &mut out);
                    }
                }
                // g x a_i x a_{i⊕1} ⋯ x a_{i⊕(n−1)} g⁻¹
                1 => {
                    for &x in &xs {
                        let body: Vec<Syllable> =
                            (0..n).flat_map(|k| [Syllable::G(x), Syllable::L(at(i, k))]).collect();
                        conjugates(ctx, Side::G, &body, &mut out);
                    }
                }
                // g x̃_i a x̃_{i⊕1} a ⋯ x̃_{i⊕(n−1)} a g⁻¹
                2 => {
                    let body: Vec<Syllable> =
                        (0..n).flat_map(|k| [Syllable::G(xt[(i + k) % n]), Syllable::L(a)]).collect();
                    conjugates(ctx, Side::G, &body, &mut out);
                }
                // l a x̃_i a x̃_{i⊕1} ⋯ a x̃_{i⊕(n−1)} l⁻¹
                3 => {
                    let body: Vec<Syllable> =
                        (0..n).flat_map(|k| [Syllable::L(a), Syllable::G(xt[(i + k) % n])]).collect();
                    conjugates(ctx, Side::L, &body, &mut out);
                }
                // g x a_i⁻¹ x a_{i⊖1}⁻¹ ⋯ x a_{i⊖(n−1)}⁻¹ g⁻¹
                4 => {
                    for &x in &xs {
                        let body: Vec<Syllable> =
                            (0..n).flat_map(|k| [Syllable::G(x), Syllable::L(at_back(i, k))]).collect();
                        conjugates(ctx, Side::G, &body, &mut out);
                    }
                }
                // l a_i⁻¹ x a_{i⊖1}⁻¹ x ⋯ a_{i⊖(n−1)}⁻¹ x l⁻¹
                5 => {
                    for &x in &xs {
                        let body: Vec<Syllable> =
                            (0..n).flat_map(|k| [Syllable::L(at_back(i, k)), Syllable::G(x)]).collect();
                        conjugates(ctx, Side::L, &body, &mut out);
                    }
                }
                // l a⁻¹ x̃_i⁻¹ a⁻¹ x̃_{i⊖1}⁻¹ ⋯ a⁻¹ x̃_{i⊖(n−1)}⁻¹ l⁻¹
                6 => {
                    let body: Vec<Syllable> =
                        (0..n).flat_map(|k| [Syllable::L(ai), Syllable::G(g.inv(xt[(i + n - k) % n]))]).collect();
                    conjugates(ctx, Side::L, &body, &mut out);
                }
                // g x̃_i⁻¹ a⁻¹ x̃_{i⊖1}⁻¹ a⁻¹ ⋯ x̃_{i⊖(n−1)}⁻¹ a⁻¹ g⁻¹
                _ => {
                    let body: Vec<Syllable> =
                        (0..n).flat_map(|k| [Syllable::G(g.inv(xt[(i + n - k) % n])), Syllable::L(ai)]).collect();
                    conjugates(ctx, Side::G, &body, &mut out);
                }
            }
        }
        out.par_sort_unstable();
        out.dedup();
        out
    };
    let v: Vec<Vec<AmalgamWord>> = (0..8).into_par_iter().map(fam).collect();
    Ok(v.try_into().expect("eight families"))
}

/// Union of `R₁ … R₈` as a symmetrized relator set.
pub fn build_explicit_hull(ctx: &AmalgamContext, params: &ShelahParams) -> Result<RelatorSet, ShelahError> {
    let fams = explicit_hull_families(ctx, params)?;
    let all: Vec<AmalgamWord> = fams.into_iter().flatten().collect();
    Ok(RelatorSet::new(ctx, all, Symmetrization::Full))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfSeparation {
    pub verdict: bool,
    /// `(relator index, i, j)`: positions `i ≠ j` of the same parity with
    /// `xᵢ⁻¹ ∈ H xⱼ H`, for the parity tried last; `j` is `None` when the
    /// relator has odd or zero length.
    pub witness: Option<(usize, usize, Option<usize>)>,
}

/// Every relator has positive even length and, for `ε = 0` or `ε = 1`,
/// the letters at positions `ε, ε+2, …` satisfy `xᵢ⁻¹ ∉ H xⱼ H` for
/// `i ≠ j`. Double cosets do not depend on the canonical representation.
pub fn is_half_hminus_separated(ctx: &AmalgamContext, rels: &[AmalgamWord]) -> HalfSeparation {
    for (ri, r) in rels.iter().enumerate() {
        let n = r.len();
        if n == 0 || n % 2 == 1 {
            return HalfSeparation { verdict: false, witness: Some((ri, n, None)) };
        }
        let x = ctx.canonical_letters(r);
        let mut last = None;
        let ok = (0..2).any(|eps| {
            let side = x[eps].side();
            let emb = ctx.embedding(side);
            let f = ctx.factor(side);
            for i in (eps..n).step_by(2) {
                for j in (eps..n).step_by(2) {
                    if i != j && emb.double_coset_id(f.inv(x[i].elem())) == emb.double_coset_id(x[j].elem()) {
                        last = Some((ri, i, Some(j)));
                        return false;
                    }
                }
            }
            true
        });
        if !ok {
            return HalfSeparation { verdict: false, witness: last };
        }
    }
    HalfSeparation { verdict: true, witness: None }
}

/// `L * G` with trivial amalgamated subgroup.
pub fn free_product_embed(l: FiniteGroup, g: FiniteGroup) -> AmalgamContext {
    let el = SubgroupEmbedding::trivial(&l);
    let eg = SubgroupEmbedding::trivial(&g);
    AmalgamContext::from_embeddings(el, eg).expect("trivial subgroups agree")
}

/// All elements of length at most `max_len`, shortest first.
pub fn words_up_to(ctx: &AmalgamContext, max_len: usize) -> Vec<AmalgamWord> {
    let mut out: Vec<AmalgamWord> = ctx.h_group().elements().map(|k| ctx.h_word(k)).collect();
    let mut layer: Vec<AmalgamWord> = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for side in Side::BOTH {
                if w.last_side() == Some(side) {
                    continue;
                }
                for t in ctx.transversal(side) {
                    if !ctx.in_h(side, t) {
                        next.push(ctx.mul(w, &ctx.letter_word(side, t)));
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// A conjugator `x ∉ H` of length `1 ≤ |x| ≤ max_len` and `y ∈ side∖{e}`
/// with `xyx⁻¹` in the factor `side`, if one exists.
pub fn malnormality_counterexample(ctx: &AmalgamContext, side: Side, max_len: usize) -> Option<(AmalgamWord, usize)> {
    let f = ctx.factor(side);
    let in_factor = |w: &AmalgamWord| w.is_empty() || (w.len() == 1 && w.first_side() == Some(side));
    let xs: Vec<AmalgamWord> = words_up_to(ctx, max_len).into_iter().filter(|x| !in_factor(x)).collect();
    xs.par_iter().find_map_first(|x| {
        f.elements().filter(|&y| y != f.identity()).find_map(|y| {
            let c = ctx.conjugate(x, &ctx.letter_word(side, y));
            in_factor(&c).then(|| (x.clone(), y))
        })
    })
}
