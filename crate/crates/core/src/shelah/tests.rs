use std::collections::BTreeSet;

use num_rational::Rational64;
use proptest::prelude::*;

use super::*;
use crate::amalgam::{AmalgamContext, AmalgamWord, Side};
use crate::fingroup::FiniteGroup;
use crate::instances::{instance_a, instance_b, params_b};
use crate::smallcancel::{hull_closure, hull_of_set, HullMode, Quotient, RelatorSet, ScError, Symmetrization};

/// `D₇ *_H Z₁₄` with `H = {e, s} = {0, 7}`: the smallest setting here
/// with `H` nontrivial and separated sequences of length 3 on both sides.
fn tiny() -> AmalgamContext {
    let l = FiniteGroup::dihedral(7).unwrap();
    let g = FiniteGroup::cyclic(14).unwrap();
    AmalgamContext::new(l, g, FiniteGroup::cyclic(2).unwrap(), vec![0, 7], vec![0, 7]).unwrap()
}

fn tiny_params(b: usize) -> ShelahParams {
    ShelahParams {
        n: 3,
        lambda: Rational64::new(6, 7),
        a_seq: vec![1, 2, 3],
        x_seq: vec![1, 2, 3],
        a: 4,
        b,
        budgets: Budgets::default(),
    }
}

#[test]
fn special_relators_of_b() {
    let ctx = instance_b();
    let r = build_special_relators(&ctx, &params_b()).unwrap();
    assert_eq!(r.len(), 51);
    for w in &r {
        assert_eq!(w.len(), 36);
        assert!(ctx.is_cyclically_reduced(w));
    }
}

#[test]
fn special_relators_reject_bad_parameters() {
    let ctx = tiny();
    let mut p = tiny_params(0);
    p.a = 7;
    assert!(matches!(build_special_relators(&ctx, &p), Err(ShelahError::Precondition(_))));
    let mut p = tiny_params(0);
    p.n = 2;
    p.a_seq.pop();
    p.x_seq.pop();
    assert!(matches!(build_special_relators(&ctx, &p), Err(ShelahError::Precondition(_))));
    let mut p = tiny_params(0);
    // r and r⁶ = r⁻¹ share a double coset up to inversion
    p.a_seq = vec![1, 2, 6];
    assert!(matches!(
        build_special_relators(&ctx, &p),
        Err(ShelahError::SeparatednessViolated { sequence: "a-sequence", i: 0, j: 2 })
    ));
    let mut p = tiny_params(0);
    p.b = 2;
    assert!(matches!(build_special_relators(&ctx, &p), Err(ShelahError::Precondition(_))));
}

#[test]
fn non_malnormal_a_is_rejected() {
    // in Z₁₂ ⊃ {0, 6} nothing is H-malnormal
    let z = FiniteGroup::cyclic(12).unwrap();
    let ctx = AmalgamContext::new(z.clone(), z, FiniteGroup::cyclic(2).unwrap(), vec![0, 6], vec![0, 6]).unwrap();
    let p = ShelahParams {
        n: 3,
        lambda: Rational64::new(6, 7),
        a_seq: vec![1, 2, 3],
        x_seq: vec![1, 2, 3],
        a: 1,
        b: 0,
        budgets: Budgets::default(),
    };
    assert!(matches!(build_special_relators(&ctx, &p), Err(ShelahError::MalnormalityViolated { .. })));
}

#[test]
fn family_sizes_match_counting() {
    // |Rᵢ| = n·|G∖H|·|conjugators| for the x-indexed families and
    // n·|conjugators| for the others; conjugators are the non-H cosets
    // times H, i.e. |factor| − |H| elements.
    for (ctx, p) in [(tiny(), tiny_params(1)), (instance_b(), params_b())] {
        let fams = explicit_hull_families(&ctx, &p).unwrap();
        let h = ctx.h_order();
        let gx = ctx.g().order() - h;
        let (cl, cg) = (ctx.l().order() - h, ctx.g().order() - h);
        let expect =
            [p.n * gx * cl, p.n * gx * cg, p.n * cg, p.n * cl, p.n * gx * cg, p.n * gx * cl, p.n * cl, p.n * cg];
        let sizes: Vec<usize> = fams.iter().map(Vec::len).collect();
        assert_eq!(sizes, expect);
    }
    let fams = explicit_hull_families(&instance_b(), &params_b()).unwrap();
    let sizes: Vec<usize> = fams.iter().map(Vec::len).collect();
    assert_eq!(sizes, [45000, 45000, 900, 900, 45000, 45000, 900, 900]);
}

#[test]
fn explicit_hull_equals_generic_hull_and_closure() {
    let ctx = tiny();
    for b in [0, 1] {
        let p = tiny_params(b);
        let r = build_special_relators(&ctx, &p).unwrap();
        let explicit = build_explicit_hull(&ctx, &p).unwrap();
        let generic = hull_of_set(&ctx, &r, HullMode::Full).unwrap();
        let closure = hull_closure(&ctx, &r, HullMode::Full).unwrap();
        assert_eq!(explicit.relators(), generic.relators());
        assert_eq!(explicit.relators(), closure.relators());
    }
}

#[test]
fn twist_changes_the_x_families_only() {
    let ctx = tiny();
    let f0 = explicit_hull_families(&ctx, &tiny_params(0)).unwrap();
    let f1 = explicit_hull_families(&ctx, &tiny_params(1)).unwrap();
    for k in [0, 1, 4, 5] {
        assert_eq!(f0[k], f1[k]);
    }
    for k in [2, 3, 6, 7] {
        assert_ne!(f0[k], f1[k]);
    }
    assert_eq!(tiny_params(1).x_tilde(&ctx)[0], ctx.g().mul(7, 1));
}

#[test]
fn explicit_hull_is_full_status() {
    let ctx = tiny();
    let h = build_explicit_hull(&ctx, &tiny_params(0)).unwrap();
    assert_eq!(h.status(), Symmetrization::Full);
}

#[test]
fn cprime_lemma_on_tiny() {
    // n = 3 needs λ > 5/6
    let ctx = tiny();
    let rep = verify_cprime_lemma(&ctx, &tiny_params(1)).unwrap();
    assert!(rep.passed(), "{rep:?}");
    assert!(rep.max_piece_length.unwrap() <= 5);
}

#[test]
fn cprime_lemma_needs_strict_lambda() {
    let ctx = tiny();
    let mut p = tiny_params(0);
    p.lambda = Rational64::new(5, 6);
    assert!(matches!(verify_cprime_lemma(&ctx, &p), Err(ShelahError::Precondition(_))));
}

#[test]
fn exponent_sequences() {
    let e = ExponentSequence::consecutive(51, 18).unwrap();
    assert_eq!(e.elements().len(), 18);
    // 1 + ⋯ + 18 = 171 = 3·51 + 18
    assert_eq!(e.sum_mod(), 18);
    assert!(!e.trivial_at_identity());
    // 1 + ⋯ + 17 = 153 = 3·51
    assert!(ExponentSequence::consecutive(51, 17).unwrap().trivial_at_identity());
    assert!(matches!(ExponentSequence::new(51, vec![1, 50]), Err(ShelahError::SeparatednessViolated { .. })));
    assert!(matches!(ExponentSequence::new(51, vec![3, 54]), Err(ShelahError::SeparatednessViolated { .. })));
    assert!(ExponentSequence::new(51, vec![1, 51]).is_err());
    // Z₅ has only two ± classes outside e
    assert!(ExponentSequence::consecutive(5, 3).is_err());
}

#[test]
fn exponent_sequence_agrees_with_subgroup_check() {
    let ctx = instance_b();
    for seq in [vec![1, 2, 3], vec![1, 50], vec![5, 7, 44], vec![17, 34]] {
        let fin = ctx.embedding(Side::L).is_pm_separated(&seq).unwrap().verdict;
        assert_eq!(ExponentSequence::new(51, seq).is_ok(), fin);
    }
}

#[test]
fn half_separation_of_special_relators() {
    let ctx = instance_b();
    let r = build_special_relators(&ctx, &params_b()).unwrap();
    assert!(is_half_hminus_separated(&ctx, &r).verdict);
}

#[test]
fn half_separation_rejects_odd_length() {
    let ctx = instance_a();
    let w = ctx.parse_word("L:1 G:1 L:1").unwrap();
    let v = is_half_hminus_separated(&ctx, &[w]);
    assert!(!v.verdict);
    assert_eq!(v.witness, Some((0, 3, None)));
}

#[test]
fn half_separation_on_a() {
    let ctx = instance_a();
    // L:1 = a has a⁻¹ = a³ ∈ H a H; G-positions hold b and b⁵ with b⁵ = b⁻¹
    let both = ctx.parse_word("L:1 G:1 L:1 G:5").unwrap();
    assert!(!is_half_hminus_separated(&ctx, &[both]).verdict);
    // the G-positions b, b are fine: b⁻¹ = b⁵ ∉ {b, b⁴}
    let one = ctx.parse_word("L:1 G:1 L:1 G:1").unwrap();
    assert!(is_half_hminus_separated(&ctx, &[one]).verdict);
}

/// `x⁻¹ ∈ H y H` by multiplying out the double coset.
fn inverse_in_double_coset(ctx: &AmalgamContext, side: Side, x: usize, y: usize) -> bool {
    let f = ctx.factor(side);
    let hs: Vec<usize> = ctx.h_group().elements().map(|k| ctx.h_image(side, k)).collect();
    hs.iter().any(|&h1| hs.iter().any(|&h2| f.mul(f.mul(h1, y), h2) == f.inv(x)))
}

fn half_separated_oracle(ctx: &AmalgamContext, w: &AmalgamWord) -> bool {
    let n = w.len();
    if n == 0 || n % 2 == 1 {
        return false;
    }
    let x = w.letters();
    (0..2).any(|eps| {
        let idx: Vec<usize> = (eps..n).step_by(2).collect();
        idx.iter().all(|&i| {
            idx.iter().all(|&j| i == j || !inverse_in_double_coset(ctx, x[i].side(), x[i].elem(), x[j].elem()))
        })
    })
}

#[test]
fn malnormality_of_free_factors() {
    let ctx = free_product_embed(FiniteGroup::cyclic(2).unwrap(), FiniteGroup::cyclic(3).unwrap());
    assert_eq!(ctx.h_order(), 1);
    let ones = words_up_to(&ctx, 1).into_iter().filter(|w| w.len() == 1).count();
    assert_eq!(ones, 3);
    assert_eq!(malnormality_counterexample(&ctx, Side::G, 3), None);
    assert_eq!(malnormality_counterexample(&ctx, Side::L, 3), None);
}

#[test]
fn malnormality_fails_over_nontrivial_h() {
    // a·b³·a⁻¹ = a·a²·a⁻¹ = a² = b³
    let ctx = instance_a();
    let (x, y) = malnormality_counterexample(&ctx, Side::G, 3).unwrap();
    let c = ctx.conjugate(&x, &ctx.letter_word(Side::G, y));
    assert!(c.len() <= 1);
}

#[test]
fn words_up_to_counts() {
    // free product Z₂ * Z₃: 1, then 1 + 2, then alternating extensions
    let ctx = free_product_embed(FiniteGroup::cyclic(2).unwrap(), FiniteGroup::cyclic(3).unwrap());
    let w = words_up_to(&ctx, 3);
    let by_len: Vec<usize> = (0..=3).map(|k| w.iter().filter(|x| x.len() == k).count()).collect();
    assert_eq!(by_len, [1, 3, 4, 6]);
    let set: BTreeSet<_> = w.iter().collect();
    assert_eq!(set.len(), w.len());
}

#[test]
fn amalgamation_requires_malnormal_h() {
    let ctx = instance_a();
    let p = tiny_params(0);
    let err = verify_amalgamation(&ctx, &p, CheckMode::Sampled).unwrap_err();
    assert!(matches!(err, ShelahError::HypothesisFailed { ref hypothesis, .. } if hypothesis.contains("malnormal")));
}

#[test]
fn amalgamation_requires_small_lambda() {
    let ctx = tiny();
    let err = verify_amalgamation(&ctx, &tiny_params(0), CheckMode::Sampled).unwrap_err();
    assert!(matches!(err, ShelahError::HypothesisFailed { ref hypothesis, .. } if hypothesis == "λ ≤ 1/6"));
}

#[test]
fn amalgamation2_rejects_unseparated_sequence() {
    let ctx = instance_b();
    let mut a: Vec<usize> = (1..=18).collect();
    a[17] = 50;
    let err =
        verify_amalgamation2(&ctx, &a, Rational64::new(1, 7), &Budgets::default(), CheckMode::Sampled).unwrap_err();
    assert!(matches!(err, ShelahError::HypothesisFailed { .. }));
}

#[test]
fn amalgamation2_rejects_short_factor() {
    // Z₁₁ has only five ± classes outside e
    let z = FiniteGroup::cyclic(11).unwrap();
    let ctx = free_product_embed(z.clone(), z);
    let a: Vec<usize> = (1..=18).map(|k| k % 11).collect();
    let err =
        verify_amalgamation2(&ctx, &a, Rational64::new(1, 7), &Budgets::default(), CheckMode::Sampled).unwrap_err();
    assert!(matches!(err, ShelahError::HypothesisFailed { .. }));
}

#[test]
fn uncertified_sets_are_refused() {
    let ctx = tiny();
    let r = build_special_relators(&ctx, &tiny_params(0)).unwrap();
    let hull = hull_of_set(&ctx, &r, HullMode::Full).unwrap();
    let err: ShelahError = Quotient::new(&ctx, &hull, Rational64::new(1, 7)).unwrap_err().into();
    assert!(matches!(err, ShelahError::SmallCancellation(ScError::PreconditionUnverified(_))));
}

#[test]
fn malnormal_preservation_rejects_lambda_one_sixth() {
    let ctx = instance_b();
    let r = build_special_relators(&ctx, &params_b()).unwrap();
    let err = verify_malnormal_preservation(&ctx, &r, Rational64::new(1, 6), &Budgets::default()).unwrap_err();
    match err {
        ShelahError::HypothesisFailed { hypothesis, witness } => {
            assert!(hypothesis.contains("(1−6λ)|r| > 4"));
            assert_eq!(witness, "(1−6·1/6)·36 = 0 ≤ 4");
        }
        e => panic!("{e}"),
    }
}

#[test]
fn malnormal_preservation_rejects_unseparated_sets() {
    let ctx = instance_a();
    let w = ctx.parse_word("L:1 G:1 L:1 G:5").unwrap();
    let err = verify_malnormal_preservation(&ctx, &[w], Rational64::new(1, 7), &Budgets::default()).unwrap_err();
    assert!(matches!(err, ShelahError::HypothesisFailed { ref hypothesis, .. } if hypothesis.contains("half")));
}

#[test]
fn report_json_shape() {
    let ctx = tiny();
    let rep = verify_cprime_lemma(&ctx, &tiny_params(0)).unwrap();
    let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
    assert_eq!(v["schema"], REPORT_SCHEMA);
    assert_eq!(v["kind"], "cprime_lemma");
    assert_eq!(v["lambda"], "6/7");
    let ids: Vec<&str> = v["conclusions"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["hull", "pieces", "cprime"]);
}

#[test]
fn params_serialize_with_text_lambda() {
    let v = serde_json::to_value(params_b()).unwrap();
    assert_eq!(v["lambda"], "1/7");
    assert_eq!(v["budgets"]["seed"], 0x5EED);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn half_separation_matches_oracle(raw in prop::collection::vec((0usize..4, 0usize..6), 1..4), h in 0usize..2) {
        let ctx = instance_a();
        let mut text = format!("H:{h}");
        for (x, y) in &raw {
            text.push_str(&format!(" L:{} G:{}", x % 2 * 2 + 1, [1, 2, 4, 5][y % 4]));
        }
        let w = ctx.parse_word(&text).unwrap();
        prop_assert_eq!(is_half_hminus_separated(&ctx, std::slice::from_ref(&w)).verdict, half_separated_oracle(&ctx, &w));
    }

    #[test]
    fn special_hull_is_closed_under_conjugation(b in 0usize..2, pick in 0usize..10_000) {
        let ctx = tiny();
        let h = build_explicit_hull(&ctx, &tiny_params(b)).unwrap();
        let cyc: Vec<usize> = (0..h.len()).filter(|&i| h.is_cyclic(i)).collect();
        let r = h.get(cyc[pick % cyc.len()]).clone();
        // every hull element's own hull lies inside
        let own: RelatorSet = crate::smallcancel::hull(&ctx, &r, HullMode::Full).unwrap();
        for w in own.relators() {
            prop_assert!(h.contains(w));
        }
    }
}
