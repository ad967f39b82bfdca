use proptest::prelude::*;

use super::*;
use crate::instances::{instance_a, instance_c_small};

/// Independent normal form for Instance A. `z = a² = b³` is central, so
/// pull every `z` out, merge neighbouring syllables of the same factor,
/// and repeat until nothing changes.
fn oracle_a(raw: &[Syllable]) -> (usize, Vec<(Side, usize)>) {
    let mut z = 0usize;
    let mut syl: Vec<(Side, usize)> = Vec::new();
    for s in raw {
        match *s {
            Syllable::L(x) => syl.push((Side::L, x)),
            Syllable::G(x) => syl.push((Side::G, x)),
            Syllable::H(k) => z += k,
        }
    }
    loop {
        let mut changed = false;
        for s in syl.iter_mut() {
            let (modulus, period) = if s.0 == Side::L { (4, 2) } else { (6, 3) };
            let e = s.1 % modulus;
            if e >= period {
                z += 1;
                changed = true;
            }
            s.1 = e % period;
        }
        let before = syl.len();
        syl.retain(|s| s.1 != 0);
        changed |= syl.len() != before;
        let mut merged: Vec<(Side, usize)> = Vec::new();
        for s in syl.drain(..) {
            match merged.last_mut() {
                Some(last) if last.0 == s.0 => {
                    last.1 += s.1;
                    changed = true;
                }
                _ => merged.push(s),
            }
        }
        syl = merged;
        if !changed {
            return (z % 2, syl);
        }
    }
}

fn as_pairs(w: &AmalgamWord) -> (usize, Vec<(Side, usize)>) {
    (w.h(), w.letters().iter().map(|l| (l.side(), l.elem())).collect())
}

fn raw_a() -> impl Strategy<Value = Vec<Syllable>> {
    proptest::collection::vec(
        prop_oneof![
            (0usize..4).prop_map(Syllable::L),
            (0usize..6).prop_map(Syllable::G),
            (0usize..2).prop_map(Syllable::H),
        ],
        0..12,
    )
}

fn raw_c() -> impl Strategy<Value = Vec<Syllable>> {
    proptest::collection::vec(
        prop_oneof![
            (0usize..14).prop_map(Syllable::L),
            (0usize..4).prop_map(Syllable::G),
            (0usize..2).prop_map(Syllable::H),
        ],
        0..12,
    )
}

fn w(ctx: &AmalgamContext, text: &str) -> AmalgamWord {
    ctx.parse_word(text).unwrap()
}

#[test]
fn empty_word_is_identity() {
    let ctx = instance_a();
    let e = ctx.normalize(&[]).unwrap();
    assert!(e.is_identity());
    assert_eq!(e.len(), 0);
}

#[test]
fn instance_a_normal_forms() {
    let ctx = instance_a();
    // a·b³
    let raw = parse_raw("L:1 G:3").unwrap();
    let nf = ctx.normalize(&raw).unwrap();
    assert_eq!(as_pairs(&nf), oracle_a(&raw));
    assert_eq!((nf.h(), nf.to_string()), (1, "H:1 L:1".to_string()));
    assert_eq!(ctx.pretty(&nf), "(a^2; a)");
    // a·b·a²·b
    let raw = parse_raw("L:1 G:1 L:2 G:1").unwrap();
    let nf = ctx.normalize(&raw).unwrap();
    assert_eq!(as_pairs(&nf), oracle_a(&raw));
    assert_eq!(ctx.pretty(&nf), "(a^2; a, b^2)");
    assert_eq!(nf.len(), 2);
}

#[test]
fn instance_a_products() {
    let ctx = instance_a();
    assert_eq!(ctx.mul(&w(&ctx, "L:1"), &w(&ctx, "G:1")), w(&ctx, "L:1 G:1"));
    let ab = w(&ctx, "L:1 G:1");
    let tail = w(&ctx, "G:5 L:3");
    let raw = parse_raw("L:1 G:1 G:5 L:3").unwrap();
    assert_eq!(oracle_a(&raw), (0, vec![]));
    assert!(ctx.mul(&ab, &tail).is_identity());
    assert!(ctx.mul(&ab, &ctx.invert(&ab)).is_identity());
}

#[test]
fn out_of_range_syllable_is_an_error() {
    let ctx = instance_a();
    assert!(matches!(ctx.parse_word("L:4"), Err(AmalgamError::Group(_))));
    assert!(matches!(ctx.parse_word("H:2"), Err(AmalgamError::Group(_))));
    assert!(matches!(
        ctx.checked_mul(&"L:2".parse().unwrap(), &AmalgamWord::identity()),
        Err(AmalgamError::ContextMismatch(_))
    ));
}

#[test]
fn reduction_status_examples() {
    let ctx = instance_a();
    assert_eq!(ctx.reduction_status(&w(&ctx, "L:1 G:1")), ReductionStatus::CyclicallyReduced);
    assert_eq!(ctx.reduction_status(&w(&ctx, "L:1 G:1 L:1")), ReductionStatus::Neither);
    assert_eq!(ctx.reduction_status(&w(&ctx, "G:1 L:1 G:1")), ReductionStatus::WeaklyOnly);
    assert_eq!(ctx.reduction_status(&w(&ctx, "G:1")), ReductionStatus::CyclicallyReduced);
    assert_eq!(ctx.reduction_status(&AmalgamWord::identity()), ReductionStatus::CyclicallyReduced);
}

#[test]
fn reduction_status_quantifies_over_representations() {
    // In D7 *_{s} Z4, (r; s-side) twists matter: g·k·g for k ∈ H.
    let ctx = instance_c_small();
    for t in ctx.outside_h(Side::G) {
        for u in ctx.outside_h(Side::G) {
            let word = ctx.normalize(&[Syllable::G(t), Syllable::L(1), Syllable::G(u)]).unwrap();
            let g = ctx.g();
            let canon = ctx.canonical_letters(&word);
            let (x1, xn) = (canon[0].elem(), canon[2].elem());
            // Oracle: enumerate explicit representations x1·k, k⁻¹·r·k', k'⁻¹·xn.
            let any_escape =
                ctx.embedding(Side::G).image().iter().any(|&k| !ctx.in_h(Side::G, g.mul(g.mul(x1, k), xn)));
            let expect = if any_escape { ReductionStatus::WeaklyOnly } else { ReductionStatus::Neither };
            assert_eq!(ctx.reduction_status(&word), expect);
        }
    }
}

/// All elements of length at most `max_len`, as normal forms.
fn all_words(ctx: &AmalgamContext, max_len: usize) -> Vec<AmalgamWord> {
    let mut out: Vec<AmalgamWord> = (0..ctx.h_order()).map(|k| ctx.h_word(k)).collect();
    let mut layer = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for base in &layer {
            for side in Side::BOTH {
                if base.last_side() == Some(side) {
                    continue;
                }
                for t in ctx.transversal(side).into_iter().skip(1) {
                    let mut letters = base.letters().to_vec();
                    letters.push(Letter::new(side, t));
                    next.push(AmalgamWord::from_parts(base.h(), letters));
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[test]
fn semi_factorization_count_on_instance_a() {
    let ctx = instance_a();
    let word = w(&ctx, "L:1 G:1");
    let facts = ctx.semi_factorizations(&word);
    // Oracle: every element b with |b| + |b⁻¹w| ≤ |w| + 1, found by brute
    // force over all elements of length ≤ 3. Besides the candidate family
    // this also contains the nontrivial elements of H (length 0).
    let brute: Vec<AmalgamWord> = all_words(&ctx, 3).into_iter().filter(|b| ctx.is_semi_prefix(b, &word)).collect();
    let nontrivial_h = brute.iter().filter(|b| b.is_empty() && !b.is_identity()).count();
    assert_eq!(nontrivial_h, 1);
    assert_eq!(brute.len() - nontrivial_h, 7);
    assert_eq!(facts.len(), 7);
    let mut lefts: Vec<_> = facts.iter().map(|f| f.left.clone()).collect();
    lefts.sort();
    let mut expected: Vec<_> = brute.into_iter().filter(|b| !b.is_empty() || b.is_identity()).collect();
    expected.sort();
    assert_eq!(lefts, expected);
    assert!(facts.iter().any(|f| f.left == word && f.right.is_identity() && f.slack == 0));
    assert!(facts.iter().any(|f| f.left.is_identity() && f.right == word && f.slack == 0));
    let e = ctx.semi_factorizations(&AmalgamWord::identity());
    assert_eq!(e.len(), 1);
}

#[test]
fn semi_prefix_example() {
    let ctx = instance_a();
    let p = w(&ctx, "L:3");
    let word = w(&ctx, "L:1 G:1");
    let rest = ctx.mul(&ctx.invert(&p), &word);
    assert_eq!(rest.len(), 1);
    assert!(ctx.is_semi_prefix(&p, &word));
    assert!(ctx.is_semi_prefix(&AmalgamWord::identity(), &word));
    assert!(ctx.is_semi_prefix(&word, &word));
    assert!(!ctx.is_semi_prefix(&w(&ctx, "G:1"), &word));
}

#[test]
fn support_examples() {
    let ctx = instance_a();
    assert!(ctx.support(&AmalgamWord::identity()).is_empty());
    assert_eq!(ctx.support(&w(&ctx, "G:2")), vec![Letter::new(Side::G, 2)]);
    let word = w(&ctx, "H:1 L:1 G:1");
    assert_eq!(ctx.pretty(&word), "(a^2; a, b)");
    assert_eq!(ctx.support(&word), vec![Letter::new(Side::L, 3), Letter::new(Side::G, 1)]);
}

#[test]
fn lnf_detects_right_h_equivalence() {
    let ctx = instance_c_small();
    let words = all_words(&ctx, 2);
    for a in &words {
        for b in &words {
            if a.len() != b.len() {
                continue;
            }
            let quotient = ctx.mul(&ctx.invert(b), a);
            let same_right_coset = quotient.is_empty();
            assert_eq!(ctx.lnf(a).0 == ctx.lnf(b).0, same_right_coset, "{a} vs {b}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn agrees_with_rewriting_oracle(raw in raw_a()) {
        let ctx = instance_a();
        let nf = ctx.normalize(&raw).unwrap();
        prop_assert_eq!(as_pairs(&nf), oracle_a(&raw));
    }

    #[test]
    fn normalize_is_idempotent(raw in raw_c()) {
        let ctx = instance_c_small();
        let nf = ctx.normalize(&raw).unwrap();
        prop_assert!(ctx.check_word(&nf).is_ok());
        prop_assert_eq!(ctx.normalize(&nf.syllables()).unwrap(), nf);
    }

    #[test]
    fn h_twists_do_not_change_the_normal_form(raw in raw_c(), pos in 0usize..13, k in 0usize..2) {
        let ctx = instance_c_small();
        let mut twisted = raw.clone();
        let at = pos.min(twisted.len());
        let hinv = ctx.h_group().inv(k);
        twisted.insert(at, Syllable::H(hinv));
        twisted.insert(at, Syllable::H(k));
        prop_assert_eq!(ctx.normalize(&twisted).unwrap(), ctx.normalize(&raw).unwrap());
        // The same twist written through a factor.
        let side = if pos % 2 == 0 { Side::L } else { Side::G };
        let x = ctx.h_image(side, k);
        let xi = ctx.factor(side).inv(x);
        let mut via_factor = raw.clone();
        via_factor.insert(at, Syllable::letter(side, xi));
        via_factor.insert(at, Syllable::letter(side, x));
        prop_assert_eq!(ctx.normalize(&via_factor).unwrap(), ctx.normalize(&raw).unwrap());
    }

    #[test]
    fn mul_agrees_with_folding(a in raw_c(), b in raw_c()) {
        let ctx = instance_c_small();
        let wa = ctx.normalize(&a).unwrap();
        let wb = ctx.normalize(&b).unwrap();
        let mut ab = a.clone();
        ab.extend(b.iter().copied());
        prop_assert_eq!(ctx.mul(&wa, &wb), ctx.normalize(&ab).unwrap());
    }

    #[test]
    fn group_laws(a in raw_c(), b in raw_c(), c in raw_c()) {
        let ctx = instance_c_small();
        let (a, b, c) = (ctx.normalize(&a).unwrap(), ctx.normalize(&b).unwrap(), ctx.normalize(&c).unwrap());
        prop_assert_eq!(ctx.mul(&ctx.mul(&a, &b), &c), ctx.mul(&a, &ctx.mul(&b, &c)));
        let e = AmalgamWord::identity();
        prop_assert_eq!(&ctx.mul(&e, &a), &a);
        prop_assert_eq!(&ctx.mul(&a, &e), &a);
        let ai = ctx.invert(&a);
        prop_assert!(ctx.mul(&a, &ai).is_identity());
        prop_assert!(ctx.mul(&ai, &a).is_identity());
        prop_assert_eq!(ai.len(), a.len());
        prop_assert!(ctx.mul(&a, &b).len() <= a.len() + b.len());
        let conj = ctx.conjugate(&c, &a);
        prop_assert!(conj.len() <= a.len() + 2 * c.len());
        prop_assert_eq!(ctx.product([&a, &b, &c]), ctx.mul(&ctx.mul(&a, &b), &c));
    }

    #[test]
    fn letter_conjugation_matches_generic(raw in raw_c(), x in 0usize..14, on_l in any::<bool>()) {
        let ctx = instance_c_small();
        let w = ctx.normalize(&raw).unwrap();
        let side = if on_l { Side::L } else { Side::G };
        let x = x % ctx.factor(side).order();
        let c = ctx.letter_word(side, x);
        prop_assert_eq!(ctx.conjugate_by_letter(side, x, &w), ctx.conjugate(&c, &w));
    }

    #[test]
    fn cyclically_reduced_long_words_have_even_length(raw in raw_c()) {
        let ctx = instance_c_small();
        let w = ctx.normalize(&raw).unwrap();
        if w.len() > 1 && ctx.reduction_status(&w) == ReductionStatus::CyclicallyReduced {
            prop_assert_eq!(w.len() % 2, 0);
        }
        if w.len() > 1 && w.len().is_multiple_of(2) {
            prop_assert_eq!(ctx.reduction_status(&w), ReductionStatus::CyclicallyReduced);
        }
    }

    #[test]
    fn semi_prefix_matches_factorizations(raw in raw_c(), k in 0usize..12, c in 0usize..14) {
        let ctx = instance_c_small();
        let w = ctx.normalize(&raw).unwrap();
        let facts = ctx.semi_factorizations(&w);
        for f in &facts {
            prop_assert!(f.slack <= 1);
            prop_assert_eq!(ctx.mul(&f.left, &f.right), w.clone());
            prop_assert_eq!(f.left.len() + f.right.len() - f.slack as usize, w.len());
            prop_assert!(ctx.is_semi_prefix(&f.left, &w));
        }
        if w.is_empty() {
            return Ok(());
        }
        // Candidates from the family agree with the predicate; so do
        // prefixes ending in the wrong factor, which are never semi-prefixes.
        let k = 1 + k % w.len();
        for p in ctx.candidate_prefixes(&w, k) {
            prop_assert!(ctx.is_semi_prefix(&p, &w));
            prop_assert!(facts.iter().any(|f| f.left == p));
        }
        let other = w.letters()[k - 1].side().other();
        let c = c % ctx.factor(other).order();
        if !ctx.in_h(other, c) {
            let base = if k == 1 { AmalgamWord::identity() } else { ctx.prefix(&w, k - 1) };
            let p = ctx.mul(&base, &ctx.letter_word(other, c));
            if p.is_empty() && !p.is_identity() {
                // Length-0 semi-prefixes other than e are outside the family.
                prop_assert!(ctx.is_semi_prefix(&p, &w));
                return Ok(());
            }
            let listed = facts.iter().any(|f| f.left == p);
            prop_assert_eq!(ctx.is_semi_prefix(&p, &w), listed);
        }
    }

    #[test]
    fn support_is_h_merged_normal_form(raw in raw_c()) {
        let ctx = instance_c_small();
        let w = ctx.normalize(&raw).unwrap();
        let s = ctx.support(&w);
        prop_assert!(s.len() <= w.len());
        // Re-multiplying the canonical letters gives w back.
        if w.is_empty() {
            prop_assert!(s.is_empty());
            return Ok(());
        }
        let canon: Vec<Syllable> = ctx.canonical_letters(&w).iter().map(|l| Syllable::letter(l.side(), l.elem())).collect();
        prop_assert_eq!(ctx.normalize(&canon).unwrap(), w);
    }
}
