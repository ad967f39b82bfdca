use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::amalgam::{AmalgamContext, AmalgamWord, Side, Syllable};
use crate::fingroup::SearchConfig;
use crate::smallcancel::{
    enumerate_pieces, fmt_ratio, hull_of_set, HullMode, PieceMode, Quotient, RelatorSet, SolverStats,
};

use super::families::{build_explicit_hull, build_special_relators, is_half_hminus_separated, words_up_to};
use super::{check_sequence_pm, ser_ratio, Budgets, ShelahError, ShelahParams};

pub const REPORT_SCHEMA: &str = "amalgam-verification/1";

/// The piece bound proved for the special hulls.
const PIECE_BOUND: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    Sampled,
    Exhaustive,
}

/// How a conclusion was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictMode {
    Exhaustive,
    /// By the length bound on nontrivial elements of `N`, no search.
    Shortcut,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Conclusion {
    pub id: String,
    pub description: String,
    pub mode: VerdictMode,
    pub checked: u64,
    pub passed: bool,
    pub note: Option<String>,
    pub counterexample: Option<Value>,
    pub solver: SolverStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub kind: &'static str,
    #[serde(serialize_with = "ser_ratio")]
    pub lambda: Rational64,
    pub relators: usize,
    pub hull_size: usize,
    pub max_piece_length: Option<usize>,
    pub conclusions: Vec<Conclusion>,
    pub stats: SolverStats,
}

impl VerificationReport {
    fn new(kind: &'static str, lambda: Rational64, relators: usize, hull_size: usize) -> Self {
        VerificationReport {
            schema: REPORT_SCHEMA,
            kind,
            lambda,
            relators,
            hull_size,
            max_piece_length: None,
            conclusions: Vec::new(),
            stats: SolverStats::default(),
        }
    }

    pub fn passed(&self) -> bool {
        self.conclusions.iter().all(|c| c.passed)
    }

    pub fn conclusion(&self, id: &str) -> Option<&Conclusion> {
        self.conclusions.iter().find(|c| c.id == id)
    }
}

/// A certified symmetrized hull; the quotient `F/N` is [`Presentation::quotient`].
#[derive(Debug, Clone)]
pub struct Presentation {
    pub relators: RelatorSet,
    pub lambda: Rational64,
}

impl Presentation {
    pub fn quotient<'a>(&'a self, ctx: &'a AmalgamContext) -> Quotient<'a> {
        Quotient::new(ctx, &self.relators, self.lambda).expect("certified at construction")
    }
}

fn diff(a: SolverStats, b: SolverStats) -> SolverStats {
    SolverStats {
        searches: a.searches - b.searches,
        dehn_runs: a.dehn_runs - b.dehn_runs,
        dehn_steps: a.dehn_steps - b.dehn_steps,
        shortcut_decisions: a.shortcut_decisions - b.shortcut_decisions,
    }
}

fn hypothesis(h: impl Into<String>, w: impl Into<String>) -> ShelahError {
    ShelahError::HypothesisFailed { hypothesis: h.into(), witness: w.into() }
}

/// Symmetrized hull of `rels`, certified for `C'(λ)`.
pub fn certified_hull(
    ctx: &AmalgamContext,
    rels: &[AmalgamWord],
    lambda: Rational64,
) -> Result<RelatorSet, ShelahError> {
    let mut hull = hull_of_set(ctx, rels, HullMode::Full)?;
    let v = hull.certify(ctx, lambda)?;
    if !v.holds {
        let w = serde_json::to_string(&v.violation).expect("serializable");
        return Err(hypothesis(format!("C'({})", fmt_ratio(lambda)), w));
    }
    Ok(hull)
}

fn require_solver_lambda(lambda: Rational64) -> Result<(), ShelahError> {
    if lambda > Rational64::new(1, 6) {
        return Err(hypothesis("λ ≤ 1/6", fmt_ratio(lambda)));
    }
    Ok(())
}

fn require_h_malnormal(ctx: &AmalgamContext) -> Result<(), ShelahError> {
    let rep = ctx.embedding(Side::L).is_malnormal();
    if let Some((x, h)) = rep.witness {
        let l = ctx.l();
        return Err(hypothesis(
            "H is malnormal in L",
            format!("{} conjugates {} into H", l.element_name(x), l.element_name(h)),
        ));
    }
    Ok(())
}

/// Piece bound, hull formula and `C'(λ)` for the special relators.
pub fn verify_cprime_lemma(ctx: &AmalgamContext, params: &ShelahParams) -> Result<VerificationReport, ShelahError> {
    params.validate(ctx)?;
    let r = build_special_relators(ctx, params)?;
    let explicit = build_explicit_hull(ctx, params)?;
    let generic = hull_of_set(ctx, &r, HullMode::Full)?;
    let mut report = VerificationReport::new("cprime_lemma", params.lambda, r.len(), generic.len());

    let missing = generic.relators().iter().find(|w| !explicit.contains(w));
    let extra = explicit.relators().iter().find(|w| !generic.contains(w));
    report.conclusions.push(Conclusion {
        id: "hull".into(),
        description: "the symmetrized hull is the union of the eight explicit families".into(),
        mode: VerdictMode::Exhaustive,
        checked: (generic.len() + explicit.len()) as u64,
        passed: missing.is_none() && extra.is_none(),
        note: Some(format!("generic {} relators, explicit {}", generic.len(), explicit.len())),
        counterexample: (missing.is_some() || extra.is_some())
            .then(|| json!({ "only_in_generic": missing, "only_in_explicit": extra })),
        solver: SolverStats::default(),
    });

    let pieces = enumerate_pieces(ctx, &generic, PieceMode::Exhaustive);
    report.max_piece_length = Some(pieces.max_piece_length);
    let ok = pieces.max_piece_length <= PIECE_BOUND;
    report.conclusions.push(Conclusion {
        id: "pieces".into(),
        description: format!("every piece has length at most {PIECE_BOUND}"),
        mode: VerdictMode::Exhaustive,
        checked: generic.len() as u64,
        passed: ok,
        note: Some(format!("max piece length {}", pieces.max_piece_length)),
        counterexample: (!ok).then(|| json!(pieces.witness)),
        solver: SolverStats::default(),
    });

    let v = crate::smallcancel::check_cprime(ctx, &generic, params.lambda)?;
    report.conclusions.push(Conclusion {
        id: "cprime".into(),
        description: format!("C'({}) holds for the hull", fmt_ratio(params.lambda)),
        mode: VerdictMode::Exhaustive,
        checked: generic.len() as u64,
        passed: v.holds,
        note: v.min_length.map(|m| format!("min relator length {m}")),
        counterexample: v.violation.as_ref().map(|x| json!(x)),
        solver: SolverStats::default(),
    });
    Ok(report)
}

/// A word of exactly `len` letters with a random `H` prefix, starting on a
/// random side.
fn random_word(ctx: &AmalgamContext, rng: &mut ChaCha8Rng, len: usize, outside: &[Vec<usize>; 2]) -> AmalgamWord {
    let mut side = if rng.gen_bool(0.5) { Side::L } else { Side::G };
    let mut raw = vec![Syllable::H(rng.gen_range(0..ctx.h_order()))];
    for _ in 0..len {
        let x = *outside[side.index()].choose(rng).expect("factor larger than H");
        raw.push(Syllable::letter(side, x));
        side = side.other();
    }
    ctx.normalize(&raw).expect("valid indices")
}

/// `count` random words of length `1..=max_len` outside `G·N`, by
/// rejection; also returns the number of rejected draws.
fn sample_outside_gn(
    q: &Quotient,
    rng: &mut ChaCha8Rng,
    count: usize,
    max_len: usize,
    outside: &[Vec<usize>; 2],
) -> (Vec<AmalgamWord>, usize) {
    let ctx = q.context();
    let mut out = Vec::with_capacity(count);
    let mut rejected = 0;
    while out.len() < count && rejected <= 100 * count {
        let len = rng.gen_range(1..=max_len.max(1));
        let x = random_word(ctx, rng, len, outside);
        if q.is_in_gn(&x) {
            rejected += 1;
        } else {
            out.push(x);
        }
    }
    (out, rejected)
}

struct Checker<'q, 'a> {
    q: &'q Quotient<'a>,
    report: VerificationReport,
}

impl Checker<'_, '_> {
    /// Runs `check` on every item in parallel; the counterexample is the
    /// first failing item in input order.
    #[allow(clippy::too_many_arguments)]
    fn run<T: Sync>(
        &mut self,
        id: &str,
        description: String,
        mode: VerdictMode,
        note: Option<String>,
        items: &[T],
        check: impl Fn(&T) -> Option<Value> + Sync,
    ) {
        let before = self.q.stats();
        let bad = items.par_iter().find_map_first(&check);
        let solver = diff(self.q.stats(), before);
        // a shortcut tag is only honest when no search ran
        let mode = if mode == VerdictMode::Shortcut && solver.searches > 0 { VerdictMode::Exhaustive } else { mode };
        self.report.conclusions.push(Conclusion {
            id: id.into(),
            description,
            mode,
            checked: items.len() as u64,
            passed: bad.is_none(),
            note,
            counterexample: bad,
            solver,
        });
    }
}

fn qlg_conclusions(q: &Quotient, report: &mut VerificationReport) {
    let before = q.stats();
    let rep = q.verify_qlg();
    let solver = diff(q.stats(), before);
    let cx = rep.counterexample.as_ref().map(|(a, b)| json!({ "x": a, "y": b }));
    report.conclusions.push(Conclusion {
        id: "1".into(),
        description: "L and G embed in M".into(),
        mode: VerdictMode::Exhaustive,
        checked: (rep.elements * rep.elements.saturating_sub(1) / 2) as u64,
        passed: rep.injective,
        note: Some(format!("{} elements of L ∪ G pairwise distinct in M", rep.elements)),
        counterexample: if rep.injective { None } else { cx.clone() },
        solver,
    });
    report.conclusions.push(Conclusion {
        id: "2".into(),
        description: "L ∩ G = H in M; the kernel of L *_H G → M is N".into(),
        mode: VerdictMode::Exhaustive,
        checked: rep.pairs_checked,
        passed: rep.intersection,
        note: Some("no element of L∖H equals an element of G; the kernel is N by construction".into()),
        counterexample: if rep.intersection { None } else { cx },
        solver: SolverStats::default(),
    });
}

/// The conclusions shared by both amalgamation lemmas. `a_seq` is the
/// `L`-sequence of the family `a₀xa₁x⋯a_{n−1}x`.
fn amalgamation_conclusions(
    ctx: &AmalgamContext,
    q: &Quotient,
    a_seq: &[usize],
    budgets: &Budgets,
    mode: CheckMode,
    report: VerificationReport,
) -> VerificationReport {
    let (l, g) = (ctx.l(), ctx.g());
    let n = a_seq.len();
    let mut rng = ChaCha8Rng::seed_from_u64(budgets.seed);
    let outside = [ctx.outside_h(Side::L), ctx.outside_h(Side::G)];
    let mut report = report;
    qlg_conclusions(q, &mut report);
    let mut c = Checker { q, report };

    // (3) x y x⁻¹ ∉ G·N for x ∉ G·N and y ∈ G∖{e}
    let (xs, rejected) = match mode {
        CheckMode::Exhaustive => {
            let all = words_up_to(ctx, budgets.conjugator_len);
            let total = all.len();
            let xs: Vec<AmalgamWord> = all.into_par_iter().filter(|x| !q.is_in_gn(x)).collect();
            let rejected = total - xs.len();
            (xs, rejected)
        }
        CheckMode::Sampled => sample_outside_gn(q, &mut rng, budgets.samples, budgets.conjugator_len, &outside),
    };
    let ys: Vec<AmalgamWord> =
        g.elements().filter(|&y| y != g.identity()).map(|y| ctx.letter_word(Side::G, y)).collect();
    c.run(
        "3",
        "G is malnormal in M".into(),
        if mode == CheckMode::Exhaustive { VerdictMode::Exhaustive } else { VerdictMode::Sampled },
        Some(format!(
            "{} conjugators x ∉ GN of length ≤ {} ({rejected} in GN passed over), all {} y ∈ G∖{{e}} each",
            xs.len(),
            budgets.conjugator_len,
            ys.len()
        )),
        &xs,
        |x| ys.iter().find(|y| q.is_in_gn(&ctx.conjugate(x, y))).map(|y| json!({ "x": x, "y": y })),
    );

    // (4) aᵢ ∉ G aⱼ^± G, i.e. aᵢ⁻¹ g aⱼ^ε g′ ∉ N
    let mut quads = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                for inv in [false, true] {
                    quads.push((i, j, inv));
                }
            }
        }
    }
    let g_words: Vec<AmalgamWord> = g.elements().map(|x| ctx.letter_word(Side::G, x)).collect();
    c.run(
        "4",
        "the a-sequence is G±-separated in M".into(),
        VerdictMode::Shortcut,
        Some(format!(
            "aᵢ⁻¹ g aⱼ^±1 g′ has length ≤ 4; decided by the bound |w| > 1/λ − 3 = {} on nontrivial w ∈ N",
            fmt_ratio(Rational64::from_integer(1) / q.lambda() - 3)
        )),
        &quads,
        |&(i, j, inv)| {
            let ai = ctx.letter_word(Side::L, l.inv(a_seq[i]));
            let aj = ctx.letter_word(Side::L, if inv { l.inv(a_seq[j]) } else { a_seq[j] });
            for gw in &g_words {
                let left = ctx.mul(&ai, gw);
                let mid = ctx.mul(&left, &aj);
                for gw2 in &g_words {
                    let w = ctx.mul(&mid, gw2);
                    if q.is_member(&w) {
                        return Some(json!({ "i": i, "j": j, "inverse": inv, "g": gw, "g_prime": gw2 }));
                    }
                }
            }
            None
        },
    );

    if let Some(last) = c.report.conclusions.last_mut() {
        last.checked *= (g.order() * g.order()) as u64;
    }

    // (5) a₀xa₁x⋯a_{n−1}x = e in M, one Dehn step each
    let x_outside = ctx.outside_h(Side::G);
    c.run(
        "5",
        "a₀xa₁x⋯a_{n−1}x = e in M for every x ∈ G∖H".into(),
        VerdictMode::Exhaustive,
        Some("each product reduces to e in exactly one Dehn step".into()),
        &x_outside,
        |&x| {
            let raw: Vec<Syllable> = a_seq.iter().flat_map(|&a| [Syllable::L(a), Syllable::G(x)]).collect();
            let w = ctx.normalize(&raw).expect("valid indices");
            let t = q.dehn(&w);
            (!t.member || t.steps.len() != 1)
                .then(|| json!({ "x": x, "word": w, "steps": t.steps.len(), "member": t.member }))
        },
    );

    // (6) l g c₁ l g c₂ ⋯ l g cₙ ≠ e
    let h = ctx.h_order();
    let products: Vec<(usize, usize, Vec<usize>)> = match mode {
        CheckMode::Exhaustive => {
            let mut out = Vec::new();
            for m in 1..=budgets.product_n {
                let total = h.pow(m as u32);
                for &lx in &outside[0] {
                    for &gx in &outside[1] {
                        for code in 0..total {
                            let cs = (0..m).map(|k| code / h.pow(k as u32) % h).collect();
                            out.push((lx, gx, cs));
                        }
                    }
                }
            }
            out
        }
        CheckMode::Sampled => (0..budgets.samples)
            .map(|_| {
                let m = rng.gen_range(1..=budgets.product_n.max(1));
                let lx = *outside[0].choose(&mut rng).expect("L larger than H");
                let gx = *outside[1].choose(&mut rng).expect("G larger than H");
                (lx, gx, (0..m).map(|_| rng.gen_range(0..h)).collect())
            })
            .collect(),
    };
    c.run(
        "6",
        "l g c₁ l g c₂ ⋯ l g cₙ ≠ e in M for l ∈ L∖H, g ∈ G∖H, cᵢ ∈ H".into(),
        if mode == CheckMode::Exhaustive { VerdictMode::Exhaustive } else { VerdictMode::Sampled },
        Some(format!("n ≤ {} (the lemma leaves n unbounded)", budgets.product_n)),
        &products,
        |(lx, gx, cs)| {
            let raw: Vec<Syllable> =
                cs.iter().flat_map(|&k| [Syllable::L(*lx), Syllable::G(*gx), Syllable::H(k)]).collect();
            let w = ctx.normalize(&raw).expect("valid indices");
            q.is_member(&w).then(|| json!({ "l": lx, "g": gx, "c": cs, "word": w }))
        },
    );

    let mut report = c.report;
    report.stats = q.stats();
    report
}

fn amalgamation_hypotheses(ctx: &AmalgamContext, lambda: Rational64) -> Result<(), ShelahError> {
    require_h_malnormal(ctx)?;
    require_solver_lambda(lambda)
}

/// The quotient by `{a₀xa₁x⋯a_{n−1}x : x ∈ G∖H} ∪ {b⁻¹x₀ax₁a⋯x_{n−1}a}`
/// and its properties.
pub fn verify_amalgamation(
    ctx: &AmalgamContext,
    params: &ShelahParams,
    mode: CheckMode,
) -> Result<(Presentation, VerificationReport), ShelahError> {
    amalgamation_hypotheses(ctx, params.lambda)?;
    params.validate(ctx).map_err(ShelahError::into_hypothesis)?;
    let r = build_special_relators(ctx, params)?;
    let hull = certified_hull(ctx, &r, params.lambda)?;
    let pres = Presentation { relators: hull, lambda: params.lambda };
    let report = {
        let q = pres.quotient(ctx);
        let mut report = VerificationReport::new("amalgamation", params.lambda, r.len(), pres.relators.len());
        report.max_piece_length =
            Some(crate::smallcancel::check_cprime(ctx, &pres.relators, params.lambda)?.max_piece_length);
        amalgamation_conclusions(ctx, &q, &params.a_seq, &params.budgets, mode, report)
    };
    Ok((pres, report))
}

/// As [`verify_amalgamation`] for `{a₀xa₁x⋯a_{n−1}x : x ∈ G∖H}` alone.
pub fn verify_amalgamation2(
    ctx: &AmalgamContext,
    a_seq: &[usize],
    lambda: Rational64,
    budgets: &Budgets,
    mode: CheckMode,
) -> Result<(Presentation, VerificationReport), ShelahError> {
    amalgamation_hypotheses(ctx, lambda)?;
    let n = a_seq.len();
    if n < 3 {
        return Err(hypothesis("n ≥ 3", format!("n = {n}")));
    }
    if lambda <= Rational64::new(5, 2 * n as i64) {
        return Err(hypothesis("λ > 5/(2n)", format!("λ = {}, n = {n}", fmt_ratio(lambda))));
    }
    check_sequence_pm(ctx, Side::L, a_seq, "a-sequence").map_err(ShelahError::into_hypothesis)?;
    let r: Vec<AmalgamWord> = ctx
        .outside_h(Side::G)
        .into_iter()
        .map(|x| {
            let raw: Vec<Syllable> = a_seq.iter().flat_map(|&a| [Syllable::L(a), Syllable::G(x)]).collect();
            ctx.normalize(&raw)
        })
        .collect::<Result<_, _>>()?;
    let hull = certified_hull(ctx, &r, lambda)?;
    let pres = Presentation { relators: hull, lambda };
    let report = {
        let q = pres.quotient(ctx);
        let mut report = VerificationReport::new("amalgamation2", lambda, r.len(), pres.relators.len());
        report.max_piece_length = Some(crate::smallcancel::check_cprime(ctx, &pres.relators, lambda)?.max_piece_length);
        amalgamation_conclusions(ctx, &q, a_seq, budgets, mode, report)
    };
    Ok((pres, report))
}

/// One stage of the embedding construction: find `H±`-separated sequences
/// of length `n` in `L` and `G`, then run [`verify_amalgamation`].
pub fn embedding_stage(
    ctx: &AmalgamContext,
    n: usize,
    lambda: Rational64,
    a: usize,
    b: usize,
    budgets: Budgets,
    mode: CheckMode,
) -> Result<(Presentation, VerificationReport), ShelahError> {
    let cfg = SearchConfig::default();
    let find = |side: Side| {
        let pool: Vec<usize> = ctx.factor(side).elements().collect();
        ctx.embedding(side)
            .find_pm_separated(&pool, n, &cfg)
            .ok_or_else(|| hypothesis(format!("an H±-separated sequence of length {n} in {side}"), "none found"))
    };
    let params = ShelahParams { n, lambda, a_seq: find(Side::L)?, x_seq: find(Side::G)?, a, b, budgets };
    verify_amalgamation(ctx, &params, mode)
}

/// Sampled check that `G` stays malnormal modulo the normal closure of
/// `rels`: `x y x⁻¹ ∉ G·N` for `x ∉ G·N`, `y ∈ G∖{e}`.
pub fn verify_malnormal_preservation(
    ctx: &AmalgamContext,
    rels: &[AmalgamWord],
    lambda: Rational64,
    budgets: &Budgets,
) -> Result<VerificationReport, ShelahError> {
    let sep = is_half_hminus_separated(ctx, rels);
    if !sep.verdict {
        return Err(hypothesis("R is half H⁻-separated", format!("{:?}", sep.witness)));
    }
    let mut hull = hull_of_set(ctx, rels, HullMode::Full)?;
    let cyclic_min = (0..hull.len()).filter(|&i| hull.is_cyclic(i)).map(|i| hull.get(i).len()).min();
    let Some(m) = cyclic_min else {
        return Err(hypothesis("the hull has a cyclically reduced element", "none"));
    };
    // (1−6λ)·m > 4, exactly
    let lhs = (Rational64::from_integer(1) - lambda * 6) * Rational64::from_integer(m as i64);
    if lhs <= Rational64::from_integer(4) {
        return Err(hypothesis(
            "(1−6λ)|r| > 4 for every cyclically reduced r in the hull",
            format!("(1−6·{})·{m} = {} ≤ 4", fmt_ratio(lambda), fmt_ratio(lhs)),
        ));
    }
    if lambda >= Rational64::new(1, 6) {
        return Err(hypothesis("λ < 1/6", fmt_ratio(lambda)));
    }
    require_h_malnormal(ctx)?;
    let v = hull.certify(ctx, lambda)?;
    if !v.holds {
        let w = serde_json::to_string(&v.violation).expect("serializable");
        return Err(hypothesis(format!("C'({})", fmt_ratio(lambda)), w));
    }
    let q = Quotient::new(ctx, &hull, lambda)?;
    let mut report = VerificationReport::new("malnormal_preservation", lambda, rels.len(), hull.len());
    report.max_piece_length = Some(v.max_piece_length);
    report.conclusions.push(Conclusion {
        id: "hypothesis".into(),
        description: "(1−6λ)|r| > 4 for every cyclically reduced r in the hull".into(),
        mode: VerdictMode::Exhaustive,
        checked: hull.len() as u64,
        passed: true,
        note: Some(format!("(1−6·{})·{m} = {} > 4", fmt_ratio(lambda), fmt_ratio(lhs))),
        counterexample: None,
        solver: SolverStats::default(),
    });

    let mut rng = ChaCha8Rng::seed_from_u64(budgets.seed);
    let outside = [ctx.outside_h(Side::L), ctx.outside_h(Side::G)];
    let g = ctx.g();
    let ys: Vec<usize> = g.elements().filter(|&y| y != g.identity()).collect();
    let before = q.stats();
    let (xs, skipped) = sample_outside_gn(&q, &mut rng, budgets.samples, budgets.malnormal_len, &outside);
    let pairs: Vec<(AmalgamWord, usize)> =
        xs.into_iter().map(|x| (x, *ys.choose(&mut rng).expect("G nontrivial"))).collect();
    let bad = pairs.par_iter().position_first(|(x, y)| q.is_in_gn(&ctx.conjugate(x, &ctx.letter_word(Side::G, *y))));
    report.conclusions.push(Conclusion {
        id: "conclusion".into(),
        description: "x y x⁻¹ ∉ GN for x ∉ GN and y ∈ G∖{e}".into(),
        mode: VerdictMode::Sampled,
        checked: pairs.len() as u64,
        passed: bad.is_none(),
        note: Some(format!(
            "{} sampled pairs with 1 ≤ |x| ≤ {}; {skipped} draws with x ∈ GN skipped",
            pairs.len(),
            budgets.malnormal_len
        )),
        counterexample: bad.map(|i| json!({ "x": pairs[i].0, "y": pairs[i].1 })),
        solver: diff(q.stats(), before),
    });
    report.stats = q.stats();
    Ok(report)
}
