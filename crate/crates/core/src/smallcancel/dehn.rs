use std::sync::atomic::{AtomicU64, Ordering};

use num_rational::Rational64;
use serde::Serialize;

use crate::amalgam::{AmalgamContext, AmalgamWord, Side};

use super::pieces::check_lambda;
use super::relators::{RelatorSet, Symmetrization};
use super::{fmt_ratio, ScError};

/// `w ≡ u·s·v` and `r ≡ s·t` with `|s| > (1−3λ)|r|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreendlingerMatch {
    pub u: AmalgamWord,
    pub s: AmalgamWord,
    pub v: AmalgamWord,
    pub t: AmalgamWord,
    pub relator: usize,
    /// Number of letters of `w` before `s`.
    pub position: usize,
    /// Index in `H` of the twist at the left joint.
    pub twist: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DehnStep {
    pub before: AmalgamWord,
    #[serde(rename = "match")]
    pub matched: GreendlingerMatch,
    pub after: AmalgamWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DehnTrace {
    pub input: AmalgamWord,
    pub steps: Vec<DehnStep>,
    pub terminal: AmalgamWord,
    pub member: bool,
    /// Decided by the length bound without searching.
    pub shortcut: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolverStats {
    pub searches: u64,
    pub dehn_runs: u64,
    pub dehn_steps: u64,
    pub shortcut_decisions: u64,
}

#[derive(Debug, Default)]
struct Counters {
    searches: AtomicU64,
    dehn_runs: AtomicU64,
    dehn_steps: AtomicU64,
    shortcuts: AtomicU64,
}

/// Membership in the normal closure `N` of a certified relator set, and
/// equality in `F/N`.
#[derive(Debug)]
pub struct Quotient<'a> {
    ctx: &'a AmalgamContext,
    rels: &'a RelatorSet,
    lambda: Rational64,
    /// `1 − 3λ` as `num/den`.
    large: (i64, i64),
    min_len: usize,
    counters: Counters,
}

impl<'a> Quotient<'a> {
    /// Requires `rels` to be fully symmetrized and certified for some
    /// `λ₀ ≤ λ`, and `λ ≤ 1/6`.
    pub fn new(ctx: &'a AmalgamContext, rels: &'a RelatorSet, lambda: Rational64) -> Result<Quotient<'a>, ScError> {
        check_lambda(lambda)?;
        if lambda > Rational64::new(1, 6) {
            return Err(ScError::InvalidLambda(format!("λ ≤ 1/6, got {}", fmt_ratio(lambda))));
        }
        if rels.status() != Symmetrization::Full {
            return Err(ScError::PreconditionUnverified("relator set is not symmetrized".into()));
        }
        match rels.lambda() {
            Some(l0) if l0 <= lambda => {}
            Some(l0) => {
                return Err(ScError::PreconditionUnverified(format!(
                    "C'({}) certified, C'({}) requested",
                    fmt_ratio(l0),
                    fmt_ratio(lambda)
                )))
            }
            None => return Err(ScError::PreconditionUnverified(format!("C'({}) not certified", fmt_ratio(lambda)))),
        }
        let large = Rational64::from_integer(1) - lambda * 3;
        Ok(Quotient {
            ctx,
            rels,
            lambda,
            large: (*large.numer(), *large.denom()),
            min_len: rels.min_length().unwrap_or(usize::MAX),
            counters: Counters::default(),
        })
    }

    pub fn context(&self) -> &AmalgamContext {
        self.ctx
    }

    pub fn relators(&self) -> &RelatorSet {
        self.rels
    }

    pub fn lambda(&self) -> Rational64 {
        self.lambda
    }

    /// Nontrivial elements of `N` are longer than `1/λ − 3`.
    pub fn below_bound(&self, len: usize) -> bool {
        // len ≤ 1/λ − 3  ⟺  λ·len ≤ 1 − 3λ
        self.lambda * Rational64::from_integer(len as i64) <= Rational64::new(self.large.0, self.large.1)
    }

    fn is_large(&self, s_len: usize, r_len: usize) -> bool {
        (s_len as i64) * self.large.1 > self.large.0 * r_len as i64
    }

    /// Longest `s` over all positions and left twists (ties: lowest relator
    /// id, then leftmost position, then lowest twist).
    pub fn search(&self, w: &AmalgamWord) -> Option<GreendlingerMatch> {
        self.counters.searches.fetch_add(1, Ordering::Relaxed);
        let n = w.len();
        // the shortest relator needs |s| > (1−3λ)·min_len
        if self.min_len == usize::MAX || !self.is_large(n, self.min_len) {
            return None;
        }
        let sorted = self.rels.sorted_ids();
        let letters = w.letters();
        // (len, rid, position, twist)
        let mut best: Option<(usize, usize, usize, usize)> = None;
        let mut ranges = Vec::with_capacity(n);
        for i in 0..n {
            for k in self.ctx.h_group().elements() {
                ranges.clear();
                let (mut lo, mut hi) = (0usize, sorted.len());
                let mut carry = k;
                for (d, l) in letters[i..].iter().enumerate() {
                    let (u, c) = self.ctx.lnf_step(carry, *l);
                    carry = c;
                    let key = u64::from(u.raw()) + 1;
                    let rel_key = |id: &u32| self.rels.lnf(*id as usize).get(d).map_or(0, |x| u64::from(*x) + 1);
                    let seg = &sorted[lo..hi];
                    let a = seg.partition_point(|id| rel_key(id) < key);
                    let b = seg.partition_point(|id| rel_key(id) <= key);
                    if a == b {
                        break;
                    }
                    hi = lo + b;
                    lo += a;
                    ranges.push((lo, hi));
                }
                for (d, &(lo, hi)) in ranges.iter().enumerate().rev() {
                    let len = d + 1;
                    if best.is_some_and(|b| len < b.0) || !self.is_large(len, self.min_len) {
                        break;
                    }
                    let hit = sorted[lo..hi]
                        .iter()
                        .map(|&id| id as usize)
                        .filter(|&id| {
                            let r = self.rels.get(id);
                            r.len() >= len && self.rels.is_cyclic(id) && self.is_large(len, r.len())
                        })
                        .min();
                    if let Some(rid) = hit {
                        let cand = (len, rid, i, k);
                        let better = match best {
                            None => true,
                            Some(b) => len > b.0 || (len == b.0 && (rid, i, k) < (b.1, b.2, b.3)),
                        };
                        if better {
                            best = Some(cand);
                        }
                        break;
                    }
                }
            }
        }
        best.map(|(len, rid, i, k)| self.build_match(w, len, rid, i, k))
    }

    fn build_match(&self, w: &AmalgamWord, len: usize, rid: usize, i: usize, k: usize) -> GreendlingerMatch {
        let ctx = self.ctx;
        let r = self.rels.get(rid);
        let s = ctx.prefix(r, len);
        let t = AmalgamWord::from_parts(0, r.letters()[len..].to_vec());
        let u = ctx.mul(&ctx.prefix(w, i), &ctx.h_word(ctx.h_group().inv(k)));
        let v = ctx.mul(&ctx.invert(&ctx.mul(&u, &s)), w);
        GreendlingerMatch { u, s, v, t, relator: rid, position: i, twist: k }
    }

    /// Dehn's algorithm: replace `u·s·v` by `u·t⁻¹·v` until no match is
    /// left. `w ∈ N` iff the terminal word is the identity.
    pub fn dehn(&self, w: &AmalgamWord) -> DehnTrace {
        self.counters.dehn_runs.fetch_add(1, Ordering::Relaxed);
        if self.below_bound(w.len()) {
            self.counters.shortcuts.fetch_add(1, Ordering::Relaxed);
            return DehnTrace {
                input: w.clone(),
                steps: Vec::new(),
                terminal: w.clone(),
                member: w.is_identity(),
                shortcut: true,
            };
        }
        let mut cur = w.clone();
        let mut steps = Vec::new();
        while let Some(m) = self.search(&cur) {
            let after = self.ctx.product([&m.u, &self.ctx.invert(&m.t), &m.v]);
            debug_assert!(after.len() < cur.len());
            steps.push(DehnStep { before: cur, matched: m, after: after.clone() });
            cur = after;
        }
        self.counters.dehn_steps.fetch_add(steps.len() as u64, Ordering::Relaxed);
        DehnTrace { input: w.clone(), member: cur.is_identity(), steps, terminal: cur, shortcut: false }
    }

    pub fn is_member(&self, w: &AmalgamWord) -> bool {
        self.dehn(w).member
    }

    /// `a = b` in `F/N`.
    pub fn equal(&self, a: &AmalgamWord, b: &AmalgamWord) -> bool {
        self.is_member(&self.ctx.mul(&self.ctx.invert(a), b))
    }

    /// `w ∈ G·N`: some `g ∈ G` has `g⁻¹w ∈ N`.
    pub fn is_in_gn(&self, w: &AmalgamWord) -> bool {
        let g = self.ctx.g();
        g.elements().any(|x| {
            let gi = self.ctx.letter_word(Side::G, g.inv(x));
            self.is_member(&self.ctx.mul(&gi, w))
        })
    }

    pub fn stats(&self) -> SolverStats {
        SolverStats {
            searches: self.counters.searches.load(Ordering::Relaxed),
            dehn_runs: self.counters.dehn_runs.load(Ordering::Relaxed),
            dehn_steps: self.counters.dehn_steps.load(Ordering::Relaxed),
            shortcut_decisions: self.counters.shortcuts.load(Ordering::Relaxed),
        }
    }

    /// Injectivity of `L ∪ G → F/N` and `q[H] = q[L] ∩ q[G]`.
    pub fn verify_qlg(&self) -> QlgReport {
        let ctx = self.ctx;
        let mut elems: Vec<AmalgamWord> = Vec::new();
        for side in Side::BOTH {
            for x in ctx.factor(side).elements() {
                elems.push(ctx.letter_word(side, x));
            }
        }
        elems.sort();
        elems.dedup();
        let before = self.stats();
        let mut report = QlgReport {
            injective: true,
            intersection: true,
            elements: elems.len(),
            pairs_checked: 0,
            stats: SolverStats::default(),
            counterexample: None,
        };
        'outer: for (a, x) in elems.iter().enumerate() {
            let xi = ctx.invert(x);
            for y in &elems[a + 1..] {
                report.pairs_checked += 1;
                if self.is_member(&ctx.mul(&xi, y)) {
                    report.injective = false;
                    report.counterexample = Some((x.clone(), y.clone()));
                    break 'outer;
                }
            }
        }
        // an L-letter outside H equal in F/N to a G-element
        'outer2: for l in ctx.outside_h(Side::L) {
            let lw = ctx.letter_word(Side::L, l);
            for g in ctx.g().elements() {
                report.pairs_checked += 1;
                let gi = ctx.letter_word(Side::G, ctx.g().inv(g));
                if self.is_member(&ctx.mul(&gi, &lw)) {
                    report.intersection = false;
                    if report.counterexample.is_none() {
                        report.counterexample = Some((lw.clone(), ctx.letter_word(Side::G, g)));
                    }
                    break 'outer2;
                }
            }
        }
        let after = self.stats();
        report.stats = SolverStats {
            searches: after.searches - before.searches,
            dehn_runs: after.dehn_runs - before.dehn_runs,
            dehn_steps: after.dehn_steps - before.dehn_steps,
            shortcut_decisions: after.shortcut_decisions - before.shortcut_decisions,
        };
        report
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QlgReport {
    pub injective: bool,
    pub intersection: bool,
    pub elements: usize,
    pub pairs_checked: u64,
    pub stats: SolverStats,
    pub counterexample: Option<(AmalgamWord, AmalgamWord)>,
}

impl QlgReport {
    pub fn passed(&self) -> bool {
        self.injective && self.intersection
    }
}

pub fn greendlinger_search(
    ctx: &AmalgamContext,
    rels: &RelatorSet,
    lambda: Rational64,
    w: &AmalgamWord,
) -> Result<Option<GreendlingerMatch>, ScError> {
    Ok(Quotient::new(ctx, rels, lambda)?.search(w))
}

pub fn dehn_membership(
    ctx: &AmalgamContext,
    rels: &RelatorSet,
    lambda: Rational64,
    w: &AmalgamWord,
) -> Result<(bool, DehnTrace), ScError> {
    let t = Quotient::new(ctx, rels, lambda)?.dehn(w);
    Ok((t.member, t))
}

pub fn is_in_gn(ctx: &AmalgamContext, rels: &RelatorSet, lambda: Rational64, w: &AmalgamWord) -> Result<bool, ScError> {
    Ok(Quotient::new(ctx, rels, lambda)?.is_in_gn(w))
}

pub fn verify_qlg(ctx: &AmalgamContext, rels: &RelatorSet, lambda: Rational64) -> Result<QlgReport, ScError> {
    Ok(Quotient::new(ctx, rels, lambda)?.verify_qlg())
}

impl DehnTrace {
    /// Re-checks every step from scratch: the decompositions are exact
    /// with the stated lengths, each `s` is large, lengths strictly drop,
    /// and `member` agrees with the terminal word.
    pub fn verify(&self, ctx: &AmalgamContext, rels: &RelatorSet, lambda: Rational64) -> Result<(), String> {
        let large = Rational64::from_integer(1) - lambda * 3;
        let mut cur = &self.input;
        for (n, st) in self.steps.iter().enumerate() {
            let m = &st.matched;
            let fail = |what: &str| Err(format!("step {n}: {what}"));
            if &st.before != cur {
                return fail("does not continue the previous word");
            }
            if ctx.product([&m.u, &m.s, &m.v]) != st.before || m.u.len() + m.s.len() + m.v.len() != st.before.len() {
                return fail("w ≢ usv");
            }
            let Some(r) = rels.relators().get(m.relator) else {
                return fail("unknown relator");
            };
            if &ctx.mul(&m.s, &m.t) != r || m.s.len() + m.t.len() != r.len() {
                return fail("r ≢ st");
            }
            if Rational64::from_integer(m.s.len() as i64) <= large * Rational64::from_integer(r.len() as i64) {
                return fail("|s| ≤ (1−3λ)|r|");
            }
            if ctx.product([&m.u, &ctx.invert(&m.t), &m.v]) != st.after || st.after.len() >= st.before.len() {
                return fail("replacement");
            }
            cur = &st.after;
        }
        if cur != &self.terminal {
            return Err("terminal word does not match the last step".into());
        }
        if self.member != self.terminal.is_identity() {
            return Err("membership flag disagrees with the terminal word".into());
        }
        Ok(())
    }
}
