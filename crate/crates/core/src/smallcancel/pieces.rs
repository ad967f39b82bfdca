use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::amalgam::{AmalgamContext, AmalgamWord};

use super::relators::{RelatorSet, Symmetrization};
use super::{fmt_ratio, ScError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PieceMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceWitness {
    pub relator: AmalgamWord,
    pub relator_id: usize,
    pub other: AmalgamWord,
    pub other_id: usize,
    pub piece: AmalgamWord,
}

/// Result of piece enumeration. `histogram[k]` counts the relators (in
/// exhaustive mode) or sampled pairs (in sampled mode) that have a piece of
/// length `k`; pieces are closed under taking prefixes, so the counts are
/// non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceReport {
    pub mode: PieceMode,
    pub relators: usize,
    pub max_piece_length: usize,
    pub witness: Option<PieceWitness>,
    pub histogram: Vec<u64>,
}

fn lcp(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn side_of(raw: u32) -> u32 {
    raw >> 31
}

/// Longest common piece of two relators, read off their left normal forms.
fn pair_piece(a: &[u32], b: &[u32]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let l = lcp(a, b);
    if l == 0 && side_of(a[0]) != side_of(b[0]) {
        return 0;
    }
    (l + 1).min(a.len()).min(b.len())
}

/// For every relator, the length of its longest piece and a relator it
/// shares that piece with.
pub(crate) fn best_pieces(rels: &RelatorSet) -> Vec<(usize, usize)> {
    let n = rels.len();
    if n < 2 {
        return vec![(0, 0); n];
    }
    let sorted = rels.sorted_ids();
    let key = |pos: usize| rels.lnf(sorted[pos] as usize);
    // adj[p] = lcp of sorted positions p - 1 and p
    let adj: Vec<usize> = (0..n).into_par_iter().map(|p| if p == 0 { 0 } else { lcp(key(p - 1), key(p)) }).collect();
    // sorted order groups relators by first side, L before G
    let g_start = sorted.partition_point(|&id| rels.lnf(id as usize).first().is_none_or(|&x| side_of(x) == 0));
    let mut pos_of = vec![0usize; n];
    for (p, &id) in sorted.iter().enumerate() {
        pos_of[id as usize] = p;
    }
    // two lowest ids of nonempty relators in each side block
    let mut lowest = [[usize::MAX; 2]; 2];
    for (p, &id) in sorted.iter().enumerate() {
        if rels.lnf(id as usize).is_empty() {
            continue;
        }
        let b = &mut lowest[usize::from(p >= g_start)];
        let id = id as usize;
        if id < b[0] {
            b[1] = b[0];
            b[0] = id;
        } else if id < b[1] {
            b[1] = id;
        }
    }
    (0..n)
        .into_par_iter()
        .map(|id| {
            let r = rels.lnf(id);
            if r.is_empty() {
                return (0, if id == 0 { 1 } else { 0 });
            }
            let p = pos_of[id];
            let mut best = (0usize, usize::MAX);
            let consider = |q: usize, len: usize, best: &mut (usize, usize)| {
                if len > best.0 {
                    *best = (len, q);
                }
            };
            let mut run = usize::MAX;
            for j in (0..p).rev() {
                run = run.min(adj[j + 1]);
                if run == 0 || (run + 1).min(r.len()) <= best.0 {
                    break;
                }
                let q = sorted[j] as usize;
                consider(q, pair_piece(r, rels.lnf(q)), &mut best);
            }
            run = usize::MAX;
            for j in p + 1..n {
                run = run.min(adj[j]);
                if run == 0 || (run + 1).min(r.len()) <= best.0 {
                    break;
                }
                let q = sorted[j] as usize;
                consider(q, pair_piece(r, rels.lnf(q)), &mut best);
            }
            if best.0 == 0 {
                let b = lowest[usize::from(p >= g_start)];
                let q = if b[0] == id { b[1] } else { b[0] };
                best = if q == usize::MAX { (0, if id == 0 { 1 } else { 0 }) } else { (1, q) };
            }
            best
        })
        .collect()
}

fn witness(ctx: &AmalgamContext, rels: &RelatorSet, r: usize, q: usize, k: usize) -> PieceWitness {
    PieceWitness {
        relator: rels.get(r).clone(),
        relator_id: r,
        other: rels.get(q).clone(),
        other_id: q,
        piece: ctx.prefix(rels.get(r), k),
    }
}

/// Longest piece over all ordered pairs of distinct relators, with a
/// witness (lowest relator id attaining the maximum).
pub fn enumerate_pieces(ctx: &AmalgamContext, rels: &RelatorSet, mode: PieceMode) -> PieceReport {
    match mode {
        PieceMode::Exhaustive => {
            let best = best_pieces(rels);
            let max = best.iter().map(|b| b.0).max().unwrap_or(0);
            let mut histogram = Vec::new();
            if rels.len() >= 2 {
                histogram = vec![0u64; max + 1];
                for &(k, _) in &best {
                    for h in &mut histogram[..=k] {
                        *h += 1;
                    }
                }
            }
            let witness = (rels.len() >= 2).then(|| {
                let r = best.iter().position(|b| b.0 == max).expect("nonempty");
                witness(ctx, rels, r, best[r].1, max)
            });
            PieceReport { mode, relators: rels.len(), max_piece_length: max, witness, histogram }
        }
        PieceMode::Sampled { samples, seed } => {
            let n = rels.len();
            if n < 2 {
                return PieceReport { mode, relators: n, max_piece_length: 0, witness: None, histogram: Vec::new() };
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pairs: Vec<(usize, usize)> = (0..samples)
                .map(|_| {
                    let a = rng.gen_range(0..n);
                    let mut b = rng.gen_range(0..n - 1);
                    if b >= a {
                        b += 1;
                    }
                    (a, b)
                })
                .collect();
            let lens: Vec<usize> = pairs.par_iter().map(|&(a, b)| pair_piece(rels.lnf(a), rels.lnf(b))).collect();
            let max = lens.iter().copied().max().unwrap_or(0);
            let mut histogram = vec![0u64; max + 1];
            for &k in &lens {
                for h in &mut histogram[..=k] {
                    *h += 1;
                }
            }
            let witness = lens.iter().position(|&k| k == max).map(|i| witness(ctx, rels, pairs[i].0, pairs[i].1, max));
            PieceReport { mode, relators: n, max_piece_length: max, witness, histogram }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CprimeViolation {
    NotSymmetrized {
        status: Symmetrization,
    },
    /// `1/λ ≥ |r|` for a shortest relator `r`.
    TooShort {
        relator: AmalgamWord,
        length: usize,
    },
    /// A piece of `relator` shared with `other` has `|piece| ≥ λ|relator|`.
    LongPiece {
        relator: AmalgamWord,
        other: AmalgamWord,
        piece: AmalgamWord,
        length: usize,
        relator_length: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CprimeVerdict {
    #[serde(serialize_with = "ser_ratio")]
    pub lambda: Rational64,
    pub holds: bool,
    pub relators: usize,
    pub min_length: Option<usize>,
    pub max_piece_length: usize,
    pub violation: Option<CprimeViolation>,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_ratio(*r))
}

pub(crate) fn check_lambda(lambda: Rational64) -> Result<(), ScError> {
    if lambda <= Rational64::from_integer(0) || lambda >= Rational64::from_integer(1) {
        return Err(ScError::InvalidLambda(format!("0 < λ < 1, got {}", fmt_ratio(lambda))));
    }
    Ok(())
}

/// Decides `C'(λ)`: `1/λ < min |r|` and every piece `p` of every `r` has
/// `|p| < λ|r|`. Exact, exhaustive over pairs.
pub fn check_cprime(ctx: &AmalgamContext, rels: &RelatorSet, lambda: Rational64) -> Result<CprimeVerdict, ScError> {
    check_lambda(lambda)?;
    let min_length = rels.min_length();
    let mut verdict =
        CprimeVerdict { lambda, holds: false, relators: rels.len(), min_length, max_piece_length: 0, violation: None };
    if rels.status() != Symmetrization::Full {
        verdict.violation = Some(CprimeViolation::NotSymmetrized { status: rels.status() });
        return Ok(verdict);
    }
    let (num, den) = (*lambda.numer(), *lambda.denom());
    if let Some(m) = min_length {
        // 1/λ < m  ⟺  den < num·m
        if den >= num * m as i64 {
            let r = rels.relators().iter().find(|r| r.len() == m).expect("min exists");
            verdict.violation = Some(CprimeViolation::TooShort { relator: r.clone(), length: m });
            return Ok(verdict);
        }
    }
    let best = best_pieces(rels);
    verdict.max_piece_length = best.iter().map(|b| b.0).max().unwrap_or(0);
    // |p| < λ|r|  ⟺  |p|·den < num·|r|
    let bad = (0..rels.len()).find(|&id| (best[id].0 as i64) * den >= num * rels.get(id).len() as i64);
    match bad {
        Some(id) => {
            let (k, q) = best[id];
            let w = witness(ctx, rels, id, q, k);
            verdict.violation = Some(CprimeViolation::LongPiece {
                relator: w.relator,
                other: w.other,
                piece: w.piece,
                length: k,
                relator_length: rels.get(id).len(),
            });
        }
        None => verdict.holds = true,
    }
    Ok(verdict)
}

impl RelatorSet {
    /// Runs [`check_cprime`] and, when it holds, records `λ` on the set so
    /// the solvers accept it.
    pub fn certify(&mut self, ctx: &AmalgamContext, lambda: Rational64) -> Result<CprimeVerdict, ScError> {
        let v = check_cprime(ctx, self, lambda)?;
        if v.holds {
            self.set_lambda(Some(lambda));
        }
        Ok(v)
    }
}
