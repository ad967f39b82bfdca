use std::collections::{BTreeMap, HashMap, HashSet};
use std::ops::Range;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::amalgam::{AmalgamContext, AmalgamWord, Letter, Side, Syllable};

use super::ScError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetrization {
    Raw,
    Half,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HullMode {
    Half,
    Full,
}

impl From<HullMode> for Symmetrization {
    fn from(m: HullMode) -> Self {
        match m {
            HullMode::Half => Symmetrization::Half,
            HullMode::Full => Symmetrization::Full,
        }
    }
}

/// First two letters of a relator's left normal form (raw packed
/// letters, 0 when absent). Relators agreeing up to a right factor in `H`
/// on their first two syllables share a key.
pub type PrefixKey = (u32, u32);

/// A finite set of relators, sorted and deduplicated, with the left
/// normal forms and the prefix index used by piece enumeration and
/// Greendlinger search.
#[derive(Debug, Clone)]
pub struct RelatorSet {
    relators: Vec<AmalgamWord>,
    status: Symmetrization,
    lambda: Option<Rational64>,
    lnf: Vec<u32>,
    lnf_off: Vec<u32>,
    cyclic: Vec<bool>,
    /// Relator ids in lexicographic order of their left normal forms.
    sorted: Vec<u32>,
    prefix_index: HashMap<PrefixKey, Range<u32>>,
}

impl RelatorSet {
    /// Builds the indexes over `relators` and records `status` as given.
    /// Only the hull constructors establish `Half` or `Full` themselves;
    /// callers passing those claim the closure property.
    pub fn new(ctx: &AmalgamContext, mut relators: Vec<AmalgamWord>, status: Symmetrization) -> RelatorSet {
        relators.par_sort_unstable();
        relators.dedup();
        let lnfs: Vec<Vec<Letter>> = relators.par_iter().map(|r| ctx.lnf(r).0).collect();
        let cyclic: Vec<bool> = relators.par_iter().map(|r| ctx.is_cyclically_reduced(r)).collect();
        let mut lnf_off = Vec::with_capacity(relators.len() + 1);
        lnf_off.push(0u32);
        let mut lnf = Vec::with_capacity(lnfs.iter().map(|l| l.len()).sum());
        for l in &lnfs {
            lnf.extend(l.iter().map(|x| x.raw()));
            lnf_off.push(lnf.len() as u32);
        }
        let mut buckets: BTreeMap<PrefixKey, Vec<u32>> = BTreeMap::new();
        for (id, l) in lnfs.iter().enumerate() {
            let key = (l.first().map_or(0, |x| x.raw()), l.get(1).map_or(0, |x| x.raw()));
            buckets.entry(key).or_default().push(id as u32);
        }
        let mut buckets: Vec<(PrefixKey, Vec<u32>)> = buckets.into_iter().collect();
        buckets.par_iter_mut().for_each(|(_, ids)| {
            ids.sort_by(|&a, &b| lnfs[a as usize].cmp(&lnfs[b as usize]));
        });
        let mut sorted = Vec::with_capacity(relators.len());
        let mut prefix_index = HashMap::with_capacity(buckets.len());
        for (key, ids) in buckets {
            let start = sorted.len() as u32;
            sorted.extend(ids);
            prefix_index.insert(key, start..sorted.len() as u32);
        }
        RelatorSet { relators, status, lambda: None, lnf, lnf_off, cyclic, sorted, prefix_index }
    }

    pub fn empty(ctx: &AmalgamContext) -> RelatorSet {
        RelatorSet::new(ctx, Vec::new(), Symmetrization::Full)
    }

    pub fn relators(&self) -> &[AmalgamWord] {
        &self.relators
    }

    pub fn len(&self) -> usize {
        self.relators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn get(&self, id: usize) -> &AmalgamWord {
        &self.relators[id]
    }

    pub fn contains(&self, w: &AmalgamWord) -> bool {
        self.relators.binary_search(w).is_ok()
    }

    pub fn id_of(&self, w: &AmalgamWord) -> Option<usize> {
        self.relators.binary_search(w).ok()
    }

    pub fn status(&self) -> Symmetrization {
        self.status
    }

    /// The `λ` for which `C'(λ)` was established by [`certify`](Self::certify).
    pub fn lambda(&self) -> Option<Rational64> {
        self.lambda
    }

    pub(crate) fn set_lambda(&mut self, lambda: Option<Rational64>) {
        self.lambda = lambda;
    }

    /// Left normal form of relator `id` as packed letters.
    pub fn lnf(&self, id: usize) -> &[u32] {
        &self.lnf[self.lnf_off[id] as usize..self.lnf_off[id + 1] as usize]
    }

    pub fn is_cyclic(&self, id: usize) -> bool {
        self.cyclic[id]
    }

    /// Relator ids ordered by left normal form.
    pub fn sorted_ids(&self) -> &[u32] {
        &self.sorted
    }

    /// Ids of the relators whose left normal form starts with `key`,
    /// ordered by left normal form.
    pub fn with_prefix(&self, key: PrefixKey) -> &[u32] {
        match self.prefix_index.get(&key) {
            Some(r) => &self.sorted[r.start as usize..r.end as usize],
            None => &[],
        }
    }

    pub fn prefix_keys(&self) -> usize {
        self.prefix_index.len()
    }

    pub fn min_length(&self) -> Option<usize> {
        self.relators.iter().map(|r| r.len()).min()
    }

    /// One relator literal per line, as JSON strings.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.relators {
            out.push_str(&serde_json::to_string(r).expect("word literal"));
            out.push('\n');
        }
        out
    }

    /// Reads the format written by [`to_json_lines`](Self::to_json_lines).
    /// Lines are raw literals and are normalized.
    pub fn from_json_lines(ctx: &AmalgamContext, text: &str, status: Symmetrization) -> Result<RelatorSet, String> {
        let mut rels = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let lit: String = serde_json::from_str(line).map_err(|e| format!("line {}: {e}", n + 1))?;
            rels.push(ctx.parse_word(&lit).map_err(|e| format!("line {}: {e}", n + 1))?);
        }
        Ok(RelatorSet::new(ctx, rels, status))
    }
}

fn require_cyclic(ctx: &AmalgamContext, r: &AmalgamWord) -> Result<(), ScError> {
    if r.len() < 2 || !ctx.is_cyclically_reduced(r) {
        return Err(ScError::NotCyclicallyReduced { word: r.clone() });
    }
    Ok(())
}

/// The explicit hull of one cyclically reduced word, unsorted.
fn hull_words(ctx: &AmalgamContext, r: &AmalgamWord, mode: HullMode) -> Vec<AmalgamWord> {
    let x = ctx.canonical_letters(r);
    let n = x.len();
    let mut out = Vec::new();
    let mut raw = Vec::with_capacity(n + 2);
    let mut emit = |side: Side, c: usize, body: &mut dyn Iterator<Item = Letter>, out: &mut Vec<AmalgamWord>| {
        raw.clear();
        raw.push(Syllable::letter(side, c));
        raw.extend(body.map(|l| Syllable::letter(l.side(), l.elem())));
        raw.push(Syllable::letter(side, ctx.factor(side).inv(c)));
        out.push(ctx.normalize(&raw).expect("elements in range"));
    };
    for i in 0..n {
        let side = x[i].side();
        let f = ctx.factor(side);
        for c in f.elements() {
            // c ∉ H·xᵢ⁻¹, i.e. c·xᵢ ∉ H
            if !ctx.in_h(side, f.mul(c, x[i].elem())) {
                let mut body = (0..n).map(|k| x[(i + k) % n]);
                emit(side, c, &mut body, &mut out);
            }
        }
        if mode == HullMode::Full {
            let xi_inv = f.inv(x[i].elem());
            for d in f.elements() {
                // d ∉ H·xᵢ, i.e. d·xᵢ⁻¹ ∉ H
                if !ctx.in_h(side, f.mul(d, xi_inv)) {
                    let mut body = (0..n).map(|k| {
                        let l = x[(i + n - k) % n];
                        Letter::new(l.side(), ctx.factor(l.side()).inv(l.elem()))
                    });
                    emit(side, d, &mut body, &mut out);
                }
            }
        }
    }
    out
}

/// Half-symmetrized or symmetrized hull of `{r}` by the rotation and
/// conjugation formula.
pub fn hull(ctx: &AmalgamContext, r: &AmalgamWord, mode: HullMode) -> Result<RelatorSet, ScError> {
    hull_of_set(ctx, std::slice::from_ref(r), mode)
}

/// Union of the per-element hulls.
pub fn hull_of_set(ctx: &AmalgamContext, rels: &[AmalgamWord], mode: HullMode) -> Result<RelatorSet, ScError> {
    for r in rels {
        require_cyclic(ctx, r)?;
    }
    let words: Vec<AmalgamWord> = rels.par_iter().flat_map_iter(|r| hull_words(ctx, r, mode)).collect();
    Ok(RelatorSet::new(ctx, words, mode.into()))
}

/// The hull as a fixpoint: starting from `seeds`, conjugate by every
/// element of both factors, keep the weakly cyclically reduced results
/// (and, in full mode, their inverses) until nothing new appears.
pub fn hull_closure(ctx: &AmalgamContext, seeds: &[AmalgamWord], mode: HullMode) -> Result<RelatorSet, ScError> {
    for r in seeds {
        require_cyclic(ctx, r)?;
    }
    let mut seen: HashSet<AmalgamWord> = HashSet::new();
    let mut frontier = Vec::new();
    for r in seeds {
        let mut start = vec![r.clone()];
        if mode == HullMode::Full {
            start.push(ctx.invert(r));
        }
        for w in start {
            if seen.insert(w.clone()) {
                frontier.push(w);
            }
        }
    }
    while !frontier.is_empty() {
        let found: Vec<Vec<AmalgamWord>> = frontier
            .par_iter()
            .map(|w| {
                let mut out = Vec::new();
                for side in Side::BOTH {
                    for c in ctx.factor(side).elements() {
                        let v = ctx.conjugate_by_letter(side, c, w);
                        if ctx.is_weakly_cyclically_reduced(&v) {
                            if mode == HullMode::Full {
                                out.push(ctx.invert(&v));
                            }
                            out.push(v);
                        }
                    }
                }
                out
            })
            .collect();
        frontier = Vec::new();
        for w in found.into_iter().flatten() {
            if !seen.contains(&w) {
                seen.insert(w.clone());
                frontier.push(w);
            }
        }
    }
    Ok(RelatorSet::new(ctx, seen.into_iter().collect(), mode.into()))
}

impl RelatorSet {
    /// Checks the closure rule one step deep: every weakly cyclically
    /// reduced conjugate by a single factor element, and in full mode every
    /// inverse, is again a member. Returns the first missing word.
    pub fn closure_gap(&self, ctx: &AmalgamContext, mode: HullMode) -> Option<AmalgamWord> {
        self.relators.par_iter().find_map_first(|w| {
            if !ctx.is_weakly_cyclically_reduced(w) {
                return Some(w.clone());
            }
            if mode == HullMode::Full {
                let wi = ctx.invert(w);
                if !self.contains(&wi) {
                    return Some(wi);
                }
            }
            for side in Side::BOTH {
                for c in ctx.factor(side).elements() {
                    let v = ctx.conjugate_by_letter(side, c, w);
                    if ctx.is_weakly_cyclically_reduced(&v) && !self.contains(&v) {
                        return Some(v);
                    }
                }
            }
            None
        })
    }
}
