use serde::Serialize;

use super::{FinGroupError, FiniteGroup};

/// Pairwise condition used by [`SubgroupEmbedding::check_sequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Separation {
    /// `g_i ∉ H g_j H` for distinct `i, j`.
    Plain,
    /// `g_i ∉ H g_j H ∪ H g_j⁻¹ H` for distinct `i, j`.
    PlusMinus,
}

/// Verdict of a pairwise predicate with the first violating pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SequenceReport {
    pub verdict: bool,
    pub witness: Option<(usize, usize)>,
}

impl SequenceReport {
    pub fn pass() -> Self {
        SequenceReport { verdict: true, witness: None }
    }

    pub fn fail(i: usize, j: usize) -> Self {
        SequenceReport { verdict: false, witness: Some((i, j)) }
    }
}

/// Bounds for [`SubgroupEmbedding::find_separated`].
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    /// The exhaustive fallback runs when the candidate pool (outside `H`)
    /// has at most this many elements.
    pub exhaustive_limit: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { exhaustive_limit: 64 }
    }
}

/// An injective homomorphism `sub -> sup`, with membership and
/// double-coset tables over `sup`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupEmbedding {
    sub: FiniteGroup,
    sup: FiniteGroup,
    image: Vec<usize>,
    preimage: Vec<Option<usize>>,
    double_coset: Vec<u32>,
    double_coset_count: usize,
}

impl SubgroupEmbedding {
    /// Checks that `image` is an injective homomorphism.
    pub fn new(sub: FiniteGroup, sup: FiniteGroup, image: Vec<usize>) -> Result<Self, FinGroupError> {
        if image.len() != sub.order() {
            return Err(FinGroupError::BadEmbedding {
                a: image.len(),
                b: sub.order(),
                reason: "image length differs from subgroup order",
            });
        }
        let mut preimage = vec![None; sup.order()];
        for (a, &x) in image.iter().enumerate() {
            sup.check_element(x)?;
            if let Some(b) = preimage[x] {
                return Err(FinGroupError::BadEmbedding { a: b, b: a, reason: "not injective" });
            }
            preimage[x] = Some(a);
        }
        for a in sub.elements() {
            for b in sub.elements() {
                if image[sub.mul(a, b)] != sup.mul(image[a], image[b]) {
                    return Err(FinGroupError::BadEmbedding { a, b, reason: "not a homomorphism" });
                }
            }
        }
        Ok(Self::finish(sub, sup, image, preimage))
    }

    /// The subgroup of `sup` generated by `gens`, with elements ordered by
    /// their index in `sup`.
    pub fn generated(sup: &FiniteGroup, gens: &[usize]) -> Result<Self, FinGroupError> {
        for &g in gens {
            sup.check_element(g)?;
        }
        let mut member = vec![false; sup.order()];
        member[sup.identity()] = true;
        let mut elems = vec![sup.identity()];
        let mut frontier = elems.clone();
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = sup.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    elems.push(y);
                    frontier.push(y);
                }
            }
        }
        elems.sort_unstable();
        let mut preimage = vec![None; sup.order()];
        for (i, &x) in elems.iter().enumerate() {
            preimage[x] = Some(i);
        }
        let k = elems.len();
        let table: Vec<u32> = elems
            .iter()
            .flat_map(|&a| elems.iter().map(move |&b| (a, b)))
            .map(|(a, b)| preimage[sup.mul(a, b)].unwrap() as u32)
            .collect();
        let gens_txt = gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(",");
        let sub = FiniteGroup::from_trusted(format!("<{gens_txt}> in {}", sup.name()), k, table, 0)?;
        Ok(Self::finish(sub, sup.clone(), elems, preimage))
    }

    /// The trivial subgroup `{e}`.
    pub fn trivial(sup: &FiniteGroup) -> Self {
        Self::generated(sup, &[]).expect("trivial subgroup")
    }

    fn finish(sub: FiniteGroup, sup: FiniteGroup, image: Vec<usize>, preimage: Vec<Option<usize>>) -> Self {
        let mut double_coset = vec![u32::MAX; sup.order()];
        let mut count = 0u32;
        for x in sup.elements() {
            if double_coset[x] != u32::MAX {
                continue;
            }
            for &h in &image {
                let hx = sup.mul(h, x);
                for &k in &image {
                    double_coset[sup.mul(hx, k)] = count;
                }
            }
            count += 1;
        }
        SubgroupEmbedding { sub, sup, image, preimage, double_coset, double_coset_count: count as usize }
    }

    pub fn sub(&self) -> &FiniteGroup {
        &self.sub
    }

    pub fn sup(&self) -> &FiniteGroup {
        &self.sup
    }

    /// Image of each subgroup element in `sup`.
    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn map(&self, h: usize) -> usize {
        self.image[h]
    }

    /// Subgroup index of a `sup` element, if it lies in the image.
    pub fn preimage(&self, x: usize) -> Option<usize> {
        self.preimage[x]
    }

    pub fn contains(&self, x: usize) -> bool {
        self.preimage[x].is_some()
    }

    /// Identifier of the double coset `HxH`, dense in `0..double_coset_count()`.
    pub fn double_coset_id(&self, x: usize) -> usize {
        self.double_coset[x] as usize
    }

    pub fn double_coset_count(&self) -> usize {
        self.double_coset_count
    }

    /// The double coset `HxH` as a sorted list of `sup` elements.
    pub fn double_coset(&self, x: usize) -> Vec<usize> {
        let id = self.double_coset[x];
        self.sup.elements().filter(|&y| self.double_coset[y] == id).collect()
    }

    /// The image of `xHx⁻¹` as an embedding of the same subgroup.
    pub fn conjugate(&self, x: usize) -> Self {
        let xi = self.sup.inv(x);
        let image = self.image.iter().map(|&h| self.sup.mul(self.sup.mul(x, h), xi)).collect();
        Self::new(self.sub.clone(), self.sup.clone(), image).expect("conjugation is an embedding")
    }

    /// `g ∉ H` and `H ∩ gHg⁻¹ = {e}`.
    pub fn is_element_malnormal(&self, g: usize) -> bool {
        !self.contains(g) && self.malnormal_witness(g).is_none()
    }

    /// Some `h ∈ H∖{e}` with `ghg⁻¹ ∈ H`.
    fn malnormal_witness(&self, g: usize) -> Option<usize> {
        let sup = &self.sup;
        let gi = sup.inv(g);
        self.image.iter().copied().filter(|&h| h != sup.identity()).find(|&h| self.contains(sup.mul(sup.mul(g, h), gi)))
    }

    /// Every `x ∈ sup∖H` satisfies `H ∩ xHx⁻¹ = {e}`. The witness is
    /// `(x, h)` with `xhx⁻¹ ∈ H` for some `h ≠ e`.
    pub fn is_malnormal(&self) -> SequenceReport {
        for x in self.sup.elements().filter(|&x| !self.contains(x)) {
            if let Some(h) = self.malnormal_witness(x) {
                return SequenceReport::fail(x, h);
            }
        }
        SequenceReport::pass()
    }

    /// Index of the first sequence element that is not `H`-malnormal.
    pub fn first_non_malnormal(&self, seq: &[usize]) -> Option<usize> {
        seq.iter().position(|&g| !self.is_element_malnormal(g))
    }

    fn conflict(&self, a: usize, b: usize, sep: Separation) -> bool {
        let da = self.double_coset[a];
        da == self.double_coset[b] || (sep == Separation::PlusMinus && da == self.double_coset[self.sup.inv(b)])
    }

    /// Checks the pairwise double-coset condition over all `i != j`. The
    /// witness is the first violating `(i, j)` in lexicographic order.
    pub fn check_sequence(&self, seq: &[usize], sep: Separation) -> Result<SequenceReport, FinGroupError> {
        for (i, &g) in seq.iter().enumerate() {
            self.sup.check_element(g)?;
            if self.contains(g) {
                return Err(FinGroupError::ElementInH(i));
            }
        }
        for i in 0..seq.len() {
            for j in 0..seq.len() {
                if i != j && self.conflict(seq[i], seq[j], sep) {
                    return Ok(SequenceReport::fail(i, j));
                }
            }
        }
        Ok(SequenceReport::pass())
    }

    pub fn is_separated(&self, seq: &[usize]) -> Result<SequenceReport, FinGroupError> {
        self.check_sequence(seq, Separation::Plain)
    }

    pub fn is_pm_separated(&self, seq: &[usize]) -> Result<SequenceReport, FinGroupError> {
        self.check_sequence(seq, Separation::PlusMinus)
    }

    /// Looks for a separated sequence of length `n` inside `pool∖H`.
    ///
    /// A greedy pass over the pool in ascending order runs first; if it
    /// falls short and the candidate pool is within the configured limit,
    /// a lexicographic exhaustive search decides the question.
    pub fn find_separated(&self, pool: &[usize], n: usize, sep: Separation, cfg: &SearchConfig) -> Option<Vec<usize>> {
        let mut cand: Vec<usize> =
            pool.iter().copied().filter(|&x| x < self.sup.order() && !self.contains(x)).collect();
        cand.sort_unstable();
        cand.dedup();
        if n == 0 {
            return Some(Vec::new());
        }

        let mut chosen: Vec<usize> = Vec::with_capacity(n);
        for &x in &cand {
            if chosen.iter().all(|&y| !self.conflict(x, y, sep)) {
                chosen.push(x);
                if chosen.len() == n {
                    return Some(chosen);
                }
            }
        }

        if cand.len() > cfg.exhaustive_limit {
            return None;
        }
        let mut stack = Vec::with_capacity(n);
        self.extend_lex(&cand, 0, n, sep, &mut stack).then_some(stack)
    }

    fn extend_lex(&self, cand: &[usize], from: usize, n: usize, sep: Separation, stack: &mut Vec<usize>) -> bool {
        if stack.len() == n {
            return true;
        }
        let need = n - stack.len();
        for k in from..cand.len() {
            if cand.len() - k < need {
                break;
            }
            let x = cand[k];
            if stack.iter().all(|&y| !self.conflict(x, y, sep)) {
                stack.push(x);
                if self.extend_lex(cand, k + 1, n, sep, stack) {
                    return true;
                }
                stack.pop();
            }
        }
        false
    }

    pub fn find_pm_separated(&self, pool: &[usize], n: usize, cfg: &SearchConfig) -> Option<Vec<usize>> {
        self.find_separated(pool, n, Separation::PlusMinus, cfg)
    }
}
