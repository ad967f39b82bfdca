use std::collections::HashSet;

use super::{FinGroupError, FiniteGroup};

/// Upper bound on the number of normalized polynomials [`cov_bounded`]
/// is willing to evaluate.
pub const MAX_POLYNOMIALS: usize = 1 << 22;

/// A semigroup polynomial `c₀ x c₁ x c₂ ⋯ x cₙ`; an absent coefficient
/// stands for the empty word.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    pub leading: Option<usize>,
    pub coeffs: Vec<Option<usize>>,
}

impl Polynomial {
    /// `x c₁ x c₂ ⋯ x cₙ`.
    pub fn new(coeffs: &[usize]) -> Self {
        Polynomial { leading: None, coeffs: coeffs.iter().map(|&c| Some(c)).collect() }
    }

    /// `x^m`.
    pub fn power(m: usize) -> Self {
        Polynomial { leading: None, coeffs: vec![None; m] }
    }

    pub fn with_leading(mut self, c0: usize) -> Self {
        self.leading = Some(c0);
        self
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, group: &FiniteGroup, x: usize) -> usize {
        let mut acc = self.leading.unwrap_or(group.identity());
        for c in &self.coeffs {
            acc = group.mul(acc, x);
            if let Some(c) = c {
                acc = group.mul(acc, *c);
            }
        }
        acc
    }
}

/// `{x : p(x) = b}` in ascending order, by evaluation at every element.
pub fn algebraic_set(group: &FiniteGroup, poly: &Polynomial, b: usize) -> Vec<usize> {
    group.elements().filter(|&x| poly.eval(group, x) == b).collect()
}

/// Smallest number of algebraic sets of degree at most `max_degree` whose
/// union is the whole group, searched up to `max_sets`.
///
/// Every algebraic set of degree `d` has the form `{x : x c₁ ⋯ x c_d = e}`,
/// since `c₀ P(x) = b` iff `P(x) b⁻¹ c₀ = e`; only those normalized
/// polynomials are enumerated. Exceeding `max_sets` (or
/// [`MAX_POLYNOMIALS`]) yields `BudgetExceeded` with the lower bound
/// established so far.
pub fn cov_bounded(group: &FiniteGroup, max_degree: usize, max_sets: usize) -> Result<usize, FinGroupError> {
    if max_degree == 0 {
        return Err(FinGroupError::ZeroDegree);
    }
    let n = group.order();
    let mut total = 0usize;
    for d in 1..=max_degree {
        total = n
            .checked_pow(d as u32)
            .and_then(|t| total.checked_add(t))
            .filter(|&t| t <= MAX_POLYNOMIALS)
            .ok_or(FinGroupError::BudgetExceeded { lower_bound: 1 })?;
    }

    let words = n.div_ceil(64);
    let mut sets: HashSet<Vec<u64>> = HashSet::new();
    let mut coeffs = Vec::new();
    for d in 1..=max_degree {
        coeffs.clear();
        coeffs.resize(d, 0usize);
        loop {
            let mut bits = vec![0u64; words];
            for x in group.elements() {
                let v = coeffs.iter().fold(group.identity(), |acc, &c| group.mul(group.mul(acc, x), c));
                if v == group.identity() {
                    bits[x / 64] |= 1 << (x % 64);
                }
            }
            if bits.iter().any(|&w| w != 0) {
                sets.insert(bits);
            }
            if !next_tuple(&mut coeffs, n) {
                break;
            }
        }
    }

    let mut sets: Vec<Vec<u64>> = sets.into_iter().collect();
    sets.sort_by_key(|s| std::cmp::Reverse(popcount(s)));
    // Drop sets contained in another one; they never help a minimum cover.
    let mut kept: Vec<Vec<u64>> = Vec::new();
    for s in sets {
        if !kept.iter().any(|k| is_subset(&s, k)) {
            kept.push(s);
        }
    }
    kept.sort();
    kept.sort_by_key(|s| std::cmp::Reverse(popcount(s)));

    let largest = kept.first().map(|s| popcount(s)).unwrap_or(0);
    let mut lower = if largest == 0 { usize::MAX } else { n.div_ceil(largest) };
    for k in lower.max(1)..=max_sets {
        let mut covered = vec![0u64; words];
        if cover(&kept, n, k, &mut covered) {
            return Ok(k);
        }
        lower = k + 1;
    }
    Err(FinGroupError::BudgetExceeded { lower_bound: lower.max(max_sets + 1) })
}

fn next_tuple(t: &mut [usize], base: usize) -> bool {
    for v in t.iter_mut().rev() {
        *v += 1;
        if *v < base {
            return true;
        }
        *v = 0;
    }
    false
}

fn popcount(s: &[u64]) -> usize {
    s.iter().map(|w| w.count_ones() as usize).sum()
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Depth-limited exact cover search: branch on the sets containing the
/// lowest uncovered element.
fn cover(sets: &[Vec<u64>], n: usize, slots: usize, covered: &mut Vec<u64>) -> bool {
    let Some(first) = (0..n).find(|&x| covered[x / 64] >> (x % 64) & 1 == 0) else {
        return true;
    };
    if slots == 0 {
        return false;
    }
    let uncovered = n - popcount(covered);
    let best = sets.first().map(|s| popcount(s)).unwrap_or(0);
    if best * slots < uncovered {
        return false;
    }
    for s in sets.iter().filter(|s| s[first / 64] >> (first % 64) & 1 == 1) {
        let saved = covered.clone();
        for (c, w) in covered.iter_mut().zip(s) {
            *c |= w;
        }
        if cover(sets, n, slots - 1, covered) {
            return true;
        }
        *covered = saved;
    }
    false
}
