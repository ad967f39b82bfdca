//! Finite groups given by verified Cayley tables.
//!
//! Elements are dense indices `0..order`. Every group carries its identity
//! and inverse tables, and subgroups are handled through
//! [`SubgroupEmbedding`], which materializes membership and double-coset
//! lookups once so that the separatedness and malnormality predicates are
//! table lookups.

mod algebraic;
mod cyclic;
mod spec;
mod subgroup;

pub use algebraic::{algebraic_set, cov_bounded, Polynomial, MAX_POLYNOMIALS};
pub use cyclic::CyclicIndex;
pub use spec::{FamilySpec, GroupSpec, SubgroupSpec};
pub use subgroup::{SearchConfig, Separation, SequenceReport, SubgroupEmbedding};

use thiserror::Error;

/// Largest order for which a dense Cayley table is built.
pub const MAX_ORDER: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinGroupError {
    #[error("group table is empty")]
    Empty,
    #[error("table row {row} has length {len}, expected {order}")]
    Ragged { row: usize, len: usize, order: usize },
    #[error("entry {value} at ({row}, {col}) is out of range for order {order}")]
    OutOfRange { row: usize, col: usize, value: usize, order: usize },
    #[error("not a Latin square: {axis} {index} repeats an entry")]
    NotLatinSquare { axis: &'static str, index: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("order {order} exceeds the associativity bound {bound}; pass the trust flag to accept it unchecked")]
    AssociativityUnchecked { order: usize, bound: usize },
    #[error("group of order {order} exceeds the supported maximum {max}")]
    TooLarge { order: usize, max: usize },
    #[error("bad family parameter: {0}")]
    BadFamily(String),
    #[error("element index {index} out of range for {group} (order {order})")]
    ElementOutOfRange { index: usize, group: String, order: usize },
    #[error("bad embedding at ({a}, {b}): {reason}")]
    BadEmbedding { a: usize, b: usize, reason: &'static str },
    #[error("sequence element {0} lies in the subgroup")]
    ElementInH(usize),
    #[error("polynomial degree must be at least 1")]
    ZeroDegree,
    #[error("covering budget exhausted; at least {lower_bound} algebraic sets are needed")]
    BudgetExceeded { lower_bound: usize },
}

/// Validation knobs for [`FiniteGroup::from_table`].
#[derive(Debug, Clone, Copy)]
pub struct GroupOptions {
    /// Associativity is verified exhaustively up to this order.
    pub assoc_bound: usize,
    /// Accept tables above `assoc_bound` without the cubic check.
    pub trust_unchecked: bool,
}

impl Default for GroupOptions {
    fn default() -> Self {
        GroupOptions { assoc_bound: 256, trust_unchecked: false }
    }
}

/// A finite group given by its Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverses: Vec<u32>,
    generator: Option<String>,
}

impl FiniteGroup {
    /// Validates a table and builds the group. Checks run in the order
    /// shape, range, Latin square, identity, associativity.
    pub fn from_table(
        name: impl Into<String>,
        rows: &[Vec<usize>],
        opts: &GroupOptions,
    ) -> Result<Self, FinGroupError> {
        let order = rows.len();
        if order == 0 {
            return Err(FinGroupError::Empty);
        }
        if order > MAX_ORDER {
            return Err(FinGroupError::TooLarge { order, max: MAX_ORDER });
        }
        let mut table = Vec::with_capacity(order * order);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != order {
                return Err(FinGroupError::Ragged { row, len: r.len(), order });
            }
            for (col, &value) in r.iter().enumerate() {
                if value >= order {
                    return Err(FinGroupError::OutOfRange { row, col, value, order });
                }
                table.push(value as u32);
            }
        }
        let check_assoc = if order <= opts.assoc_bound {
            true
        } else if opts.trust_unchecked {
            false
        } else {
            return Err(FinGroupError::AssociativityUnchecked { order, bound: opts.assoc_bound });
        };
        Self::validated(name.into(), order, table, check_assoc)
    }

    /// Builds a group from a table produced by a trusted construction. The
    /// Latin-square and identity checks still run; associativity is checked
    /// when the order is within `assoc_bound`.
    pub(crate) fn from_trusted(
        name: String,
        order: usize,
        table: Vec<u32>,
        assoc_bound: usize,
    ) -> Result<Self, FinGroupError> {
        if order > MAX_ORDER {
            return Err(FinGroupError::TooLarge { order, max: MAX_ORDER });
        }
        Self::validated(name, order, table, order <= assoc_bound)
    }

    fn validated(name: String, order: usize, table: Vec<u32>, check_assoc: bool) -> Result<Self, FinGroupError> {
        let at = |a: usize, b: usize| table[a * order + b] as usize;
        let mut seen = vec![usize::MAX; order];
        for row in 0..order {
            for col in 0..order {
                let v = at(row, col);
                if seen[v] == row {
                    return Err(FinGroupError::NotLatinSquare { axis: "row", index: row });
                }
                seen[v] = row;
            }
        }
        seen.fill(usize::MAX);
        for col in 0..order {
            for row in 0..order {
                let v = at(row, col);
                if seen[v] == col {
                    return Err(FinGroupError::NotLatinSquare { axis: "column", index: col });
                }
                seen[v] = col;
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(FinGroupError::NoIdentity)?;
        if check_assoc {
            for a in 0..order {
                for b in 0..order {
                    let ab = at(a, b);
                    for c in 0..order {
                        if at(ab, c) != at(a, at(b, c)) {
                            return Err(FinGroupError::NonAssociative { a, b, c });
                        }
                    }
                }
            }
        }
        let mut inverses = vec![0u32; order];
        for (x, inv) in inverses.iter_mut().enumerate() {
            // Latin rows guarantee exactly one solution.
            *inv = (0..order).find(|&y| at(x, y) == identity).unwrap() as u32;
        }
        Ok(FiniteGroup { name, order, table, identity, inverses, generator: None })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// `a^k` for a non-negative exponent.
    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    /// Order of an element.
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        self.elements().map(|a| self.element_order(a)).fold(1, lcm)
    }

    /// Product of a sequence of elements.
    pub fn product<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn check_element(&self, index: usize) -> Result<usize, FinGroupError> {
        if index < self.order {
            Ok(index)
        } else {
            Err(FinGroupError::ElementOutOfRange { index, group: self.name.clone(), order: self.order })
        }
    }

    /// Table rows, for serialization.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.iter().map(|&v| v as usize).collect()).collect()
    }

    /// Label of a cyclic generator, used for power notation in display.
    pub fn generator_label(&self) -> Option<&str> {
        self.generator.as_deref()
    }

    pub fn with_generator_label(mut self, label: impl Into<String>) -> Self {
        self.generator = Some(label.into());
        self
    }

    /// Human-readable element name: `a^k` when the group is cyclic with a
    /// generator label, the bare index otherwise.
    pub fn element_name(&self, x: usize) -> String {
        match &self.generator {
            Some(_) if x == self.identity => "e".to_string(),
            Some(g) if x == 1 => g.clone(),
            Some(g) => format!("{g}^{x}"),
            None => x.to_string(),
        }
    }

    /// Cyclic group `Z_n` with element `k` standing for the `k`-th power of
    /// the generator.
    pub fn cyclic(n: usize) -> Result<Self, FinGroupError> {
        if n == 0 {
            return Err(FinGroupError::BadFamily("cyclic group needs n >= 1".into()));
        }
        let table = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
        Self::from_trusted(format!("C{n}"), n, table, 0)
    }

    /// Dihedral group of order `2n`; element `k + n*f` is `r^k s^f`.
    pub fn dihedral(n: usize) -> Result<Self, FinGroupError> {
        if n == 0 {
            return Err(FinGroupError::BadFamily("dihedral group needs n >= 1".into()));
        }
        let order = 2 * n;
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            let (k1, f1) = (a % n, a / n);
            for b in 0..order {
                let (k2, f2) = (b % n, b / n);
                let k = if f1 == 0 { (k1 + k2) % n } else { (k1 + n - k2) % n };
                table.push((k + n * (f1 ^ f2)) as u32);
            }
        }
        Self::from_trusted(format!("D{n}"), order, table, 0)
    }

    /// Symmetric group on `n` points, permutations in lexicographic order
    /// (index 0 is the identity). The product is composition `(st)(i) = s(t(i))`.
    pub fn symmetric(n: usize) -> Result<Self, FinGroupError> {
        if n == 0 || n > 6 {
            return Err(FinGroupError::BadFamily(format!("symmetric group needs 1 <= n <= 6, got {n}")));
        }
        let perms = lex_permutations(n);
        let index: std::collections::HashMap<&[u8], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let order = perms.len();
        let mut table = Vec::with_capacity(order * order);
        let mut buf = vec![0u8; n];
        for s in &perms {
            for t in &perms {
                for i in 0..n {
                    buf[i] = s[t[i] as usize];
                }
                table.push(index[buf.as_slice()] as u32);
            }
        }
        Self::from_trusted(format!("S{n}"), order, table, 0)
    }

    /// Direct product; the first factor is the most significant digit of
    /// the mixed-radix element index.
    pub fn direct_product(parts: &[FiniteGroup]) -> Result<Self, FinGroupError> {
        if parts.is_empty() {
            return Err(FinGroupError::BadFamily("product needs at least one part".into()));
        }
        let order = parts.iter().try_fold(1usize, |acc, g| acc.checked_mul(g.order).filter(|&o| o <= MAX_ORDER));
        let order = order.ok_or(FinGroupError::TooLarge { order: usize::MAX, max: MAX_ORDER })?;
        let digits = |mut x: usize| {
            let mut d = vec![0; parts.len()];
            for (i, g) in parts.iter().enumerate().rev() {
                d[i] = x % g.order;
                x /= g.order;
            }
            d
        };
        let all: Vec<Vec<usize>> = (0..order).map(digits).collect();
        let mut table = Vec::with_capacity(order * order);
        for a in &all {
            for b in &all {
                let mut idx = 0;
                for (i, g) in parts.iter().enumerate() {
                    idx = idx * g.order + g.mul(a[i], b[i]);
                }
                table.push(idx as u32);
            }
        }
        let name = parts.iter().map(|g| g.name.as_str()).collect::<Vec<_>>().join("x");
        Self::from_trusted(name, order, table, 0)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn lex_permutations(n: usize) -> Vec<Vec<u8>> {
    let mut p: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
        out.push(p.clone());
    }
}
