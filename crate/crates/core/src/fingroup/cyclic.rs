use std::ops::{Add, Neg, Sub};

/// An index in `0..n` with addition and subtraction modulo `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicIndex {
    value: usize,
    modulus: usize,
}

impl CyclicIndex {
    /// Returns `None` unless `value < modulus`.
    pub fn new(value: usize, modulus: usize) -> Option<Self> {
        (value < modulus).then_some(CyclicIndex { value, modulus })
    }

    /// Reduces an arbitrary integer into range.
    pub fn wrapping(value: i64, modulus: usize) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let m = modulus as i64;
        CyclicIndex { value: value.rem_euclid(m) as usize, modulus }
    }

    pub fn value(self) -> usize {
        self.value
    }

    pub fn modulus(self) -> usize {
        self.modulus
    }

    /// `self ⊕ k` for a plain offset.
    pub fn offset(self, k: usize) -> Self {
        CyclicIndex { value: (self.value + k % self.modulus) % self.modulus, modulus: self.modulus }
    }

    /// `self ⊖ k` for a plain offset.
    pub fn back(self, k: usize) -> Self {
        let k = k % self.modulus;
        CyclicIndex { value: (self.value + self.modulus - k) % self.modulus, modulus: self.modulus }
    }
}

impl Add for CyclicIndex {
    type Output = CyclicIndex;

    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value + rhs.value;
        let value = if s < self.modulus { s } else { s - self.modulus };
        CyclicIndex { value, modulus: self.modulus }
    }
}

impl Sub for CyclicIndex {
    type Output = CyclicIndex;

    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let value =
            if rhs.value <= self.value { self.value - rhs.value } else { self.value + self.modulus - rhs.value };
        CyclicIndex { value, modulus: self.modulus }
    }
}

impl Neg for CyclicIndex {
    type Output = CyclicIndex;

    fn neg(self) -> Self {
        CyclicIndex { value: 0, modulus: self.modulus } - self
    }
}
