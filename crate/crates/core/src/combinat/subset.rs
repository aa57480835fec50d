//! Subsets of `[n] = {1..n}` as bitsets.
//!
//! The numeric value of the bitset (bit `i` set for element `i`, bit 0
//! unused) is the subset's *binary key*; the induced total order is the
//! binary order used everywhere: `A <= B` iff `sum_{i in A} 2^i <= sum_{i in
//! B} 2^i`. Inclusion implies binary order. For disjoint nonempty sets the
//! binary order agrees with comparing maximal elements.

use std::fmt;

use serde::Serialize;

/// Ground sets are capped well below the bit width; enumeration explodes
/// long before this bound matters.
pub const MAX_GROUND: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset {
    bits: u32,
    n: u8,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_GROUND);
        Subset { bits: 0, n: n as u8 }
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_GROUND);
        let bits = if n == 0 { 0 } else { ((1u32 << n) - 1) << 1 };
        Subset { bits, n: n as u8 }
    }

    pub fn singleton(n: usize, i: usize) -> Self {
        Self::from_members(n, [i])
    }

    pub fn from_members(n: usize, it: impl IntoIterator<Item = usize>) -> Self {
        assert!(n <= MAX_GROUND);
        let mut bits = 0u32;
        for i in it {
            assert!((1..=n).contains(&i), "element {i} outside 1..={n}");
            bits |= 1 << i;
        }
        Subset { bits, n: n as u8 }
    }

    pub fn from_bits(n: usize, bits: u32) -> Self {
        assert!(n <= MAX_GROUND);
        assert_eq!(bits & !(Self::full(n).bits), 0, "bits outside ground set");
        Subset { bits, n: n as u8 }
    }

    /// Ground set size `n`.
    pub fn ground(&self) -> usize {
        self.n as usize
    }

    /// The binary key `sum_{i in A} 2^i`.
    pub fn key(&self) -> u32 {
        self.bits
    }

    pub fn card(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i >= 1 && i <= self.n as usize && self.bits & (1 << i) != 0
    }

    pub fn members(&self) -> Vec<usize> {
        (1..=self.n as usize).filter(|&i| self.contains(i)).collect()
    }

    pub fn min_member(&self) -> Option<usize> {
        if self.bits == 0 {
            None
        } else {
            Some(self.bits.trailing_zeros() as usize)
        }
    }

    pub fn max_member(&self) -> Option<usize> {
        if self.bits == 0 {
            None
        } else {
            Some(31 - self.bits.leading_zeros() as usize)
        }
    }

    fn check_same_ground(&self, other: &Self) {
        assert_eq!(self.n, other.n, "ground set mismatch");
    }

    pub fn union(&self, other: &Self) -> Self {
        self.check_same_ground(other);
        Subset { bits: self.bits | other.bits, n: self.n }
    }

    pub fn inter(&self, other: &Self) -> Self {
        self.check_same_ground(other);
        Subset { bits: self.bits & other.bits, n: self.n }
    }

    pub fn diff(&self, other: &Self) -> Self {
        self.check_same_ground(other);
        Subset { bits: self.bits & !other.bits, n: self.n }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_same_ground(other);
        self.bits & !other.bits == 0
    }

    pub fn is_strict_subset(&self, other: &Self) -> bool {
        self.is_subset(other) && self.bits != other.bits
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check_same_ground(other);
        self.bits & other.bits == 0
    }

    /// All nonempty subsets of `self`, ascending by binary key.
    pub fn nonempty_subsets(&self) -> Vec<Subset> {
        let mut out = Vec::new();
        // Standard submask enumeration, then reversed into ascending order.
        let m = self.bits;
        let mut s = m;
        while s != 0 {
            out.push(Subset { bits: s, n: self.n });
            s = (s - 1) & m;
        }
        out.reverse();
        out
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.members().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", m.join(","))
    }
}

impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_order_examples() {
        let n = 4;
        let a = Subset::from_members(n, [1]);
        let b = Subset::from_members(n, [2]);
        assert!(a < b);
        let c = Subset::from_members(n, [2, 3]);
        let d = Subset::from_members(n, [1, 4]);
        // keys 12 vs 18
        assert!(c < d);
        assert_eq!(c.key(), 12);
        assert_eq!(d.key(), 18);
    }

    #[test]
    fn inclusion_implies_binary_order() {
        let n = 5;
        let full = Subset::full(n);
        for a in full.nonempty_subsets() {
            for b in full.nonempty_subsets() {
                if a.is_subset(&b) {
                    assert!(a <= b, "{a} subset of {b} but not binary-below");
                }
            }
        }
    }

    #[test]
    fn disjoint_sets_compare_by_max_element() {
        let n = 6;
        let full = Subset::full(n);
        for a in full.nonempty_subsets() {
            for b in full.nonempty_subsets() {
                if a.is_disjoint(&b) && !a.is_empty() && !b.is_empty() {
                    let by_key = a.cmp(&b);
                    let by_max = a.max_member().cmp(&b.max_member());
                    assert_eq!(by_key, by_max, "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn subset_enumeration_is_sorted() {
        let s = Subset::from_members(4, [1, 3, 4]);
        let subs = s.nonempty_subsets();
        assert_eq!(subs.len(), 7);
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
    }
}
