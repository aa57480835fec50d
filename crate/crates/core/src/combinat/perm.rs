//! Permutations of `[n] = {1..n}`.
//!
//! Composition follows `(s.compose(&t))(i) = s(t(i))`: the right factor acts
//! first. Tuples are permuted by `(sigma . x)_i = x_{sigma^{-1}(i)}`, so the
//! entry at position `sigma(i)` of the result is the old entry at `i`.

use std::fmt;

use serde::Serialize;

use super::partition::IntPartition;
use super::subset::Subset;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    img: Vec<u8>, // img[i-1] = sigma(i), values 1..=n
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { img: (1..=n as u8).collect() }
    }

    pub fn from_images(img: Vec<usize>) -> Self {
        let n = img.len();
        let mut seen = vec![false; n + 1];
        for &v in &img {
            assert!((1..=n).contains(&v), "image {v} outside 1..={n}");
            assert!(!seen[v], "duplicate image {v}");
            seen[v] = true;
        }
        Permutation { img: img.into_iter().map(|v| v as u8).collect() }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        assert!(a != b && a >= 1 && b >= 1 && a <= n && b <= n);
        let mut img: Vec<usize> = (1..=n).collect();
        img.swap(a - 1, b - 1);
        Self::from_images(img)
    }

    /// The n-cycle `(1 2 ... n)`.
    pub fn full_cycle(n: usize) -> Self {
        let img: Vec<usize> = (1..=n).map(|i| i % n + 1).collect();
        Self::from_images(img)
    }

    pub fn n(&self) -> usize {
        self.img.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.img[i - 1] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.img.iter().map(|&v| v as usize).collect()
    }

    /// `self . other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        Permutation {
            img: (1..=self.n()).map(|i| self.img[other.apply(i) - 1]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut img = vec![0u8; self.n()];
        for i in 1..=self.n() {
            img[self.apply(i) - 1] = i as u8;
        }
        Permutation { img }
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &v)| v as usize == i + 1)
    }

    pub fn act_subset(&self, s: &Subset) -> Subset {
        assert_eq!(self.n(), s.ground());
        Subset::from_members(s.ground(), s.members().into_iter().map(|i| self.apply(i)))
    }

    /// Sign of the permutation, `(-1)^{n - #cycles}`.
    pub fn sign(&self) -> i64 {
        if (self.n() - self.cycle_type().len()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn cycle_type(&self) -> IntPartition {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        let mut parts = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.apply(i);
                len += 1;
            }
            parts.push(len);
        }
        IntPartition::new(parts)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.img.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", v.join(","))
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images().serialize(s)
    }
}

/// All of `S_n`, sorted by image vector.
pub fn all_perms(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut img: Vec<usize> = Vec::new();
    let mut used = vec![false; n + 1];
    fn rec(n: usize, img: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        if img.len() == n {
            out.push(Permutation::from_images(img.clone()));
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                img.push(v);
                rec(n, img, used, out);
                img.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut img, &mut used, &mut out);
    out
}

/// The permutation of `[|a|]` induced by `s` between the block `a` and its
/// image: position p maps to the rank of s(p-th member of a) inside s(a).
pub fn induced_block_perm(s: &Permutation, a: &crate::combinat::Subset) -> Permutation {
    let from = a.members();
    let to = s.act_subset(a).members();
    let images = from
        .iter()
        .map(|&m| {
            let target = s.apply(m);
            to.iter().position(|&x| x == target).unwrap() + 1
        })
        .collect();
    Permutation::from_images(images)
}

/// The canonical representative of a conjugacy class: cycles of the given
/// lengths on consecutive runs of `[n]`, longest first.
pub fn class_representative(lambda: &IntPartition) -> Permutation {
    let n = lambda.n();
    let mut img: Vec<usize> = (1..=n).collect();
    let mut start = 1;
    for &part in lambda.parts() {
        for i in start..start + part - 1 {
            img[i - 1] = i + 1;
        }
        img[start + part - 2] = start;
        start += part;
    }
    Permutation::from_images(img)
}

/// A generating set: the transposition `(1 2)` and the full cycle.
pub fn generators(n: usize) -> Vec<Permutation> {
    if n <= 1 {
        return vec![Permutation::identity(n)];
    }
    let mut gens = vec![Permutation::transposition(n, 1, 2)];
    if n >= 3 {
        gens.push(Permutation::full_cycle(n));
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_applies_right_factor_first() {
        // s = (1 2), t = (2 3); (s.compose(t))(3) = s(t(3)) = s(2) = 1.
        let s = Permutation::transposition(3, 1, 2);
        let t = Permutation::transposition(3, 2, 3);
        let st = s.compose(&t);
        assert_eq!(st.apply(3), 1);
        assert_eq!(st.apply(1), 2);
        assert_eq!(st.apply(2), 3);
    }

    #[test]
    fn inverse_and_identity() {
        for p in all_perms(4) {
            assert!(p.compose(&p.inverse()).is_identity());
            assert!(p.inverse().compose(&p).is_identity());
        }
    }

    #[test]
    fn counts_and_cycle_types() {
        assert_eq!(all_perms(4).len(), 24);
        let c = Permutation::full_cycle(5);
        assert_eq!(c.cycle_type().parts(), &[5]);
        let t = Permutation::transposition(5, 2, 4);
        assert_eq!(t.cycle_type().parts(), &[2, 1, 1, 1]);
    }

    #[test]
    fn subset_action() {
        let s = Permutation::from_images(vec![2, 3, 1]);
        let a = Subset::from_members(3, [1, 3]);
        assert_eq!(s.act_subset(&a), Subset::from_members(3, [2, 1]));
    }
}
