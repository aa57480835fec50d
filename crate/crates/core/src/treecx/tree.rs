//! Nested-subset trees over `[n]`.
//!
//! A tree is stored as its label family: a set of nonempty subsets of `[n]`
//! containing `[n]` itself, any two members disjoint or nested, and every
//! non-minimal member equal to the union of the members strictly inside it.
//! Minimal members are the leaves; their labels partition `[n]`. Nodes are
//! identified with their labels (the family determines the tree shape).

use std::collections::HashMap;
use std::fmt;

use crate::combinat::{partitions_of_subset, Permutation, SetPartition, Subset};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexTree {
    n: u8,
    labels: Vec<Subset>, // ascending binary order; the root [n] is last
}

impl IndexTree {
    pub fn new(n: usize, mut labels: Vec<Subset>) -> Result<Self> {
        labels.sort();
        labels.dedup();
        let t = IndexTree { n: n as u8, labels };
        t.validate()?;
        Ok(t)
    }

    /// The one-node tree with label family `{[n]}`.
    pub fn single(n: usize) -> Self {
        IndexTree { n: n as u8, labels: vec![Subset::full(n)] }
    }

    pub(crate) fn from_sorted_labels_unchecked(n: usize, labels: Vec<Subset>) -> Self {
        let t = IndexTree { n: n as u8, labels };
        debug_assert!(t.validate().is_ok());
        t
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        let bad = |msg: String| Err(Error::InvalidTree(msg));
        if self.labels.is_empty() || *self.labels.last().unwrap() != Subset::full(n) {
            return bad(format!("{self} does not contain the full set"));
        }
        for l in &self.labels {
            if l.ground() != n {
                return bad(format!("label {l} has the wrong ground set"));
            }
            if l.is_empty() {
                return bad("empty label".into());
            }
        }
        for (i, a) in self.labels.iter().enumerate() {
            for b in &self.labels[i + 1..] {
                if !a.is_disjoint(b) && !a.is_subset(b) && !b.is_subset(a) {
                    return bad(format!("labels {a} and {b} overlap without nesting"));
                }
            }
        }
        for l in &self.labels {
            let kids = self.children_of(l);
            if kids.is_empty() {
                continue; // minimal member, a leaf
            }
            let union = kids
                .iter()
                .fold(Subset::empty(n), |acc, k| acc.union(k));
            if union != *l {
                return bad(format!("label {l} is not the union of its sub-labels"));
            }
            if kids.len() < 2 {
                return bad(format!("label {l} has a single child"));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// All labels, ascending in binary order.
    pub fn labels(&self) -> &[Subset] {
        &self.labels
    }

    pub fn root(&self) -> Subset {
        Subset::full(self.n())
    }

    pub fn contains_label(&self, l: &Subset) -> bool {
        self.labels.binary_search(l).is_ok()
    }

    pub fn is_leaf(&self, l: &Subset) -> bool {
        debug_assert!(self.contains_label(l));
        !self.labels.iter().any(|m| m.is_strict_subset(l))
    }

    /// Maximal labels strictly inside `l` (the node's children).
    pub fn children_of(&self, l: &Subset) -> Vec<Subset> {
        let mut kids: Vec<Subset> = Vec::new();
        // labels sorted ascending: a strict subset of l appears before l,
        // and scanning descending sees each maximal one before its subsets
        for m in self.labels.iter().rev() {
            if m.is_strict_subset(l) && !kids.iter().any(|k| m.is_subset(k)) {
                kids.push(*m);
            }
        }
        kids.sort();
        kids
    }

    /// Minimal label strictly containing `l`; `None` for the root.
    pub fn parent_of(&self, l: &Subset) -> Option<Subset> {
        self.labels
            .iter()
            .filter(|m| l.is_strict_subset(m))
            .min_by_key(|m| m.card())
            .copied()
    }

    /// Non-leaf with all children leaves.
    pub fn is_exceptional(&self, l: &Subset) -> bool {
        !self.is_leaf(l) && self.children_of(l).iter().all(|k| self.is_leaf(k))
    }

    /// Leaf labels in ascending binary order; they partition `[n]`.
    pub fn leaves(&self) -> Vec<Subset> {
        self.labels
            .iter()
            .filter(|l| self.is_leaf(l))
            .copied()
            .collect()
    }

    pub fn leaf_partition(&self) -> SetPartition {
        SetPartition::from_blocks(self.n(), self.leaves())
            .expect("leaves of a valid tree partition the ground set")
    }

    /// Non-leaf labels in ascending binary order.
    pub fn internal_labels(&self) -> Vec<Subset> {
        self.labels
            .iter()
            .filter(|l| !self.is_leaf(l))
            .copied()
            .collect()
    }

    /// Number of non-leaf nodes.
    pub fn k(&self) -> usize {
        self.labels.iter().filter(|l| !self.is_leaf(l)).count()
    }

    pub fn act(&self, s: &Permutation) -> Self {
        let mut labels: Vec<Subset> = self.labels.iter().map(|l| s.act_subset(l)).collect();
        labels.sort();
        Self::from_sorted_labels_unchecked(self.n(), labels)
    }
}

impl fmt::Display for IndexTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        write!(f, "[{}]", v.join(" "))
    }
}

impl fmt::Debug for IndexTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All label families of trees whose root label is `s`, each sorted.
fn label_sets_on(s: &Subset, memo: &mut HashMap<Subset, Vec<Vec<Subset>>>) -> Vec<Vec<Subset>> {
    if let Some(v) = memo.get(s) {
        return v.clone();
    }
    let mut out = vec![vec![*s]];
    for blocks in partitions_of_subset(s) {
        if blocks.len() < 2 {
            continue;
        }
        // cartesian product of subtree choices over the blocks
        let mut partial: Vec<Vec<Subset>> = vec![vec![*s]];
        for b in &blocks {
            let sub = label_sets_on(b, memo);
            let mut next = Vec::with_capacity(partial.len() * sub.len());
            for p in &partial {
                for q in &sub {
                    let mut joined = p.clone();
                    joined.extend_from_slice(q);
                    next.push(joined);
                }
            }
            partial = next;
        }
        out.extend(partial);
    }
    for labels in &mut out {
        labels.sort();
    }
    memo.insert(*s, out.clone());
    out
}

/// Every tree of order `n`, sorted; optionally only those with exactly `k`
/// non-leaf nodes.
pub fn enumerate_trees(n: usize, k: Option<usize>) -> Vec<IndexTree> {
    let mut memo = HashMap::new();
    let mut out: Vec<IndexTree> = label_sets_on(&Subset::full(n), &mut memo)
        .into_iter()
        .map(|labels| IndexTree::from_sorted_labels_unchecked(n, labels))
        .filter(|t| k.map_or(true, |k| t.k() == k))
        .collect();
    out.sort();
    out
}

/// Tree counts by number of non-leaf nodes, index `k` in `0..n`.
pub fn census(n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n];
    for t in enumerate_trees(n, None) {
        counts[t.k()] += 1;
    }
    counts
}

/// Independent total count: summing, over leaf partitions of `[n]`, the
/// number of tree shapes on that many leaves. Shapes on `k` leaves satisfy
/// `h(1) = 1`, `h(k) = Σ over set partitions of [k] into ≥ 2 blocks of
/// ∏ h(block size)`; no tree is ever materialized.
pub fn census_oracle(n: usize) -> u64 {
    fn h(k: usize, memo: &mut Vec<Option<u64>>) -> u64 {
        if let Some(v) = memo[k] {
            return v;
        }
        let mut total = if k == 1 { 1 } else { 0 };
        for blocks in partitions_of_subset(&Subset::full(k)) {
            if blocks.len() < 2 {
                continue;
            }
            total += blocks.iter().map(|b| h(b.card(), memo)).product::<u64>();
        }
        memo[k] = Some(total);
        total
    }
    let mut memo = vec![None; n + 1];
    partitions_of_subset(&Subset::full(n))
        .iter()
        .map(|blocks| h(blocks.len(), &mut memo))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::all_perms;
    use std::collections::BTreeSet;

    fn sub(n: usize, m: &[usize]) -> Subset {
        Subset::from_members(n, m.iter().copied())
    }

    #[test]
    fn small_census_is_frozen() {
        assert_eq!(census(2), vec![1, 1]);
        assert_eq!(census(3), vec![1, 4, 3]);
        assert_eq!(census(4).iter().sum::<u64>(), 58);
    }

    #[test]
    fn census_matches_shape_recursion() {
        for n in 1..=6 {
            assert_eq!(census(n).iter().sum::<u64>(), census_oracle(n), "n={n}");
        }
    }

    #[test]
    fn enumeration_validates_and_has_no_duplicates() {
        for n in 1..=5 {
            let trees = enumerate_trees(n, None);
            let distinct: BTreeSet<_> = trees.iter().cloned().collect();
            assert_eq!(distinct.len(), trees.len());
            for t in &trees {
                IndexTree::new(n, t.labels().to_vec()).unwrap();
            }
        }
    }

    #[test]
    fn invalid_families_rejected() {
        // missing full set
        assert!(IndexTree::new(3, vec![sub(3, &[1, 2])]).is_err());
        // non-minimal member that is not the union of its sub-labels
        assert!(IndexTree::new(3, vec![sub(3, &[1, 2]), sub(3, &[1, 2, 3])]).is_err());
        assert!(IndexTree::new(2, vec![sub(2, &[1]), sub(2, &[1, 2])]).is_err());
        // overlap without nesting
        assert!(IndexTree::new(
            3,
            vec![sub(3, &[1, 2]), sub(3, &[2, 3]), sub(3, &[1]), sub(3, &[3]), sub(3, &[1, 2, 3])]
        )
        .is_err());
    }

    #[test]
    fn leaves_and_internal_labels() {
        let single = IndexTree::single(3);
        assert_eq!(single.leaves(), vec![sub(3, &[1, 2, 3])]);
        assert!(single.internal_labels().is_empty());

        let star = IndexTree::new(
            3,
            vec![sub(3, &[1]), sub(3, &[2]), sub(3, &[3]), sub(3, &[1, 2, 3])],
        )
        .unwrap();
        assert_eq!(star.leaf_partition(), SetPartition::singletons(3));
        assert_eq!(star.internal_labels(), vec![sub(3, &[1, 2, 3])]);

        let caterpillar = IndexTree::new(
            3,
            vec![sub(3, &[1]), sub(3, &[2]), sub(3, &[3]), sub(3, &[2, 3]), sub(3, &[1, 2, 3])],
        )
        .unwrap();
        assert_eq!(caterpillar.leaf_partition(), SetPartition::singletons(3));
        assert_eq!(
            caterpillar.internal_labels(),
            vec![sub(3, &[2, 3]), sub(3, &[1, 2, 3])]
        );
        assert_eq!(caterpillar.k(), 2);
        assert!(caterpillar.is_exceptional(&sub(3, &[2, 3])));
        assert!(!caterpillar.is_exceptional(&sub(3, &[1, 2, 3])));
        assert_eq!(
            caterpillar.parent_of(&sub(3, &[2, 3])),
            Some(sub(3, &[1, 2, 3]))
        );
        assert_eq!(
            caterpillar.children_of(&sub(3, &[1, 2, 3])),
            vec![sub(3, &[1]), sub(3, &[2, 3])]
        );
    }

    #[test]
    fn action_relabels_and_permutes_orbits() {
        let caterpillar = IndexTree::new(
            3,
            vec![sub(3, &[1]), sub(3, &[2]), sub(3, &[3]), sub(3, &[2, 3]), sub(3, &[1, 2, 3])],
        )
        .unwrap();
        let swapped = caterpillar.act(&Permutation::transposition(3, 1, 2));
        assert!(swapped.contains_label(&sub(3, &[1, 3])));

        // the trees with two non-leaf nodes at n=3 form one orbit of size 3
        let trees = enumerate_trees(3, Some(2));
        assert_eq!(trees.len(), 3);
        let orbit: BTreeSet<_> = all_perms(3)
            .iter()
            .map(|s| trees[0].act(s))
            .collect();
        assert_eq!(orbit.len(), 3);
        for t in &trees {
            assert!(orbit.contains(t));
        }
    }

    #[test]
    fn act_is_a_group_action() {
        let trees = enumerate_trees(4, None);
        let s = Permutation::full_cycle(4);
        let t_perm = Permutation::transposition(4, 1, 2);
        for tree in trees.iter().step_by(5) {
            let a = tree.act(&s).act(&t_perm);
            let b = tree.act(&t_perm.compose(&s));
            assert_eq!(a, b);
        }
    }
}
