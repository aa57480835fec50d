//! A five-part statistic on trees relative to a fixed two-block partition.
//!
//! The statistic weakly decreases along every contraction, and on each level
//! set the statistic-preserving contractions form a perfect matching: every
//! tree lies on exactly one. Pairing the matched trees off is what reduces
//! the whole complex to its associated graded pieces, so both facts are
//! checked exhaustively here.

use std::collections::BTreeMap;

use super::contract::{contractions_of, Contraction, ContractionKind};
use super::tree::{enumerate_trees, IndexTree};
use crate::combinat::{two_block_partitions, SetPartition, Subset};
use crate::error::{Error, Result};
use crate::report::Report;

/// Value of the statistic: the pivot label and four counters.
///
/// The pivot is the binary-smallest label not inside either block. Values
/// compare lexicographically with the pivot in *reversed* binary order
/// (larger key first), then the counters ascending.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PsiValue {
    pub pivot: Subset,
    pub rest: [usize; 4],
}

impl Ord for PsiValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .pivot
            .cmp(&self.pivot)
            .then_with(|| self.rest.cmp(&other.rest))
    }
}

impl PartialOrd for PsiValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Compute the statistic of `t` against a partition with exactly two blocks.
pub fn psi(t: &IndexTree, bb: &SetPartition) -> Result<PsiValue> {
    if bb.n() != t.n() || bb.len() != 2 {
        return Err(Error::InvalidPartition(format!(
            "statistic needs a two-block partition of the tree's ground set, got {bb}"
        )));
    }
    let b1 = bb.blocks()[0];
    let b2 = bb.blocks()[1];
    // the root crosses both blocks, so the pivot exists
    let pivot = *t
        .labels()
        .iter()
        .find(|l| !l.is_subset(&b1) && !l.is_subset(&b2))
        .unwrap();
    let i1 = b1.inter(&pivot);
    let i2 = b2.inter(&pivot);
    let outside = t.labels().iter().filter(|l| !l.is_subset(&pivot)).count();
    let below1 = t.labels().iter().filter(|l| l.is_strict_subset(&i1)).count();
    let weak2 = t.labels().iter().filter(|l| l.is_subset(&i2)).count();
    let below2 = t.labels().iter().filter(|l| l.is_strict_subset(&i2)).count();
    Ok(PsiValue { pivot, rest: [outside, below1, below1 * weak2, below2] })
}

/// How a tree meets its unique statistic-preserving contraction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatchRole {
    /// Target of an exceptional step; the partner splits the pivot leaf
    /// into the two block intersections.
    SplitTarget,
    /// Source of an exceptional step at the pivot, whose children are
    /// exactly the two intersections, both leaves.
    SplitSource,
    /// Target of an ordinary step inserting the first-block intersection.
    FirstTarget,
    /// Source of an ordinary step deleting the first-block intersection.
    FirstSource,
    /// Target of an ordinary step inserting the second-block intersection.
    SecondTarget,
    /// Source of an ordinary step deleting the second-block intersection.
    SecondSource,
}

/// Predict the matched partner of `t` by case analysis at the pivot.
///
/// Writing I1, I2 for the intersections of the pivot with the two blocks:
/// a pivot leaf is matched by splitting it into I1 and I2; otherwise,
/// missing I1 is inserted, an internal I1 deleted; with I1 a leaf, the same
/// applies to I2; with both leaves they are the pivot's only children and
/// the pair is removed at once. The case analysis is exhaustive because the
/// pivot's children each lie inside one block, so an existing I1 or I2 node
/// is necessarily a child of the pivot.
pub fn psi_partner(t: &IndexTree, bb: &SetPartition) -> Result<(IndexTree, MatchRole)> {
    let v = psi(t, bb)?;
    let i1 = bb.blocks()[0].inter(&v.pivot);
    let i2 = bb.blocks()[1].inter(&v.pivot);
    let with = |extra: &[Subset]| {
        let mut labels = t.labels().to_vec();
        labels.extend_from_slice(extra);
        IndexTree::new(t.n(), labels)
    };
    let without = |gone: &[Subset]| {
        let labels = t.labels().iter().filter(|l| !gone.contains(l)).copied().collect();
        IndexTree::new(t.n(), labels)
    };
    Ok(if t.is_leaf(&v.pivot) {
        (with(&[i1, i2])?, MatchRole::SplitTarget)
    } else if !t.contains_label(&i1) {
        (with(&[i1])?, MatchRole::FirstTarget)
    } else if !t.is_leaf(&i1) {
        (without(&[i1])?, MatchRole::FirstSource)
    } else if !t.contains_label(&i2) {
        (with(&[i2])?, MatchRole::SecondTarget)
    } else if !t.is_leaf(&i2) {
        (without(&[i2])?, MatchRole::SecondSource)
    } else {
        (without(&[i1, i2])?, MatchRole::SplitSource)
    })
}

/// Check that every contraction weakly decreases the statistic, for every
/// two-block partition.
pub fn check_psi_monotone(n: usize) -> Report {
    let mut rep = Report::new("statistic decreases along contractions").with_n(n);
    let trees = enumerate_trees(n, None);
    for bb in two_block_partitions(n) {
        for t in &trees {
            let before = psi(t, &bb).unwrap();
            for c in contractions_of(t) {
                let after = psi(&c.target, &bb).unwrap();
                rep.record(1);
                if after > before {
                    rep.fail(format!(
                        "statistic increases from {t} to {} at {} for {bb}",
                        c.target, c.node
                    ));
                }
            }
        }
    }
    rep
}

/// Check the perfect matching by statistic-preserving contractions for one
/// two-block partition: every tree lies on exactly one, each preserving
/// contraction has one of the three designed shapes, both endpoints predict
/// each other as partners, and the common coarsening of the leaf partition
/// with the blocks is unchanged across the step.
pub fn psi_matching(n: usize, bb: &SetPartition) -> Report {
    let mut rep = Report::new("statistic-preserving matching")
        .with_n(n)
        .with_param("blocks", bb);
    let trees = enumerate_trees(n, None);
    let mut value: BTreeMap<&IndexTree, PsiValue> = BTreeMap::new();
    for t in &trees {
        value.insert(t, psi(t, bb).expect("two-block partition"));
    }
    let mut degree: BTreeMap<&IndexTree, usize> = trees.iter().map(|t| (t, 0)).collect();
    let mut edges: Vec<Contraction> = Vec::new();
    for t in &trees {
        for c in contractions_of(t) {
            if value[&c.source] == value[&c.target] {
                *degree.get_mut(&c.source).unwrap() += 1;
                *degree.get_mut(&c.target).unwrap() += 1;
                edges.push(c);
            }
        }
    }
    for t in &trees {
        rep.record(1);
        if degree[t] != 1 {
            rep.fail(format!(
                "{t} lies on {} preserving contractions for {bb}",
                degree[t]
            ));
        }
    }
    for c in &edges {
        let v = value[&c.source];
        let i1 = bb.blocks()[0].inter(&v.pivot);
        let i2 = bb.blocks()[1].inter(&v.pivot);
        let (shape_ok, src_role, tgt_role) = match c.kind {
            ContractionKind::Exceptional => {
                let mut kids = vec![i1, i2];
                kids.sort();
                (
                    c.node == v.pivot && c.source.children_of(&v.pivot) == kids,
                    MatchRole::SplitSource,
                    MatchRole::SplitTarget,
                )
            }
            ContractionKind::Ordinary if c.node == i1 => {
                (true, MatchRole::FirstSource, MatchRole::FirstTarget)
            }
            ContractionKind::Ordinary if c.node == i2 => {
                (true, MatchRole::SecondSource, MatchRole::SecondTarget)
            }
            ContractionKind::Ordinary => (false, MatchRole::FirstSource, MatchRole::FirstTarget),
        };
        rep.record(1);
        if !shape_ok {
            rep.fail(format!(
                "preserving step of unexpected shape: {} at {} ({:?}) for {bb}",
                c.source, c.node, c.kind
            ));
        }
        rep.record(1);
        if c.source.leaf_partition().meet(bb) != c.target.leaf_partition().meet(bb) {
            rep.fail(format!(
                "preserving step changes the coarsening with {bb}: {} to {}",
                c.source, c.target
            ));
        }
        let src_pred = psi_partner(&c.source, bb);
        let tgt_pred = psi_partner(&c.target, bb);
        rep.record(1);
        match (src_pred, tgt_pred) {
            (Ok((p, r)), Ok((q, u)))
                if p == c.target && q == c.source && r == src_role && u == tgt_role => {}
            other => rep.fail(format!(
                "partner prediction disagrees with the matching at {} -> {}: {other:?}",
                c.source, c.target
            )),
        }
    }
    rep
}

/// Run the monotonicity check and the matching check over every two-block
/// partition.
pub fn check_psi(n: usize) -> Report {
    let mut rep = check_psi_monotone(n);
    for bb in two_block_partitions(n) {
        rep.merge(&psi_matching(n, &bb));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(n: usize, m: &[usize]) -> Subset {
        Subset::from_members(n, m.iter().copied())
    }

    fn tree(n: usize, labels: &[&[usize]]) -> IndexTree {
        IndexTree::new(n, labels.iter().map(|l| sub(n, l)).collect()).unwrap()
    }

    fn blocks12_3() -> SetPartition {
        SetPartition::from_vecs(3, &[vec![1, 2], vec![3]]).unwrap()
    }

    #[test]
    fn statistic_hand_values() {
        let bb = blocks12_3();
        let single = IndexTree::single(3);
        let v = psi(&single, &bb).unwrap();
        assert_eq!(v.pivot, sub(3, &[1, 2, 3]));
        assert_eq!(v.rest, [0, 0, 0, 0]);

        // the pair-leaf tree carries the same value: matched with single
        let flat = tree(3, &[&[1, 2], &[3], &[1, 2, 3]]);
        assert_eq!(psi(&flat, &bb).unwrap(), v);

        let star = tree(3, &[&[1], &[2], &[3], &[1, 2, 3]]);
        let v = psi(&star, &bb).unwrap();
        assert_eq!(v.pivot, sub(3, &[1, 2, 3]));
        assert_eq!(v.rest, [0, 2, 2, 0]);

        // {1,3} crosses both blocks and has the smaller key, so it pivots
        let deep = tree(3, &[&[1], &[3], &[1, 3], &[2], &[1, 2, 3]]);
        let v = psi(&deep, &bb).unwrap();
        assert_eq!(v.pivot, sub(3, &[1, 3]));
        assert_eq!(v.rest, [2, 0, 0, 0]);
    }

    #[test]
    fn values_order_by_reversed_pivot_first() {
        let big_pivot = PsiValue { pivot: sub(3, &[1, 2, 3]), rest: [9, 9, 9, 9] };
        let small_pivot = PsiValue { pivot: sub(3, &[1, 3]), rest: [0, 0, 0, 0] };
        assert!(big_pivot < small_pivot);
        let a = PsiValue { pivot: sub(3, &[1, 3]), rest: [1, 0, 0, 0] };
        assert!(small_pivot < a);
    }

    #[test]
    fn rejects_wrong_block_count() {
        let t = IndexTree::single(3);
        assert!(psi(&t, &SetPartition::singletons(3)).is_err());
        assert!(psi(&t, &SetPartition::one_block(3)).is_err());
    }

    #[test]
    fn monotone_small() {
        for n in 2..=5 {
            let rep = check_psi_monotone(n);
            assert!(rep.ok(), "n={n}: {:?}", rep.witness);
        }
    }

    #[test]
    fn matching_small() {
        for n in 2..=5 {
            for bb in two_block_partitions(n) {
                let rep = psi_matching(n, &bb);
                assert!(rep.ok(), "n={n} {bb}: {:?}", rep.witness);
            }
        }
    }

    #[test]
    fn partner_is_an_involution() {
        let bbs = two_block_partitions(4);
        for t in enumerate_trees(4, None) {
            for bb in &bbs {
                let (p, _) = psi_partner(&t, bb).unwrap();
                assert_eq!(psi(&p, bb).unwrap(), psi(&t, bb).unwrap());
                let (back, _) = psi_partner(&p, bb).unwrap();
                assert_eq!(back, t, "partner of partner of {t} under {bb}");
            }
        }
    }
}
