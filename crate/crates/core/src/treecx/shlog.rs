//! Two independent expansions of the degree-n logarithm term as a multiset
//! of (leaf partition, shift) pairs, plus the sign identity that makes the
//! gluing bijection equivariant.
//!
//! Route one tabulates (leaf partition, internal-node count) over all trees.
//! Route two runs the defining recursion: the degree-n term is the one-block
//! symbol plus, for every partition into at least two blocks, the product of
//! the smaller terms transported into the blocks, shifted by one.

use std::collections::BTreeMap;

use super::contract::sign_l;
use super::tree::{enumerate_trees, IndexTree};
use crate::combinat::{all_perms, enumerate_set_partitions, SetPartition, Subset};
use crate::report::Report;

/// Multiplicities of (leaf partition, shift) symbols.
pub type LogMultiset = BTreeMap<(SetPartition, usize), u64>;

/// Order-preserving embedding of a subset of `[m]` into the block `a`,
/// sending position j to the j-th smallest member of `a`.
pub fn embed_subset(s: &Subset, a: &Subset, n: usize) -> Subset {
    let members = a.members();
    Subset::from_members(n, s.members().iter().map(|&j| members[j - 1]))
}

/// The tree on `[n]` whose labels are the transported labels of `t` inside
/// the block `a`.
pub fn embed_tree_labels(t: &IndexTree, a: &Subset, n: usize) -> Vec<Subset> {
    t.labels().iter().map(|l| embed_subset(l, a, n)).collect()
}

/// Glue subtrees into the blocks of a partition. With a single block this
/// is the lone subtree itself; otherwise a new root is added above the
/// transported subtrees.
pub fn glue_trees(parts: &SetPartition, subtrees: &[IndexTree]) -> IndexTree {
    let n = parts.n();
    assert_eq!(parts.len(), subtrees.len());
    for (a, t) in parts.blocks().iter().zip(subtrees) {
        assert_eq!(t.n(), a.card(), "subtree order must match block size");
    }
    let mut labels: Vec<Subset> = vec![Subset::full(n)];
    for (a, t) in parts.blocks().iter().zip(subtrees) {
        labels.extend(embed_tree_labels(t, a, n));
    }
    labels.sort();
    labels.dedup(); // single block: the subtree root is [n] itself
    IndexTree::from_sorted_labels_unchecked(n, labels)
}

pub use crate::combinat::induced_block_perm;

/// Tabulate (leaf partition, internal count) over every tree of order `n`.
pub fn shlog_tree_formula(n: usize) -> LogMultiset {
    let mut out = LogMultiset::new();
    for t in enumerate_trees(n, None) {
        *out.entry((t.leaf_partition(), t.k())).or_default() += 1;
    }
    out
}

/// Expand the defining recursion symbolically.
pub fn shlog_inductive(n: usize) -> LogMultiset {
    fn term(n: usize, memo: &mut Vec<Option<LogMultiset>>) -> LogMultiset {
        if let Some(m) = &memo[n] {
            return m.clone();
        }
        let mut out = LogMultiset::new();
        out.insert((SetPartition::one_block(n), 0), 1);
        for parts in enumerate_set_partitions(n) {
            if parts.len() < 2 {
                continue;
            }
            // product over blocks of the transported smaller terms
            let mut partial: Vec<(Vec<Subset>, usize, u64)> = vec![(Vec::new(), 0, 1)];
            for a in parts.blocks() {
                let small = term(a.card(), memo);
                let mut next = Vec::with_capacity(partial.len() * small.len());
                for (blocks, shift, mult) in &partial {
                    for ((p, k), m) in &small {
                        let mut joined = blocks.clone();
                        for b in p.blocks() {
                            joined.push(embed_subset(b, a, n));
                        }
                        next.push((joined, shift + k, mult * m));
                    }
                }
                partial = next;
            }
            for (blocks, shift, mult) in partial {
                let p = SetPartition::from_blocks(n, blocks)
                    .expect("transported blocks partition the ground set");
                *out.entry((p, shift + 1)).or_default() += mult;
            }
        }
        memo[n] = Some(out.clone());
        out
    }
    let mut memo = vec![None; n + 1];
    term(n, &mut memo)
}

/// Exhaustive check of the gluing sign identity: for every partition, every
/// choice of subtrees on its blocks, and every permutation, the block-pair
/// inversion sign plus the per-block inversion counts agrees mod 2 with the
/// inversion count on the glued tree.
pub fn sign_identity_check(n: usize) -> Report {
    let mut rep = Report::new("gluing sign identity").with_n(n);
    let per_order: Vec<Vec<IndexTree>> = (0..=n)
        .map(|m| if m == 0 { Vec::new() } else { enumerate_trees(m, None) })
        .collect();
    let sigmas = all_perms(n);
    for parts in enumerate_set_partitions(n) {
        let blocks = parts.blocks();
        // all tuples of subtrees over the blocks
        let mut tuples: Vec<Vec<&IndexTree>> = vec![Vec::new()];
        for a in blocks {
            let choices = &per_order[a.card()];
            let mut next = Vec::with_capacity(tuples.len() * choices.len());
            for tuple in &tuples {
                for t in choices {
                    let mut longer = tuple.clone();
                    longer.push(t);
                    next.push(longer);
                }
            }
            tuples = next;
        }
        for tuple in &tuples {
            let owned: Vec<IndexTree> = tuple.iter().map(|t| (*t).clone()).collect();
            let glued = glue_trees(&parts, &owned);
            let ks: Vec<usize> = owned.iter().map(|t| t.k()).collect();
            for s in &sigmas {
                let mut cross = 0usize;
                for a in 0..blocks.len() {
                    for b in a + 1..blocks.len() {
                        if s.act_subset(&blocks[a]) > s.act_subset(&blocks[b]) {
                            cross += ks[a] * ks[b];
                        }
                    }
                }
                let per_block: usize = blocks
                    .iter()
                    .zip(&owned)
                    .map(|(a, t)| sign_l(t, &induced_block_perm(s, a)))
                    .sum();
                rep.record(1);
                if (cross + per_block) % 2 != sign_l(&glued, s) % 2 {
                    rep.fail(format!(
                        "sign identity fails: parts {parts}, trees {owned:?}, s {s}"
                    ));
                }
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::Permutation;

    fn sub(n: usize, m: &[usize]) -> Subset {
        Subset::from_members(n, m.iter().copied())
    }

    #[test]
    fn embedding_is_order_preserving() {
        let a = sub(5, &[2, 4, 5]);
        assert_eq!(embed_subset(&sub(3, &[1, 3]), &a, 5), sub(5, &[2, 5]));
        // binary order is preserved under transport
        let xs: Vec<Subset> = sub(3, &[1, 2, 3]).nonempty_subsets();
        for x in &xs {
            for y in &xs {
                assert_eq!(x < y, embed_subset(x, &a, 5) < embed_subset(y, &a, 5));
            }
        }
    }

    #[test]
    fn gluing_small_trees() {
        let parts = SetPartition::from_vecs(3, &[vec![1], vec![2, 3]]).unwrap();
        let glued = glue_trees(&parts, &[IndexTree::single(1), IndexTree::single(2)]);
        assert_eq!(glued.leaf_partition(), parts);
        assert_eq!(glued.k(), 1);

        // gluing the two-leaf tree into {2,3} yields the caterpillar
        let deep = glue_trees(
            &parts,
            &[IndexTree::single(1), enumerate_trees(2, Some(1)).remove(0)],
        );
        assert_eq!(deep.k(), 2);
        assert!(deep.contains_label(&sub(3, &[2, 3])));
        assert!(deep.contains_label(&sub(3, &[2])));
    }

    #[test]
    fn gluing_is_a_bijection_onto_trees() {
        // every tree arises exactly once from (partition, subtree tuple):
        // counts match because the recursion and the census agree
        for n in 2..=5 {
            let mut built = Vec::new();
            let per_order: Vec<Vec<IndexTree>> = (0..=n)
                .map(|m| if m == 0 { Vec::new() } else { enumerate_trees(m, None) })
                .collect();
            for parts in enumerate_set_partitions(n) {
                if parts.len() == 1 {
                    continue; // single block glues to the subtree itself
                }
                let mut tuples: Vec<Vec<IndexTree>> = vec![Vec::new()];
                for a in parts.blocks() {
                    let mut next = Vec::new();
                    for tuple in &tuples {
                        for t in &per_order[a.card()] {
                            let mut longer = tuple.clone();
                            longer.push(t.clone());
                            next.push(longer);
                        }
                    }
                    tuples = next;
                }
                for tuple in &tuples {
                    built.push(glue_trees(&parts, tuple));
                }
            }
            built.push(IndexTree::single(n));
            built.sort();
            built.dedup();
            assert_eq!(built.len(), enumerate_trees(n, None).len(), "n={n}");
        }
    }

    #[test]
    fn induced_block_perm_examples() {
        let s = Permutation::from_images(vec![3, 1, 2]);
        // block {2,3} maps to {1,2}; members 2,3 land on 1,2 in order
        let tau = induced_block_perm(&s, &sub(3, &[2, 3]));
        assert_eq!(tau, Permutation::identity(2));
        let flip = Permutation::from_images(vec![1, 3, 2]);
        let tau = induced_block_perm(&flip, &sub(3, &[2, 3]));
        assert_eq!(tau, Permutation::transposition(2, 1, 2));
    }

    #[test]
    fn multisets_for_two_and_three_points() {
        let two = shlog_tree_formula(2);
        assert_eq!(two.len(), 2);
        assert_eq!(two[&(SetPartition::one_block(2), 0)], 1);
        assert_eq!(two[&(SetPartition::singletons(2), 1)], 1);

        let three = shlog_tree_formula(3);
        assert_eq!(three[&(SetPartition::one_block(3), 0)], 1);
        assert_eq!(three[&(SetPartition::singletons(3), 1)], 1);
        assert_eq!(three[&(SetPartition::singletons(3), 2)], 3);
        let pair_partitions: u64 = three
            .iter()
            .filter(|((p, k), _)| p.len() == 2 && *k == 1)
            .map(|(_, m)| m)
            .sum();
        assert_eq!(pair_partitions, 3);
        assert_eq!(three.values().sum::<u64>(), 8);
    }

    #[test]
    fn recursion_matches_tree_tabulation() {
        for n in 1..=5 {
            assert_eq!(shlog_inductive(n), shlog_tree_formula(n), "n={n}");
        }
    }

    #[test]
    fn sign_identity_small() {
        for n in 2..=4 {
            let rep = sign_identity_check(n);
            assert!(rep.ok(), "n={n}: {:?}", rep.witness);
        }
    }
}
