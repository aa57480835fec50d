//! Contractions of nested-subset trees, their signs, and exhaustive checks
//! that the resulting degree-lowering map squares to zero and commutes with
//! relabelling up to the designed signs.

use std::collections::BTreeMap;

use serde::Serialize;

use super::tree::{enumerate_trees, IndexTree};
use crate::combinat::{Permutation, SetPartition, Subset};
use crate::error::{Error, Result};
use crate::report::Report;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ContractionKind {
    /// Delete one non-leaf, non-root label; its children move to its parent.
    Ordinary,
    /// At a node whose children are all leaves, delete every label strictly
    /// inside it, making the node a leaf.
    Exceptional,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Contraction {
    pub source: IndexTree,
    pub node: Subset,
    pub kind: ContractionKind,
    pub target: IndexTree,
}

/// All contractions with the given source tree, ordered by node then kind.
pub fn contractions_of(t: &IndexTree) -> Vec<Contraction> {
    let n = t.n();
    let root = t.root();
    let mut out = Vec::new();
    for l in t.internal_labels() {
        if l != root {
            let labels = t.labels().iter().filter(|m| **m != l).copied().collect();
            out.push(Contraction {
                source: t.clone(),
                node: l,
                kind: ContractionKind::Ordinary,
                target: IndexTree::from_sorted_labels_unchecked(n, labels),
            });
        }
        if t.is_exceptional(&l) {
            let labels = t
                .labels()
                .iter()
                .filter(|m| !m.is_strict_subset(&l))
                .copied()
                .collect();
            out.push(Contraction {
                source: t.clone(),
                node: l,
                kind: ContractionKind::Exceptional,
                target: IndexTree::from_sorted_labels_unchecked(n, labels),
            });
        }
    }
    out
}

/// Number of internal labels binary-smaller than `l`; `l` must be internal.
pub fn s_exponent(t: &IndexTree, l: &Subset) -> usize {
    debug_assert!(t.internal_labels().contains(l));
    t.internal_labels().iter().filter(|m| *m < l).count()
}

/// The per-node sign (−1)^{s_exponent}.
pub fn sign_s(t: &IndexTree, l: &Subset) -> i64 {
    if s_exponent(t, l) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Signed coefficient carried by a contraction: ordinary ones keep the leaf
/// partition and contribute sign_s times the identity, exceptional ones
/// coarsen the leaves and contribute the extra minus sign.
pub fn coefficient(c: &Contraction) -> i64 {
    match c.kind {
        ContractionKind::Ordinary => sign_s(&c.source, &c.node),
        ContractionKind::Exceptional => -sign_s(&c.source, &c.node),
    }
}

/// Pairs in the ascending label list whose images under `s` are out of
/// order.
pub fn inversions(labels: &[Subset], s: &Permutation) -> usize {
    let mut count = 0;
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            if s.act_subset(&labels[i]) > s.act_subset(&labels[j]) {
                count += 1;
            }
        }
    }
    count
}

/// Inversion count of `s` on the internal labels of `t`.
pub fn sign_l(t: &IndexTree, s: &Permutation) -> usize {
    inversions(&t.internal_labels(), s)
}

/// A signed symbol for a structure map between leaf partitions; ordinary
/// contractions produce identity symbols (equal partitions), exceptional
/// ones strictly coarsen. Composites collapse to a single symbol because
/// the underlying maps compose transitively.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalTerm {
    pub source_partition: SetPartition,
    pub target_partition: SetPartition,
    pub coefficient: i64,
}

impl FormalTerm {
    pub fn new(source: SetPartition, target: SetPartition, coefficient: i64) -> Result<Self> {
        if !source.refines(&target) {
            return Err(Error::Invalid(format!(
                "map symbol must coarsen: {source} vs {target}"
            )));
        }
        Ok(FormalTerm { source_partition: source, target_partition: target, coefficient })
    }

    pub fn of_contraction(c: &Contraction) -> Self {
        FormalTerm {
            source_partition: c.source.leaf_partition(),
            target_partition: c.target.leaf_partition(),
            coefficient: coefficient(c),
        }
    }
}

/// The degree `k` part of the differential as a sparse matrix of signed map
/// symbols between the trees with `k` and `k − 1` non-leaf nodes.
pub struct DiffMatrix {
    pub sources: Vec<IndexTree>,
    pub targets: Vec<IndexTree>,
    /// entries[i] lists (target index, term) for source tree i.
    pub entries: Vec<Vec<(usize, FormalTerm)>>,
}

pub fn differential(n: usize, k: usize) -> DiffMatrix {
    assert!(k >= 1, "degree must be positive");
    let sources = enumerate_trees(n, Some(k));
    let targets = enumerate_trees(n, Some(k - 1));
    let tindex: BTreeMap<&IndexTree, usize> =
        targets.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let entries = sources
        .iter()
        .map(|t| {
            contractions_of(t)
                .iter()
                .map(|c| (tindex[&c.target], FormalTerm::of_contraction(c)))
                .collect()
        })
        .collect();
    DiffMatrix { sources, targets, entries }
}

/// How the proof that the differential squares to zero splits an unordered
/// pair of internal labels `{outer, inner}` of a tree. The expected number
/// of two-step composites through the pair is determined by the case.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum PairCase {
    /// Disjoint labels: contractions commute, every kind combination
    /// appears in both orders.
    Independent { kinds_a: usize, kinds_b: usize },
    /// inner ⊊ outer, inner not exceptional.
    NestedPlain { outer_is_root: bool },
    /// inner ⊊ outer exceptional, outer keeps another non-leaf child.
    NestedExceptional { outer_is_root: bool },
    /// inner is the unique non-leaf child of outer and is exceptional.
    NestedOnlyChild { outer_is_root: bool },
}

impl PairCase {
    fn expected_composites(self) -> usize {
        match self {
            PairCase::Independent { kinds_a, kinds_b } => 2 * kinds_a * kinds_b,
            PairCase::NestedPlain { outer_is_root } => {
                if outer_is_root {
                    0
                } else {
                    2
                }
            }
            PairCase::NestedExceptional { outer_is_root } => {
                if outer_is_root {
                    0
                } else {
                    4
                }
            }
            PairCase::NestedOnlyChild { outer_is_root } => {
                if outer_is_root {
                    2
                } else {
                    6
                }
            }
        }
    }
}

fn classify_pair(t: &IndexTree, a: &Subset, b: &Subset) -> PairCase {
    if a.is_disjoint(b) {
        let kinds = |l: &Subset| 1 + usize::from(t.is_exceptional(l));
        return PairCase::Independent { kinds_a: kinds(a), kinds_b: kinds(b) };
    }
    let (outer, inner) = if b.is_strict_subset(a) { (a, b) } else { (b, a) };
    let outer_is_root = *outer == t.root();
    if !t.is_exceptional(inner) {
        return PairCase::NestedPlain { outer_is_root };
    }
    let only_child = t.children_of(outer).contains(inner)
        && t.children_of(outer)
            .iter()
            .all(|c| c == inner || t.is_leaf(c));
    if only_child {
        PairCase::NestedOnlyChild { outer_is_root }
    } else {
        PairCase::NestedExceptional { outer_is_root }
    }
}

/// Exhaustive check that composing two contraction steps cancels.
///
/// Two independent certificates per tree: every group of composites sharing
/// an unordered label pair and a final tree sums to zero coefficient with
/// consistent map symbols, and the number of composites through each label
/// pair matches the count predicted by the case split above.
pub fn check_d_squared(n: usize) -> Report {
    let mut rep = Report::new("two-step cancellation").with_n(n);
    for t in enumerate_trees(n, None) {
        if t.k() < 2 {
            continue;
        }
        // (unordered pair, final tree) -> signed composite terms
        let mut groups: BTreeMap<((Subset, Subset), IndexTree), Vec<FormalTerm>> = BTreeMap::new();
        let mut pair_counts: BTreeMap<(Subset, Subset), usize> = BTreeMap::new();
        for c1 in contractions_of(&t) {
            for c2 in contractions_of(&c1.target) {
                let pair = if c1.node < c2.node {
                    (c1.node, c2.node)
                } else {
                    (c2.node, c1.node)
                };
                let term = FormalTerm {
                    source_partition: t.leaf_partition(),
                    target_partition: c2.target.leaf_partition(),
                    coefficient: coefficient(&c1) * coefficient(&c2),
                };
                groups.entry((pair, c2.target.clone())).or_default().push(term);
                *pair_counts.entry(pair).or_default() += 1;
            }
        }
        for ((pair, target), terms) in &groups {
            rep.record(1);
            let total: i64 = terms.iter().map(|f| f.coefficient).sum();
            if total != 0 {
                rep.fail(format!(
                    "composites through {{{} {}}} of {t} into {target} sum to {total}",
                    pair.0, pair.1
                ));
            }
            if terms
                .iter()
                .any(|f| f.target_partition != target.leaf_partition())
            {
                rep.fail(format!("inconsistent composite symbol at {t}"));
            }
        }
        let internal = t.internal_labels();
        for i in 0..internal.len() {
            for j in i + 1..internal.len() {
                let pair = (internal[i], internal[j]);
                let case = classify_pair(&t, &pair.0, &pair.1);
                let actual = pair_counts.get(&pair).copied().unwrap_or(0);
                rep.record(1);
                if actual != case.expected_composites() {
                    rep.fail(format!(
                        "{t}: pair {{{} {}}} case {case:?} predicts {} composites, found {actual}",
                        pair.0,
                        pair.1,
                        case.expected_composites()
                    ));
                }
            }
        }
    }
    rep
}

/// Exhaustive check of the sign identity making contraction commute with
/// relabelling. For a contraction of `t` at `v` and a permutation `s`, the
/// two ways around the square differ by
///   inv(P(t), s⁻¹) + s_exponent(s⁻¹t, s⁻¹v)
///    − inv(P(t′), s⁻¹) − s_exponent(t, v)
/// which must equal twice the number of internal labels above `v` that
/// `s⁻¹` moves below it, in particular be even.
pub fn check_equivariance(n: usize, sigmas: &[Permutation]) -> Report {
    let mut rep = Report::new("relabelling sign identity").with_n(n);
    for t in enumerate_trees(n, None) {
        let internal = t.internal_labels();
        for c in contractions_of(&t) {
            for s in sigmas {
                let si = s.inverse();
                let fwd = inversions(&internal, &si) + s_exponent(&t.act(&si), &si.act_subset(&c.node));
                let bwd = inversions(&c.target.internal_labels(), &si) + s_exponent(&t, &c.node);
                let crossings = internal
                    .iter()
                    .filter(|a| **a > c.node && si.act_subset(a) < si.act_subset(&c.node))
                    .count();
                rep.record(1);
                if fwd != bwd + 2 * crossings {
                    rep.fail(format!(
                        "sign square broken: tree {t}, node {}, kind {:?}, s {s}: {fwd} vs {bwd} + 2*{crossings}",
                        c.node, c.kind
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
    use crate::combinat::all_perms;

    fn sub(n: usize, m: &[usize]) -> Subset {
        Subset::from_members(n, m.iter().copied())
    }

    fn caterpillar3() -> IndexTree {
        IndexTree::new(
            3,
            vec![sub(3, &[1]), sub(3, &[2]), sub(3, &[3]), sub(3, &[2, 3]), sub(3, &[1, 2, 3])],
        )
        .unwrap()
    }

    #[test]
    fn contraction_census_on_small_trees() {
        assert!(contractions_of(&IndexTree::single(3)).is_empty());

        let pair = enumerate_trees(2, Some(1)).remove(0);
        let cs = contractions_of(&pair);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].kind, ContractionKind::Exceptional);
        assert_eq!(cs[0].target, IndexTree::single(2));

        // caterpillar: ordinary and exceptional at the inner node only
        let cs = contractions_of(&caterpillar3());
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| c.node == sub(3, &[2, 3])));
        assert_eq!(
            cs.iter().filter(|c| c.kind == ContractionKind::Ordinary).count(),
            1
        );
    }

    #[test]
    fn signs_match_hand_computation() {
        let t = caterpillar3();
        // internal labels {2,3} (key 12) and [3] (key 14)
        assert_eq!(sign_s(&t, &sub(3, &[2, 3])), 1);
        assert_eq!(sign_s(&t, &sub(3, &[1, 2, 3])), -1);

        // the 2-point complex carries a single exceptional term of sign −1
        let d = differential(2, 1);
        assert_eq!(d.entries.len(), 1);
        let (_, term) = &d.entries[0][0];
        assert_eq!(term.coefficient, -1);
        assert!(term.source_partition.refines(&term.target_partition));
        assert_ne!(term.source_partition, term.target_partition);

        // degree-1 to degree-0 at n=3: four trees, all mapping by −1
        let d = differential(3, 1);
        assert_eq!(d.sources.len(), 4);
        assert_eq!(d.targets.len(), 1);
        for row in &d.entries {
            assert_eq!(row.len(), 1);
            assert_eq!(row[0].1.coefficient, -1);
        }
    }

    #[test]
    fn degree_two_block_mixes_kinds() {
        // from each two-internal-node tree at n=3: one ordinary (identity
        // symbol) and one exceptional (coarsening symbol) contraction
        let d = differential(3, 2);
        assert_eq!(d.sources.len(), 3);
        assert_eq!(d.targets.len(), 4);
        for row in &d.entries {
            assert_eq!(row.len(), 2);
            let idents = row
                .iter()
                .filter(|(_, f)| f.source_partition == f.target_partition)
                .count();
            assert_eq!(idents, 1);
        }
    }

    #[test]
    fn inversion_count_example() {
        let labels = vec![sub(4, &[1, 2]), sub(4, &[3, 4]), sub(4, &[1, 2, 3, 4])];
        let s = Permutation::from_images(vec![3, 4, 1, 2]);
        assert_eq!(inversions(&labels, &s), 1);
        assert_eq!(inversions(&labels, &Permutation::identity(4)), 0);
    }

    #[test]
    fn d_squared_cancels_small() {
        for n in 2..=5 {
            let rep = check_d_squared(n);
            assert!(rep.ok(), "n={n}: {:?}", rep.witness);
        }
    }

    #[test]
    fn equivariance_signs_small() {
        for n in 2..=4 {
            let rep = check_equivariance(n, &all_perms(n));
            assert!(rep.ok(), "n={n}: {:?}", rep.witness);
        }
    }

    #[test]
    fn relabelling_sign_is_a_cocycle() {
        // composing relabellings adds inversion counts mod 2
        for t in enumerate_trees(4, None).iter().step_by(7) {
            for s in all_perms(4).iter().step_by(5) {
                for u in all_perms(4).iter().step_by(3) {
                    let st = s.compose(u);
                    let lhs = sign_l(t, &st) % 2;
                    let rhs = (sign_l(t, s) + sign_l(&t.act(&s.inverse()), u)) % 2;
                    assert_eq!(lhs, rhs, "tree {t}, s {s}, u {u}");
                }
            }
        }
    }
}
