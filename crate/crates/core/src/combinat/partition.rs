//! Integer partitions, set partitions and the refinement lattice.
//!
//! Set partitions are canonical: blocks sorted ascending by binary key,
//! members ascending inside each block. The partial order is refinement
//! (`a <= b` iff every block of `a` is contained in a block of `b`), the
//! meet is blockwise intersection.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::perm::{all_perms, Permutation};
use super::subset::Subset;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct IntPartition {
    parts: Vec<usize>, // weakly decreasing, all >= 1
}

impl IntPartition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        assert!(parts.iter().all(|&p| p >= 1), "parts must be positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        IntPartition { parts }
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Multiplicity vector: `a[j]` = number of parts equal to `j` (index 0 unused).
    pub fn multiplicities(&self) -> Vec<usize> {
        let max = self.parts.first().copied().unwrap_or(0);
        let mut a = vec![0usize; max + 1];
        for &p in &self.parts {
            a[p] += 1;
        }
        a
    }
}

impl fmt::Display for IntPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", v.join("+"))
    }
}

/// All partitions of `n`, parts weakly decreasing, in a fixed order.
pub fn enumerate_int_partitions(n: usize) -> Vec<IntPartition> {
    fn rec(rest: usize, cap: usize, acc: &mut Vec<usize>, out: &mut Vec<IntPartition>) {
        if rest == 0 {
            out.push(IntPartition::new(acc.clone()));
            return;
        }
        for p in (1..=rest.min(cap)).rev() {
            acc.push(p);
            rec(rest - p, p, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Number of permutations in `S_n` with the given cycle type:
/// `n! / prod_j j^{a_j} a_j!`.
pub fn count_cycle_type(lambda: &IntPartition) -> u64 {
    let n = lambda.n();
    let mut denom = 1u64;
    for (j, &a) in lambda.multiplicities().iter().enumerate().skip(1) {
        denom *= (j as u64).pow(a as u32) * factorial(a);
    }
    factorial(n) / denom
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    n: u8,
    blocks: Vec<Subset>, // sorted ascending by binary key
}

impl SetPartition {
    pub fn from_blocks(n: usize, mut blocks: Vec<Subset>) -> Result<Self> {
        let mut seen = Subset::empty(n);
        for b in &blocks {
            if b.ground() != n {
                return Err(Error::InvalidPartition("ground set mismatch".into()));
            }
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if !seen.is_disjoint(b) {
                return Err(Error::InvalidPartition(format!("overlapping block {b}")));
            }
            seen = seen.union(b);
        }
        if seen != Subset::full(n) {
            return Err(Error::InvalidPartition(format!(
                "blocks cover {seen}, not the full ground set"
            )));
        }
        blocks.sort();
        Ok(SetPartition { n: n as u8, blocks })
    }

    pub fn from_vecs(n: usize, vecs: &[Vec<usize>]) -> Result<Self> {
        let blocks = vecs
            .iter()
            .map(|v| Subset::from_members(n, v.iter().copied()))
            .collect();
        Self::from_blocks(n, blocks)
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_blocks(n, (1..=n).map(|i| Subset::singleton(n, i)).collect()).unwrap()
    }

    pub fn one_block(n: usize) -> Self {
        Self::from_blocks(n, vec![Subset::full(n)]).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    pub fn block_index_of(&self, i: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.contains(i))
            .expect("element not covered")
    }

    pub fn block_of(&self, i: usize) -> &Subset {
        &self.blocks[self.block_index_of(i)]
    }

    pub fn same_block(&self, i: usize, j: usize) -> bool {
        self.block_of(i).contains(j)
    }

    /// Refinement order: `self <= other` iff every block of `self` lies
    /// inside a block of `other`.
    pub fn refines(&self, other: &Self) -> bool {
        assert_eq!(self.n, other.n);
        self.blocks.iter().all(|b| {
            let rep = b.min_member().unwrap();
            b.is_subset(other.block_of(rep))
        })
    }

    /// Lattice meet: blockwise intersections.
    pub fn meet(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut blocks = Vec::new();
        for a in &self.blocks {
            for b in &other.blocks {
                let c = a.inter(b);
                if !c.is_empty() {
                    blocks.push(c);
                }
            }
        }
        Self::from_blocks(self.n(), blocks).expect("meet of partitions is a partition")
    }

    pub fn act(&self, s: &Permutation) -> Self {
        let blocks = self.blocks.iter().map(|b| s.act_subset(b)).collect();
        Self::from_blocks(self.n(), blocks).expect("permutation image of a partition")
    }

    pub fn shape(&self) -> IntPartition {
        IntPartition::new(self.blocks.iter().map(|b| b.card()).collect())
    }

    /// Blocks intersected with `a`, empty intersections dropped.
    pub fn restrict_to(&self, a: &Subset) -> Vec<Subset> {
        self.blocks
            .iter()
            .map(|b| b.inter(a))
            .filter(|c| !c.is_empty())
            .collect()
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{{{}}}", v.join(""))
    }
}

impl Serialize for SetPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Vec<usize>> = self.blocks.iter().map(|b| b.members()).collect();
        v.serialize(s)
    }
}

/// All set partitions of `[n]`, sorted by the canonical order on block lists.
pub fn enumerate_set_partitions(n: usize) -> Vec<SetPartition> {
    let mut out: Vec<SetPartition> = partitions_of_subset(&Subset::full(n))
        .into_iter()
        .map(|blocks| SetPartition::from_blocks(n, blocks).unwrap())
        .collect();
    out.sort();
    out
}

/// All partitions of an arbitrary ground subset into nonempty blocks,
/// each partition returned as a sorted block list.
pub fn partitions_of_subset(s: &Subset) -> Vec<Vec<Subset>> {
    let mut out = Vec::new();
    fn rec(rest: Subset, acc: &mut Vec<Subset>, out: &mut Vec<Vec<Subset>>) {
        let Some(m) = rest.min_member() else {
            let mut blocks = acc.clone();
            blocks.sort();
            out.push(blocks);
            return;
        };
        let others = rest.diff(&Subset::singleton(rest.ground(), m));
        // every block through m: m plus a subset of the remaining elements
        let mut tails = others.nonempty_subsets();
        tails.push(Subset::empty(rest.ground()));
        for tail in tails {
            let block = tail.union(&Subset::singleton(rest.ground(), m));
            acc.push(block);
            rec(rest.diff(&block), acc, out);
            acc.pop();
        }
    }
    if s.is_empty() {
        return vec![Vec::new()];
    }
    rec(*s, &mut Vec::new(), &mut out);
    out
}

/// All two-block partitions of `[n]`; the first block of each returned pair
/// is the binary-smaller one.
pub fn two_block_partitions(n: usize) -> Vec<SetPartition> {
    let full = Subset::full(n);
    let mut out = Vec::new();
    for b in full.nonempty_subsets() {
        let c = full.diff(&b);
        if !c.is_empty() && b < c {
            out.push(SetPartition::from_blocks(n, vec![b, c]).unwrap());
        }
    }
    out.sort();
    out
}

/// The partition of `[n]` with consecutive blocks of the given sizes
/// (largest first), e.g. shape (2,1) on [3] gives {{1,2},{3}}.
pub fn consecutive_partition_of_shape(lambda: &IntPartition) -> SetPartition {
    let n = lambda.n();
    let mut blocks = Vec::new();
    let mut next = 1;
    for &p in lambda.parts() {
        blocks.push(Subset::from_members(n, next..next + p));
        next += p;
    }
    SetPartition::from_blocks(n, blocks).unwrap()
}

/// Precomputed refinement lattice of `[n]` with the `S_n` action.
pub struct PartitionTable {
    n: usize,
    parts: Vec<SetPartition>,
    index: HashMap<SetPartition, usize>,
    leq: Vec<Vec<bool>>,
    meet_idx: Vec<Vec<usize>>,
    group: Vec<Permutation>,
    act_idx: Vec<Vec<usize>>, // [g][p]
}

impl PartitionTable {
    pub fn new(n: usize) -> Self {
        let parts = enumerate_set_partitions(n);
        let index: HashMap<SetPartition, usize> =
            parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let m = parts.len();
        let mut leq = vec![vec![false; m]; m];
        for i in 0..m {
            for j in 0..m {
                leq[i][j] = parts[i].refines(&parts[j]);
            }
        }
        let mut meet_idx = vec![vec![0usize; m]; m];
        for i in 0..m {
            for j in 0..m {
                meet_idx[i][j] = index[&parts[i].meet(&parts[j])];
            }
        }
        let group = all_perms(n);
        let act_idx = group
            .iter()
            .map(|g| parts.iter().map(|p| index[&p.act(g)]).collect())
            .collect();
        PartitionTable { n, parts, index, leq, meet_idx, group, act_idx }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part(&self, i: usize) -> &SetPartition {
        &self.parts[i]
    }

    pub fn parts(&self) -> &[SetPartition] {
        &self.parts
    }

    pub fn idx(&self, p: &SetPartition) -> usize {
        self.index[p]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet_idx[i][j]
    }

    /// Equivalence `i ~_a j`: equal meets with `a`.
    pub fn equiv(&self, a: usize, i: usize, j: usize) -> bool {
        self.meet_idx[i][a] == self.meet_idx[j][a]
    }

    pub fn group(&self) -> &[Permutation] {
        &self.group
    }

    pub fn group_index(&self, s: &Permutation) -> usize {
        self.group
            .binary_search(s)
            .expect("permutation of the right ground set")
    }

    pub fn act(&self, g: usize, p: usize) -> usize {
        self.act_idx[g][p]
    }

    /// Indices of all partitions refining `j` (its lattice down-set).
    pub fn down_set(&self, j: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.leq[i][j]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bell numbers via the Bell triangle; enumeration count oracle.
    /// `bell(n)` is the last entry of triangle row `n - 1`.
    fn bell(n: usize) -> u64 {
        let mut row = vec![1u64];
        for _ in 1..n {
            let mut next = vec![*row.last().unwrap()];
            for v in &row {
                next.push(next.last().unwrap() + v);
            }
            row = next;
        }
        *row.last().unwrap()
    }

    #[test]
    fn enumeration_count_matches_bell_triangle() {
        for n in 1..=8 {
            assert_eq!(enumerate_set_partitions(n).len() as u64, bell(n), "n={n}");
        }
    }

    #[test]
    fn s3_partitions_frozen() {
        let got: Vec<String> = enumerate_set_partitions(3)
            .iter()
            .map(|p| p.to_string())
            .collect();
        // canonical order compares sorted block lists entrywise by binary
        // key; {2} (key 4) precedes {1,2} (key 6), so {{2}{1,3}} comes first
        let expect = vec![
            "{{1}{2}{3}}",
            "{{1}{2,3}}",
            "{{2}{1,3}}",
            "{{1,2}{3}}",
            "{{1,2,3}}",
        ];
        assert_eq!(got, expect);
    }

    #[test]
    fn meet_and_refinement() {
        let a = SetPartition::from_vecs(3, &[vec![1, 2], vec![3]]).unwrap();
        let b = SetPartition::from_vecs(3, &[vec![1], vec![2, 3]]).unwrap();
        assert_eq!(a.meet(&b), SetPartition::singletons(3));
        assert!(SetPartition::singletons(3).refines(&a));
        assert!(a.refines(&SetPartition::one_block(3)));
        assert!(!a.refines(&b));
        // meet is the greatest lower bound
        for n in 1..=5 {
            let parts = enumerate_set_partitions(n);
            for x in &parts {
                for y in &parts {
                    let m = x.meet(y);
                    assert!(m.refines(x) && m.refines(y));
                    for z in &parts {
                        if z.refines(x) && z.refines(y) {
                            assert!(z.refines(&m));
                        }
                    }
                }
                if n > 4 {
                    break; // cubic loop only needed once at small size
                }
            }
        }
    }

    #[test]
    fn invalid_partitions_rejected() {
        assert!(SetPartition::from_vecs(3, &[vec![1, 2]]).is_err());
        assert!(SetPartition::from_vecs(3, &[vec![1, 2], vec![2, 3]]).is_err());
        assert!(SetPartition::from_vecs(3, &[vec![1, 2], vec![3], vec![]]).is_err());
    }

    #[test]
    fn action_is_lattice_automorphism() {
        let parts = enumerate_set_partitions(4);
        for g in all_perms(4) {
            for a in &parts {
                for b in &parts {
                    assert_eq!(a.refines(b), a.act(&g).refines(&b.act(&g)));
                    assert_eq!(a.meet(b).act(&g), a.act(&g).meet(&b.act(&g)));
                }
            }
        }
    }

    #[test]
    fn two_block_count() {
        for n in 2..=6 {
            assert_eq!(two_block_partitions(n).len(), (1 << (n - 1)) - 1, "n={n}");
        }
    }

    #[test]
    fn cycle_type_counts_sum_to_group_order() {
        for n in 1..=6 {
            let total: u64 = enumerate_int_partitions(n)
                .iter()
                .map(count_cycle_type)
                .sum();
            assert_eq!(total, factorial(n), "n={n}");
        }
    }

    #[test]
    fn int_partition_enumeration() {
        assert_eq!(enumerate_int_partitions(5).len(), 7);
        assert_eq!(enumerate_int_partitions(8).len(), 22);
    }

    #[test]
    fn consecutive_shape_partition() {
        let lam = IntPartition::new(vec![2, 1]);
        let p = consecutive_partition_of_shape(&lam);
        assert_eq!(p, SetPartition::from_vecs(3, &[vec![1, 2], vec![3]]).unwrap());
    }

    #[test]
    fn partition_table_consistency() {
        let t = PartitionTable::new(4);
        assert_eq!(t.len(), 15);
        let s = t.idx(&SetPartition::singletons(4));
        let o = t.idx(&SetPartition::one_block(4));
        for i in 0..t.len() {
            assert!(t.leq(s, i) && t.leq(i, o));
            assert_eq!(t.meet(i, s), s);
            assert_eq!(t.meet(i, o), i);
        }
    }
}
