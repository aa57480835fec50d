//! Finite permutation groups given by explicit element lists.
//!
//! Everything downstream evaluates traces at explicit group elements, so a
//! group is just its sorted element vector with a position index. Sorting
//! puts the identity first (its image vector is lexicographically least).

use std::collections::{BTreeMap, BTreeSet};

use crate::combinat::{all_perms, Permutation, SetPartition};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermGroup {
    n: usize,
    elems: Vec<Permutation>,
    index: BTreeMap<Permutation, usize>,
}

impl PermGroup {
    pub fn from_elements(n: usize, mut elems: Vec<Permutation>) -> Result<Self> {
        elems.sort();
        elems.dedup();
        let bad = |msg: String| Err(Error::Invalid(msg));
        if elems.is_empty() {
            return bad("a group needs at least the identity".into());
        }
        for e in &elems {
            if e.n() != n {
                return bad(format!("element {e} acts on the wrong set"));
            }
        }
        let index: BTreeMap<Permutation, usize> =
            elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        if !elems[0].is_identity() {
            return bad("identity missing".into());
        }
        for a in &elems {
            if !index.contains_key(&a.inverse()) {
                return bad(format!("not closed under inverse at {a}"));
            }
            for b in &elems {
                if !index.contains_key(&a.compose(b)) {
                    return bad(format!("not closed under composition at {a}, {b}"));
                }
            }
        }
        Ok(PermGroup { n, elems, index })
    }

    pub fn symmetric(n: usize) -> Self {
        Self::from_elements(n, all_perms(n)).unwrap()
    }

    pub fn trivial(n: usize) -> Self {
        Self::from_elements(n, vec![Permutation::identity(n)]).unwrap()
    }

    /// The subgroup preserving a set partition (blocks may be permuted).
    pub fn stabilizer_of_partition(p: &SetPartition) -> Self {
        let elems = all_perms(p.n())
            .into_iter()
            .filter(|s| p.act(s) == *p)
            .collect();
        Self::from_elements(p.n(), elems).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elems
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elems[i]
    }

    pub fn position(&self, s: &Permutation) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &Permutation) -> bool {
        self.index.contains_key(s)
    }

    pub fn is_symmetric(&self) -> bool {
        self.order() == (1..=self.n).product::<usize>()
    }

    pub fn is_subgroup_of(&self, big: &PermGroup) -> bool {
        self.n == big.n && self.elems.iter().all(|e| big.contains(e))
    }

    /// Indices of a small generating set, found greedily. A cocycle verified
    /// on generators extends to the whole group by induction on word length,
    /// so validation only needs these.
    pub fn generating_positions(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut closed = vec![false; self.order()];
        closed[0] = true;
        let mut size = 1;
        while size < self.order() {
            let next = closed.iter().position(|c| !c).unwrap();
            gens.push(next);
            closed[next] = true;
            size += 1;
            loop {
                let mut grew = false;
                for i in 0..self.order() {
                    if !closed[i] {
                        continue;
                    }
                    for j in 0..self.order() {
                        if !closed[j] {
                            continue;
                        }
                        let p = self.position(&self.elems[i].compose(&self.elems[j])).unwrap();
                        if !closed[p] {
                            closed[p] = true;
                            size += 1;
                            grew = true;
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
        }
        gens
    }

    /// Representatives of the left cosets `x . self` inside `big`, identity
    /// first, deterministic.
    pub fn coset_reps_in(&self, big: &PermGroup) -> Result<Vec<Permutation>> {
        if !self.is_subgroup_of(big) {
            return Err(Error::Invalid("not a subgroup of the ambient group".into()));
        }
        let mut covered: BTreeSet<&Permutation> = BTreeSet::new();
        let mut reps = Vec::new();
        for g in big.elements() {
            if covered.contains(g) {
                continue;
            }
            reps.push(g.clone());
            for h in self.elements() {
                let gh = g.compose(h);
                let canon = big.element(big.position(&gh).unwrap());
                covered.insert(canon);
            }
        }
        Ok(reps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::IntPartition;

    #[test]
    fn symmetric_and_trivial() {
        let g = PermGroup::symmetric(4);
        assert_eq!(g.order(), 24);
        assert!(g.element(0).is_identity());
        assert!(g.is_symmetric());
        assert_eq!(PermGroup::trivial(3).order(), 1);
    }

    #[test]
    fn closure_is_checked() {
        let n = 3;
        let t = Permutation::transposition(n, 1, 2);
        assert!(PermGroup::from_elements(n, vec![Permutation::identity(n), t.clone()]).is_ok());
        let c = Permutation::full_cycle(n);
        // {e, (12), (123)} is not closed
        assert!(PermGroup::from_elements(n, vec![Permutation::identity(n), t, c]).is_err());
    }

    #[test]
    fn partition_stabilizer_orders() {
        // two blocks of equal size: block swaps allowed, order 2*2*2 = 8
        let p = SetPartition::from_vecs(4, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(PermGroup::stabilizer_of_partition(&p).order(), 8);
        // sizes 2 and 1: order 2
        let p = SetPartition::from_vecs(3, &[vec![1, 2], vec![3]]).unwrap();
        assert_eq!(PermGroup::stabilizer_of_partition(&p).order(), 2);
        // all singletons: the full symmetric group
        let p = SetPartition::singletons(3);
        assert_eq!(PermGroup::stabilizer_of_partition(&p).order(), 6);
    }

    #[test]
    fn coset_representatives() {
        let s3 = PermGroup::symmetric(3);
        let p = SetPartition::from_vecs(3, &[vec![1, 2], vec![3]]).unwrap();
        let h = PermGroup::stabilizer_of_partition(&p);
        let reps = h.coset_reps_in(&s3).unwrap();
        assert_eq!(reps.len(), 3);
        assert!(reps[0].is_identity());
        // reps times subgroup covers the group without overlap
        let mut seen = std::collections::BTreeSet::new();
        for r in &reps {
            for e in h.elements() {
                assert!(seen.insert(r.compose(e)));
            }
        }
        assert_eq!(seen.len(), 6);

        let lambda = IntPartition::new(vec![2, 1]);
        assert_eq!(lambda.parts(), &[2, 1]);
    }
}
