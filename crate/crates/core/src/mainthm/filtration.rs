//! The two-block filtration of the complex and its exactness off the
//! merging locus.
//!
//! Fixing a two-block partition of the positions, every tree carries a
//! statistic; contractions never increase it, so the complex is filtered
//! by the statistic and the differential of each subquotient keeps only
//! the statistic-preserving blocks.  Those blocks form a perfect matching
//! on trees, and over the open set where the two blocks stay disjoint the
//! matched block of the differential is invertible, making the subquotient
//! a direct sum of exact two-term complexes.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::combinat::{two_block_partitions, SetPartition};
use crate::error::Result;
use crate::report::Report;
use crate::treecx::{psi, psi_partner, MatchRole, PsiValue};

use super::complex::{point_label, GnComplex};

fn is_source(role: MatchRole) -> bool {
    matches!(role, MatchRole::SplitSource | MatchRole::FirstSource | MatchRole::SecondSource)
}

/// The statistic-preserving pairs for one two-block partition, oriented
/// `(source, target)` with the source one degree higher.  Trees are named
/// by their `(degree, slot)` coordinates in the complex.
pub fn matched_pairs(
    cx: &GnComplex,
    bb: &SetPartition,
) -> Result<Vec<((usize, usize), (usize, usize))>> {
    let mut pairs = Vec::new();
    for k in 0..cx.degrees() {
        for (slot, tree) in cx.trees_at(k).iter().enumerate() {
            let (partner, role) = psi_partner(tree, bb)?;
            if !is_source(role) {
                continue;
            }
            let target = cx
                .slot_of(&partner)
                .expect("the partner of an enumerated tree is enumerated");
            pairs.push(((k, slot), target));
        }
    }
    Ok(pairs)
}

/// Checks the filtration story of one two-block partition on a built
/// complex: monotonicity of the statistic, the perfect matching with its
/// reciprocity, the absence of stray preserving blocks, and pointwise
/// invertibility of every matched block over the partition's open set.
pub fn filtration_check(cx: &GnComplex, bb: &SetPartition) -> Result<Report> {
    let sp = cx.space();
    let mut rep = Report::new("filtration")
        .with_n(sp.n())
        .with_param("blocks", bb.to_string())
        .with_param("points", sp.x().len());

    // group the trees of every degree by their statistic
    let mut classes: BTreeMap<PsiValue, Vec<(usize, usize)>> = BTreeMap::new();
    let mut values: Vec<Vec<PsiValue>> = Vec::with_capacity(cx.degrees());
    for k in 0..cx.degrees() {
        let mut per_slot = Vec::with_capacity(cx.trees_at(k).len());
        for (slot, tree) in cx.trees_at(k).iter().enumerate() {
            let v = psi(tree, bb)?;
            classes.entry(v.clone()).or_default().push((k, slot));
            per_slot.push(v);
        }
        values.push(per_slot);
    }

    // contractions weakly decrease the statistic
    for k in 1..cx.degrees() {
        for (slot, tree) in cx.trees_at(k).iter().enumerate() {
            for c in cx.contractions(k, slot) {
                let after = psi(&c.target, bb)?;
                rep.record(1);
                if after > values[k][slot] {
                    rep.fail(format!(
                        "the statistic increases from {tree} to {} for {bb}",
                        c.target
                    ));
                }
            }
        }
    }

    // reciprocal perfect matching
    let pairs = matched_pairs(cx, bb)?;
    let mut matched: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for &(src, tgt) in &pairs {
        matched.insert(src, tgt);
        matched.insert(tgt, src);
    }
    let total_trees: usize = values.iter().map(|v| v.len()).sum();
    rep.record(1);
    if matched.len() != total_trees {
        rep.fail(format!("the matching for {bb} misses a tree or reuses one"));
    }
    for &(src, tgt) in &pairs {
        let (sk, ss) = src;
        let (tk, ts) = tgt;
        rep.record(2);
        if sk != tk + 1 {
            rep.fail(format!(
                "matched pair {} and {} are not in adjacent degrees",
                cx.tree(sk, ss),
                cx.tree(tk, ts)
            ));
        }
        if values[sk][ss] != values[tk][ts] {
            rep.fail(format!(
                "matched pair {} and {} disagree on the statistic for {bb}",
                cx.tree(sk, ss),
                cx.tree(tk, ts)
            ));
        }
        let (back, role) = psi_partner(cx.tree(tk, ts), bb)?;
        rep.record(1);
        if is_source(role) || &back != cx.tree(sk, ss) {
            rep.fail(format!(
                "the partner of {} fails to point back to {}",
                cx.tree(tk, ts),
                cx.tree(sk, ss)
            ));
        }
    }

    // within a class, the only differential block between adjacent degrees
    // is the matched one: subquotients split into two-term complexes
    for members in classes.values() {
        for &(sk, ss) in members {
            if sk == 0 {
                continue;
            }
            for &(tk, ts) in members {
                if tk + 1 != sk {
                    continue;
                }
                let is_matched = matched.get(&(sk, ss)) == Some(&(tk, ts));
                let has_block =
                    cx.contractions(sk, ss).iter().any(|c| &c.target == cx.tree(tk, ts));
                rep.record(1);
                if has_block != is_matched {
                    rep.fail(format!(
                        "stray preserving block from {} to {} for {bb}",
                        cx.tree(sk, ss),
                        cx.tree(tk, ts)
                    ));
                }
            }
        }
    }

    // matched blocks are invertible over the partition's open set; no
    // claim is made at points where the two blocks touch
    let bb_idx = sp.table().idx(bb);
    let results: Vec<Vec<String>> = (0..sp.num_points())
        .into_par_iter()
        .filter(|&p| sp.in_u(p, bb_idx))
        .map(|p| {
            let mut failures = Vec::new();
            for &((sk, ss), (tk, ts)) in &pairs {
                let block = cx.differential_block(sk, ts, ss, p);
                if block.rows() != block.cols() || !block.is_invertible() {
                    failures.push(format!(
                        "the matched block from {} to {} degenerates at {} for {bb}",
                        cx.tree(sk, ss),
                        cx.tree(tk, ts),
                        point_label(sp, p)
                    ));
                }
            }
            failures
        })
        .collect();
    let sites = (0..sp.num_points()).filter(|&p| sp.in_u(p, bb_idx)).count();
    rep.record((sites * pairs.len()) as u64);
    for msg in results.into_iter().flatten() {
        rep.fail(msg);
    }

    Ok(rep)
}

/// Runs the filtration check for every two-block partition and merges the
/// outcomes.
pub fn filtration_check_all(cx: &GnComplex) -> Result<Report> {
    let mut rep = Report::new("filtration").with_n(cx.n()).with_param("points", cx.space().x().len());
    for bb in two_block_partitions(cx.n()) {
        let sub = filtration_check(cx, &bb)?;
        rep.merge(&sub);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::combinat::Subset;
    use crate::mainthm::build_gn;
    use crate::stratsys::{
        assemble_strict, build_space, strictify, system_from_local_datum, LocalDatum, XSpace,
    };

    fn random_complex(n: usize, x_len: usize, seed: u64) -> GnComplex {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = XSpace::random(&mut rng, x_len, 1, 1);
        let datum = LocalDatum::random(&mut rng, x_len, n, 1, 2);
        let sp = Arc::new(build_space(x, n).unwrap());
        let sys = system_from_local_datum(&sp, &datum).unwrap();
        build_gn(&assemble_strict(&strictify(&sys).unwrap()).unwrap()).unwrap()
    }

    fn part(n: usize, blocks: &[&[usize]]) -> SetPartition {
        SetPartition::from_blocks(
            n,
            blocks.iter().map(|b| Subset::from_members(n, b.to_vec())).collect(),
        )
        .unwrap()
    }

    /// Hand-worked matching for three positions and the split `1 | 23`:
    /// the eight trees pair into four couples whose leaf partitions are
    /// pinned down below.
    #[test]
    fn three_position_matching_pairs_the_known_partitions() {
        let cx = random_complex(3, 2, 2);
        let t = cx.space().table();
        let bb = part(3, &[&[1], &[2, 3]]);
        let pairs = matched_pairs(&cx, &bb).unwrap();
        assert_eq!(pairs.len(), 4);
        let mut got: Vec<(usize, usize)> = pairs
            .iter()
            .map(|&((sk, ss), (tk, ts))| (cx.partition_of(sk, ss), cx.partition_of(tk, ts)))
            .collect();
        got.sort_unstable();
        let fine = t.idx(&SetPartition::singletons(3));
        let top = t.idx(&SetPartition::one_block(3));
        let mut expected = vec![
            (fine, t.idx(&part(3, &[&[1, 2], &[3]]))),
            (fine, t.idx(&part(3, &[&[1, 3], &[2]]))),
            (fine, fine),
            (t.idx(&part(3, &[&[2, 3], &[1]])), top),
        ];
        expected.sort_unstable();
        assert_eq!(got, expected);
    }

    #[test]
    fn matched_pairs_sit_in_adjacent_degrees_and_exhaust_the_trees() {
        let cx = random_complex(3, 2, 6);
        for bb in crate::combinat::two_block_partitions(3) {
            let pairs = matched_pairs(&cx, &bb).unwrap();
            let total: usize = (0..cx.degrees()).map(|k| cx.trees_at(k).len()).sum();
            assert_eq!(2 * pairs.len(), total, "for {bb}");
            for &((sk, _), (tk, _)) in &pairs {
                assert_eq!(sk, tk + 1, "for {bb}");
            }
        }
    }

    #[test]
    fn matching_passes_on_random_systems() {
        for seed in 0..3 {
            for (n, x_len) in [(2, 3), (3, 2)] {
                let cx = random_complex(n, x_len, seed);
                let rep = filtration_check_all(&cx).unwrap();
                assert!(rep.ok(), "seed {seed} n {n}: {:?}", rep.witness);
            }
        }
    }

    #[test]
    fn invertibility_is_checked_at_every_site() {
        let cx = random_complex(3, 2, 1);
        let sp = cx.space();
        let bb = part(3, &[&[2], &[1, 3]]);
        let a = sp.table().idx(&bb);
        let sites = (0..sp.num_points()).filter(|&p| sp.in_u(p, a)).count();
        assert!(sites > 0);
        let pairs = matched_pairs(&cx, &bb).unwrap();
        let rep = filtration_check(&cx, &bb).unwrap();
        assert!(rep.ok(), "{:?}", rep.witness);
        assert!(rep.cases >= (sites * pairs.len()) as u64);
    }
}
