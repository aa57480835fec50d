//! The tree-indexed complex over `X^n`.
//!
//! Degree `k` collects the index trees with `k` internal non-root labels;
//! the summand of a tree is the fiber of its leaf partition at the point.
//! A contraction deleting an ordinary node keeps the leaf partition and
//! contributes a signed identity block; one deleting the children of an
//! exceptional node coarsens the leaf partition and contributes a signed
//! transition block.  The group permutes tuple positions and relabels
//! trees; each action block is twisted by the parity of inversions the
//! permutation causes among the internal labels.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::coeffring::{rat, LaurentPoly};
use crate::combinat::{generators, SetPartition, Subset};
use crate::equirep::{graded_trace, BasisLine, WeightedSpace};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::stratsys::{StratSpace, System};
use crate::treecx::{
    coefficient, contractions_of, enumerate_trees, sign_l, Contraction, ContractionKind,
    IndexTree,
};

/// Formats a point as its tuple of base point ids, for error messages.
pub(crate) fn point_label(sp: &StratSpace, p: usize) -> String {
    let coords: Vec<&str> = sp.point(p).iter().map(|&c| sp.x().id(c)).collect();
    format!("({})", coords.join(", "))
}

pub(crate) fn pm1(exponent: usize) -> i64 {
    if exponent % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Basis positions of `space` grouped by (weight, parity) class.
pub(crate) fn class_positions(space: &WeightedSpace) -> BTreeMap<BasisLine, Vec<usize>> {
    let mut out: BTreeMap<BasisLine, Vec<usize>> = BTreeMap::new();
    for (i, line) in space.basis().iter().enumerate() {
        out.entry(line.clone()).or_default().push(i);
    }
    out
}

/// Copies `coef * block` into `dst` with its top-left corner at `(r0, c0)`,
/// adding to whatever is already there.
fn write_block(dst: &mut QMatrix, r0: usize, c0: usize, block: &QMatrix, coef: i64) {
    use num_traits::Zero;
    let s = rat(coef);
    for r in 0..block.rows() {
        for c in 0..block.cols() {
            let v = &block[(r, c)];
            if !v.is_zero() {
                let cur = dst[(r0 + r, c0 + c)].clone();
                dst[(r0 + r, c0 + c)] = cur + v * &s;
            }
        }
    }
}

/// The chain complex of a strict system with an action layer, one matrix
/// per degree and point, with the group action assembled on demand.
pub struct GnComplex {
    sys: System,
    trees: Vec<Vec<IndexTree>>,
    parts: Vec<Vec<usize>>,
    contra: Vec<Vec<Vec<Contraction>>>,
    slot_of: BTreeMap<Vec<Subset>, (usize, usize)>,
    spaces: Vec<Vec<WeightedSpace>>,
    offsets: Vec<Vec<Vec<usize>>>,
    diff: Vec<Vec<QMatrix>>,
}

/// The block a contraction contributes at point `p`: the identity of the
/// (unchanged) leaf partition fiber for an ordinary node, the transition
/// from the finer to the coarser leaf partition for an exceptional one.
/// The sign lives in `coefficient`, not here.
fn contraction_block(sys: &System, src_part: usize, tgt_part: usize, c: &Contraction, p: usize) -> QMatrix {
    match c.kind {
        ContractionKind::Ordinary => {
            debug_assert_eq!(src_part, tgt_part);
            QMatrix::identity(sys.dim(src_part, p))
        }
        ContractionKind::Exceptional => sys
            .transition(src_part, tgt_part, p)
            .expect("strict systems carry every transition at every point")
            .clone(),
    }
}

/// Builds the complex of `sys` and proves it is one: the differential
/// squares to zero at every point, relabelling a generator commutes with
/// the differential at every point, the sign twist satisfies the cocycle
/// law, and the twisted sign matches across every contraction for every
/// group element.  Together with the action layer validated on `sys`
/// itself, the last two extend the generator checks to the whole group.
pub fn build_gn(sys: &System) -> Result<GnComplex> {
    if !sys.is_strict() {
        return Err(Error::Invalid(
            "the tree complex needs a transition at every point; strictify first".into(),
        ));
    }
    if !sys.has_action() {
        return Err(Error::Invalid("the tree complex needs an action layer".into()));
    }
    let sp = Arc::clone(sys.space());
    let n = sp.n();
    let t = sp.table();
    let np = sp.num_points();

    let mut trees: Vec<Vec<IndexTree>> = Vec::with_capacity(n);
    let mut parts: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut contra: Vec<Vec<Vec<Contraction>>> = Vec::with_capacity(n);
    let mut slot_of: BTreeMap<Vec<Subset>, (usize, usize)> = BTreeMap::new();
    for k in 0..n {
        let level = enumerate_trees(n, Some(k));
        let mut ps = Vec::with_capacity(level.len());
        let mut cs = Vec::with_capacity(level.len());
        for (slot, tree) in level.iter().enumerate() {
            ps.push(t.idx(&tree.leaf_partition()));
            cs.push(contractions_of(tree));
            slot_of.insert(tree.labels().to_vec(), (k, slot));
        }
        trees.push(level);
        parts.push(ps);
        contra.push(cs);
    }

    let mut spaces: Vec<Vec<WeightedSpace>> = Vec::with_capacity(n);
    let mut offsets: Vec<Vec<Vec<usize>>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut per_p = Vec::with_capacity(np);
        let mut off_p = Vec::with_capacity(np);
        for p in 0..np {
            let mut space = WeightedSpace::empty(sys.d());
            let mut off = Vec::with_capacity(parts[k].len() + 1);
            for &part in &parts[k] {
                off.push(space.dim());
                space = space.direct_sum(sys.fiber(part, p));
            }
            off.push(space.dim());
            per_p.push(space);
            off_p.push(off);
        }
        spaces.push(per_p);
        offsets.push(off_p);
    }

    let diff: Vec<Vec<QMatrix>> = (0..n)
        .map(|k| {
            if k == 0 {
                return (0..np).map(|p| QMatrix::zero(0, spaces[0][p].dim())).collect();
            }
            (0..np)
                .into_par_iter()
                .map(|p| {
                    let mut m = QMatrix::zero(spaces[k - 1][p].dim(), spaces[k][p].dim());
                    for (slot, _) in trees[k].iter().enumerate() {
                        for c in &contra[k][slot] {
                            let &(tk, tslot) =
                                slot_of.get(c.target.labels()).expect("targets are enumerated");
                            debug_assert_eq!(tk, k - 1);
                            let block =
                                contraction_block(sys, parts[k][slot], parts[k - 1][tslot], c, p);
                            write_block(
                                &mut m,
                                offsets[k - 1][p][tslot],
                                offsets[k][p][slot],
                                &block,
                                coefficient(c),
                            );
                        }
                    }
                    m
                })
                .collect()
        })
        .collect();

    let cx = GnComplex { sys: sys.clone(), trees, parts, contra, slot_of, spaces, offsets, diff };
    cx.validate()?;
    Ok(cx)
}

impl GnComplex {
    fn validate(&self) -> Result<()> {
        let sp = self.sys.space();
        let group = sp.group();
        let np = sp.num_points();
        let n = sp.n();

        // sign cocycle: the inversion parity of a product splits over its
        // factors; with the matrix cocycle already validated on the system
        // this extends the generator checks below to all group elements
        for s in generators(n) {
            for h in group {
                let sh = s.compose(h);
                for level in &self.trees {
                    for tree in level {
                        let lhs = sign_l(tree, &sh) % 2;
                        let rhs = (sign_l(tree, h) + sign_l(&tree.act(h), &s)) % 2;
                        if lhs != rhs {
                            return Err(Error::Invalid(format!(
                                "inversion parity fails to split over {} * {} on {tree}",
                                s, h
                            )));
                        }
                    }
                }
            }
        }

        // signed compatibility of every contraction with every relabelling;
        // pure sign bookkeeping, point-free
        for g in group {
            for level in &self.contra {
                for per_tree in level {
                    for c in per_tree {
                        let gc = Contraction {
                            source: c.source.act(g),
                            node: g.act_subset(&c.node),
                            kind: c.kind,
                            target: c.target.act(g),
                        };
                        let lhs = coefficient(&gc) * pm1(sign_l(&c.source, g));
                        let rhs = coefficient(c) * pm1(sign_l(&c.target, g));
                        if lhs != rhs {
                            return Err(Error::Invalid(format!(
                                "contraction sign breaks under relabelling by {} at node {} of {}",
                                g, c.node, c.source
                            )));
                        }
                    }
                }
            }
        }

        // numeric checks per point: the differential squares to zero along
        // every two-step path, and the relabelling squares commute.  The
        // group side is the generator set (enough, by the two checks above
        // plus the system's own action validation); small cases take all
        // elements for good measure.
        let check_g: Vec<usize> = if group.len() * np <= 512 {
            (0..group.len()).collect()
        } else {
            generators(n).iter().map(|s| sp.table().group_index(s)).collect()
        };
        let failures: Vec<Option<String>> = (0..np)
            .into_par_iter()
            .map(|p| self.validate_at_point(p, &check_g))
            .collect();
        if let Some(msg) = failures.into_iter().flatten().next() {
            return Err(Error::Invalid(msg));
        }
        Ok(())
    }

    fn validate_at_point(&self, p: usize, check_g: &[usize]) -> Option<String> {
        let sp = self.sys.space();
        let t = sp.table();
        let group = sp.group();
        let n = sp.n();
        for k in 2..n {
            let mut acc: BTreeMap<(usize, usize), QMatrix> = BTreeMap::new();
            for (slot, _) in self.trees[k].iter().enumerate() {
                for c1 in &self.contra[k][slot] {
                    let &(_, mid) = self.slot_of.get(c1.target.labels()).unwrap();
                    let m1 = contraction_block(&self.sys, self.parts[k][slot], self.parts[k - 1][mid], c1, p);
                    for c2 in &self.contra[k - 1][mid] {
                        let &(_, fin) = self.slot_of.get(c2.target.labels()).unwrap();
                        let m2 = contraction_block(
                            &self.sys,
                            self.parts[k - 1][mid],
                            self.parts[k - 2][fin],
                            c2,
                            p,
                        );
                        let co = rat(coefficient(c1) * coefficient(c2));
                        let prod = m2.mul(&m1).scale(&co);
                        acc.entry((fin, slot))
                            .and_modify(|m| *m = m.add(&prod))
                            .or_insert(prod);
                    }
                }
            }
            for ((fin, slot), m) in acc {
                if !m.is_zero() {
                    return Some(format!(
                        "two-step differential fails to cancel at {} from {} to {}",
                        point_label(sp, p),
                        self.trees[k][slot],
                        self.trees[k - 2][fin],
                    ));
                }
            }
        }
        for &g in check_g {
            let gperm = &group[g];
            let gp = sp.act_point(g, p);
            for k in 1..n {
                for (slot, tree) in self.trees[k].iter().enumerate() {
                    let src_part = self.parts[k][slot];
                    for c in &self.contra[k][slot] {
                        let &(_, tslot) = self.slot_of.get(c.target.labels()).unwrap();
                        let tgt_part = self.parts[k - 1][tslot];
                        let m_c = contraction_block(&self.sys, src_part, tgt_part, c, p);
                        let lhs = self
                            .sys
                            .action(g, tgt_part, p)
                            .mul(&m_c)
                            .scale(&rat(coefficient(c) * pm1(sign_l(&c.target, gperm))));
                        let gc = Contraction {
                            source: tree.act(gperm),
                            node: gperm.act_subset(&c.node),
                            kind: c.kind,
                            target: c.target.act(gperm),
                        };
                        let m_gc = contraction_block(
                            &self.sys,
                            t.act(g, src_part),
                            t.act(g, tgt_part),
                            &gc,
                            gp,
                        );
                        let rhs = m_gc
                            .mul(self.sys.action(g, src_part, p))
                            .scale(&rat(coefficient(&gc) * pm1(sign_l(tree, gperm))));
                        if lhs != rhs {
                            return Some(format!(
                                "relabelling square fails for {} on the contraction at node {} of {} at {}",
                                gperm,
                                c.node,
                                tree,
                                point_label(sp, p),
                            ));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn system(&self) -> &System {
        &self.sys
    }

    pub fn space(&self) -> &Arc<StratSpace> {
        self.sys.space()
    }

    pub fn n(&self) -> usize {
        self.sys.space().n()
    }

    pub fn d(&self) -> usize {
        self.sys.d()
    }

    /// Number of degrees; degree indices run `0..degrees()`.
    pub fn degrees(&self) -> usize {
        self.trees.len()
    }

    pub fn trees_at(&self, k: usize) -> &[IndexTree] {
        &self.trees[k]
    }

    pub fn tree(&self, k: usize, slot: usize) -> &IndexTree {
        &self.trees[k][slot]
    }

    /// Index of the leaf partition of the tree in degree `k`, slot `slot`.
    pub fn partition_of(&self, k: usize, slot: usize) -> usize {
        self.parts[k][slot]
    }

    pub fn slot_of(&self, tree: &IndexTree) -> Option<(usize, usize)> {
        self.slot_of.get(tree.labels()).copied()
    }

    /// The contractions out of the tree in degree `k`, slot `slot`.
    pub fn contractions(&self, k: usize, slot: usize) -> &[Contraction] {
        &self.contra[k][slot]
    }

    /// The raw (unshifted) direct sum of tree fibers in degree `k` at `p`.
    pub fn space_at(&self, k: usize, p: usize) -> &WeightedSpace {
        &self.spaces[k][p]
    }

    pub fn dim_at(&self, k: usize, p: usize) -> usize {
        self.spaces[k][p].dim()
    }

    /// The degree `k` differential into degree `k - 1` at point `p`; the
    /// degree 0 value is the empty matrix.
    pub fn differential(&self, k: usize, p: usize) -> &QMatrix {
        &self.diff[k][p]
    }

    /// The block of the degree `k` differential from the summand of
    /// `src_slot` to the degree `k - 1` summand of `tgt_slot`.
    pub fn differential_block(&self, k: usize, tgt_slot: usize, src_slot: usize, p: usize) -> QMatrix {
        let rows: Vec<usize> =
            (self.offsets[k - 1][p][tgt_slot]..self.offsets[k - 1][p][tgt_slot + 1]).collect();
        let cols: Vec<usize> =
            (self.offsets[k][p][src_slot]..self.offsets[k][p][src_slot + 1]).collect();
        self.diff[k][p].submatrix(&rows, &cols)
    }

    /// The assembled action of group element `g` in degree `k`, a matrix
    /// from the degree `k` space at `p` to the one at `g . p`.
    pub fn action_matrix(&self, g: usize, k: usize, p: usize) -> QMatrix {
        let sp = self.sys.space();
        let gperm = &sp.group()[g];
        let gp = sp.act_point(g, p);
        let mut m = QMatrix::zero(self.spaces[k][gp].dim(), self.spaces[k][p].dim());
        for (slot, tree) in self.trees[k].iter().enumerate() {
            let image = tree.act(gperm);
            let &(ik, islot) = self.slot_of.get(image.labels()).expect("relabelled tree is enumerated");
            debug_assert_eq!(ik, k);
            let part = self.parts[k][slot];
            debug_assert_eq!(self.parts[k][islot], sp.table().act(g, part));
            write_block(
                &mut m,
                self.offsets[k][gp][islot],
                self.offsets[k][p][slot],
                self.sys.action(g, part, p),
                pm1(sign_l(tree, gperm)),
            );
        }
        m
    }

    /// Alternating graded trace of `g` at one of its fixed points.  Only
    /// trees relabelled to themselves meet the block diagonal.
    pub fn euler_trace(&self, g: usize, p: usize) -> LaurentPoly {
        let sp = self.sys.space();
        assert_eq!(sp.act_point(g, p), p, "the point must be fixed by g");
        let gperm = &sp.group()[g];
        let mut out = LaurentPoly::zero(self.sys.d());
        for (k, level) in self.trees.iter().enumerate() {
            for (slot, tree) in level.iter().enumerate() {
                if &tree.act(gperm) != tree {
                    continue;
                }
                let part = self.parts[k][slot];
                let tr = graded_trace(
                    self.sys.action(g, part, p),
                    &self.sys.fiber(part, p).shifted(k),
                );
                out = out.add(&tr.scale(&rat(pm1(sign_l(tree, gperm)))));
            }
        }
        out
    }

    /// Cohomology of the complex at one point, one parity-shifted space per
    /// degree.  Ranks are taken class by class so the grading is exact.
    pub fn pointwise_cohomology(&self, p: usize) -> Vec<WeightedSpace> {
        let n = self.degrees();
        let pos: Vec<BTreeMap<BasisLine, Vec<usize>>> =
            (0..n).map(|k| class_positions(&self.spaces[k][p])).collect();
        let empty: Vec<usize> = Vec::new();
        // ranks[k]: rank of the class-restricted degree k differential
        let mut ranks: Vec<BTreeMap<&BasisLine, usize>> = Vec::with_capacity(n);
        ranks.push(BTreeMap::new());
        for k in 1..n {
            let mut per_class = BTreeMap::new();
            for (line, cols) in &pos[k] {
                let rows = pos[k - 1].get(line).unwrap_or(&empty);
                let r = self.diff[k][p].submatrix(rows, cols).rank();
                per_class.insert(line, r);
            }
            ranks.push(per_class);
        }
        (0..n)
            .map(|k| {
                let mut lines = Vec::new();
                for (line, cols) in &pos[k] {
                    let rk = ranks[k].get(line).copied().unwrap_or(0);
                    let rk1 = if k + 1 < n {
                        ranks[k + 1].get(line).copied().unwrap_or(0)
                    } else {
                        0
                    };
                    let h = cols.len() - rk - rk1;
                    let shifted =
                        BasisLine::new(line.weight.clone(), ((line.parity as usize + k) % 2) as u8);
                    lines.extend(std::iter::repeat(shifted).take(h));
                }
                WeightedSpace::new(self.sys.d(), lines)
            })
            .collect()
    }

    /// Checks that cohomology vanishes at every point with at least two
    /// distinct coordinates; returns the number of points cleared.
    pub fn check_off_diagonal_acyclicity(&self) -> Result<u64> {
        let sp = self.sys.space();
        let top = sp.table().idx(&SetPartition::one_block(sp.n()));
        let bad: Vec<usize> = (0..sp.num_points())
            .into_par_iter()
            .filter(|&p| sp.coinc(p) != top)
            .filter(|&p| self.pointwise_cohomology(p).iter().any(|h| !h.is_empty()))
            .collect();
        if let Some(&p) = bad.iter().min() {
            return Err(Error::Invalid(format!(
                "cohomology persists away from the small diagonal at {}",
                point_label(sp, p)
            )));
        }
        Ok((sp.num_points() - sp.stratum_size(top)) as u64)
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::stratsys::{
        assemble_strict, build_space, strictify, system_from_local_datum, LocalDatum, XSpace,
    };

    fn strict_system(x: XSpace, n: usize, datum: &LocalDatum) -> System {
        let sp = Arc::new(build_space(x, n).unwrap());
        let sys = system_from_local_datum(&sp, datum).unwrap();
        assemble_strict(&strictify(&sys).unwrap()).unwrap()
    }

    fn random_complex(n: usize, x_len: usize, seed: u64) -> GnComplex {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = XSpace::random(&mut rng, x_len, 1, 1);
        let datum = LocalDatum::random(&mut rng, x_len, n, 1, 2);
        build_gn(&strict_system(x, n, &datum)).unwrap()
    }

    #[test]
    fn two_position_block_is_the_negated_transition() {
        let x = XSpace::unweighted(2, 1);
        let datum = LocalDatum::structure(2, 2, 1);
        let sys = strict_system(x, 2, &datum);
        let cx = build_gn(&sys).unwrap();
        assert_eq!(cx.degrees(), 2);
        assert_eq!(cx.trees_at(0).len(), 1);
        assert_eq!(cx.trees_at(1).len(), 1);
        let fine = cx.partition_of(1, 0);
        let top = cx.partition_of(0, 0);
        assert_ne!(fine, top);
        for p in 0..cx.space().num_points() {
            let block = cx.differential_block(1, 0, 0, p);
            let phi = sys.transition(fine, top, p).unwrap();
            assert_eq!(block, phi.scale(&rat(-1)), "point {p}");
        }
    }

    /// Hand-checked sign table for three positions: every ordinary step is
    /// a +1 identity block, every exceptional step a -1 transition block.
    #[test]
    fn three_position_blocks_follow_the_signed_table() {
        let x = XSpace::unweighted(2, 1);
        let datum = LocalDatum::structure(2, 3, 1);
        let sys = strict_system(x, 3, &datum);
        let cx = build_gn(&sys).unwrap();
        let sizes: Vec<usize> = (0..3).map(|k| cx.trees_at(k).len()).collect();
        assert_eq!(sizes, vec![1, 4, 3]);
        for k in 1..3 {
            for slot in 0..cx.trees_at(k).len() {
                for c in cx.contractions(k, slot).to_vec() {
                    let expected = match c.kind {
                        ContractionKind::Ordinary => 1,
                        ContractionKind::Exceptional => -1,
                    };
                    assert_eq!(coefficient(&c), expected, "at {} of {}", c.node, c.source);
                    let (tk, tslot) = cx.slot_of(&c.target).unwrap();
                    let src_part = cx.partition_of(k, slot);
                    let tgt_part = cx.partition_of(tk, tslot);
                    for p in 0..cx.space().num_points() {
                        let block = cx.differential_block(k, tslot, slot, p);
                        let bare = match c.kind {
                            ContractionKind::Ordinary => QMatrix::identity(sys.dim(src_part, p)),
                            ContractionKind::Exceptional => {
                                sys.transition(src_part, tgt_part, p).unwrap().clone()
                            }
                        };
                        assert_eq!(block, bare.scale(&rat(expected)), "point {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn differential_squares_to_zero_as_full_matrices() {
        let cx = random_complex(3, 3, 5);
        for p in 0..cx.space().num_points() {
            for k in 2..cx.degrees() {
                assert!(
                    cx.differential(k - 1, p).mul(cx.differential(k, p)).is_zero(),
                    "point {p} degree {k}"
                );
            }
        }
    }

    #[test]
    fn assembled_action_commutes_with_the_differential() {
        let cx = random_complex(3, 2, 11);
        let sp = Arc::clone(cx.space());
        for g in 0..sp.group_order() {
            for p in 0..sp.num_points() {
                let gp = sp.act_point(g, p);
                for k in 1..cx.degrees() {
                    let lhs = cx.differential(k, gp).mul(&cx.action_matrix(g, k, p));
                    let rhs = cx.action_matrix(g, k - 1, p).mul(cx.differential(k, p));
                    assert_eq!(lhs, rhs, "g {g} p {p} k {k}");
                }
            }
        }
    }

    #[test]
    fn assembled_action_composes_like_the_group() {
        let cx = random_complex(3, 2, 12);
        let sp = Arc::clone(cx.space());
        let t = sp.table();
        let group = sp.group().to_vec();
        let sample = [0usize, sp.num_points() / 2, sp.num_points() - 1];
        for (si, s) in group.iter().enumerate() {
            for (hi, h) in group.iter().enumerate() {
                let shi = t.group_index(&s.compose(h));
                for k in 0..cx.degrees() {
                    for &p in &sample {
                        let hp = sp.act_point(hi, p);
                        let composed =
                            cx.action_matrix(si, k, hp).mul(&cx.action_matrix(hi, k, p));
                        assert_eq!(composed, cx.action_matrix(shi, k, p), "s {si} h {hi} k {k} p {p}");
                    }
                }
            }
        }
    }

    /// The fixed-tree shortcut for the alternating trace agrees with the
    /// graded trace of the assembled matrices.
    #[test]
    fn euler_trace_matches_the_assembled_matrix_traces() {
        let cx = random_complex(3, 2, 21);
        let sp = Arc::clone(cx.space());
        for g in 0..sp.group_order() {
            for p in 0..sp.num_points() {
                if sp.act_point(g, p) != p {
                    continue;
                }
                let mut oracle = LaurentPoly::zero(cx.d());
                for k in 0..cx.degrees() {
                    oracle = oracle.add(&graded_trace(
                        &cx.action_matrix(g, k, p),
                        &cx.space_at(k, p).shifted(k),
                    ));
                }
                assert_eq!(cx.euler_trace(g, p), oracle, "g {g} p {p}");
            }
        }
    }

    /// Exactness bookkeeping: the alternating chain character equals the
    /// alternating cohomology character at every point.
    #[test]
    fn alternating_characters_survive_taking_cohomology() {
        for seed in 0..3 {
            let cx = random_complex(3, 2, seed);
            for p in 0..cx.space().num_points() {
                let h = cx.pointwise_cohomology(p);
                let mut chain = LaurentPoly::zero(cx.d());
                let mut coh = LaurentPoly::zero(cx.d());
                for k in 0..cx.degrees() {
                    chain = chain.add(&cx.space_at(k, p).shifted(k).character());
                    coh = coh.add(&h[k].character());
                }
                assert_eq!(chain, coh, "seed {seed} point {p}");
            }
        }
    }

    #[test]
    fn single_position_cohomology_is_the_bare_fiber() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = XSpace::random(&mut rng, 2, 1, 1);
        let datum = LocalDatum::random(&mut rng, 2, 1, 1, 2);
        let sys = strict_system(x, 1, &datum);
        let cx = build_gn(&sys).unwrap();
        assert_eq!(cx.degrees(), 1);
        let top = cx.partition_of(0, 0);
        for p in 0..cx.space().num_points() {
            let h = cx.pointwise_cohomology(p);
            assert_eq!(h.len(), 1);
            assert_eq!(h[0].dim(), sys.dim(top, p));
            assert_eq!(h[0].character(), sys.fiber(top, p).character());
        }
    }

    #[test]
    fn zero_system_gives_an_empty_complex() {
        let sp = Arc::new(build_space(XSpace::unweighted(2, 1), 3).unwrap());
        let cx = build_gn(&System::zero(sp, 1)).unwrap();
        for k in 0..cx.degrees() {
            for p in 0..cx.space().num_points() {
                assert_eq!(cx.dim_at(k, p), 0);
            }
        }
        assert!(cx.check_off_diagonal_acyclicity().is_ok());
    }

    #[test]
    fn cohomology_clears_points_with_distinct_coordinates() {
        for seed in [0, 1] {
            for (n, x_len) in [(2, 3), (3, 2)] {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let x = XSpace::random(&mut rng, x_len, 1, 1);
                let datum = LocalDatum::random(&mut rng, x_len, n, 1, 2);
                let cx = build_gn(&strict_system(x, n, &datum)).unwrap();
                let cleared = cx.check_off_diagonal_acyclicity().unwrap();
                assert!(cleared > 0, "seed {seed} n {n}");
            }
        }
    }

    #[test]
    fn partial_systems_are_rejected() {
        let sp = Arc::new(build_space(XSpace::unweighted(2, 1), 2).unwrap());
        let datum = LocalDatum::structure(2, 2, 1);
        let sys = system_from_local_datum(&sp, &datum).unwrap();
        let Err(err) = build_gn(&sys) else {
            panic!("a partial system must be rejected")
        };
        assert!(err.to_string().contains("strictify"));
    }

    /// Strictification preserves classes: for a two-position family the
    /// alternating cohomology character equals the alternating class of
    /// the original fibers, point by point.
    #[test]
    fn euler_class_matches_the_original_fibers_for_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = XSpace::random(&mut rng, 2, 1, 1);
        let datum = LocalDatum::random(&mut rng, 2, 2, 1, 2);
        let sp = Arc::new(build_space(x, 2).unwrap());
        let original = system_from_local_datum(&sp, &datum).unwrap();
        let strict = assemble_strict(&strictify(&original).unwrap()).unwrap();
        let cx = build_gn(&strict).unwrap();
        let fine = sp.table().idx(&SetPartition::singletons(2));
        let top = sp.table().idx(&SetPartition::one_block(2));
        for p in 0..sp.num_points() {
            let mut coh = LaurentPoly::zero(1);
            for space in &cx.pointwise_cohomology(p) {
                coh = coh.add(&space.character());
            }
            let expected =
                original.fiber(top, p).character().sub(&original.fiber(fine, p).character());
            assert_eq!(coh, expected, "point {p}");
        }
    }
}
