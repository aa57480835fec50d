//! Equivariant weighted sheaves on a finite carrier set.
//!
//! A sheaf here is a group acting on a finite set of points together with a
//! weighted space over each point and a matrix over each (element, point)
//! pair, subject to the cocycle law. Construction validates the law on a
//! generating set, which extends to the whole group by induction on word
//! length, and checks that every matrix preserves weight and parity.
//!
//! The two assembly operations at the heart of the module are
//! [`tensor_over_partition`], which tensors one input per block of a set
//! partition with sign corrections when odd lines move past each other, and
//! [`f_lambda`], which spreads those tensors over all partitions of a fixed
//! shape. Both share [`block_action_matrix`].

use num_traits::Zero;
use rand::Rng;

use crate::coeffring::{rat, LaurentPoly};
use crate::combinat::{
    enumerate_set_partitions, induced_block_perm, IntPartition, Permutation, SetPartition,
};
use crate::equirep::group::PermGroup;
use crate::equirep::space::{BasisLine, WeightedSpace};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedSheaf {
    d: usize,
    group: PermGroup,
    /// point_map[g][p] is the image of carrier point p under group element g.
    point_map: Vec<Vec<usize>>,
    fibers: Vec<WeightedSpace>,
    /// maps[g][p] sends fiber(p) to fiber(point_map[g][p]).
    maps: Vec<Vec<QMatrix>>,
}

impl WeightedSheaf {
    pub fn new(
        d: usize,
        group: PermGroup,
        point_map: Vec<Vec<usize>>,
        fibers: Vec<WeightedSpace>,
        maps: Vec<Vec<QMatrix>>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::Invalid(msg));
        let order = group.order();
        let carrier = fibers.len();
        if point_map.len() != order || maps.len() != order {
            return bad("need one carrier action and one map set per group element".into());
        }
        for f in &fibers {
            if f.d() != d {
                return bad("fiber grading width disagrees with the sheaf".into());
            }
        }
        for g in 0..order {
            if point_map[g].len() != carrier || maps[g].len() != carrier {
                return bad("carrier size mismatch".into());
            }
            let mut seen = vec![false; carrier];
            for &q in &point_map[g] {
                if q >= carrier || seen[q] {
                    return bad("carrier action is not a bijection".into());
                }
                seen[q] = true;
            }
            for p in 0..carrier {
                let m = &maps[g][p];
                let src = &fibers[p];
                let tgt = &fibers[point_map[g][p]];
                if m.rows() != tgt.dim() || m.cols() != src.dim() {
                    return bad(format!("map shape mismatch at element {g}, point {p}"));
                }
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        if m[(r, c)].is_zero() {
                            continue;
                        }
                        let from = src.line_at(c);
                        let to = tgt.line_at(r);
                        if from.weight != to.weight || from.parity != to.parity {
                            return bad(format!(
                                "map at element {g}, point {p} moves weight or parity"
                            ));
                        }
                    }
                }
            }
        }
        // identity is element 0 of a validated group
        for p in 0..carrier {
            if point_map[0][p] != p || maps[0][p] != QMatrix::identity(fibers[p].dim()) {
                return bad("identity element must act trivially".into());
            }
        }
        for gi in group.generating_positions() {
            let g = group.element(gi);
            for hi in 0..order {
                let h = group.element(hi);
                let ghi = group
                    .position(&g.compose(h))
                    .expect("group is closed under composition");
                for p in 0..carrier {
                    let hp = point_map[hi][p];
                    if point_map[ghi][p] != point_map[gi][hp] {
                        return bad("carrier action is not a homomorphism".into());
                    }
                    if maps[ghi][p] != maps[gi][hp].mul(&maps[hi][p]) {
                        return bad(format!(
                            "cocycle fails at elements {gi}, {hi}, point {p}"
                        ));
                    }
                }
            }
        }
        Ok(WeightedSheaf { d, group, point_map, fibers, maps })
    }

    /// A single carrier point with an explicit representation, one matrix
    /// per group element in element order.
    pub fn from_point_rep(group: &PermGroup, space: WeightedSpace, rep: Vec<QMatrix>) -> Result<Self> {
        let d = space.d();
        let order = group.order();
        if rep.len() != order {
            return Err(Error::Invalid("need one matrix per group element".into()));
        }
        Self::new(
            d,
            group.clone(),
            vec![vec![0]; order],
            vec![space],
            rep.into_iter().map(|m| vec![m]).collect(),
        )
    }

    /// Rank one on a single point: the given weight and parity, acted on
    /// trivially or through the sign of the permutation.
    pub fn character_line(group: &PermGroup, weight: Vec<i32>, parity: u8, twist_by_sign: bool) -> Self {
        let space = WeightedSpace::line(weight, parity);
        let rep = group
            .elements()
            .iter()
            .map(|s| {
                let v = if twist_by_sign { s.sign() } else { 1 };
                QMatrix::from_rows(vec![vec![rat(v)]])
            })
            .collect();
        Self::from_point_rep(group, space, rep).expect("a character is a representation")
    }

    /// Weight zero, even, trivial action.
    pub fn unit(group: &PermGroup, d: usize) -> Self {
        Self::character_line(group, vec![0; d], 0, false)
    }

    /// The empty sheaf on a single point.
    pub fn zero(group: &PermGroup, d: usize) -> Self {
        let order = group.order();
        Self::new(
            d,
            group.clone(),
            vec![vec![0]; order],
            vec![WeightedSpace::empty(d)],
            vec![vec![QMatrix::zero(0, 0)]; order],
        )
        .expect("the empty sheaf is valid")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn carrier_size(&self) -> usize {
        self.fibers.len()
    }

    pub fn fiber(&self, p: usize) -> &WeightedSpace {
        &self.fibers[p]
    }

    pub fn point_image(&self, g: usize, p: usize) -> usize {
        self.point_map[g][p]
    }

    pub fn map(&self, g: usize, p: usize) -> &QMatrix {
        &self.maps[g][p]
    }

    /// The action matrix of a carrier-one sheaf at a group element.
    pub fn flat_map(&self, s: &Permutation) -> &QMatrix {
        assert_eq!(self.carrier_size(), 1, "flat_map needs a single carrier point");
        let gi = self.group.position(s).expect("element of the acting group");
        &self.maps[gi][0]
    }

    pub fn total_dim(&self) -> usize {
        self.fibers.iter().map(|f| f.dim()).sum()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.carrier_size() + 1);
        let mut acc = 0;
        for f in &self.fibers {
            out.push(acc);
            acc += f.dim();
        }
        out.push(acc);
        out
    }

    /// The action on the direct sum of all fibers, blocks placed by the
    /// carrier action.
    fn total_matrix_at(&self, gi: usize) -> QMatrix {
        let off = self.offsets();
        let dim = *off.last().unwrap();
        let mut out = QMatrix::zero(dim, dim);
        for p in 0..self.carrier_size() {
            let q = self.point_map[gi][p];
            let m = &self.maps[gi][p];
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    if !m[(r, c)].is_zero() {
                        out[(off[q] + r, off[p] + c)] = m[(r, c)].clone();
                    }
                }
            }
        }
        out
    }

    /// Graded trace at a group element: fixed carrier points contribute the
    /// signed diagonal of their map, as a Laurent polynomial in the weights.
    pub fn trace(&self, s: &Permutation) -> LaurentPoly {
        let gi = self.group.position(s).expect("element of the acting group");
        let mut out = LaurentPoly::zero(self.d);
        for p in 0..self.carrier_size() {
            if self.point_map[gi][p] != p {
                continue;
            }
            let m = &self.maps[gi][p];
            for (j, line) in self.fibers[p].basis().iter().enumerate() {
                let c = &m[(j, j)];
                if c.is_zero() {
                    continue;
                }
                let signed = if line.parity == 0 { c.clone() } else { -c.clone() };
                out.add_term(line.weight.clone(), signed);
            }
        }
        out
    }

    /// Tensor product over a shared carrier. Both factors must have the same
    /// group and the same carrier action. No sign enters here: the factors
    /// keep their order, and the maps are parity even.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::Invalid("tensor factors must share the group".into()));
        }
        if self.d != other.d {
            return Err(Error::Invalid("tensor factors must share the grading width".into()));
        }
        if self.point_map != other.point_map {
            return Err(Error::Invalid("tensor factors must share the carrier action".into()));
        }
        let fibers: Vec<WeightedSpace> = self
            .fibers
            .iter()
            .zip(&other.fibers)
            .map(|(a, b)| a.tensor(b))
            .collect();
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(a, b)| a.kronecker(b)).collect())
            .collect();
        Self::new(self.d, self.group.clone(), self.point_map.clone(), fibers, maps)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.group != other.group || self.d != other.d {
            return Err(Error::Invalid("summands must share the group and grading width".into()));
        }
        let k = self.carrier_size();
        let mut fibers = self.fibers.clone();
        fibers.extend_from_slice(&other.fibers);
        let mut point_map = Vec::with_capacity(self.group.order());
        let mut maps = Vec::with_capacity(self.group.order());
        for g in 0..self.group.order() {
            let mut row = self.point_map[g].clone();
            row.extend(other.point_map[g].iter().map(|&q| q + k));
            point_map.push(row);
            let mut mrow = self.maps[g].clone();
            mrow.extend_from_slice(&other.maps[g]);
            maps.push(mrow);
        }
        Self::new(self.d, self.group.clone(), point_map, fibers, maps)
    }

    /// Collapse the carrier to one point carrying the direct sum of all
    /// fibers; the maps become block matrices.
    pub fn flatten(&self) -> Self {
        if self.carrier_size() == 1 {
            return self.clone();
        }
        let order = self.group.order();
        let mut space = WeightedSpace::empty(self.d);
        for f in &self.fibers {
            space = space.direct_sum(f);
        }
        let maps = (0..order).map(|g| vec![self.total_matrix_at(g)]).collect();
        WeightedSheaf {
            d: self.d,
            group: self.group.clone(),
            point_map: vec![vec![0]; order],
            fibers: vec![space],
            maps,
        }
    }

    /// Induce along the inclusion into a bigger group: the carrier becomes
    /// the left cosets, and g sends the coset of x_i to the coset of g x_i,
    /// acting through the subgroup element that connects the representatives.
    pub fn induce(&self, big: &PermGroup) -> Result<Self> {
        let flat = self.flatten();
        let h = &flat.group;
        let reps = h.coset_reps_in(big)?;
        let m = reps.len();
        let mut coset_of = vec![usize::MAX; big.order()];
        for (j, x) in reps.iter().enumerate() {
            for e in h.elements() {
                coset_of[big.position(&x.compose(e)).unwrap()] = j;
            }
        }
        let fiber = flat.fibers[0].clone();
        let mut point_map = Vec::with_capacity(big.order());
        let mut maps = Vec::with_capacity(big.order());
        for g in big.elements() {
            let mut prow = Vec::with_capacity(m);
            let mut mrow = Vec::with_capacity(m);
            for x in &reps {
                let gx = g.compose(x);
                let j = coset_of[big.position(&gx).unwrap()];
                let conn = reps[j].inverse().compose(&gx);
                let hi = h.position(&conn).expect("connecting element lies in the subgroup");
                prow.push(j);
                mrow.push(flat.maps[hi][0].clone());
            }
            point_map.push(prow);
            maps.push(mrow);
        }
        Self::new(self.d, big.clone(), point_map, vec![fiber; m], maps)
    }

    /// The invariant subspace, one averaging projector per weight and parity
    /// class, with multiplicities from exact ranks.
    pub fn invariants(&self) -> WeightedSpace {
        use std::collections::BTreeMap;
        let dim = self.total_dim();
        let mut avg = QMatrix::zero(dim, dim);
        for gi in 0..self.group.order() {
            avg = avg.add(&self.total_matrix_at(gi));
        }
        let avg = avg.scale(&(rat(1) / rat(self.group.order() as i64)));
        let mut classes: BTreeMap<&BasisLine, Vec<usize>> = BTreeMap::new();
        let off = self.offsets();
        for (p, f) in self.fibers.iter().enumerate() {
            for (j, line) in f.basis().iter().enumerate() {
                classes.entry(line).or_default().push(off[p] + j);
            }
        }
        let mut basis = Vec::new();
        for (line, idxs) in classes {
            let rank = avg.submatrix(&idxs, &idxs).rank();
            for _ in 0..rank {
                basis.push(line.clone());
            }
        }
        WeightedSpace::new(self.d, basis)
    }

    /// Character of the invariants, computed as the group average of traces.
    pub fn invariant_character(&self) -> LaurentPoly {
        let mut sum = LaurentPoly::zero(self.d);
        for s in self.group.elements() {
            sum = sum.add(&self.trace(s));
        }
        sum.scale(&(rat(1) / rat(self.group.order() as i64)))
    }
}

/// Graded trace of a square matrix against an ordered weighted basis.
pub fn graded_trace(m: &QMatrix, space: &WeightedSpace) -> LaurentPoly {
    assert_eq!(m.rows(), space.dim());
    assert_eq!(m.cols(), space.dim());
    let mut out = LaurentPoly::zero(space.d());
    for (j, line) in space.basis().iter().enumerate() {
        let c = &m[(j, j)];
        if c.is_zero() {
            continue;
        }
        let signed = if line.parity == 0 { c.clone() } else { -c.clone() };
        out.add_term(line.weight.clone(), signed);
    }
    out
}

/// Signed permutation matrix that reorders tensor factors: source factor i
/// moves to position pos[i], and each transposition of two odd lines
/// contributes a minus sign.
pub(crate) fn reorder_matrix(spaces: &[&WeightedSpace], pos: &[usize]) -> QMatrix {
    let l = spaces.len();
    let dims: Vec<usize> = spaces.iter().map(|s| s.dim()).collect();
    let total: usize = dims.iter().product();
    let mut dims_t = vec![0usize; l];
    for i in 0..l {
        dims_t[pos[i]] = dims[i];
    }
    let mut out = QMatrix::zero(total, total);
    for src in 0..total {
        let mut rem = src;
        let mut tuple = vec![0usize; l];
        for i in (0..l).rev() {
            tuple[i] = rem % dims[i];
            rem /= dims[i];
        }
        let mut sign = 1i64;
        for i in 0..l {
            if spaces[i].line_at(tuple[i]).parity == 0 {
                continue;
            }
            for j in i + 1..l {
                if pos[i] > pos[j] && spaces[j].line_at(tuple[j]).parity == 1 {
                    sign = -sign;
                }
            }
        }
        let mut tgt_tuple = vec![0usize; l];
        for i in 0..l {
            tgt_tuple[pos[i]] = tuple[i];
        }
        let mut tgt = 0usize;
        for k in 0..l {
            tgt = tgt * dims_t[k] + tgt_tuple[k];
        }
        out[(tgt, src)] = rat(sign);
    }
    out
}

/// The tensor of the block fibers of `parts`, blocks ascending, where
/// `flat[k-1]` is the carrier-one input of arity k.
pub fn tensor_space(flat: &[WeightedSheaf], parts: &SetPartition) -> WeightedSpace {
    let d = flat[0].d();
    let mut out = WeightedSpace::unit(d);
    for a in parts.blocks() {
        out = out.tensor(flat[a.card() - 1].fiber(0));
    }
    out
}

/// Action of a permutation from the block tensor of `parts` to the block
/// tensor of its image partition: each factor moves by the permutation
/// induced on its block, then the factors are reordered to match the sorted
/// image blocks, with sign corrections for odd lines that cross.
pub(crate) fn block_action_matrix(
    flat: &[WeightedSheaf],
    parts: &SetPartition,
    s: &Permutation,
) -> QMatrix {
    let blocks = parts.blocks();
    let mut kron = QMatrix::identity(1);
    for a in blocks {
        let tau = induced_block_perm(s, a);
        kron = kron.kronecker(flat[a.card() - 1].flat_map(&tau));
    }
    let images: Vec<_> = blocks.iter().map(|a| s.act_subset(a)).collect();
    let mut sorted = images.clone();
    sorted.sort();
    let pos: Vec<usize> = images
        .iter()
        .map(|im| sorted.binary_search(im).unwrap())
        .collect();
    let spaces: Vec<&WeightedSpace> = blocks.iter().map(|a| flat[a.card() - 1].fiber(0)).collect();
    reorder_matrix(&spaces, &pos).mul(&kron)
}

fn flatten_inputs(inputs: &[WeightedSheaf], max_arity: usize) -> Result<Vec<WeightedSheaf>> {
    if inputs.is_empty() {
        return Err(Error::Invalid("need at least one input".into()));
    }
    let d = inputs[0].d();
    let mut flat = Vec::with_capacity(max_arity);
    for (i, f) in inputs.iter().take(max_arity).enumerate() {
        if f.d() != d {
            return Err(Error::Invalid("inputs must share the grading width".into()));
        }
        if f.group().n() != i + 1 || !f.group().is_symmetric() {
            return Err(Error::Invalid(format!(
                "input {} must carry the full symmetric action on {} letters",
                i,
                i + 1
            )));
        }
        flat.push(f.flatten());
    }
    if flat.len() < max_arity {
        return Err(Error::Invalid(format!("no input of arity {max_arity}")));
    }
    Ok(flat)
}

/// One input tensored per block of a fixed partition, as a sheaf on a point
/// for the partition's stabilizer. Block swaps permute equal-arity factors.
pub fn tensor_over_partition(inputs: &[WeightedSheaf], parts: &SetPartition) -> Result<WeightedSheaf> {
    let max_arity = parts.blocks().iter().map(|a| a.card()).max().unwrap();
    let flat = flatten_inputs(inputs, max_arity)?;
    let d = flat[0].d();
    let group = PermGroup::stabilizer_of_partition(parts);
    let fiber = tensor_space(&flat, parts);
    let order = group.order();
    let maps = group
        .elements()
        .iter()
        .map(|tau| vec![block_action_matrix(&flat, parts, tau)])
        .collect();
    WeightedSheaf::new(d, group, vec![vec![0]; order], vec![fiber], maps)
}

/// The inputs spread over every partition of shape `lambda`, with the full
/// symmetric group permuting the carrier.
pub fn f_lambda(inputs: &[WeightedSheaf], lambda: &IntPartition) -> Result<WeightedSheaf> {
    let n = lambda.n();
    if n == 0 {
        return Err(Error::InvalidPartition("empty shape".into()));
    }
    let max_arity = lambda.parts()[0];
    let flat = flatten_inputs(inputs, max_arity)?;
    let d = flat[0].d();
    let carrier: Vec<SetPartition> = enumerate_set_partitions(n)
        .into_iter()
        .filter(|p| p.shape() == *lambda)
        .collect();
    let group = PermGroup::symmetric(n);
    let fibers: Vec<WeightedSpace> = carrier.iter().map(|p| tensor_space(&flat, p)).collect();
    let mut point_map = Vec::with_capacity(group.order());
    let mut maps = Vec::with_capacity(group.order());
    for g in group.elements() {
        let mut prow = Vec::with_capacity(carrier.len());
        let mut mrow = Vec::with_capacity(carrier.len());
        for p in &carrier {
            let q = p.act(g);
            prow.push(carrier.binary_search(&q).expect("action preserves the shape"));
            mrow.push(block_action_matrix(&flat, p, g));
        }
        point_map.push(prow);
        maps.push(mrow);
    }
    WeightedSheaf::new(d, group, point_map, fibers, maps)
}

/// A reproducible direct sum of small atoms: character lines with random
/// weights, parities and sign twists, and occasionally a line induced from
/// the stabilizer of a random partition.
pub fn random_sheaf<R: Rng>(rng: &mut R, group: &PermGroup, d: usize, max_atoms: usize) -> WeightedSheaf {
    let atoms = rng.gen_range(1..=max_atoms.max(1));
    let mut out: Option<WeightedSheaf> = None;
    for _ in 0..atoms {
        let weight: Vec<i32> = (0..d).map(|_| rng.gen_range(-2..=2)).collect();
        let parity = rng.gen_range(0..=1u8);
        let twist = rng.gen_bool(0.5);
        let atom = if group.is_symmetric() && group.n() >= 2 && rng.gen_bool(0.25) {
            let parts = {
                let all = enumerate_set_partitions(group.n());
                all[rng.gen_range(0..all.len())].clone()
            };
            let small = PermGroup::stabilizer_of_partition(&parts);
            WeightedSheaf::character_line(&small, weight, parity, twist)
                .induce(group)
                .expect("stabilizers embed in the symmetric group")
                .flatten()
        } else {
            WeightedSheaf::character_line(group, weight, parity, twist)
        };
        out = Some(match out {
            None => atom,
            Some(acc) => acc.direct_sum(&atom).expect("same group and width"),
        });
    }
    out.unwrap()
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::combinat::{all_perms, class_representative, consecutive_partition_of_shape};

    fn odd_line_inputs(n: usize) -> Vec<WeightedSheaf> {
        // arity one: a single odd line of weight 1; higher arities: units
        let mut out = vec![WeightedSheaf::character_line(
            &PermGroup::symmetric(1),
            vec![1],
            1,
            false,
        )];
        for k in 2..=n {
            out.push(WeightedSheaf::unit(&PermGroup::symmetric(k), 1));
        }
        out
    }

    #[test]
    fn trace_at_identity_is_the_fiber_character() {
        let g = PermGroup::symmetric(3);
        let f = WeightedSheaf::character_line(&g, vec![2], 1, true);
        assert_eq!(f.trace(&Permutation::identity(3)), f.fiber(0).character());
    }

    #[test]
    fn tensor_multiplies_traces() {
        let g = PermGroup::symmetric(3);
        let a = WeightedSheaf::character_line(&g, vec![1, 0], 0, true);
        let b = WeightedSheaf::character_line(&g, vec![0, -1], 1, false);
        let ab = a.tensor(&b).unwrap();
        for s in g.elements() {
            assert_eq!(ab.trace(s), a.trace(s).mul(&b.trace(s)));
        }
    }

    #[test]
    fn unit_is_neutral_for_tensor() {
        let g = PermGroup::symmetric(2);
        let v = WeightedSheaf::character_line(&g, vec![3], 1, true);
        let u = WeightedSheaf::unit(&g, 1);
        assert_eq!(v.tensor(&u).unwrap(), v);
    }

    #[test]
    fn two_odd_singletons_give_the_sign_character() {
        // swapping two odd factors costs a sign, so the rank-one sheaf built
        // from an odd line on singleton blocks carries the sign character
        let inputs = odd_line_inputs(2);
        let lambda = IntPartition::new(vec![1, 1]);
        let f = f_lambda(&inputs, &lambda).unwrap();
        assert_eq!(f.carrier_size(), 1);
        let id = Permutation::identity(2);
        let sw = Permutation::transposition(2, 1, 2);
        // the fiber line is odd tensor odd, hence even of weight 2
        assert_eq!(f.trace(&id), LaurentPoly::monomial(vec![2], rat(1)));
        assert_eq!(f.trace(&sw), LaurentPoly::monomial(vec![2], rat(-1)));
    }

    #[test]
    fn induced_from_the_whole_group_is_flattening() {
        let g = PermGroup::symmetric(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = random_sheaf(&mut rng, &g, 2, 3);
        assert_eq!(f.induce(&g).unwrap(), f.flatten());
    }

    #[test]
    fn induced_from_the_trivial_subgroup_is_regular() {
        let big = PermGroup::symmetric(2);
        let f = WeightedSheaf::unit(&PermGroup::trivial(2), 1);
        let ind = f.induce(&big).unwrap();
        assert_eq!(ind.total_dim(), 2);
        assert_eq!(
            ind.trace(&Permutation::identity(2)),
            LaurentPoly::constant(1, rat(2))
        );
        assert!(ind.trace(&Permutation::transposition(2, 1, 2)).is_zero());
    }

    #[test]
    fn induced_dimension_is_index_times_dimension() {
        let parts = SetPartition::from_vecs(4, &[vec![1, 2], vec![3, 4]]).unwrap();
        let small = PermGroup::stabilizer_of_partition(&parts);
        let big = PermGroup::symmetric(4);
        let f = WeightedSheaf::character_line(&small, vec![1], 0, true);
        let ind = f.induce(&big).unwrap();
        assert_eq!(ind.total_dim(), big.order() / small.order());
        assert_eq!(ind.carrier_size(), 3);
    }

    #[test]
    fn invariants_of_characters() {
        let g = PermGroup::symmetric(3);
        let trivial = WeightedSheaf::unit(&g, 1);
        assert_eq!(trivial.invariants().dim(), 1);
        let sign = WeightedSheaf::character_line(&g, vec![0], 0, true);
        assert_eq!(sign.invariants().dim(), 0);
        // the regular representation has a one dimensional invariant part
        let regular = WeightedSheaf::unit(&PermGroup::trivial(3), 1).induce(&g).unwrap();
        assert_eq!(regular.total_dim(), 6);
        assert_eq!(regular.invariants().dim(), 1);
    }

    #[test]
    fn invariant_rank_matches_averaged_trace() {
        let g = PermGroup::symmetric(3);
        for seed in 0..4 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_sheaf(&mut rng, &g, 2, 4);
            assert_eq!(f.invariants().character(), f.invariant_character());
        }
    }

    #[test]
    fn traces_are_class_functions() {
        let inputs = odd_line_inputs(4);
        let lambda = IntPartition::new(vec![2, 1, 1]);
        let f = f_lambda(&inputs, &lambda).unwrap();
        for s in all_perms(4) {
            let rep = class_representative(&s.cycle_type());
            assert_eq!(f.trace(&s), f.trace(&rep));
        }
    }

    #[test]
    fn spreading_matches_induction_from_one_partition() {
        // building over every partition of a shape agrees, trace by trace,
        // with inducing the single-partition tensor up from its stabilizer
        let g3 = PermGroup::symmetric(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let inputs = vec![
            random_sheaf(&mut rng, &PermGroup::symmetric(1), 2, 2),
            random_sheaf(&mut rng, &PermGroup::symmetric(2), 2, 2),
            random_sheaf(&mut rng, &PermGroup::symmetric(3), 2, 2),
        ];
        for lambda in [vec![2, 1], vec![1, 1, 1], vec![3]] {
            let lambda = IntPartition::new(lambda);
            let spread = f_lambda(&inputs, &lambda).unwrap();
            let parts = consecutive_partition_of_shape(&lambda);
            let induced = tensor_over_partition(&inputs, &parts).unwrap().induce(&g3).unwrap();
            for s in g3.elements() {
                assert_eq!(spread.trace(s), induced.trace(s), "at {s} for {lambda:?}");
            }
        }
    }

    #[test]
    fn reorder_matrix_signs() {
        let odd = WeightedSpace::line(vec![1], 1);
        let even = WeightedSpace::line(vec![2], 0);
        // swapping two odd factors
        let m = reorder_matrix(&[&odd, &odd], &[1, 0]);
        assert_eq!(m[(0, 0)], rat(-1));
        // odd past even keeps the sign
        let m = reorder_matrix(&[&odd, &even], &[1, 0]);
        assert_eq!(m[(0, 0)], rat(1));
        // identity order
        let m = reorder_matrix(&[&odd, &odd], &[0, 1]);
        assert_eq!(m[(0, 0)], rat(1));
    }

    #[test]
    fn rejects_broken_cocycle() {
        let g = PermGroup::symmetric(2);
        // a would-be sign character with one matrix corrupted
        let space = WeightedSpace::line(vec![0], 0);
        let rep = vec![
            QMatrix::identity(1),
            QMatrix::from_rows(vec![vec![rat(2)]]),
        ];
        assert!(WeightedSheaf::from_point_rep(&g, space, rep).is_err());
    }

    #[test]
    fn rejects_weight_moving_map() {
        let g = PermGroup::symmetric(2);
        let space = WeightedSpace::new(1, vec![
            BasisLine::new(vec![0], 0),
            BasisLine::new(vec![1], 0),
        ]);
        let swap = QMatrix::from_rows(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]);
        let rep = vec![QMatrix::identity(2), swap];
        assert!(WeightedSheaf::from_point_rep(&g, space, rep).is_err());
    }
}
