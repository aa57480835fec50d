//! Systems of weighted sheaves over a stratified configuration space.
//!
//! A system assigns to every index partition a sheaf on the point set (one
//! weighted fiber per point) and to every comparable index pair a fiberwise
//! transition map.  In a partial system the transition `i -> j` exists only
//! over `U_{i,j}` and is invertible there; in a strict system it exists over
//! every point and restricts to an isomorphism over `U_{i,j}`.  An optional
//! action layer carries one matrix per group element, partition and point,
//! with the cocycle law and compatibility squares validated on construction.
//!
//! Morphisms are fiberwise matrices commuting with all of the above.  Their
//! kernels and cokernels are again systems; both are computed per fiber with
//! exact arithmetic and class-by-class bases so the grading stays visible.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::Zero;
use rand::Rng;

use crate::coeffring::LaurentPoly;
use crate::combinat::{generators, PartitionTable, Subset};
use crate::equirep::sheaf::reorder_matrix;
use crate::equirep::{graded_trace, BasisLine, WeightedSpace};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;

use super::space::StratSpace;

/// All strictly comparable index pairs `(finer, coarser)` of the lattice.
pub(crate) fn comparable_pairs(t: &PartitionTable) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..t.len() {
        for j in 0..t.len() {
            if i != j && t.leq(i, j) {
                out.push((i, j));
            }
        }
    }
    out
}

fn is_graded(m: &QMatrix, src: &WeightedSpace, tgt: &WeightedSpace) -> bool {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !m[(r, c)].is_zero() && tgt.line_at(r) != src.line_at(c) {
                return false;
            }
        }
    }
    true
}

/// Basis positions grouped by (weight, parity) class, classes in their
/// natural order.
fn classes(space: &WeightedSpace) -> BTreeMap<BasisLine, Vec<usize>> {
    let mut out: BTreeMap<BasisLine, Vec<usize>> = BTreeMap::new();
    for (i, line) in space.basis().iter().enumerate() {
        out.entry(line.clone()).or_default().push(i);
    }
    out
}

#[derive(Clone)]
pub struct System {
    space: Arc<StratSpace>,
    d: usize,
    strict: bool,
    fibers: Vec<Vec<WeightedSpace>>,
    phi: BTreeMap<(usize, usize), Vec<Option<QMatrix>>>,
    rho: Option<Vec<Vec<Vec<QMatrix>>>>,
}

impl System {
    /// Validating constructor.  `fibers[i][p]` is the fiber of object `i` at
    /// point `p`; `phi` holds one entry per strictly comparable pair; `rho`,
    /// when present, holds `rho[g][i][p] : fiber(i, p) -> fiber(gi, gp)`.
    ///
    /// Checks performed: shapes and grading of every matrix; transitions
    /// present exactly on `U_{i,j}` (partial) or everywhere (strict);
    /// invertibility over `U_{i,j}`; composition over common domains;
    /// the action squares against every transition, the identity element
    /// acting as the identity, and the cocycle law on a generating set,
    /// which propagates to the whole group by induction on word length.
    pub fn new(
        space: Arc<StratSpace>,
        d: usize,
        strict: bool,
        fibers: Vec<Vec<WeightedSpace>>,
        phi: BTreeMap<(usize, usize), Vec<Option<QMatrix>>>,
        rho: Option<Vec<Vec<Vec<QMatrix>>>>,
    ) -> Result<Self> {
        let t = space.table();
        let m = t.len();
        let np = space.num_points();
        if fibers.len() != m || fibers.iter().any(|row| row.len() != np) {
            return Err(Error::Invalid("fiber table has the wrong shape".into()));
        }
        for row in &fibers {
            for f in row {
                if f.d() != d {
                    return Err(Error::Invalid("fiber grading dimension mismatch".into()));
                }
            }
        }
        let sys = System { space, d, strict, fibers, phi, rho };
        sys.validate()?;
        Ok(sys)
    }

    fn validate(&self) -> Result<()> {
        let sp = &self.space;
        let t = sp.table();
        let np = sp.num_points();
        let pairs = comparable_pairs(t);
        if self.phi.len() != pairs.len()
            || pairs.iter().any(|k| !self.phi.contains_key(k))
        {
            return Err(Error::Invalid(
                "transition table keys must be exactly the comparable pairs".into(),
            ));
        }
        for (&(i, j), row) in &self.phi {
            if row.len() != np {
                return Err(Error::Invalid(format!(
                    "transition ({i},{j}) has {} entries for {np} points",
                    row.len()
                )));
            }
            for p in 0..np {
                let on_domain = sp.in_u_pair(p, i, j);
                match &row[p] {
                    None => {
                        if self.strict {
                            return Err(Error::Invalid(format!(
                                "strict system misses transition ({i},{j}) at point {p}"
                            )));
                        }
                        if on_domain {
                            return Err(Error::Invalid(format!(
                                "transition ({i},{j}) undefined on its domain at point {p}"
                            )));
                        }
                    }
                    Some(mat) => {
                        if !self.strict && !on_domain {
                            return Err(Error::Invalid(format!(
                                "partial transition ({i},{j}) defined off its domain at point {p}"
                            )));
                        }
                        let src = &self.fibers[i][p];
                        let tgt = &self.fibers[j][p];
                        if mat.rows() != tgt.dim() || mat.cols() != src.dim() {
                            return Err(Error::Invalid(format!(
                                "transition ({i},{j}) at point {p} has the wrong shape"
                            )));
                        }
                        if !is_graded(mat, src, tgt) {
                            return Err(Error::Invalid(format!(
                                "transition ({i},{j}) at point {p} moves weight or parity"
                            )));
                        }
                        if on_domain
                            && (src.dim() != tgt.dim() || mat.inverse().is_none())
                        {
                            return Err(Error::Invalid(format!(
                                "transition ({i},{j}) not invertible over its domain at point {p}"
                            )));
                        }
                    }
                }
            }
        }
        // composition over common domains
        for &(i, j) in &pairs {
            for &(j2, k) in &pairs {
                if j2 != j || !t.leq(i, k) || i == k {
                    continue;
                }
                for p in 0..np {
                    let (a, b, c) = (
                        self.phi[&(i, j)][p].as_ref(),
                        self.phi[&(j, k)][p].as_ref(),
                        self.phi[&(i, k)][p].as_ref(),
                    );
                    if let (Some(a), Some(b)) = (a, b) {
                        let direct = c.ok_or_else(|| {
                            Error::Invalid(format!(
                                "transitions ({i},{j}),({j},{k}) defined at point {p} but ({i},{k}) is not"
                            ))
                        })?;
                        if b.mul(a) != *direct {
                            return Err(Error::Invalid(format!(
                                "composition ({i},{j},{k}) fails at point {p}"
                            )));
                        }
                    }
                }
            }
        }
        let Some(rho) = &self.rho else { return Ok(()) };
        let group = sp.group();
        if rho.len() != group.len()
            || rho.iter().any(|per_i| {
                per_i.len() != t.len() || per_i.iter().any(|per_p| per_p.len() != np)
            })
        {
            return Err(Error::Invalid("action table has the wrong shape".into()));
        }
        for (g, per_i) in rho.iter().enumerate() {
            for (i, per_p) in per_i.iter().enumerate() {
                let gi = t.act(g, i);
                for (p, mat) in per_p.iter().enumerate() {
                    let gp = sp.act_point(g, p);
                    let src = &self.fibers[i][p];
                    let tgt = &self.fibers[gi][gp];
                    if mat.rows() != tgt.dim() || mat.cols() != src.dim() {
                        return Err(Error::Invalid(format!(
                            "action of element {g} at ({i},{p}) has the wrong shape"
                        )));
                    }
                    if !is_graded(mat, src, tgt) {
                        return Err(Error::Invalid(format!(
                            "action of element {g} at ({i},{p}) moves weight or parity"
                        )));
                    }
                    if g == 0 && *mat != QMatrix::identity(src.dim()) {
                        return Err(Error::Invalid(format!(
                            "identity element acts nontrivially at ({i},{p})"
                        )));
                    }
                }
            }
        }
        // compatibility squares against every transition
        for (&(i, j), row) in &self.phi {
            for g in 0..group.len() {
                let (gi, gj) = (t.act(g, i), t.act(g, j));
                for (p, entry) in row.iter().enumerate() {
                    let Some(mat) = entry else { continue };
                    let gp = sp.act_point(g, p);
                    let lhs = rho[g][j][p].mul(mat);
                    let moved = self.phi[&(gi, gj)][gp].as_ref().ok_or_else(|| {
                        Error::Invalid(format!(
                            "transition ({gi},{gj}) missing at the image of point {p}"
                        ))
                    })?;
                    let rhs = moved.mul(&rho[g][i][p]);
                    if lhs != rhs {
                        return Err(Error::Invalid(format!(
                            "action square fails for element {g} on ({i},{j}) at point {p}"
                        )));
                    }
                }
            }
        }
        // cocycle on a generating set; word-length induction covers the rest
        for s in generators(sp.n()) {
            let si = t.group_index(&s);
            for (h, hg) in group.iter().enumerate() {
                let sh = t.group_index(&s.compose(hg));
                for i in 0..t.len() {
                    let hi = t.act(h, i);
                    for p in 0..np {
                        let hp = sp.act_point(h, p);
                        let composed = rho[si][hi][hp].mul(&rho[h][i][p]);
                        if composed != rho[sh][i][p] {
                            return Err(Error::Invalid(format!(
                                "action cocycle fails for generator pair ({si},{h}) at ({i},{p})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &Arc<StratSpace> {
        &self.space
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn has_action(&self) -> bool {
        self.rho.is_some()
    }

    pub fn fiber(&self, i: usize, p: usize) -> &WeightedSpace {
        &self.fibers[i][p]
    }

    pub fn dim(&self, i: usize, p: usize) -> usize {
        self.fibers[i][p].dim()
    }

    /// Transition `i -> j` at point `p` for a strictly comparable pair.
    pub fn transition(&self, i: usize, j: usize, p: usize) -> Option<&QMatrix> {
        self.phi[&(i, j)][p].as_ref()
    }

    /// Action matrix of group element `g` from `(i, p)` to its image pair.
    pub fn action(&self, g: usize, i: usize, p: usize) -> &QMatrix {
        &self.rho.as_ref().expect("system carries an action")[g][i][p]
    }

    pub fn is_zero(&self) -> bool {
        self.fibers.iter().all(|row| row.iter().all(|f| f.is_empty()))
    }

    /// Points where some object has a nonzero fiber.
    pub fn support(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for row in &self.fibers {
            for (p, f) in row.iter().enumerate() {
                if !f.is_empty() {
                    out.insert(p);
                }
            }
        }
        out
    }

    /// The zero system, strict and carrying the trivial action.
    pub fn zero(space: Arc<StratSpace>, d: usize) -> Self {
        let t = space.table();
        let np = space.num_points();
        let fibers = vec![vec![WeightedSpace::empty(d); np]; t.len()];
        let phi = comparable_pairs(t)
            .into_iter()
            .map(|k| (k, vec![Some(QMatrix::zero(0, 0)); np]))
            .collect();
        let rho = Some(vec![vec![vec![QMatrix::zero(0, 0); np]; t.len()]; space.group().len()]);
        System { space, d, strict: true, fibers, phi, rho }
    }

    /// Forgets totality: keeps transitions only over their invertibility
    /// domains, producing a partial system.  Partial input is returned as is.
    pub fn restricted(&self) -> System {
        if !self.strict {
            return self.clone();
        }
        let mut phi = self.phi.clone();
        for (&(i, j), row) in phi.iter_mut() {
            for (p, entry) in row.iter_mut().enumerate() {
                if !self.space.in_u_pair(p, i, j) {
                    *entry = None;
                }
            }
        }
        System { strict: false, phi, ..self.clone() }
    }

    /// Flips the parity of every fiber line; transition and action matrices
    /// are unchanged.  Graded traces negate.
    pub fn parity_shift(&self) -> System {
        let fibers = self
            .fibers
            .iter()
            .map(|row| row.iter().map(|f| f.shifted(1)).collect())
            .collect();
        System { fibers, ..self.clone() }
    }

    /// Graded trace of element `g` at a fixed pair: requires `gi = i` and
    /// `gp = p`.
    pub fn equivariant_trace(&self, g: usize, i: usize, p: usize) -> LaurentPoly {
        assert_eq!(self.space.table().act(g, i), i, "index must be fixed by g");
        assert_eq!(self.space.act_point(g, p), p, "point must be fixed by g");
        graded_trace(self.action(g, i, p), &self.fibers[i][p])
    }

    /// Direct sum over a shared space; both sides must agree on strictness
    /// and on whether they carry an action.
    pub fn direct_sum(&self, other: &System) -> Result<System> {
        if !Arc::ptr_eq(&self.space, &other.space) {
            return Err(Error::Invalid("direct sum needs a shared base space".into()));
        }
        if self.d != other.d
            || self.strict != other.strict
            || self.rho.is_some() != other.rho.is_some()
        {
            return Err(Error::Invalid("direct sum of incompatible systems".into()));
        }
        let t = self.space.table();
        let np = self.space.num_points();
        let fibers: Vec<Vec<WeightedSpace>> = (0..t.len())
            .map(|i| {
                (0..np).map(|p| self.fibers[i][p].direct_sum(&other.fibers[i][p])).collect()
            })
            .collect();
        let block = |a: Option<&QMatrix>,
                     b: Option<&QMatrix>,
                     rows_a: usize,
                     cols_a: usize,
                     rows_b: usize,
                     cols_b: usize| {
            match (a, b) {
                (Some(a), Some(b)) => {
                    let mut m = QMatrix::zero(rows_a + rows_b, cols_a + cols_b);
                    for r in 0..rows_a {
                        for c in 0..cols_a {
                            m[(r, c)] = a[(r, c)].clone();
                        }
                    }
                    for r in 0..rows_b {
                        for c in 0..cols_b {
                            m[(rows_a + r, cols_a + c)] = b[(r, c)].clone();
                        }
                    }
                    Some(m)
                }
                (None, None) => None,
                _ => unreachable!("summands agree on domains"),
            }
        };
        let mut phi = BTreeMap::new();
        for (&(i, j), row) in &self.phi {
            let merged: Vec<Option<QMatrix>> = (0..np)
                .map(|p| {
                    block(
                        row[p].as_ref(),
                        other.phi[&(i, j)][p].as_ref(),
                        self.dim(j, p),
                        self.dim(i, p),
                        other.dim(j, p),
                        other.dim(i, p),
                    )
                })
                .collect();
            phi.insert((i, j), merged);
        }
        let rho = self.rho.as_ref().map(|mine| {
            let theirs = other.rho.as_ref().unwrap();
            (0..self.space.group().len())
                .map(|g| {
                    (0..t.len())
                        .map(|i| {
                            let gi = t.act(g, i);
                            (0..np)
                                .map(|p| {
                                    let gp = self.space.act_point(g, p);
                                    block(
                                        Some(&mine[g][i][p]),
                                        Some(&theirs[g][i][p]),
                                        self.dim(gi, gp),
                                        self.dim(i, p),
                                        other.dim(gi, gp),
                                        other.dim(i, p),
                                    )
                                    .unwrap()
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        });
        System::new(self.space.clone(), self.d, self.strict, fibers, phi, rho)
    }
}

/// A fiberwise map between two systems over the same space.
#[derive(Clone)]
pub struct Morphism {
    mats: Vec<Vec<QMatrix>>,
}

impl Morphism {
    pub fn new(mats: Vec<Vec<QMatrix>>) -> Self {
        Morphism { mats }
    }

    pub fn at(&self, i: usize, p: usize) -> &QMatrix {
        &self.mats[i][p]
    }
}

/// Checks shapes, grading, the squares against every transition defined on
/// both sides, and the squares against the action when both systems carry
/// one.
pub fn validate_morphism(src: &System, dst: &System, f: &Morphism) -> Result<()> {
    if !Arc::ptr_eq(src.space(), dst.space()) {
        return Err(Error::Invalid("morphism endpoints live on different spaces".into()));
    }
    let sp = src.space();
    let t = sp.table();
    let np = sp.num_points();
    if f.mats.len() != t.len() || f.mats.iter().any(|row| row.len() != np) {
        return Err(Error::Invalid("morphism table has the wrong shape".into()));
    }
    for i in 0..t.len() {
        for p in 0..np {
            let m = &f.mats[i][p];
            if m.rows() != dst.dim(i, p) || m.cols() != src.dim(i, p) {
                return Err(Error::Invalid(format!(
                    "morphism component at ({i},{p}) has the wrong shape"
                )));
            }
            if !is_graded(m, src.fiber(i, p), dst.fiber(i, p)) {
                return Err(Error::Invalid(format!(
                    "morphism component at ({i},{p}) moves weight or parity"
                )));
            }
        }
    }
    for (i, j) in comparable_pairs(t) {
        for p in 0..np {
            if let (Some(a), Some(b)) = (src.transition(i, j, p), dst.transition(i, j, p))
            {
                if f.mats[j][p].mul(a) != b.mul(&f.mats[i][p]) {
                    return Err(Error::Invalid(format!(
                        "morphism square fails on ({i},{j}) at point {p}"
                    )));
                }
            }
        }
    }
    if src.has_action() && dst.has_action() {
        for g in 0..sp.group().len() {
            for i in 0..t.len() {
                let gi = t.act(g, i);
                for p in 0..np {
                    let gp = sp.act_point(g, p);
                    let lhs = f.mats[gi][gp].mul(src.action(g, i, p));
                    let rhs = dst.action(g, i, p).mul(&f.mats[i][p]);
                    if lhs != rhs {
                        return Err(Error::Invalid(format!(
                            "morphism action square fails for element {g} at ({i},{p})"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Kernel basis of a graded matrix, computed class by class so every basis
/// vector is homogeneous.  Returns the kernel fiber and its embedding.
fn fiber_kernel(
    m: &QMatrix,
    src: &WeightedSpace,
    tgt: &WeightedSpace,
) -> (WeightedSpace, QMatrix) {
    let src_classes = classes(src);
    let tgt_classes = classes(tgt);
    let mut lines = Vec::new();
    let mut cols: Vec<Vec<crate::coeffring::Rat>> = Vec::new();
    for (line, col_idx) in &src_classes {
        let empty = Vec::new();
        let row_idx = tgt_classes.get(line).unwrap_or(&empty);
        let sub = m.submatrix(row_idx, col_idx);
        for v in sub.kernel_basis() {
            let mut full = vec![crate::coeffring::Rat::zero(); src.dim()];
            for (slot, &c) in col_idx.iter().enumerate() {
                full[c] = v[slot].clone();
            }
            lines.push(line.clone());
            cols.push(full);
        }
    }
    let embed = QMatrix::from_fn(src.dim(), cols.len(), |r, c| cols[c][r].clone());
    (WeightedSpace::new(src.d(), lines), embed)
}

/// Chooses coordinate lines completing the column space of `m` to the whole
/// fiber, scanning positions in ascending order.  Returns the quotient fiber,
/// the chosen positions and the projection matrix, which kills the image.
fn fiber_cokernel(m: &QMatrix, tgt: &WeightedSpace) -> (WeightedSpace, Vec<usize>, QMatrix) {
    let dim = tgt.dim();
    let pivots = m.column_space_pivots();
    let basis = QMatrix::from_fn(dim, pivots.len(), |r, c| m[(r, pivots[c])].clone());
    let mut picked = Vec::new();
    let mut current = basis.clone();
    let mut rank = current.rank();
    for j in 0..dim {
        if rank == dim {
            break;
        }
        let candidate = current.hcat(&QMatrix::from_fn(dim, 1, |r, _| {
            if r == j {
                crate::coeffring::rat(1)
            } else {
                crate::coeffring::Rat::zero()
            }
        }));
        let new_rank = candidate.rank();
        if new_rank > rank {
            picked.push(j);
            current = candidate;
            rank = new_rank;
        }
    }
    assert_eq!(rank, dim, "coordinate lines complete any subspace");
    let proj = if dim == 0 {
        QMatrix::zero(0, 0)
    } else {
        let inv = current.inverse().expect("completed square matrix is invertible");
        QMatrix::from_fn(picked.len(), dim, |r, c| inv[(basis.cols() + r, c)].clone())
    };
    let lines = picked.iter().map(|&j| tgt.line_at(j).clone()).collect();
    (WeightedSpace::new(tgt.d(), lines), picked, proj)
}

/// Kernel of a morphism, with its embedding into the source.  Inherits the
/// source's strictness and carries an action when both endpoints do.
pub fn kernel_system(src: &System, dst: &System, f: &Morphism) -> Result<(System, Morphism)> {
    let sp = src.space().clone();
    let t = sp.table();
    let np = sp.num_points();
    let mut fibers = Vec::with_capacity(t.len());
    let mut embeds = Vec::with_capacity(t.len());
    for i in 0..t.len() {
        let mut frow = Vec::with_capacity(np);
        let mut erow = Vec::with_capacity(np);
        for p in 0..np {
            let (space, embed) = fiber_kernel(f.at(i, p), src.fiber(i, p), dst.fiber(i, p));
            frow.push(space);
            erow.push(embed);
        }
        fibers.push(frow);
        embeds.push(erow);
    }
    let mut phi = BTreeMap::new();
    for (i, j) in comparable_pairs(t) {
        let row: Vec<Option<QMatrix>> = (0..np)
            .map(|p| {
                src.transition(i, j, p).map(|m| {
                    embeds[j][p]
                        .solve(&m.mul(&embeds[i][p]))
                        .expect("transitions preserve kernels")
                })
            })
            .collect();
        phi.insert((i, j), row);
    }
    let rho = if src.has_action() && dst.has_action() {
        Some(
            (0..sp.group().len())
                .map(|g| {
                    (0..t.len())
                        .map(|i| {
                            let gi = t.act(g, i);
                            (0..np)
                                .map(|p| {
                                    let gp = sp.act_point(g, p);
                                    embeds[gi][gp]
                                        .solve(&src.action(g, i, p).mul(&embeds[i][p]))
                                        .expect("the action preserves kernels")
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        )
    } else {
        None
    };
    let sys = System::new(sp, src.d(), src.is_strict(), fibers, phi, rho)?;
    Ok((sys, Morphism::new(embeds)))
}

/// Cokernel of a morphism, with the projection from the target.  Inherits
/// the target's strictness and carries an action when both endpoints do.
pub fn cokernel_system(src: &System, dst: &System, f: &Morphism) -> Result<(System, Morphism)> {
    let sp = dst.space().clone();
    let t = sp.table();
    let np = sp.num_points();
    let mut fibers = Vec::with_capacity(t.len());
    let mut picks = Vec::with_capacity(t.len());
    let mut projs = Vec::with_capacity(t.len());
    for i in 0..t.len() {
        let mut frow = Vec::with_capacity(np);
        let mut crow = Vec::with_capacity(np);
        let mut prow = Vec::with_capacity(np);
        for p in 0..np {
            let (space, picked, proj) = fiber_cokernel(f.at(i, p), dst.fiber(i, p));
            frow.push(space);
            crow.push(picked);
            prow.push(proj);
        }
        fibers.push(frow);
        picks.push(crow);
        projs.push(prow);
    }
    // coordinate representatives of the chosen quotient lines
    let lift = |i: usize, p: usize| -> QMatrix {
        QMatrix::from_fn(dst.dim(i, p), picks[i][p].len(), |r, c| {
            if picks[i][p][c] == r {
                crate::coeffring::rat(1)
            } else {
                crate::coeffring::Rat::zero()
            }
        })
    };
    let mut phi = BTreeMap::new();
    for (i, j) in comparable_pairs(t) {
        let row: Vec<Option<QMatrix>> = (0..np)
            .map(|p| {
                dst.transition(i, j, p)
                    .map(|m| projs[j][p].mul(&m.mul(&lift(i, p))))
            })
            .collect();
        phi.insert((i, j), row);
    }
    let rho = if src.has_action() && dst.has_action() {
        Some(
            (0..sp.group().len())
                .map(|g| {
                    (0..t.len())
                        .map(|i| {
                            let gi = t.act(g, i);
                            (0..np)
                                .map(|p| {
                                    let gp = sp.act_point(g, p);
                                    projs[gi][gp].mul(&dst.action(g, i, p).mul(&lift(i, p)))
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        )
    } else {
        None
    };
    let sys = System::new(sp, dst.d(), dst.is_strict(), fibers, phi, rho)?;
    Ok((sys, Morphism::new(projs)))
}

/// One weighted space per base point and arity; the seed for a system whose
/// fibers split over coincidence blocks.
#[derive(Clone)]
pub struct LocalDatum {
    d: usize,
    spaces: Vec<Vec<WeightedSpace>>,
}

impl LocalDatum {
    /// `spaces[x][k]` is the space attached to base point `x` in arity
    /// `k + 1`; every point must cover the same arities.
    pub fn new(d: usize, spaces: Vec<Vec<WeightedSpace>>) -> Result<Self> {
        let arities = spaces.first().map_or(0, |row| row.len());
        for row in &spaces {
            if row.len() != arities {
                return Err(Error::Invalid("uneven arity coverage".into()));
            }
            for s in row {
                if s.d() != d {
                    return Err(Error::Invalid("local datum grading mismatch".into()));
                }
            }
        }
        Ok(LocalDatum { d, spaces })
    }

    /// Rank one trivial line at every point and arity.
    pub fn structure(x_len: usize, max_arity: usize, d: usize) -> Self {
        let spaces = vec![vec![WeightedSpace::unit(d); max_arity]; x_len];
        LocalDatum { d, spaces }
    }

    pub fn random<R: Rng>(rng: &mut R, x_len: usize, max_arity: usize, d: usize, max_dim: usize) -> Self {
        let spaces = (0..x_len)
            .map(|_| {
                (0..max_arity)
                    .map(|_| {
                        // dimension zero is allowed but rare
                        let dim = if rng.gen_range(0..8) == 0 {
                            0
                        } else {
                            rng.gen_range(1..=max_dim.max(1))
                        };
                        let lines = (0..dim)
                            .map(|_| {
                                let weight =
                                    (0..d).map(|_| rng.gen_range(-2..=2)).collect();
                                BasisLine::new(weight, rng.gen_range(0..2) as u8)
                            })
                            .collect();
                        WeightedSpace::new(d, lines)
                    })
                    .collect()
            })
            .collect();
        LocalDatum { d, spaces }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn max_arity(&self) -> usize {
        self.spaces.first().map_or(0, |row| row.len())
    }

    pub fn space(&self, x: usize, arity: usize) -> &WeightedSpace {
        &self.spaces[x][arity - 1]
    }
}

/// The tensor factors of the fiber of object `i` at point `p`: one factor
/// per block of the meet of `i` with the coincidence partition, listed by
/// the blocks of `i` and then by sub-block.  Each factor records the
/// sub-block, the shared coordinate value and the sub-block size.
fn fiber_factors(sp: &StratSpace, i: usize, p: usize) -> Vec<(Subset, usize, usize)> {
    let tuple = sp.point(p);
    let mut out = Vec::new();
    for a in sp.table().part(i).blocks() {
        let mut by_value: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for m in a.members() {
            // ground elements are 1-based, tuple slots 0-based
            by_value.entry(tuple[m - 1]).or_default().push(m);
        }
        let mut subs: Vec<(Subset, usize)> = by_value
            .into_iter()
            .map(|(v, members)| (Subset::from_members(sp.n(), members), v))
            .collect();
        subs.sort();
        out.extend(subs.into_iter().map(|(s, v)| {
            let card = s.card();
            (s, v, card)
        }));
    }
    out
}

/// Builds the system whose fiber at `(i, p)` is the ordered tensor of the
/// datum spaces over the factors of `(i, p)`, with every transition and
/// action matrix the signed permutation regrouping one factor order into
/// another.  All axioms hold by construction and are validated anyway.
pub fn system_from_local_datum(space: &Arc<StratSpace>, datum: &LocalDatum) -> Result<System> {
    if datum.d() != space.d() {
        return Err(Error::Invalid("datum and base space gradings differ".into()));
    }
    if datum.max_arity() < space.n() {
        return Err(Error::Invalid(format!(
            "datum covers arities up to {}, need {}",
            datum.max_arity(),
            space.n()
        )));
    }
    let sp = space.clone();
    let t = sp.table();
    let np = sp.num_points();
    let d = datum.d();
    let factor_table: Vec<Vec<Vec<(Subset, usize, usize)>>> = (0..t.len())
        .map(|i| (0..np).map(|p| fiber_factors(&sp, i, p)).collect())
        .collect();
    let factor_spaces = |i: usize, p: usize| -> Vec<&WeightedSpace> {
        factor_table[i][p].iter().map(|&(_, v, card)| datum.space(v, card)).collect()
    };
    let fibers: Vec<Vec<WeightedSpace>> = (0..t.len())
        .map(|i| {
            (0..np)
                .map(|p| {
                    factor_spaces(i, p)
                        .into_iter()
                        .fold(WeightedSpace::unit(d), |acc, s| acc.tensor(s))
                })
                .collect()
        })
        .collect();
    // signed permutation matrix sending the source factor order to the target
    let regroup = |src: (usize, usize), tgt: (usize, usize), relabel: &dyn Fn(&Subset) -> Subset| {
        let sf = &factor_table[src.0][src.1];
        let tf = &factor_table[tgt.0][tgt.1];
        assert_eq!(sf.len(), tf.len(), "factor multisets must agree");
        let pos: Vec<usize> = sf
            .iter()
            .map(|(s, _, _)| {
                let image = relabel(s);
                tf.iter().position(|(u, _, _)| *u == image).expect("matching factor")
            })
            .collect();
        reorder_matrix(&factor_spaces(src.0, src.1), &pos)
    };
    let mut phi = BTreeMap::new();
    for (i, j) in comparable_pairs(t) {
        let row: Vec<Option<QMatrix>> = (0..np)
            .map(|p| {
                if sp.in_u_pair(p, i, j) {
                    Some(regroup((i, p), (j, p), &|s: &Subset| s.clone()))
                } else {
                    None
                }
            })
            .collect();
        phi.insert((i, j), row);
    }
    let group = sp.group().to_vec();
    let rho = (0..group.len())
        .map(|g| {
            (0..t.len())
                .map(|i| {
                    let gi = t.act(g, i);
                    (0..np)
                        .map(|p| {
                            let gp = sp.act_point(g, p);
                            regroup((i, p), (gi, gp), &|s: &Subset| group[g].act_subset(s))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    System::new(sp, d, false, fibers, phi, Some(rho))
}
