//! The configuration space `X^n` of a finite weighted point set, stratified
//! by coincidence pattern.
//!
//! A point of the space is an `n`-tuple of `X`-points.  Its coincidence
//! partition groups the positions holding equal coordinates, and the stratum
//! of a set partition `a` consists of the tuples whose coincidence partition
//! is exactly `a`.  Strata may be empty when `X` has fewer points than `a`
//! has blocks.  `S_n` permutes tuple positions and maps strata to strata.

use rand::Rng;

use crate::combinat::{PartitionTable, Permutation, SetPartition};
use crate::error::{Error, Result};

/// A finite list of distinct labelled points, each carrying a weight
/// monomial (an exponent vector in the `d` grading variables).
#[derive(Debug, Clone)]
pub struct XSpace {
    ids: Vec<String>,
    d: usize,
    weights: Vec<Vec<i32>>,
}

impl XSpace {
    pub fn new(ids: Vec<String>, d: usize, weights: Vec<Vec<i32>>) -> Result<Self> {
        if ids.len() != weights.len() {
            return Err(Error::Invalid(format!(
                "{} point ids but {} weight monomials",
                ids.len(),
                weights.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for id in &ids {
            if !seen.insert(id.clone()) {
                return Err(Error::Invalid(format!("duplicate point id {id:?}")));
            }
        }
        for w in &weights {
            if w.len() != d {
                return Err(Error::Invalid(format!(
                    "weight monomial has {} exponents, expected {d}",
                    w.len()
                )));
            }
        }
        Ok(XSpace { ids, d, weights })
    }

    /// `len` points named `p0, p1, ...` with zero weight monomials.
    pub fn unweighted(len: usize, d: usize) -> Self {
        let ids = (0..len).map(|i| format!("p{i}")).collect();
        let weights = vec![vec![0; d]; len];
        XSpace { ids, d, weights }
    }

    /// `len` points named `p0, p1, ...` with uniform random exponents in
    /// `-max_abs..=max_abs` for each grading variable.
    pub fn random<R: Rng>(rng: &mut R, len: usize, d: usize, max_abs: i32) -> Self {
        let ids = (0..len).map(|i| format!("p{i}")).collect();
        let weights = (0..len)
            .map(|_| (0..d).map(|_| rng.gen_range(-max_abs..=max_abs)).collect())
            .collect();
        XSpace { ids, d, weights }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn id(&self, p: usize) -> &str {
        &self.ids[p]
    }

    pub fn weight(&self, p: usize) -> &[i32] {
        &self.weights[p]
    }
}

/// `X^n` with its coincidence stratification, the refinement lattice of
/// index partitions, and the `S_n` action on tuples, all precomputed.
pub struct StratSpace {
    x: XSpace,
    n: usize,
    table: PartitionTable,
    points: Vec<Vec<usize>>,
    coinc: Vec<usize>,
    act: Vec<Vec<usize>>,
}

/// Enumerates the tuples of `X^n` in lexicographic order, classifies each by
/// its coincidence partition and tabulates the `S_n` action.
pub fn build_space(x: XSpace, n: usize) -> Result<StratSpace> {
    if n == 0 {
        return Err(Error::Invalid("tuple length must be at least 1".into()));
    }
    let table = PartitionTable::new(n);
    let count = x.len().checked_pow(n as u32).ok_or_else(|| {
        Error::Invalid(format!("|X|^n overflows for |X| = {}, n = {n}", x.len()))
    })?;
    let mut points = Vec::with_capacity(count);
    let mut coinc = Vec::with_capacity(count);
    for idx in 0..count {
        let mut rem = idx;
        let mut tuple = vec![0usize; n];
        for i in (0..n).rev() {
            tuple[i] = rem % x.len();
            rem /= x.len();
        }
        coinc.push(table.idx(&coincidence_partition(&tuple)));
        points.push(tuple);
    }
    let act = table
        .group()
        .iter()
        .map(|g| points.iter().map(|t| point_index(&act_tuple(g, t), x.len())).collect())
        .collect();
    Ok(StratSpace { x, n, table, points, coinc, act })
}

/// Positions `i, j` share a block exactly when `t[i-1] == t[j-1]`; ground
/// set elements are 1-based while tuple slots are 0-based.
fn coincidence_partition(tuple: &[usize]) -> SetPartition {
    let mut by_value: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, &v) in tuple.iter().enumerate() {
        by_value.entry(v).or_default().push(i + 1);
    }
    let vecs: Vec<Vec<usize>> = by_value.into_values().collect();
    SetPartition::from_vecs(tuple.len(), &vecs).expect("grouping by value partitions the positions")
}

/// `(s.t)[s(i)] = t[i]`: the tuple convention matching `SetPartition::act`.
fn act_tuple(s: &Permutation, tuple: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize; tuple.len()];
    for (i, &v) in tuple.iter().enumerate() {
        out[s.apply(i + 1) - 1] = v;
    }
    out
}

fn point_index(tuple: &[usize], x_len: usize) -> usize {
    tuple.iter().fold(0, |acc, &c| acc * x_len + c)
}

impl StratSpace {
    pub fn x(&self) -> &XSpace {
        &self.x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.x.d()
    }

    /// The refinement lattice shared by the stratification and the index
    /// category of systems.
    pub fn table(&self) -> &PartitionTable {
        &self.table
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, p: usize) -> &[usize] {
        &self.points[p]
    }

    /// Index of the coincidence partition of point `p`.
    pub fn coinc(&self, p: usize) -> usize {
        self.coinc[p]
    }

    pub fn stratum(&self, a: usize) -> Vec<usize> {
        (0..self.num_points()).filter(|&p| self.coinc[p] == a).collect()
    }

    pub fn stratum_size(&self, a: usize) -> usize {
        self.coinc.iter().filter(|&&c| c == a).count()
    }

    /// `p` lies in the open set `U_a`, the union of the strata refining `a`.
    pub fn in_u(&self, p: usize, a: usize) -> bool {
        self.table.leq(self.coinc[p], a)
    }

    /// `p` lies in `U_{i,j}`, the union of the `U_a` over partitions `a`
    /// identifying `i` and `j`.  Equivalent to `i` and `j` having equal meet
    /// with the coincidence partition of `p`.
    pub fn in_u_pair(&self, p: usize, i: usize, j: usize) -> bool {
        self.table.equiv(self.coinc[p], i, j)
    }

    pub fn group(&self) -> &[Permutation] {
        self.table.group()
    }

    pub fn group_order(&self) -> usize {
        self.table.group().len()
    }

    /// Index of `g . p` where the action permutes tuple positions.
    pub fn act_point(&self, g: usize, p: usize) -> usize {
        self.act[g][p]
    }

    /// Orbits of points under the full group, each sorted ascending.
    pub fn point_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.num_points()];
        let mut orbits = Vec::new();
        for p in 0..self.num_points() {
            if seen[p] {
                continue;
            }
            let mut orb: Vec<usize> =
                (0..self.group_order()).map(|g| self.act[g][p]).collect();
            orb.sort_unstable();
            orb.dedup();
            for &q in &orb {
                seen[q] = true;
            }
            orbits.push(orb);
        }
        orbits
    }
}
