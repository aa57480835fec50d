//! Dense matrices over the rationals with exact Gaussian elimination.
//!
//! Everything downstream (images, kernels, cohomology, induced maps) reduces
//! to rank/solve computations here. Pivots are always chosen at the lowest
//! available column index so bases are deterministic.

use num_traits::Zero;

use crate::coeffring::{rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = rat(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        QMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Matrix product `self * other` (apply `other` first when matrices act
    /// on column vectors).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let v = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    /// Kronecker product, left factor major: row `i*other.rows + k` and
    /// column `j*other.cols + l` holds `self[i,j] * other[k,l]`.
    pub fn kronecker(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = &other[(k, l)];
                        if !b.is_zero() {
                            out[(i * other.rows + k, j * other.cols + l)] = a.clone() * b.clone();
                        }
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc += self[(i, j)].clone() * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let mut acc = Rat::zero();
        for i in 0..self.rows {
            acc += self[(i, i)].clone();
        }
        acc
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Reduced row echelon form; returns the pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].clone();
            for j in c..self.cols {
                let v = self[(r, j)].clone() / inv.clone();
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let v = self[(i, j)].clone() - f.clone() * self[(r, j)].clone();
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the null space, one column vector per basis element,
    /// determined by the standard free-variable parametrization of the RREF.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = rat(1);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Indices of the lowest-index columns spanning the column space.
    pub fn column_space_pivots(&self) -> Vec<usize> {
        let mut m = self.clone();
        m.rref()
    }

    /// Solves `self * x = rhs` for each column of `rhs`; `None` if any column
    /// is outside the column space. When the solution is not unique the free
    /// variables are set to zero.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows);
        let mut aug = self.hcat(rhs);
        let pivots = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None; // inconsistent system
        }
        let mut x = Self::zero(self.cols, rhs.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(pc, j)] = aug[(row, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let sol = self.solve(&Self::identity(self.rows))?;
        // solve() returns Some even for rank-deficient consistent systems;
        // verify invertibility explicitly.
        if self.mul(&sol) == Self::identity(self.rows) {
            Some(sol)
        } else {
            None
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Extracts the submatrix with the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rat_frac;

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        for v in &k {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn kernel_vectors_satisfy_system_exactly() {
        let a = m(&[&[2, -1, 0, 3], &[0, 0, 1, -1]]);
        for v in a.kernel_basis() {
            assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(a.kernel_basis().len(), 2);
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMatrix::identity(2));
        assert_eq!(inv[(0, 0)], rat(1));
        assert_eq!(inv[(0, 1)], rat(-1));
        let b = m(&[&[1, 0], &[2, 0], &[3, 0]]);
        assert!(b.solve(&m(&[&[0], &[0], &[1]])).is_none());
        let s = b.solve(&m(&[&[1], &[2], &[3]])).unwrap();
        assert_eq!(s[(0, 0)], rat(1));
    }

    #[test]
    fn pivots_prefer_lowest_columns() {
        let a = m(&[&[0, 1, 1], &[0, 2, 3]]);
        assert_eq!(a.column_space_pivots(), vec![1, 2]);
        let b = m(&[&[1, 1, 1], &[2, 2, 3]]);
        assert_eq!(b.column_space_pivots(), vec![0, 2]);
    }

    #[test]
    fn exact_fractions_survive_elimination() {
        let a = QMatrix::from_rows(vec![
            vec![rat_frac(1, 3), rat_frac(1, 6)],
            vec![rat_frac(1, 2), rat_frac(1, 4)],
        ]);
        assert_eq!(a.rank(), 1);
    }
}
