//! Cohomology along the small diagonal, with its induced group action.
//!
//! Off the small diagonal the complex is exact (checked on entry).  Along
//! it each degree leaves a parity-shifted space carrying an action of the
//! full permutation group.  Everything is computed class by class: the
//! kernel gets an explicit basis, the image is solved into kernel
//! coordinates, and a coordinate complement of the image supplies both a
//! section and a projection, so the induced matrices are exact and the
//! quotient maps never leave rational arithmetic.

use std::collections::BTreeMap;

use crate::coeffring::{rat, rat_frac, LaurentPoly};
use crate::combinat::{generators, SetPartition};
use crate::equirep::{graded_trace, BasisLine, WeightedSpace};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::stratsys::StratSpace;

use super::complex::{class_positions, point_label, GnComplex};

/// Index of the tuple `(x, x, ..., x)` in the configuration space.
pub fn diagonal_point(sp: &StratSpace, x: usize) -> usize {
    (0..sp.n()).fold(0, |acc, _| acc * sp.x().len() + x)
}

/// The cohomology at one diagonal point: one parity-shifted space per
/// degree and the action of every group element on it.
pub struct DiagonalFiber {
    /// Index of the base point `x` whose diagonal tuple this is.
    pub x: usize,
    /// Index of the tuple `(x, ..., x)` in the configuration space.
    pub point: usize,
    /// One space per degree, parity already shifted by the degree.
    pub h: Vec<WeightedSpace>,
    /// `act[g][k]`: the induced action of group element `g` in degree `k`.
    pub act: Vec<Vec<QMatrix>>,
}

/// The family of diagonal fibers, one per base point.
pub struct DiagonalSheaf {
    n: usize,
    d: usize,
    fibers: Vec<DiagonalFiber>,
}

/// Coordinate positions completing `col(y)` to the ambient space, with the
/// projection onto them along `col(y)`: `proj * y = 0` and `proj` composed
/// with the coordinate section is the identity.
fn complement_projection(y: &QMatrix) -> (Vec<usize>, QMatrix) {
    let z = y.rows();
    let all_rows: Vec<usize> = (0..z).collect();
    let piv = y.column_space_pivots();
    let mut basis = y.submatrix(&all_rows, &piv);
    let mut picked = Vec::new();
    for i in 0..z {
        let e = QMatrix::from_fn(z, 1, |r, _| if r == i { rat(1) } else { rat(0) });
        let trial = basis.hcat(&e);
        if trial.rank() == basis.cols() + 1 {
            picked.push(i);
            basis = trial;
        }
    }
    debug_assert_eq!(basis.cols(), z);
    let minv = basis.inverse().expect("a completed basis is invertible");
    let bottom: Vec<usize> = (piv.len()..z).collect();
    let proj = minv.submatrix(&bottom, &all_rows);
    (picked, proj)
}

fn coordinate_section(z: usize, picked: &[usize]) -> QMatrix {
    let mut e = QMatrix::zero(z, picked.len());
    for (j, &i) in picked.iter().enumerate() {
        e[(i, j)] = rat(1);
    }
    e
}

fn build_fiber(cx: &GnComplex, x: usize) -> Result<DiagonalFiber> {
    let sp = cx.space();
    let n = cx.degrees();
    let point = diagonal_point(sp, x);
    debug_assert_eq!(sp.coinc(point), sp.table().idx(&SetPartition::one_block(n)));
    let group_len = sp.group_order();
    let empty: Vec<usize> = Vec::new();

    let pos: Vec<BTreeMap<BasisLine, Vec<usize>>> =
        (0..n).map(|k| class_positions(cx.space_at(k, point))).collect();

    let mut h_spaces: Vec<WeightedSpace> = Vec::with_capacity(n);
    let mut acts: Vec<Vec<QMatrix>> = vec![Vec::with_capacity(n); group_len];
    for k in 0..n {
        let full: Vec<QMatrix> = (0..group_len).map(|g| cx.action_matrix(g, k, point)).collect();
        // per class: h copies of the shifted line and one induced matrix
        // per group element
        let mut lines: Vec<BasisLine> = Vec::new();
        let mut blocks: Vec<Vec<QMatrix>> = vec![Vec::new(); group_len];
        for (line, cols) in &pos[k] {
            let mat = if k == 0 {
                QMatrix::zero(0, cols.len())
            } else {
                let rows = pos[k - 1].get(line).unwrap_or(&empty);
                cx.differential(k, point).submatrix(rows, cols)
            };
            let kernel = mat.kernel_basis();
            let zdim = kernel.len();
            let zmat = QMatrix::from_fn(cols.len(), zdim, |r, c| kernel[c][r].clone());
            let image = if k + 1 < n {
                let img_cols = pos[k + 1].get(line).unwrap_or(&empty);
                cx.differential(k + 1, point).submatrix(cols, img_cols)
            } else {
                QMatrix::zero(cols.len(), 0)
            };
            let y = zmat.solve(&image).ok_or_else(|| {
                Error::Invalid(format!(
                    "image escapes the kernel in degree {k} at {}",
                    point_label(sp, point)
                ))
            })?;
            let (picked, proj) = complement_projection(&y);
            let section = coordinate_section(zdim, &picked);
            let shifted =
                BasisLine::new(line.weight.clone(), ((line.parity as usize + k) % 2) as u8);
            lines.extend(std::iter::repeat(shifted).take(picked.len()));
            for (g, a) in full.iter().enumerate() {
                let asub = a.submatrix(cols, cols);
                let moved = zmat.solve(&asub.mul(&zmat)).ok_or_else(|| {
                    Error::Invalid(format!(
                        "the action leaves the kernel in degree {k} at {}",
                        point_label(sp, point)
                    ))
                })?;
                if !proj.mul(&moved).mul(&y).is_zero() {
                    return Err(Error::Invalid(format!(
                        "the action fails to preserve the image in degree {k} at {}",
                        point_label(sp, point)
                    )));
                }
                blocks[g].push(proj.mul(&moved).mul(&section));
            }
        }
        let h_space = WeightedSpace::new(cx.d(), lines);
        let dim = h_space.dim();
        for g in 0..group_len {
            let mut m = QMatrix::zero(dim, dim);
            let mut off = 0;
            for b in &blocks[g] {
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        m[(off + r, off + c)] = b[(r, c)].clone();
                    }
                }
                off += b.rows();
            }
            acts[g].push(m);
        }
        h_spaces.push(h_space);
    }

    // the induced matrices must again represent the group
    for k in 0..n {
        let dim = h_spaces[k].dim();
        if acts[0][k] != QMatrix::identity(dim) {
            return Err(Error::Invalid(format!(
                "the identity acts nontrivially on degree {k} cohomology at {}",
                point_label(sp, point)
            )));
        }
    }
    let t = sp.table();
    for s in generators(sp.n()) {
        let si = t.group_index(&s);
        for h in 0..group_len {
            let sh = t.group_index(&s.compose(&sp.group()[h]));
            for k in 0..n {
                if acts[si][k].mul(&acts[h][k]) != acts[sh][k] {
                    return Err(Error::Invalid(format!(
                        "the induced action breaks the cocycle law in degree {k} at {}",
                        point_label(sp, point)
                    )));
                }
            }
        }
    }

    Ok(DiagonalFiber { x, point, h: h_spaces, act: acts })
}

/// Extracts the diagonal cohomology of the complex.  Errors if cohomology
/// survives at any point off the small diagonal, or if any induced action
/// fails to be well defined.
pub fn extract_hn(cx: &GnComplex) -> Result<DiagonalSheaf> {
    cx.check_off_diagonal_acyclicity()?;
    let sp = cx.space();
    let fibers: Vec<DiagonalFiber> =
        (0..sp.x().len()).map(|x| build_fiber(cx, x)).collect::<Result<_>>()?;
    Ok(DiagonalSheaf { n: sp.n(), d: cx.d(), fibers })
}

impl DiagonalFiber {
    fn grading_vars(&self) -> usize {
        self.h.first().map(|s| s.d()).unwrap_or(0)
    }

    /// Graded character of the invariant part: the trace of the averaging
    /// projector, summed over degrees.  Parity shifts are already in `h`.
    pub fn invariant_character(&self) -> LaurentPoly {
        let group_len = self.act.len();
        let mut out = LaurentPoly::zero(self.grading_vars());
        for (k, space) in self.h.iter().enumerate() {
            let dim = space.dim();
            let mut avg = QMatrix::zero(dim, dim);
            for g in 0..group_len {
                avg = avg.add(&self.act[g][k]);
            }
            avg = avg.scale(&rat_frac(1, group_len as i64));
            out = out.add(&graded_trace(&avg, space));
        }
        out
    }

    /// Graded character of the whole fiber, invariance ignored.
    pub fn total_character(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.grading_vars());
        for space in &self.h {
            out = out.add(&space.character());
        }
        out
    }
}

impl DiagonalSheaf {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn fibers(&self) -> &[DiagonalFiber] {
        &self.fibers
    }

    /// Character over the base: each base point contributes its weight
    /// monomial raised to the tuple length times the invariant character
    /// of its diagonal fiber.
    pub fn character(&self, sp: &StratSpace) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.d);
        for f in &self.fibers {
            let exps: Vec<i32> =
                sp.x().weight(f.x).iter().map(|w| w * self.n as i32).collect();
            let mono = LaurentPoly::monomial(exps, rat(1));
            out = out.add(&mono.mul(&f.invariant_character()));
        }
        out
    }
}

/// Group average of the alternating trace at the diagonal point of `x`,
/// taken on the complex itself.  Must agree with the invariant character
/// of the extracted fiber: passing to cohomology preserves alternating
/// traces of commuting maps.
pub fn averaged_euler_trace(cx: &GnComplex, x: usize) -> LaurentPoly {
    let sp = cx.space();
    let point = diagonal_point(sp, x);
    let mut out = LaurentPoly::zero(cx.d());
    for g in 0..sp.group_order() {
        debug_assert_eq!(sp.act_point(g, point), point);
        out = out.add(&cx.euler_trace(g, point));
    }
    out.scale(&rat_frac(1, sp.group_order() as i64))
}
