//! Finite-dimensional graded spaces with a torus weight on each basis line.

use serde::Serialize;

use crate::coeffring::{LaurentPoly, Rat};

/// One basis vector: a monomial torus weight and a parity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct BasisLine {
    pub weight: Vec<i32>,
    pub parity: u8,
}

impl BasisLine {
    pub fn new(weight: Vec<i32>, parity: u8) -> Self {
        assert!(parity <= 1, "parity is mod 2");
        BasisLine { weight, parity }
    }
}

/// An ordered basis of weighted lines; the order matters because action
/// matrices are written against it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedSpace {
    d: usize,
    basis: Vec<BasisLine>,
}

impl WeightedSpace {
    pub fn new(d: usize, basis: Vec<BasisLine>) -> Self {
        for b in &basis {
            assert_eq!(b.weight.len(), d, "weight length must match variable count");
            assert!(b.parity <= 1);
        }
        WeightedSpace { d, basis }
    }

    pub fn empty(d: usize) -> Self {
        WeightedSpace { d, basis: Vec::new() }
    }

    /// Rank one, even, weight zero.
    pub fn unit(d: usize) -> Self {
        Self::line(vec![0; d], 0)
    }

    pub fn line(weight: Vec<i32>, parity: u8) -> Self {
        let d = weight.len();
        Self::new(d, vec![BasisLine::new(weight, parity)])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[BasisLine] {
        &self.basis
    }

    pub fn line_at(&self, i: usize) -> &BasisLine {
        &self.basis[i]
    }

    /// Graded character: sum of `(-1)^parity t^weight` over the basis.
    pub fn character(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.d);
        for b in &self.basis {
            let c = if b.parity == 0 { Rat::from_integer(1.into()) } else { Rat::from_integer((-1).into()) };
            out.add_term(b.weight.clone(), c);
        }
        out
    }

    /// Tensor product, left factor major: line `i*other.dim + j` pairs line
    /// `i` of `self` with line `j` of `other`. Weights add, parities add.
    pub fn tensor(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d);
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                let weight = a.weight.iter().zip(&b.weight).map(|(x, y)| x + y).collect();
                basis.push(BasisLine::new(weight, (a.parity + b.parity) % 2));
            }
        }
        WeightedSpace { d: self.d, basis }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d);
        let mut basis = self.basis.clone();
        basis.extend_from_slice(&other.basis);
        WeightedSpace { d: self.d, basis }
    }

    /// Parity shift by `k`.
    pub fn shifted(&self, k: usize) -> Self {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisLine::new(b.weight.clone(), ((b.parity as usize + k) % 2) as u8))
            .collect();
        WeightedSpace { d: self.d, basis }
    }
}
