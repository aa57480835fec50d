//! Sparse multivariate Laurent polynomials over the rationals.
//!
//! Exponent vectors have one entry per variable and may be negative.
//! Terms are kept in a `BTreeMap` keyed by exponent vector, so iteration
//! order (and therefore printing) is the lexicographic order on exponents.
//!
//! Invariants:
//! - no key maps to a zero coefficient (enforced on every mutation)
//! - all exponent vectors have length `vars`

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use super::{rat, Rat};

/// Exponent vector, one entry per variable.
pub type Exps = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    vars: usize,
    terms: BTreeMap<Exps, Rat>,
}

impl LaurentPoly {
    pub fn zero(vars: usize) -> Self {
        LaurentPoly { vars, terms: BTreeMap::new() }
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, rat(1))
    }

    pub fn constant(vars: usize, c: Rat) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    /// The variable with 0-based index `i` (external name `t{i+1}`).
    pub fn var(vars: usize, i: usize) -> Self {
        assert!(i < vars, "variable index out of range");
        let mut e = vec![0; vars];
        e[i] = 1;
        Self::monomial(e, rat(1))
    }

    pub fn monomial(exps: Exps, c: Rat) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&vec![0; self.vars])
                .map_or(false, |c| *c == rat(1))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[i32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// Adds `c * t^exps` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, exps: Exps, c: Rat) {
        assert_eq!(exps.len(), self.vars, "exponent arity mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "variable count mismatch");
        let mut out = Self::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c.clone();
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.vars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Adams substitution: every variable exponent is multiplied by `k`.
    pub fn adams(&self, k: u32) -> Self {
        assert!(k >= 1, "adams index must be positive");
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.iter().map(|x| x * k as i32).collect(), c.clone());
        }
        out
    }

    /// Shifts every exponent vector by `delta` (monomial multiplication).
    pub fn shift(&self, delta: &[i32]) -> Self {
        assert_eq!(delta.len(), self.vars);
        let mut out = Self::zero(self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.iter().zip(delta).map(|(x, d)| x + d).collect(), c.clone());
        }
        out
    }

    /// Componentwise minimum of all exponent vectors; `None` for the zero poly.
    pub fn min_exponents(&self) -> Option<Exps> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| {
            acc.iter().zip(e).map(|(a, b)| (*a).min(*b)).collect()
        }))
    }

    /// Lexicographically greatest exponent vector and its coefficient.
    pub fn leading(&self) -> Option<(&Exps, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Extends to `vars + extra` variables, new exponents zero.
    pub fn extend_vars(&self, extra: usize) -> Self {
        let mut out = Self::zero(self.vars + extra);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.extend(std::iter::repeat(0).take(extra));
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Formats with the given variable names.
    pub fn format_with(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.vars);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, p)| **p != 0)
                .map(|(v, p)| {
                    if *p == 1 {
                        names[v].clone()
                    } else {
                        format!("{}^{}", names[v], p)
                    }
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if mag != rat(1) {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

/// Default variable names `t1..td`.
pub fn t_names(vars: usize) -> Vec<String> {
    (1..=vars).map(|i| format!("t{i}")).collect()
}

/// Variable names `t1..t(d)` followed by `q` for the last slot.
pub fn tq_names(vars_with_q: usize) -> Vec<String> {
    assert!(vars_with_q >= 1);
    let mut names = t_names(vars_with_q - 1);
    names.push("q".to_string());
    names
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&t_names(self.vars)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rat_frac;

    fn t(i: usize) -> LaurentPoly {
        LaurentPoly::var(2, i)
    }

    #[test]
    fn ring_basics() {
        let p = t(0).add(&t(1)).mul(&t(0).sub(&t(1)));
        let q = t(0).pow(2).sub(&t(1).pow(2));
        assert_eq!(p, q);
        assert!(p.sub(&q).is_zero());
    }

    #[test]
    fn adams_scales_exponents() {
        let p = t(0).mul(&t(1).pow(3)).scale(&rat_frac(1, 2));
        let a = p.adams(2);
        assert_eq!(a.coeff(&[2, 6]), rat_frac(1, 2));
        assert_eq!(a.num_terms(), 1);
    }

    #[test]
    fn min_exponents_and_shift() {
        let p = LaurentPoly::monomial(vec![-1, 2], rat(3)).add(&t(0));
        assert_eq!(p.min_exponents(), Some(vec![-1, 0]));
        let s = p.shift(&[1, 0]);
        assert_eq!(s.coeff(&[0, 2]), rat(3));
        assert_eq!(s.coeff(&[2, 0]), rat(1));
    }

    #[test]
    fn display_is_readable() {
        let p = LaurentPoly::one(2)
            .sub(&t(0).pow(2))
            .add(&t(1).scale(&rat(2)));
        assert_eq!(p.to_string(), "1 + 2*t2 - t1^2");
    }
}
