//! Truncated power series in `q` with `RatFun` coefficients, and the
//! plethystic exponential / logarithm pair.
//!
//! A series of order `N` stores the coefficients of `q^0..q^N`; everything
//! above `q^N` is unknown. Binary operations require equal truncation order.

use super::ratfun::RatFun;
use super::Rat;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    vars: usize,
    coeffs: Vec<RatFun>,
}

impl QSeries {
    pub fn zero(vars: usize, order: usize) -> Self {
        QSeries { vars, coeffs: vec![RatFun::zero(vars); order + 1] }
    }

    pub fn one(vars: usize, order: usize) -> Self {
        let mut s = Self::zero(vars, order);
        s.coeffs[0] = RatFun::one(vars);
        s
    }

    pub fn from_coeffs(vars: usize, coeffs: Vec<RatFun>) -> Self {
        assert!(!coeffs.is_empty());
        assert!(coeffs.iter().all(|c| c.vars() == vars));
        QSeries { vars, coeffs }
    }

    /// Truncation order: coefficients of `q^0..q^order()` are stored.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn coeff(&self, k: usize) -> &RatFun {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, c: RatFun) {
        assert_eq!(c.vars(), self.vars);
        self.coeffs[k] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        QSeries { vars: self.vars, coeffs: self.coeffs[..=order].to_vec() }
    }

    fn check_compat(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "variable count mismatch");
        assert_eq!(self.order(), other.order(), "truncation order mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compat(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        QSeries { vars: self.vars, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compat(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect();
        QSeries { vars: self.vars, coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compat(other);
        let n = self.order();
        let mut out = Self::zero(self.vars, n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = self.coeffs[i].mul(&other.coeffs[j]);
                out.coeffs[i + j] = out.coeffs[i + j].add(&prod);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.scale(c)).collect();
        QSeries { vars: self.vars, coeffs }
    }

    /// Ordinary exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::ConstantTermNotZero);
        }
        let n = self.order();
        let mut out = Self::one(self.vars, n);
        let mut term = Self::one(self.vars, n);
        for m in 1..=n {
            term = term.mul(self).scale(&Rat::new(1.into(), m.into()));
            out = out.add(&term);
        }
        Ok(out)
    }
}

/// Plethystic exponential: `Exp(f) = exp(sum_{k>=1} psi_k(f)(q^k)/k)` where
/// `psi_k` raises every `t_i` to the k-th power and substitutes `q -> q^k`.
/// Requires a zero constant term.
pub fn plethystic_exp(f: &QSeries) -> Result<QSeries> {
    if !f.coeff(0).is_zero() {
        return Err(Error::ConstantTermNotZero);
    }
    let n = f.order();
    let mut inner = QSeries::zero(f.vars(), n);
    for k in 1..=n.max(1) {
        let inv_k = Rat::new(1.into(), (k as i64).into());
        for j in 1..=n {
            let kj = k * j;
            if kj > n {
                break;
            }
            if f.coeff(j).is_zero() {
                continue;
            }
            let c = f.coeff(j).adams(k as u32).scale(&inv_k);
            inner.set_coeff(kj, inner.coeff(kj).add(&c));
        }
    }
    inner.exp()
}

/// Plethystic logarithm, the order-by-order inverse of [`plethystic_exp`].
/// Requires constant term 1.
pub fn plethystic_log(g: &QSeries) -> Result<QSeries> {
    if !g.coeff(0).is_one() {
        return Err(Error::ConstantTermNotOne);
    }
    let n = g.order();
    let mut f = QSeries::zero(g.vars(), n);
    for k in 1..=n {
        // Exp(f) agrees with g below order k; the defect at order k is f_k.
        let e = plethystic_exp(&f.truncate(k))?;
        let delta = g.coeff(k).sub(e.coeff(k));
        f.set_coeff(k, delta);
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::laurent::LaurentPoly;
    use crate::coeffring::rat_frac;
    use crate::coeffring::rat as rat_int;

    fn geom(vars: usize, i: usize) -> RatFun {
        // 1/(1 - t_{i+1})
        let one = LaurentPoly::one(vars);
        RatFun::new(one.clone(), one.sub(&LaurentPoly::var(vars, i))).unwrap()
    }

    #[test]
    fn exp_of_single_point_class_is_geometric() {
        // Exp(q) = 1/(1 - q): all coefficients 1.
        let mut f = QSeries::zero(0, 6);
        f.set_coeff(1, RatFun::one(0));
        let e = plethystic_exp(&f).unwrap();
        for k in 0..=6 {
            assert!(e.coeff(k).is_one(), "coefficient {k}");
        }
    }

    #[test]
    fn exp_matches_molien_product() {
        // <q^n> Exp(q/(1-t)) = 1/((1-t)(1-t^2)...(1-t^n)).
        let n = 8;
        let mut f = QSeries::zero(1, n);
        f.set_coeff(1, geom(1, 0));
        let e = plethystic_exp(&f).unwrap();
        let one = LaurentPoly::one(1);
        let t = LaurentPoly::var(1, 0);
        let mut den = one.clone();
        for k in 1..=n {
            den = den.mul(&one.sub(&t.pow(k as u32)));
            assert_eq!(
                e.coeff(k),
                &RatFun::new(one.clone(), den.clone()).unwrap(),
                "order {k}"
            );
        }
    }

    #[test]
    fn exp_matches_bruteforce_series_expansion() {
        // Independent oracle: expand exp(sum_n q^n/(n (1-t^n))) to order 8 by
        // naive convolution, written out without the plethystic machinery.
        let n = 8;
        let one = LaurentPoly::one(1);
        let t = LaurentPoly::var(1, 0);
        // inner[k] = 1/(k (1-t^k))
        let mut inner = vec![RatFun::zero(1); n + 1];
        for k in 1..=n {
            inner[k] = RatFun::new(
                one.clone(),
                one.sub(&t.pow(k as u32)).scale(&rat_int(k as i64)),
            )
            .unwrap();
        }
        // exp by repeated naive multiplication of coefficient vectors
        let mut exp = vec![RatFun::zero(1); n + 1];
        exp[0] = RatFun::one(1);
        let mut power = exp.clone(); // inner^m / m!
        for m in 1..=n {
            let mut next = vec![RatFun::zero(1); n + 1];
            for i in 0..=n {
                for j in 0..=n - i {
                    if power[i].is_zero() || inner[j].is_zero() {
                        continue;
                    }
                    next[i + j] = next[i + j].add(&power[i].mul(&inner[j]));
                }
            }
            for c in next.iter_mut() {
                *c = c.scale(&rat_frac(1, m as i64));
            }
            power = next;
            for k in 0..=n {
                exp[k] = exp[k].add(&power[k]);
            }
        }
        let mut f = QSeries::zero(1, n);
        f.set_coeff(1, geom(1, 0));
        let e = plethystic_exp(&f).unwrap();
        for k in 0..=n {
            assert_eq!(e.coeff(k), &exp[k], "order {k}");
        }
    }

    #[test]
    fn log_inverts_exp() {
        // Log(1/(1-tq)) = tq + O(q^N done exactly): single term.
        let n = 6;
        let one = LaurentPoly::one(1);
        let t = LaurentPoly::var(1, 0);
        let mut g = QSeries::zero(1, n);
        for k in 0..=n {
            g.set_coeff(k, RatFun::from_poly(t.pow(k as u32)));
        }
        let f = plethystic_log(&g).unwrap();
        assert_eq!(f.coeff(1), &RatFun::from_poly(t.clone()));
        for k in 2..=n {
            assert!(f.coeff(k).is_zero(), "order {k}");
        }
        // and Exp(tq) reproduces the geometric series
        let e = plethystic_exp(&f).unwrap();
        assert_eq!(e, g);
        let _ = one;
    }

    #[test]
    fn constant_term_preconditions() {
        let s = QSeries::one(1, 3);
        assert!(matches!(plethystic_exp(&s), Err(Error::ConstantTermNotZero)));
        let z = QSeries::zero(1, 3);
        assert!(matches!(plethystic_log(&z), Err(Error::ConstantTermNotOne)));
    }
}
