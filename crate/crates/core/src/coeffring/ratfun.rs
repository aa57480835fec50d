//! Rational functions as quotients of Laurent polynomials.
//!
//! A `RatFun` is always kept in normal form:
//! - a common monomial factor of numerator and denominator is cleared, so the
//!   joint componentwise minimum exponent is zero in every variable
//! - coefficients are scaled to coprime integers
//! - the coefficient of the denominator's lexicographically least exponent
//!   is positive
//!
//! Equality is by cross multiplication, so it is independent of normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::laurent::{t_names, Exps, LaurentPoly};
use super::{rat, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RatFun {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFun {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.vars() != den.vars() {
            return Err(Error::VarMismatch(num.vars(), den.vars()));
        }
        let mut f = RatFun { num, den };
        f.normalize();
        Ok(f)
    }

    pub fn zero(vars: usize) -> Self {
        RatFun { num: LaurentPoly::zero(vars), den: LaurentPoly::one(vars) }
    }

    pub fn one(vars: usize) -> Self {
        RatFun { num: LaurentPoly::one(vars), den: LaurentPoly::one(vars) }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let mut f = RatFun { den: LaurentPoly::one(p.vars()), num: p };
        f.normalize();
        f
    }

    pub fn from_rat(vars: usize, c: Rat) -> Self {
        Self::from_poly(LaurentPoly::constant(vars, c))
    }

    pub fn from_int(vars: usize, v: i64) -> Self {
        Self::from_rat(vars, rat(v))
    }

    pub fn vars(&self) -> usize {
        self.num.vars()
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// True if the denominator is the constant 1 after normalization.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = LaurentPoly::one(self.den.vars());
            return;
        }
        // Clear the joint common monomial factor.
        let mn = self.num.min_exponents().unwrap();
        let md = self.den.min_exponents().unwrap();
        let joint: Exps = mn.iter().zip(&md).map(|(a, b)| -(*a).min(*b)).collect();
        if joint.iter().any(|x| *x != 0) {
            self.num = self.num.shift(&joint);
            self.den = self.den.shift(&joint);
        }
        // Scale both polynomials by one rational so all coefficients become
        // coprime integers.
        let mut denom_lcm = BigInt::one();
        for (_, c) in self.num.terms().chain(self.den.terms()) {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut numer_gcd = BigInt::zero();
        for (_, c) in self.num.terms().chain(self.den.terms()) {
            let scaled = c.numer() * (&denom_lcm / c.denom());
            numer_gcd = numer_gcd.gcd(&scaled);
        }
        let mut scale = Rat::new(denom_lcm, numer_gcd);
        // Fix the sign of the denominator's lexicographically least term.
        let (_, low) = self.den.terms().next().unwrap();
        if (low.clone() * scale.clone()).is_negative() {
            scale = -scale;
        }
        if !scale.is_one() {
            self.num = self.num.scale(&scale);
            self.den = self.den.scale(&scale);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RatFun::new(num, den).expect("denominator product is nonzero")
    }

    pub fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatFun::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("denominator product is nonzero")
    }

    pub fn scale(&self, c: &Rat) -> Self {
        RatFun::new(self.num.scale(c), self.den.clone()).expect("denominator unchanged")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let mut out = Self::one(self.vars());
        for _ in 0..k {
            out = out.mul(self);
        }
        Ok(out)
    }

    /// Adams substitution `t_i -> t_i^k` on numerator and denominator.
    pub fn adams(&self, k: u32) -> Self {
        RatFun::new(self.num.adams(k), self.den.adams(k)).expect("adams preserves nonzero")
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.den.is_one() {
            return self.num.format_with(names);
        }
        let num = self.num.format_with(names);
        // a single power product needs no parentheses on the left of `/`
        let num = if self.num.num_terms() == 1 && !num.starts_with('-') {
            num
        } else {
            format!("({num})")
        };
        format!("{}/({})", num, self.den.format_with(names))
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        // Cross multiplication; independent of representation.
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RatFun {}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&t_names(self.vars())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rat_frac;

    fn t1() -> LaurentPoly {
        LaurentPoly::var(1, 0)
    }

    fn one() -> LaurentPoly {
        LaurentPoly::one(1)
    }

    #[test]
    fn geometric_quotient_reduces() {
        // (1/(1-t)) / (1/(1-t^2)) = 1 + t, checked against long division.
        let a = RatFun::new(one(), one().sub(&t1())).unwrap();
        let b = RatFun::new(one(), one().sub(&t1().pow(2))).unwrap();
        let q = a.div(&b).unwrap();
        let expect = RatFun::from_poly(one().add(&t1()));
        assert_eq!(q, expect);
        // Long division oracle: (1 - t^2) = (1 - t) * (1 + t) + 0.
        let (quot, rem) = long_divide(&one().sub(&t1().pow(2)), &one().sub(&t1()));
        assert_eq!(quot, one().add(&t1()));
        assert!(rem.is_zero());
    }

    /// Univariate polynomial long division in the test module only; this is
    /// the independent oracle for quotient identities.
    fn long_divide(a: &LaurentPoly, b: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
        let mut rem = a.clone();
        let mut quot = LaurentPoly::zero(1);
        let (be, bc) = b.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        while !rem.is_zero() {
            let (re, rc) = rem.leading().map(|(e, c)| (e.clone(), c.clone())).unwrap();
            if re[0] < be[0] {
                break;
            }
            let t = LaurentPoly::monomial(vec![re[0] - be[0]], rc / bc.clone());
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(b));
        }
        (quot, rem)
    }

    #[test]
    fn equality_is_cross_multiplication() {
        let a = RatFun::new(t1(), one().sub(&t1())).unwrap();
        let b = RatFun::new(
            t1().mul(&one().add(&t1())),
            one().sub(&t1()).mul(&one().add(&t1())),
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn normal_form_clears_monomials_and_signs() {
        // t^-1 / (t^-2 - t^-1) normalizes to t / (1 - t) up to sign fixing.
        let num = LaurentPoly::monomial(vec![-1], rat(1));
        let den = LaurentPoly::monomial(vec![-2], rat(1)).sub(&LaurentPoly::monomial(vec![-1], rat(1)));
        let f = RatFun::new(num, den).unwrap();
        assert_eq!(f.to_string(), "t1/(1 - t1)");
        let g = RatFun::new(t1(), one().sub(&t1())).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn scale_keeps_integer_normal_form() {
        let f = RatFun::new(t1(), one().sub(&t1())).unwrap().scale(&rat_frac(2, 3));
        assert_eq!(f.to_string(), "2*t1/(3 - 3*t1)");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(
            RatFun::new(one(), LaurentPoly::zero(1)),
            Err(Error::DivisionByZero)
        ));
        assert!(RatFun::zero(1).inv().is_err());
    }
}
