//! Virtual characters with denominators, and the identity tying the local
//! exponential to the plethystic one.
//!
//! A presentation is a list of symmetric group inputs together with a unit
//! space that every trace gets divided by. For a shape lambda the class
//! function `alpha_lambda` pushes the block tensor forward from the
//! partition stabilizer, dividing by the twisted unit trace. Two routes
//! compute it: the subgroup route sums trace ratios over conjugators, the
//! orbit route sums over the partitions of the shape a class representative
//! fixes. They must agree, and the lemma checked by
//! [`verify_character_lemma`] says the averaged sums assemble into a
//! plethystic exponential.

use std::collections::BTreeMap;

use crate::coeffring::{plethystic_exp, rat, LaurentPoly, QSeries, Rat, RatFun};
use crate::combinat::{
    all_perms, class_representative, consecutive_partition_of_shape, count_cycle_type,
    enumerate_int_partitions, enumerate_set_partitions, factorial, IntPartition, Permutation,
    SetPartition,
};
use crate::equirep::sheaf::{
    block_action_matrix, graded_trace, tensor_over_partition, tensor_space, WeightedSheaf,
};
use crate::equirep::space::WeightedSpace;
use crate::error::{Error, Result};
use crate::report::Report;

/// One rational value per conjugacy class of a symmetric group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClassFunction {
    n: usize,
    d: usize,
    values: BTreeMap<IntPartition, RatFun>,
}

impl ClassFunction {
    pub fn from_fn(n: usize, d: usize, mut f: impl FnMut(&IntPartition) -> RatFun) -> Self {
        let values = enumerate_int_partitions(n)
            .into_iter()
            .map(|cls| {
                let v = f(&cls);
                (cls, v)
            })
            .collect();
        ClassFunction { n, d, values }
    }

    pub fn zero(n: usize, d: usize) -> Self {
        Self::from_fn(n, d, |_| RatFun::zero(d))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn value(&self, cls: &IntPartition) -> &RatFun {
        self.values.get(cls).expect("a partition of the right n")
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.n, self.d), (other.n, other.d));
        Self::from_fn(self.n, self.d, |cls| self.value(cls).add(other.value(cls)))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::from_fn(self.n, self.d, |cls| self.value(cls).scale(c))
    }

    /// The inner product with the trivial character: class sizes weight the
    /// values, divided by the group order.
    pub fn average_over_group(&self) -> RatFun {
        let mut acc = RatFun::zero(self.d);
        for (cls, v) in &self.values {
            acc = acc.add(&v.scale(&rat(count_cycle_type(cls) as i64)));
        }
        acc.scale(&(rat(1) / rat(factorial(self.n) as i64)))
    }
}

impl WeightedSheaf {
    /// Trace at one representative per conjugacy class. Needs the full
    /// symmetric action, under which traces are class functions.
    pub fn kclass(&self) -> ClassFunction {
        assert!(self.group().is_symmetric(), "class values need the symmetric group");
        let n = self.group().n();
        ClassFunction::from_fn(n, self.d(), |cls| {
            RatFun::from_poly(self.trace(&class_representative(cls)))
        })
    }
}

/// Inputs by arity plus the unit space every ratio is taken against.
#[derive(Clone, Debug)]
pub struct Presentation {
    numerators: Vec<WeightedSheaf>,
    denominator: WeightedSpace,
}

impl Presentation {
    pub fn new(numerators: Vec<WeightedSheaf>, denominator: WeightedSpace) -> Result<Self> {
        let d = denominator.d();
        for (i, f) in numerators.iter().enumerate() {
            if f.d() != d {
                return Err(Error::Invalid("input grading widths must match the unit".into()));
            }
            if f.group().n() != i + 1 || !f.group().is_symmetric() {
                return Err(Error::Invalid(format!(
                    "input {} must carry the full symmetric action on {} letters",
                    i,
                    i + 1
                )));
            }
        }
        Ok(Presentation { numerators, denominator })
    }

    pub fn d(&self) -> usize {
        self.denominator.d()
    }

    /// Largest arity with an input.
    pub fn arity(&self) -> usize {
        self.numerators.len()
    }

    pub fn numerators(&self) -> &[WeightedSheaf] {
        &self.numerators
    }

    pub fn denominator(&self) -> &WeightedSpace {
        &self.denominator
    }

    /// The equivalent presentation with every input and the unit tensored
    /// by a fixed space carrying no action.
    pub fn tensored_with(&self, extra: &WeightedSpace) -> Result<Self> {
        let mut numerators = Vec::with_capacity(self.numerators.len());
        for f in &self.numerators {
            let ident = vec![crate::linalg::QMatrix::identity(extra.dim()); f.group().order()];
            let constant = WeightedSheaf::from_point_rep(f.group(), extra.clone(), ident)?;
            numerators.push(f.flatten().tensor(&constant)?);
        }
        Self::new(numerators, self.denominator.tensor(extra))
    }
}

/// The permutation a partition-stabilizing element induces on the blocks.
fn block_perm(s: &Permutation, parts: &SetPartition) -> Permutation {
    let blocks = parts.blocks();
    let images: Vec<usize> = blocks
        .iter()
        .map(|a| {
            let im = s.act_subset(a);
            blocks.iter().position(|b| *b == im).expect("the element stabilizes the partition") + 1
        })
        .collect();
    Permutation::from_images(images)
}

/// Trace of a block permutation on a tensor power of the unit space: one
/// factor of the character per cycle, variables raised to the cycle length.
/// Odd lines pick up a sign from the cyclic reordering that exactly matches
/// the unscaled coefficient, so the formula is a plain exponent scaling.
pub fn twisted_unit_trace(unit_char: &LaurentPoly, blocks: &Permutation) -> LaurentPoly {
    let mut out = LaurentPoly::one(unit_char.vars());
    for &c in blocks.cycle_type().parts() {
        out = out.mul(&unit_char.adams(c as u32));
    }
    out
}

fn unit_char_or_err(pres: &Presentation) -> Result<LaurentPoly> {
    let ch = pres.denominator().character();
    if ch.is_zero() {
        return Err(Error::UnitClassVanishes);
    }
    Ok(ch)
}

/// Push the block tensor of the consecutive partition of shape `lambda`
/// forward from its stabilizer: at a class representative sigma, average
/// the trace ratio of the conjugate over all conjugators landing in the
/// stabilizer.
pub fn alpha_lambda(pres: &Presentation, lambda: &IntPartition) -> Result<ClassFunction> {
    let n = lambda.n();
    let d = pres.d();
    let dch = unit_char_or_err(pres)?;
    if lambda.parts()[0] > pres.arity() {
        return Ok(ClassFunction::zero(n, d));
    }
    let parts0 = consecutive_partition_of_shape(lambda);
    let pre = tensor_over_partition(pres.numerators(), &parts0)?;
    let h = pre.group().clone();
    let mut ratio = Vec::with_capacity(h.order());
    for tau in h.elements() {
        let num = RatFun::from_poly(pre.trace(tau));
        let den = RatFun::from_poly(twisted_unit_trace(&dch, &block_perm(tau, &parts0)));
        ratio.push(num.div(&den).expect("unit trace is nonzero"));
    }
    let scale = rat(1) / rat(h.order() as i64);
    let perms = all_perms(n);
    Ok(ClassFunction::from_fn(n, d, |cls| {
        let sigma = class_representative(cls);
        let mut acc = RatFun::zero(d);
        for x in &perms {
            let conj = x.inverse().compose(&sigma).compose(x);
            if let Some(ti) = h.position(&conj) {
                acc = acc.add(&ratio[ti]);
            }
        }
        acc.scale(&scale)
    }))
}

/// Same class function, summed the other way: over the partitions of shape
/// `lambda` a class representative fixes, with honest block matrices.
pub fn alpha_lambda_orbit_sum(pres: &Presentation, lambda: &IntPartition) -> Result<ClassFunction> {
    let n = lambda.n();
    let d = pres.d();
    let dch = unit_char_or_err(pres)?;
    if lambda.parts()[0] > pres.arity() {
        return Ok(ClassFunction::zero(n, d));
    }
    let flat: Vec<WeightedSheaf> = pres
        .numerators()
        .iter()
        .take(lambda.parts()[0])
        .map(|f| f.flatten())
        .collect();
    let of_shape: Vec<SetPartition> = enumerate_set_partitions(n)
        .into_iter()
        .filter(|p| p.shape() == *lambda)
        .collect();
    Ok(ClassFunction::from_fn(n, d, |cls| {
        let sigma = class_representative(cls);
        let mut acc = RatFun::zero(d);
        for parts in &of_shape {
            if parts.act(&sigma) != *parts {
                continue;
            }
            let m = block_action_matrix(&flat, parts, &sigma);
            let num = RatFun::from_poly(graded_trace(&m, &tensor_space(&flat, parts)));
            let den = RatFun::from_poly(twisted_unit_trace(&dch, &block_perm(&sigma, parts)));
            acc = acc.add(&num.div(&den).expect("unit trace is nonzero"));
        }
        acc
    }))
}

/// Degree-n coefficients of the local exponential: the sum of
/// `alpha_lambda` over the shapes of each degree, subgroup route.
pub fn loc_exp(pres: &Presentation, order: usize) -> Result<Vec<ClassFunction>> {
    (1..=order).map(|n| sum_over_shapes(pres, n, alpha_lambda)).collect()
}

/// The same coefficients through the orbit route.
pub fn loc_exp_orbit(pres: &Presentation, order: usize) -> Result<Vec<ClassFunction>> {
    (1..=order).map(|n| sum_over_shapes(pres, n, alpha_lambda_orbit_sum)).collect()
}

fn sum_over_shapes(
    pres: &Presentation,
    n: usize,
    route: impl Fn(&Presentation, &IntPartition) -> Result<ClassFunction>,
) -> Result<ClassFunction> {
    let mut acc = ClassFunction::zero(n, pres.d());
    for lambda in enumerate_int_partitions(n) {
        acc = acc.add(&route(pres, &lambda)?);
    }
    Ok(acc)
}

fn one_plus_averages(entries: &[ClassFunction], d: usize) -> QSeries {
    let mut coeffs = vec![RatFun::one(d)];
    coeffs.extend(entries.iter().map(|e| e.average_over_group()));
    QSeries::from_coeffs(d, coeffs)
}

/// The identity this module exists for: one plus the averaged local
/// exponential equals the plethystic exponential of the averaged
/// single-block ratios. Both sides are computed exactly, the left side by
/// two independent routes.
pub fn verify_character_lemma(pres: &Presentation, order: usize) -> Result<Report> {
    let d = pres.d();
    let mut rep = Report::new("charlemma").with_param("order", &order);
    let betas = loc_exp(pres, order)?;
    let betas_orbit = loc_exp_orbit(pres, order)?;
    for n in 1..=order {
        if betas[n - 1] == betas_orbit[n - 1] {
            rep.record(1);
        } else {
            rep.fail(format!("subgroup and orbit routes disagree in degree {n}"));
        }
    }
    let lhs = one_plus_averages(&betas, d);
    let mut acoef = vec![RatFun::zero(d)];
    for n in 1..=order {
        acoef.push(alpha_lambda(pres, &IntPartition::new(vec![n]))?.average_over_group());
    }
    let rhs = plethystic_exp(&QSeries::from_coeffs(d, acoef))?;
    for k in 0..=order {
        if lhs.coeff(k) == rhs.coeff(k) {
            rep.record(1);
        } else {
            rep.fail(format!(
                "coefficient {k}: averaged sum {} vs exponential {}",
                lhs.coeff(k),
                rhs.coeff(k)
            ));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::equirep::group::PermGroup;
    use crate::equirep::sheaf::{f_lambda, random_sheaf};
    use crate::equirep::space::BasisLine;
    use crate::linalg::QMatrix;

    fn random_inputs(rng: &mut ChaCha8Rng, arity: usize, d: usize) -> Vec<WeightedSheaf> {
        (1..=arity)
            .map(|k| random_sheaf(rng, &PermGroup::symmetric(k), d, 2))
            .collect()
    }

    fn random_even_space(rng: &mut ChaCha8Rng, d: usize) -> WeightedSpace {
        let lines = rng.gen_range(1..=2);
        WeightedSpace::new(
            d,
            (0..lines)
                .map(|_| BasisLine::new((0..d).map(|_| rng.gen_range(-1..=1)).collect(), 0))
                .collect(),
        )
    }

    #[test]
    fn unit_denominator_recovers_the_spread_classes() {
        // with a trivial unit the pushforward is plain induction, so the
        // class function must match the honest spread matrices
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inputs = random_inputs(&mut rng, 3, 2);
        let pres = Presentation::new(inputs.clone(), WeightedSpace::unit(2)).unwrap();
        for lambda in enumerate_int_partitions(3) {
            let fast = alpha_lambda(&pres, &lambda).unwrap();
            let honest = f_lambda(&inputs, &lambda).unwrap().kclass();
            assert_eq!(fast, honest, "shape {lambda:?}");
        }
    }

    #[test]
    fn subgroup_and_orbit_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let inputs = random_inputs(&mut rng, 4, 1);
        let den = random_even_space(&mut rng, 1);
        let pres = Presentation::new(inputs, den).unwrap();
        for lambda in enumerate_int_partitions(4) {
            assert_eq!(
                alpha_lambda(&pres, &lambda).unwrap(),
                alpha_lambda_orbit_sum(&pres, &lambda).unwrap(),
                "shape {lambda:?}"
            );
        }
    }

    #[test]
    fn single_block_is_the_plain_trace_ratio() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let inputs = random_inputs(&mut rng, 3, 2);
        let den = random_even_space(&mut rng, 2);
        let dch = RatFun::from_poly(den.character());
        let pres = Presentation::new(inputs.clone(), den).unwrap();
        let a = alpha_lambda(&pres, &IntPartition::new(vec![3])).unwrap();
        let k = inputs[2].kclass();
        for cls in enumerate_int_partitions(3) {
            assert_eq!(*a.value(&cls), k.value(&cls).div(&dch).unwrap());
        }
    }

    #[test]
    fn twisted_unit_trace_matches_honest_matrices() {
        // a mixed parity unit, tensored once per block with the trivial
        // inner action; the cycle formula must reproduce the signed
        // permutation traces including the odd line cancellations
        let unit = WeightedSpace::new(
            1,
            vec![BasisLine::new(vec![1], 1), BasisLine::new(vec![0], 0)],
        );
        let inputs: Vec<WeightedSheaf> = (1..=4)
            .map(|k| {
                let g = PermGroup::symmetric(k);
                let ident = vec![QMatrix::identity(unit.dim()); g.order()];
                WeightedSheaf::from_point_rep(&g, unit.clone(), ident).unwrap()
            })
            .collect();
        let dch = unit.character();
        for parts in enumerate_set_partitions(4) {
            let spread = tensor_over_partition(&inputs, &parts).unwrap();
            for tau in spread.group().elements() {
                let formula = twisted_unit_trace(&dch, &block_perm(tau, &parts));
                assert_eq!(spread.trace(tau), formula, "at {tau} on {parts:?}");
            }
        }
    }

    #[test]
    fn tensoring_the_presentation_changes_nothing() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let inputs = random_inputs(&mut rng, 3, 1);
        let den = random_even_space(&mut rng, 1);
        let pres = Presentation::new(inputs, den).unwrap();
        // an odd extra line exercises the sign bookkeeping on both sides
        let extra = WeightedSpace::new(
            1,
            vec![BasisLine::new(vec![2], 1), BasisLine::new(vec![0], 0)],
        );
        let twisted = pres.tensored_with(&extra).unwrap();
        for lambda in enumerate_int_partitions(3) {
            assert_eq!(
                alpha_lambda(&pres, &lambda).unwrap(),
                alpha_lambda(&twisted, &lambda).unwrap(),
                "shape {lambda:?}"
            );
        }
    }

    #[test]
    fn symmetric_powers_of_a_line() {
        // one even line of weight one and a trivial unit: every degree
        // contributes exactly t^n
        let line = WeightedSheaf::character_line(&PermGroup::symmetric(1), vec![1], 0, false);
        let pres = Presentation::new(vec![line], WeightedSpace::unit(1)).unwrap();
        let betas = loc_exp(&pres, 4).unwrap();
        for (i, beta) in betas.iter().enumerate() {
            let expect = RatFun::from_poly(LaurentPoly::monomial(vec![(i + 1) as i32], rat(1)));
            assert_eq!(beta.average_over_group(), expect);
        }
        let rep = verify_character_lemma(&pres, 4).unwrap();
        assert!(rep.ok(), "{}", rep.to_json());
    }

    #[test]
    fn missing_arities_kill_the_odd_degrees() {
        let zero1 = WeightedSheaf::zero(&PermGroup::symmetric(1), 1);
        let pair = WeightedSheaf::character_line(&PermGroup::symmetric(2), vec![1], 0, false);
        let pres = Presentation::new(vec![zero1, pair], WeightedSpace::unit(1)).unwrap();
        let betas = loc_exp(&pres, 5).unwrap();
        for n in [1usize, 3, 5] {
            assert!(betas[n - 1].is_zero(), "degree {n} should vanish");
        }
        assert!(!betas[1].is_zero());
        assert!(!betas[3].is_zero());
    }

    #[test]
    fn vanishing_unit_is_rejected() {
        let line = WeightedSheaf::character_line(&PermGroup::symmetric(1), vec![0], 0, false);
        let pres = Presentation::new(vec![line], WeightedSpace::empty(1)).unwrap();
        assert!(matches!(
            alpha_lambda(&pres, &IntPartition::new(vec![1])),
            Err(Error::UnitClassVanishes)
        ));
    }

    #[test]
    fn character_lemma_on_random_presentations() {
        for seed in [0u64, 1] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inputs = random_inputs(&mut rng, 3, 2);
            let den = random_even_space(&mut rng, 2);
            let pres = Presentation::new(inputs, den).unwrap();
            let rep = verify_character_lemma(&pres, 3).unwrap();
            assert!(rep.ok(), "seed {seed}: {}", rep.to_json());
        }
    }
}
