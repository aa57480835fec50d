//! The generating identity tying the pieces together: the series of
//! invariant Euler characteristics over the symmetric quotients equals the
//! plethystic exponential of the series of diagonal cohomology characters.
//!
//! Both sides are computed independently.  The left side never looks at
//! trees: it averages the action on the one-block fiber over stabilizers,
//! orbit by orbit.  The right side runs the whole pipeline: strictify,
//! build the complex, extract the diagonal cohomology, take characters.
//! A separate bridge identity checks the tree-indexed alternating trace
//! against the plethystic logarithm of the left side, coefficient by
//! coefficient.

use std::sync::Arc;

use crate::coeffring::{
    plethystic_exp, plethystic_log, rat, rat_frac, LaurentPoly, QSeries, RatFun,
};
use crate::combinat::SetPartition;
use crate::equirep::graded_trace;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::report::Report;
use crate::stratsys::{
    assemble_strict, build_space, strictify, system_from_local_datum, LocalDatum, StratSpace,
    System, XSpace,
};
use crate::treecx::{enumerate_trees, sign_l};

use super::complex::{build_gn, pm1, point_label};
use super::diagonal::{averaged_euler_trace, extract_hn};
use super::filtration::filtration_check_all;

/// Product of the coordinate weight monomials of a tuple.
pub fn point_monomial(sp: &StratSpace, p: usize) -> LaurentPoly {
    let mut exps = vec![0i32; sp.d()];
    for &c in sp.point(p) {
        for (e, w) in exps.iter_mut().zip(sp.x().weight(c)) {
            *e += w;
        }
    }
    LaurentPoly::monomial(exps, rat(1))
}

/// Invariant Euler characteristic of the one-block fiber over the
/// quotient: orbit by orbit, the graded trace of the stabilizer averaging
/// projector at a representative, weighted by the orbit's monomial.
pub fn chi_sym(sys: &System) -> Result<LaurentPoly> {
    if !sys.has_action() {
        return Err(Error::Invalid("the invariant characteristic needs an action layer".into()));
    }
    let sp = sys.space();
    let top = sp.table().idx(&SetPartition::one_block(sp.n()));
    let mut out = LaurentPoly::zero(sys.d());
    for orbit in sp.point_orbits() {
        let rep = orbit[0];
        let stab: Vec<usize> =
            (0..sp.group_order()).filter(|&g| sp.act_point(g, rep) == rep).collect();
        let dim = sys.dim(top, rep);
        let mut avg = QMatrix::zero(dim, dim);
        for &g in &stab {
            avg = avg.add(sys.action(g, top, rep));
        }
        avg = avg.scale(&rat_frac(1, stab.len() as i64));
        out = out.add(&point_monomial(sp, rep).mul(&graded_trace(&avg, sys.fiber(top, rep))));
    }
    Ok(out)
}

/// The same invariant characteristic as a fixed point average over the
/// whole group; an independent route to the value of `chi_sym`.
pub fn chi_sym_burnside(sys: &System) -> Result<LaurentPoly> {
    if !sys.has_action() {
        return Err(Error::Invalid("the invariant characteristic needs an action layer".into()));
    }
    let sp = sys.space();
    let top = sp.table().idx(&SetPartition::one_block(sp.n()));
    let mut out = LaurentPoly::zero(sys.d());
    for g in 0..sp.group_order() {
        for p in 0..sp.num_points() {
            if sp.act_point(g, p) != p {
                continue;
            }
            out = out.add(
                &point_monomial(sp, p).mul(&graded_trace(sys.action(g, top, p), sys.fiber(top, p))),
            );
        }
    }
    Ok(out.scale(&rat_frac(1, sp.group_order() as i64)))
}

/// Group-averaged alternating trace of the tree-indexed family, read off
/// the raw system: one term per group element, fixed point and fixed tree,
/// twisted by the degree parity and the inversion sign.  No transitions
/// and no strictification are involved, so a partial system works.
pub fn log_coefficient_trace(sys: &System) -> Result<LaurentPoly> {
    if !sys.has_action() {
        return Err(Error::Invalid("the alternating trace needs an action layer".into()));
    }
    let sp = sys.space();
    let t = sp.table();
    let trees = enumerate_trees(sp.n(), None);
    let mut out = LaurentPoly::zero(sys.d());
    for g in 0..sp.group_order() {
        let gperm = &sp.group()[g];
        let fixed: Vec<(usize, usize, i64)> = trees
            .iter()
            .filter(|tree| &tree.act(gperm) == *tree)
            .map(|tree| (t.idx(&tree.leaf_partition()), tree.k(), pm1(sign_l(tree, gperm))))
            .collect();
        for p in 0..sp.num_points() {
            if sp.act_point(g, p) != p {
                continue;
            }
            let mut local = LaurentPoly::zero(sys.d());
            for &(part, k, sign) in &fixed {
                let tr = graded_trace(sys.action(g, part, p), &sys.fiber(part, p).shifted(k));
                local = local.add(&tr.scale(&rat(sign)));
            }
            out = out.add(&point_monomial(sp, p).mul(&local));
        }
    }
    Ok(out.scale(&rat_frac(1, sp.group_order() as i64)))
}

/// The series whose coefficient at `q^n` is the invariant Euler
/// characteristic of the datum's family over the `n`-th symmetric
/// quotient; the constant term is 1.
pub fn symmetric_series(x: &XSpace, datum: &LocalDatum, n_max: usize) -> Result<QSeries> {
    let mut out = QSeries::one(x.d(), n_max + 1);
    for n in 1..=n_max {
        let sp = Arc::new(build_space(x.clone(), n)?);
        let sys = system_from_local_datum(&sp, datum)?;
        out.set_coeff(n, RatFun::from_poly(chi_sym(&sys)?));
    }
    Ok(out)
}

/// Checks that the tree-indexed alternating trace computes the plethystic
/// logarithm of the symmetric series, coefficient by coefficient.
pub fn verify_log_bridge(x: &XSpace, datum: &LocalDatum, n_max: usize) -> Result<Report> {
    let mut rep = Report::new("logbridge")
        .with_n(n_max)
        .with_param("points", x.len())
        .with_param("vars", x.d());
    let expected = plethystic_log(&symmetric_series(x, datum, n_max)?)?;
    for n in 1..=n_max {
        let sp = Arc::new(build_space(x.clone(), n)?);
        let sys = system_from_local_datum(&sp, datum)?;
        let got = RatFun::from_poly(log_coefficient_trace(&sys)?);
        rep.record(1);
        if got != *expected.coeff(n) {
            rep.fail(format!(
                "coefficient {n}: the tree trace gives {got} but the logarithm gives {}",
                expected.coeff(n)
            ));
        }
    }
    Ok(rep)
}

/// Runs the whole pipeline for every length up to `n_max` and checks the
/// generating identity: the symmetric series equals the plethystic
/// exponential of the diagonal character series.  Along the way the two
/// routes to the left side must agree, every complex must pass its own
/// validation, the filtration must split, and the invariant character of
/// the extracted cohomology must match the averaged alternating trace.
pub fn verify_main(x: &XSpace, datum: &LocalDatum, n_max: usize) -> Result<Report> {
    let mut rep = Report::new("main")
        .with_n(n_max)
        .with_param("points", x.len())
        .with_param("vars", x.d());
    let d = x.d();
    let mut sym = QSeries::one(d, n_max + 1);
    let mut diag = QSeries::zero(d, n_max + 1);
    for n in 1..=n_max {
        let sp = Arc::new(build_space(x.clone(), n)?);
        let sys = system_from_local_datum(&sp, datum)?;
        let orbit_chi = chi_sym(&sys)?;
        let burnside_chi = chi_sym_burnside(&sys)?;
        rep.record(1);
        if orbit_chi != burnside_chi {
            rep.fail(format!(
                "length {n}: the stabilizer average disagrees with the fixed point average"
            ));
        }
        sym.set_coeff(n, RatFun::from_poly(orbit_chi));

        let strict = assemble_strict(&strictify(&sys)?)?;
        let cx = build_gn(&strict)?;
        let filt = filtration_check_all(&cx)?;
        rep.merge(&filt);
        let hn = extract_hn(&cx)?;
        for f in hn.fibers() {
            rep.record(1);
            if f.invariant_character() != averaged_euler_trace(&cx, f.x) {
                rep.fail(format!(
                    "length {n}: the invariant character at {} disagrees with the averaged alternating trace",
                    point_label(&sp, f.point),
                ));
            }
        }
        diag.set_coeff(n, RatFun::from_poly(hn.character(&sp)));
    }
    let rhs = plethystic_exp(&diag)?;
    for n in 0..=n_max {
        rep.record(1);
        if sym.coeff(n) != rhs.coeff(n) {
            rep.fail(format!(
                "coefficient {n} differs: the symmetric side gives {} but the exponential gives {}",
                sym.coeff(n),
                rhs.coeff(n)
            ));
            break;
        }
    }
    Ok(rep)
}

/// Seeded end-to-end run on a random weighted base and a random datum.
pub fn verify_main_random(
    points: usize,
    vars: usize,
    n_max: usize,
    max_dim: usize,
    seed: u64,
) -> Result<Report> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let x = XSpace::random(&mut rng, points, vars, 1);
    let datum = LocalDatum::random(&mut rng, points, n_max, vars, max_dim);
    let mut rep = verify_main(&x, &datum, n_max)?;
    rep.seed = Some(seed);
    Ok(rep)
}

/// Seeded bridge run on a random weighted base and a random datum.
pub fn verify_log_bridge_random(
    points: usize,
    vars: usize,
    n_max: usize,
    max_dim: usize,
    seed: u64,
) -> Result<Report> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let x = XSpace::random(&mut rng, points, vars, 1);
    let datum = LocalDatum::random(&mut rng, points, n_max, vars, max_dim);
    let mut rep = verify_log_bridge(&x, &datum, n_max)?;
    rep.seed = Some(seed);
    Ok(rep)
}
