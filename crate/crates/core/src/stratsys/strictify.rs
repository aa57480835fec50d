//! Resolving a partial system by strict ones.
//!
//! Over a finite point set the pushforward from a stratum is extension by
//! zero, so the image system of a stratum is the restriction of the input to
//! that stratum, made strict by sending every non-identified index pair to
//! zero.  Summing the images over a stratum orbit restores the group action,
//! and the inclusion of the input into the orbit sum has a kernel supported
//! strictly inside the previous support and a cokernel that vanishes over
//! the open set of the stratum.  Recursing on kernel and cokernel therefore
//! terminates and writes the input, at the level of graded traces at every
//! fixed (element, index, point) triple, as a signed sum of strict systems.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coeffring::{rat, LaurentPoly};
use crate::equirep::WeightedSpace;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::report::Report;

use super::space::{build_space, StratSpace, XSpace};
use super::system::{
    cokernel_system, comparable_pairs, kernel_system, system_from_local_datum,
    validate_morphism, LocalDatum, Morphism, System,
};

/// How the support of a system sits relative to the open set of a stratum:
/// `Zero` if every fiber over `U_a` vanishes, `One` if some fiber is nonzero
/// there but only over the stratum itself, `Infinite` otherwise.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SupportMeasure {
    Zero,
    One,
    Infinite,
}

pub fn support_measure(sys: &System, a: usize) -> SupportMeasure {
    let sp = sys.space();
    let mut any = false;
    let mut outside = false;
    for p in 0..sp.num_points() {
        if !sp.in_u(p, a) {
            continue;
        }
        let nonzero = (0..sp.table().len()).any(|i| sys.dim(i, p) > 0);
        if nonzero {
            any = true;
            if sp.coinc(p) != a {
                outside = true;
            }
        }
    }
    match (any, outside) {
        (false, _) => SupportMeasure::Zero,
        (true, false) => SupportMeasure::One,
        (true, true) => SupportMeasure::Infinite,
    }
}

/// The image fibers of one stratum: basis columns of the assembled map from
/// all summands `k <= i` identified with `i` by the stratum's partition,
/// together with their embeddings into the input fibers.  Off the stratum
/// everything is zero.
struct StratumPiece {
    fibers: Vec<Vec<WeightedSpace>>,
    embed: Vec<Vec<QMatrix>>,
}

fn stratum_piece(sys: &System, b: usize) -> StratumPiece {
    let sp = sys.space().clone();
    let t = sp.table();
    let np = sp.num_points();
    let mut fibers = Vec::with_capacity(t.len());
    let mut embed = Vec::with_capacity(t.len());
    for i in 0..t.len() {
        let mut frow = Vec::with_capacity(np);
        let mut erow = Vec::with_capacity(np);
        for p in 0..np {
            let dim = sys.dim(i, p);
            if sp.coinc(p) != b {
                frow.push(WeightedSpace::empty(sys.d()));
                erow.push(QMatrix::zero(dim, 0));
                continue;
            }
            let mut assembled = QMatrix::zero(dim, 0);
            for k in 0..t.len() {
                if !t.leq(k, i) || !t.equiv(b, k, i) {
                    continue;
                }
                let m = if k == i {
                    QMatrix::identity(dim)
                } else {
                    sys.transition(k, i, p)
                        .expect("stratum lies inside the transition domain")
                        .clone()
                };
                assembled = assembled.hcat(&m);
            }
            let pivots = assembled.column_space_pivots();
            let e =
                QMatrix::from_fn(dim, pivots.len(), |r, c| assembled[(r, pivots[c])].clone());
            let lines = (0..e.cols())
                .map(|c| {
                    let rows: Vec<usize> =
                        (0..dim).filter(|&r| !e[(r, c)].is_zero()).collect();
                    let line = sys.fiber(i, p).line_at(rows[0]).clone();
                    debug_assert!(
                        rows.iter().all(|&r| *sys.fiber(i, p).line_at(r) == line),
                        "image columns stay homogeneous"
                    );
                    line
                })
                .collect();
            frow.push(WeightedSpace::new(sys.d(), lines));
            erow.push(e);
        }
        fibers.push(frow);
        embed.push(erow);
    }
    StratumPiece { fibers, embed }
}

/// Shared assembly for single-stratum and orbit images: the strict system
/// whose fiber at `(i, p)` is the sum of the image fibers over `betas`, and
/// the coordinate inclusion of the input.  With `with_action`, `betas` must
/// be closed under the group and the output carries the induced action.
fn image_system(
    sys: &System,
    betas: &[usize],
    with_action: bool,
) -> Result<(System, Morphism)> {
    let sp = sys.space().clone();
    let t = sp.table();
    let np = sp.num_points();
    let pieces: Vec<StratumPiece> = betas.iter().map(|&b| stratum_piece(sys, b)).collect();
    let fibers: Vec<Vec<WeightedSpace>> = (0..t.len())
        .map(|i| {
            (0..np)
                .map(|p| {
                    pieces.iter().fold(WeightedSpace::empty(sys.d()), |acc, piece| {
                        acc.direct_sum(&piece.fibers[i][p])
                    })
                })
                .collect()
        })
        .collect();
    let offset = |i: usize, p: usize, slot: usize| -> usize {
        pieces[..slot].iter().map(|piece| piece.fibers[i][p].dim()).sum()
    };
    let total = |i: usize, p: usize| -> usize { fibers[i][p].dim() };
    let mut phi = std::collections::BTreeMap::new();
    for (i, j) in comparable_pairs(t) {
        let row: Vec<Option<QMatrix>> = (0..np)
            .map(|p| {
                let mut m = QMatrix::zero(total(j, p), total(i, p));
                for (slot, &b) in betas.iter().enumerate() {
                    if sp.coinc(p) != b || !t.equiv(b, i, j) {
                        continue;
                    }
                    let step = sys
                        .transition(i, j, p)
                        .expect("stratum lies inside the transition domain");
                    let block = pieces[slot].embed[j][p]
                        .solve(&step.mul(&pieces[slot].embed[i][p]))
                        .expect("transitions map image fibers to image fibers");
                    let (ro, co) = (offset(j, p, slot), offset(i, p, slot));
                    for r in 0..block.rows() {
                        for c in 0..block.cols() {
                            m[(ro + r, co + c)] = block[(r, c)].clone();
                        }
                    }
                }
                Some(m)
            })
            .collect();
        phi.insert((i, j), row);
    }
    let rho = if with_action {
        let slot_of = |b: usize| betas.iter().position(|&x| x == b).expect("orbit closed");
        Some(
            (0..sp.group().len())
                .map(|g| {
                    (0..t.len())
                        .map(|i| {
                            let gi = t.act(g, i);
                            (0..np)
                                .map(|p| {
                                    let gp = sp.act_point(g, p);
                                    let mut m =
                                        QMatrix::zero(total(gi, gp), total(i, p));
                                    for (slot, &b) in betas.iter().enumerate() {
                                        if sp.coinc(p) != b {
                                            continue;
                                        }
                                        let tslot = slot_of(t.act(g, b));
                                        let block = pieces[tslot].embed[gi][gp]
                                            .solve(
                                                &sys.action(g, i, p)
                                                    .mul(&pieces[slot].embed[i][p]),
                                            )
                                            .expect("the action maps image fibers to image fibers");
                                        let (ro, co) =
                                            (offset(gi, gp, tslot), offset(i, p, slot));
                                        for r in 0..block.rows() {
                                            for c in 0..block.cols() {
                                                m[(ro + r, co + c)] = block[(r, c)].clone();
                                            }
                                        }
                                    }
                                    m
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
    let incl: Vec<Vec<QMatrix>> = (0..t.len())
        .map(|i| {
            (0..np)
                .map(|p| {
                    let dim = sys.dim(i, p);
                    let mut m = QMatrix::zero(total(i, p), dim);
                    for (slot, &b) in betas.iter().enumerate() {
                        if sp.coinc(p) != b {
                            continue;
                        }
                        let block = pieces[slot].embed[i][p]
                            .solve(&QMatrix::identity(dim))
                            .expect("the identity summand makes the image everything");
                        let ro = offset(i, p, slot);
                        for r in 0..block.rows() {
                            for c in 0..block.cols() {
                                m[(ro + r, c)] = block[(r, c)].clone();
                            }
                        }
                    }
                    m
                })
                .collect()
        })
        .collect();
    let strict = System::new(sp, sys.d(), true, fibers, phi, rho)?;
    Ok((strict, Morphism::new(incl)))
}

/// The strict system of images over one stratum, with the inclusion of the
/// input.  Carries no action: a single stratum is only preserved by the
/// partition's stabilizer.
pub fn stratum_image(sys: &System, a: usize) -> Result<(System, Morphism)> {
    image_system(sys, &[a], false)
}

/// The sum of stratum images over the orbit of `a`, with the induced action
/// and the inclusion of the input.
pub fn orbit_image(sys: &System, a: usize) -> Result<(System, Morphism)> {
    if !sys.has_action() {
        return Err(Error::Invalid("orbit image needs the action layer".into()));
    }
    let t = sys.space().table();
    let mut orbit: Vec<usize> =
        (0..sys.space().group().len()).map(|g| t.act(g, a)).collect();
    orbit.sort_unstable();
    orbit.dedup();
    image_system(sys, &orbit, true)
}

/// A formal signed combination of strict systems over a common space.
pub struct SignedSystemList {
    space: Arc<StratSpace>,
    d: usize,
    entries: Vec<(System, i64)>,
}

impl SignedSystemList {
    pub fn space(&self) -> &Arc<StratSpace> {
        &self.space
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[(System, i64)] {
        &self.entries
    }
}

/// Compares the graded trace of `target` with the signed sum over the list,
/// at every (element, index, point) triple fixed by the element.
pub fn signed_kclass_matches(target: &System, list: &SignedSystemList) -> Result<()> {
    let sp = target.space();
    let t = sp.table();
    for g in 0..sp.group().len() {
        for i in 0..t.len() {
            if t.act(g, i) != i {
                continue;
            }
            for p in 0..sp.num_points() {
                if sp.act_point(g, p) != p {
                    continue;
                }
                let mut sum = LaurentPoly::zero(target.d());
                for (entry, mult) in &list.entries {
                    sum = sum.add(&entry.equivariant_trace(g, i, p).scale(&rat(*mult)));
                }
                if sum != target.equivariant_trace(g, i, p) {
                    return Err(Error::Invalid(format!(
                        "signed trace mismatch for element {g} at index {i}, point {p}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Writes a partial system as a signed combination of strict ones:
/// repeatedly take the minimal index with nonzero support measure, emit the
/// orbit image, and recurse into the kernel (same sign) and cokernel
/// (opposite sign) of the inclusion.  Both supports are verified to shrink
/// strictly, and the result is verified to match the input trace for trace.
pub fn strictify(sys: &System) -> Result<SignedSystemList> {
    if !sys.has_action() {
        return Err(Error::Invalid("strictification needs the action layer".into()));
    }
    let mut entries = Vec::new();
    strictify_rec(sys, 1, 0, &mut entries)?;
    let list =
        SignedSystemList { space: sys.space().clone(), d: sys.d(), entries };
    signed_kclass_matches(sys, &list)?;
    Ok(list)
}

fn strictify_rec(
    sys: &System,
    sign: i64,
    depth: usize,
    out: &mut Vec<(System, i64)>,
) -> Result<()> {
    if sys.is_zero() {
        return Ok(());
    }
    if depth > sys.space().num_points() + 1 {
        return Err(Error::Invalid("internal: support failed to shrink".into()));
    }
    let t = sys.space().table();
    let nonzero: Vec<usize> = (0..t.len())
        .filter(|&a| support_measure(sys, a) != SupportMeasure::Zero)
        .collect();
    let alpha = *nonzero
        .iter()
        .find(|&&a| nonzero.iter().all(|&b| b == a || !t.leq(b, a)))
        .expect("a nonzero system measures nonzero somewhere");
    if support_measure(sys, alpha) != SupportMeasure::One {
        return Err(Error::Invalid(
            "internal: a minimal index must have measure one".into(),
        ));
    }
    let (strict, incl) = orbit_image(sys, alpha)?;
    let target = strict.restricted();
    validate_morphism(sys, &target, &incl)?;
    let (ker, _) = kernel_system(sys, &target, &incl)?;
    let (cok, _) = cokernel_system(sys, &target, &incl)?;
    let supp = sys.support();
    for (name, piece) in [("kernel", &ker), ("cokernel", &cok)] {
        let ps = piece.support();
        if !ps.is_subset(&supp) || ps == supp {
            return Err(Error::Invalid(format!(
                "internal: {name} support failed to shrink"
            )));
        }
    }
    out.push((strict, sign));
    strictify_rec(&ker, sign, depth + 1, out)?;
    strictify_rec(&cok, -sign, depth + 1, out)
}

/// Realizes a signed list as one strict system: positive entries are summed
/// as they are, negative ones with flipped parity, so the graded traces of
/// the output match the signed sum.
pub fn assemble_strict(list: &SignedSystemList) -> Result<System> {
    let mut acc = System::zero(list.space.clone(), list.d);
    for (entry, mult) in &list.entries {
        if !entry.is_strict() || !entry.has_action() {
            return Err(Error::Invalid(
                "assembly needs strict entries with an action".into(),
            ));
        }
        let summand = if *mult < 0 { entry.parity_shift() } else { entry.clone() };
        for _ in 0..mult.unsigned_abs() {
            acc = acc.direct_sum(&summand)?;
        }
    }
    signed_kclass_matches(&acc, list)?;
    Ok(acc)
}

/// End-to-end randomized check: build a system from a random local datum,
/// validate every stratum image, the measure of minimal indices, cokernel
/// vanishing over each candidate's open set, then strictify, assemble and
/// compare all graded traces.
pub fn verify_strictify(
    x_len: usize,
    n: usize,
    d: usize,
    max_dim: usize,
    seed: u64,
) -> Result<Report> {
    let mut report = Report::new("strictify")
        .with_n(n)
        .with_seed(seed)
        .with_param("points", x_len)
        .with_param("max_dim", max_dim);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sp = Arc::new(build_space(XSpace::unweighted(x_len, d), n)?);
    let datum = LocalDatum::random(&mut rng, x_len, n, d, max_dim);
    let sys = system_from_local_datum(&sp, &datum)?;
    report.record(1);
    let t = sp.table();
    for a in 0..t.len() {
        match stratum_image(&sys, a) {
            Ok((strict, incl)) => {
                if let Err(e) = validate_morphism(&sys, &strict.restricted(), &incl) {
                    report.fail(format!("stratum {a}: inclusion fails: {e}"));
                }
                for i in 0..t.len() {
                    for p in 0..sp.num_points() {
                        let expect =
                            if sp.coinc(p) == a { sys.dim(i, p) } else { 0 };
                        if strict.dim(i, p) != expect {
                            report.fail(format!(
                                "stratum {a}: image fiber at ({i},{p}) has dimension {} instead of {expect}",
                                strict.dim(i, p)
                            ));
                        }
                    }
                }
                report.record(1);
            }
            Err(e) => report.fail(format!("stratum {a}: image fails: {e}")),
        }
    }
    let nonzero: Vec<usize> = (0..t.len())
        .filter(|&a| support_measure(&sys, a) != SupportMeasure::Zero)
        .collect();
    for &a in &nonzero {
        let minimal = nonzero.iter().all(|&b| b == a || !t.leq(b, a));
        if minimal && support_measure(&sys, a) != SupportMeasure::One {
            report.fail(format!("minimal index {a} has measure other than one"));
        }
        report.record(1);
        match orbit_image(&sys, a) {
            Ok((strict, incl)) => {
                let target = strict.restricted();
                match cokernel_system(&sys, &target, &incl) {
                    Ok((cok, _)) => {
                        let bad: BTreeSet<usize> = cok
                            .support()
                            .into_iter()
                            .filter(|&p| sp.in_u(p, a))
                            .collect();
                        if !bad.is_empty() {
                            report.fail(format!(
                                "cokernel of the inclusion at {a} survives over its open set at points {bad:?}"
                            ));
                        }
                        report.record(1);
                    }
                    Err(e) => report.fail(format!("cokernel at {a} fails: {e}")),
                }
            }
            Err(e) => report.fail(format!("orbit image at {a} fails: {e}")),
        }
    }
    let list = match strictify(&sys) {
        Ok(list) => list,
        Err(e) => {
            report.fail(format!("strictification fails: {e}"));
            return Ok(report);
        }
    };
    report.record(1 + list.entries().len() as u64);
    match assemble_strict(&list) {
        Ok(assembled) => {
            if let Err(e) = signed_kclass_matches(&assembled, &list) {
                report.fail(format!("assembled traces diverge: {e}"));
            }
            report.record(1);
        }
        Err(e) => report.fail(format!("assembly fails: {e}")),
    }
    Ok(report)
}
