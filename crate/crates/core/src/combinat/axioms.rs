//! Exhaustive verification of the order/equivalence interplay on the
//! refinement lattice that the stratified machinery relies on.
//!
//! Writing `i ~_a j` for "i and j have equal meets with a", the checks are:
//!
//! * order action: the symmetric group acts by order automorphisms;
//! * class action: `i ~_a j` iff `gi ~_{ga} gj`;
//! * monotonicity: for `a <= b`, `~_b` is finer than `~_a`;
//! * sandwich: `i <= k <= j` and `i ~_a j` force `i ~_a k ~_a j`;
//! * common refinement: from `i <= j`, `k <= j`, `i ~_b j`, `k ~_a j`
//!   the meet of i and k is below both and relates `~_b` to k, `~_a` to i.
//!
//! Everything is integer table lookups; cost grows like the fifth power of
//! the lattice size, so keep `n` small (n <= 5 runs in seconds).

use serde::Serialize;

use super::partition::PartitionTable;

#[derive(Debug, Clone, Serialize)]
pub struct AxiomsReport {
    pub n: usize,
    pub lattice_size: usize,
    pub order_action_checks: u64,
    pub class_action_checks: u64,
    pub monotonicity_checks: u64,
    pub sandwich_checks: u64,
    pub witness_checks: u64,
    pub failures: Vec<String>,
}

impl AxiomsReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn total_checks(&self) -> u64 {
        self.order_action_checks
            + self.class_action_checks
            + self.monotonicity_checks
            + self.sandwich_checks
            + self.witness_checks
    }
}

pub fn check_axioms(n: usize) -> AxiomsReport {
    let t = PartitionTable::new(n);
    let m = t.len();
    let mut rep = AxiomsReport {
        n,
        lattice_size: m,
        order_action_checks: 0,
        class_action_checks: 0,
        monotonicity_checks: 0,
        sandwich_checks: 0,
        witness_checks: 0,
        failures: Vec::new(),
    };
    let fail = |rep: &mut AxiomsReport, msg: String| {
        if rep.failures.len() < 16 {
            rep.failures.push(msg);
        }
    };

    for g in 0..t.group().len() {
        for i in 0..m {
            let gi = t.act(g, i);
            for j in 0..m {
                rep.order_action_checks += 1;
                if t.leq(i, j) != t.leq(gi, t.act(g, j)) {
                    fail(&mut rep, format!("order not preserved: g={g} i={i} j={j}"));
                }
            }
        }
    }

    for g in 0..t.group().len() {
        for a in 0..m {
            let ga = t.act(g, a);
            for i in 0..m {
                let gi = t.act(g, i);
                for j in 0..m {
                    rep.class_action_checks += 1;
                    if t.equiv(a, i, j) != t.equiv(ga, gi, t.act(g, j)) {
                        fail(&mut rep, format!("classes not preserved: g={g} a={a} i={i} j={j}"));
                    }
                }
            }
        }
    }

    for a in 0..m {
        for b in 0..m {
            if !t.leq(a, b) {
                continue;
            }
            for i in 0..m {
                for j in 0..m {
                    if !t.equiv(b, i, j) {
                        continue;
                    }
                    rep.monotonicity_checks += 1;
                    if !t.equiv(a, i, j) {
                        fail(&mut rep, format!("not monotone: a={a} b={b} i={i} j={j}"));
                    }
                }
            }
        }
    }

    for j in 0..m {
        let below = t.down_set(j);
        for &i in &below {
            for &k in &below {
                if !(t.leq(i, k) && t.leq(k, j)) {
                    continue;
                }
                for a in 0..m {
                    if !t.equiv(a, i, j) {
                        continue;
                    }
                    rep.sandwich_checks += 1;
                    if !(t.equiv(a, i, k) && t.equiv(a, k, j)) {
                        fail(&mut rep, format!("sandwich fails: a={a} i={i} k={k} j={j}"));
                    }
                }
            }
        }
    }

    for j in 0..m {
        let below = t.down_set(j);
        for &i in &below {
            for &k in &below {
                let w = t.meet(i, k);
                for b in 0..m {
                    if !t.equiv(b, i, j) {
                        continue;
                    }
                    for a in 0..m {
                        if !t.equiv(a, k, j) {
                            continue;
                        }
                        rep.witness_checks += 1;
                        let ok = t.leq(w, i)
                            && t.leq(w, k)
                            && t.equiv(b, w, k)
                            && t.equiv(a, w, i);
                        if !ok {
                            fail(
                                &mut rep,
                                format!("no common refinement: i={i} k={k} j={j} a={a} b={b}"),
                            );
                        }
                    }
                }
            }
        }
    }

    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::partition::SetPartition;

    #[test]
    fn small_lattices_pass() {
        for n in 1..=4 {
            let rep = check_axioms(n);
            assert!(rep.ok(), "n={n} failures: {:?}", rep.failures);
            assert!(rep.total_checks() > 0);
        }
    }

    #[test]
    fn degenerate_equivalences() {
        let t = PartitionTable::new(4);
        let bot = t.idx(&SetPartition::singletons(4));
        let top = t.idx(&SetPartition::one_block(4));
        for i in 0..t.len() {
            for j in 0..t.len() {
                // meet with the bottom forgets everything, with the top nothing
                assert!(t.equiv(bot, i, j));
                assert_eq!(t.equiv(top, i, j), i == j);
            }
        }
    }
}
