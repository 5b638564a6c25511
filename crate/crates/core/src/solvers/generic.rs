//! Complete engine: binary search on the model weight over a bounded
//! satisfiability oracle, plus one final call with the query forced.

use crate::error::Result;
use crate::formula::{Assignment, CmsAnswer, Formula};
use crate::relation::coord;

use super::{Engine, SolveReport};

/// Oracle-call budget for a universe of `n` variables:
/// `ceil(log2(n + 2)) + 1`.
pub fn oracle_budget(n: usize) -> usize {
    let m = n + 2;
    let ceil_log = (usize::BITS - (m - 1).leading_zeros()) as usize;
    ceil_log + 1
}

struct Search<'a> {
    formula: &'a Formula,
    watch: Vec<Vec<usize>>,
    forced: Vec<Option<bool>>,
    values: Vec<Option<bool>>,
    bound: usize,
}

impl Search<'_> {
    /// Some tuple of the constraint agrees with every assigned variable.
    fn consistent(&self, ci: usize) -> bool {
        let c = &self.formula.constraints()[ci];
        let r = self.formula.relation_of(c);
        let k = r.arity();
        r.slots().any(|s| {
            c.vars.iter().enumerate().all(|(p, &v)| match self.values[v] {
                Some(b) => coord(s, k, p) == b,
                None => {
                    // repeated unassigned variables must agree within the tuple
                    c.vars[..p]
                        .iter()
                        .enumerate()
                        .all(|(q, &w)| w != v || coord(s, k, q) == coord(s, k, p))
                }
            })
        })
    }

    fn run(&mut self, depth: usize, weight: usize) -> bool {
        if depth == self.values.len() {
            return true;
        }
        for b in [false, true] {
            if self.forced[depth].is_some_and(|f| f != b) {
                continue;
            }
            let w = weight + b as usize;
            if w > self.bound {
                continue;
            }
            self.values[depth] = Some(b);
            let ok = self.watch[depth].iter().all(|&ci| self.consistent(ci));
            if ok && self.run(depth + 1, w) {
                return true;
            }
        }
        self.values[depth] = None;
        false
    }
}

/// Lexicographically least model of weight at most `bound` respecting the
/// forced values, if any.
pub fn sat_leq(formula: &Formula, bound: usize, forced: &[(usize, bool)]) -> Option<Assignment> {
    let n = formula.num_vars();
    let mut watch: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ci, c) in formula.constraints().iter().enumerate() {
        for &v in &c.vars {
            if watch[v].last() != Some(&ci) {
                watch[v].push(ci);
            }
        }
    }
    let mut fv = vec![None; n];
    for &(v, b) in forced {
        if fv[v].is_some_and(|old| old != b) {
            return None;
        }
        fv[v] = Some(b);
    }
    let mut s = Search {
        formula,
        watch,
        forced: fv,
        values: vec![None; n],
        bound,
    };
    if s.run(0, 0) {
        Some(Assignment::new(s.values.iter().map(|v| v.unwrap_or(false)).collect()))
    } else {
        None
    }
}

pub fn solve_generic(formula: &Formula, query: &str) -> Result<SolveReport> {
    let x = formula.require_var(query)?;
    let n = formula.num_vars();
    let mut calls = 0;
    // minimum weight lies in [lo, hi]; hi = n + 1 stands for unsatisfiable
    let (mut lo, mut hi) = (0, n + 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        calls += 1;
        match sat_leq(formula, mid, &[]) {
            Some(m) => hi = m.weight(),
            None => lo = mid + 1,
        }
    }
    let answer = if lo == n + 1 {
        CmsAnswer::unsatisfiable()
    } else {
        calls += 1;
        match sat_leq(formula, lo, &[(x, true)]) {
            Some(m) => CmsAnswer::yes(m),
            None => CmsAnswer::no(lo),
        }
    };
    Ok(SolveReport {
        answer,
        engine: Engine::GenericOracle,
        oracle_calls: calls,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{build_named_relation as rel, Family};

    #[test]
    fn budget_values() {
        assert_eq!(oracle_budget(0), 2);
        assert_eq!(oracle_budget(3), 4);
        assert_eq!(oracle_budget(6), 4);
        assert_eq!(oracle_budget(7), 5);
        // doubling n + 2 adds exactly one call
        for n in [2usize, 6, 14, 30] {
            assert_eq!(oracle_budget(2 * (n + 2) - 2), oracle_budget(n) + 1);
        }
    }

    #[test]
    fn nae_example() {
        let f = Formula::builder()
            .with(&rel(Family::Nae3, None).unwrap(), &["x", "y", "z"])
            .unwrap()
            .build();
        let rep = solve_generic(&f, "x").unwrap();
        assert!(rep.answer.verdict);
        assert_eq!(rep.answer.min_weight, Some(1));
        assert!(rep.oracle_calls <= 3);
    }

    #[test]
    fn or_and_nand() {
        let f = Formula::builder()
            .with(&rel(Family::Or, Some(2)).unwrap(), &["x", "y"])
            .unwrap()
            .with(&rel(Family::Nand, Some(2)).unwrap(), &["x", "y"])
            .unwrap()
            .build();
        let rep = solve_generic(&f, "x").unwrap();
        assert_eq!(rep.answer.key(), (true, Some(1)));
        assert_eq!(format!("{:?}", rep.answer.witness.unwrap()), "10");
    }

    #[test]
    fn contradiction() {
        let f = Formula::builder()
            .with(&rel(Family::F, None).unwrap(), &["x"])
            .unwrap()
            .with(&rel(Family::T, None).unwrap(), &["x"])
            .unwrap()
            .build();
        let rep = solve_generic(&f, "x").unwrap();
        assert_eq!(rep.answer, CmsAnswer::unsatisfiable());
        assert!(rep.oracle_calls <= oracle_budget(1));
    }
}
