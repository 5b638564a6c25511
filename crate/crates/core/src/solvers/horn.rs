//! Least-model computation for Horn formulas.

use crate::classify::is_horn;
use crate::error::{Error, Result};
use crate::formula::{Assignment, CmsAnswer, Formula};
use crate::relation::coord;

use super::{Engine, SolveReport};

/// The unique minimum model of a Horn formula, or `None` if unsatisfiable.
///
/// Starting from the empty set of true variables, each constraint forces the
/// coordinate-wise AND of its tuples compatible with what is already true.
pub fn least_model(formula: &Formula) -> Result<Option<Assignment>> {
    for r in formula.relations() {
        if !is_horn(r) {
            return Err(Error::Precondition(format!("relation `{}` is not Horn", r.name())));
        }
    }
    let n = formula.num_vars();
    let mut on = vec![false; n];
    let mut watch: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ci, c) in formula.constraints().iter().enumerate() {
        for &v in &c.vars {
            if watch[v].last() != Some(&ci) {
                watch[v].push(ci);
            }
        }
    }
    let mut queue: Vec<usize> = (0..formula.constraints().len()).rev().collect();
    let mut queued = vec![true; formula.constraints().len()];
    while let Some(ci) = queue.pop() {
        queued[ci] = false;
        let c = &formula.constraints()[ci];
        let r = formula.relation_of(c);
        let k = r.arity();
        let mut meet: Option<u32> = None;
        'tuples: for s in r.slots() {
            for (p, &v) in c.vars.iter().enumerate() {
                let b = coord(s, k, p);
                if on[v] && !b {
                    continue 'tuples;
                }
                // repeated variables must agree
                if c.vars[..p].iter().enumerate().any(|(q, &w)| w == v && coord(s, k, q) != b) {
                    continue 'tuples;
                }
            }
            meet = Some(meet.map_or(s, |m| m & s));
        }
        let Some(m) = meet else {
            return Ok(None);
        };
        for (p, &v) in c.vars.iter().enumerate() {
            if coord(m, k, p) && !on[v] {
                on[v] = true;
                for &cj in &watch[v] {
                    if !queued[cj] {
                        queued[cj] = true;
                        queue.push(cj);
                    }
                }
            }
        }
    }
    Ok(Some(Assignment::new(on)))
}

pub fn solve_horn(formula: &Formula, query: &str) -> Result<SolveReport> {
    let x = formula.require_var(query)?;
    let answer = match least_model(formula)? {
        None => CmsAnswer::unsatisfiable(),
        Some(m) if m.get(x) => CmsAnswer::yes(m),
        Some(m) => CmsAnswer::no(m.weight()),
    };
    Ok(SolveReport::new(answer, Engine::HornFixpoint))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Reason;
    use crate::relation::{build_named_relation as rel, Family};

    #[test]
    fn chain_of_implications() {
        let t = rel(Family::T, None).unwrap();
        let imp = rel(Family::Impl, None).unwrap();
        let f = Formula::builder()
            .with(&t, &["x"])
            .unwrap()
            .with(&imp, &["x", "y"])
            .unwrap()
            .with(&imp, &["y", "z"])
            .unwrap()
            .build();
        let rep = solve_horn(&f, "z").unwrap();
        assert!(rep.answer.verdict);
        assert_eq!(rep.answer.min_weight, Some(3));
        assert_eq!(rep.engine, Engine::HornFixpoint);
    }

    #[test]
    fn implication_alone() {
        let imp = rel(Family::Impl, None).unwrap();
        let f = Formula::builder().with(&imp, &["x", "y"]).unwrap().build();
        assert_eq!(solve_horn(&f, "y").unwrap().answer, CmsAnswer::no(0));
    }

    #[test]
    fn contradiction() {
        let f = Formula::builder()
            .with(&rel(Family::T, None).unwrap(), &["x"])
            .unwrap()
            .with(&rel(Family::F, None).unwrap(), &["x"])
            .unwrap()
            .build();
        let rep = solve_horn(&f, "x").unwrap();
        assert_eq!(rep.answer.reason, Reason::Unsatisfiable);
        assert!(!rep.answer.verdict);
    }

    #[test]
    fn rejects_non_horn() {
        let f = Formula::builder()
            .with(&rel(Family::Or, Some(2)).unwrap(), &["x", "y"])
            .unwrap()
            .build();
        assert!(matches!(solve_horn(&f, "x"), Err(Error::Precondition(_))));
    }

    #[test]
    fn repeated_variables() {
        // NAND2(x, x) forces x = 0; with T(x) it is unsatisfiable
        let nand = rel(Family::Nand, Some(2)).unwrap();
        let f = Formula::builder()
            .with(&nand, &["x", "x"])
            .unwrap()
            .with(&rel(Family::T, None).unwrap(), &["x"])
            .unwrap()
            .build();
        assert!(least_model(&f).unwrap().is_none());
    }
}
