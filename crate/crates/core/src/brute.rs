//! Exhaustive reference semantics: model enumeration and the brute-force
//! CardMinSat oracle every engine and reduction is checked against.
//!
//! Enumeration walks the universe in order, trying 0 before 1, and checks a
//! constraint as soon as its last variable is set. Models therefore come out
//! in lexicographic order of the universe.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::formula::{Assignment, CmsAnswer, CmsStarInstance, Formula};

pub const DEFAULT_MAX_VARS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumLimits {
    pub max_vars: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits {
            max_vars: DEFAULT_MAX_VARS,
        }
    }
}

impl EnumLimits {
    pub fn vars(max_vars: usize) -> Self {
        EnumLimits { max_vars }
    }
}

struct Enumerator<'a, F: FnMut(&[bool]) -> bool> {
    formula: &'a Formula,
    checks_at: Vec<Vec<usize>>,
    values: Vec<bool>,
    visit: F,
}

impl<F: FnMut(&[bool]) -> bool> Enumerator<'_, F> {
    /// Returns false once the visitor asks to stop.
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.values.len() {
            return (self.visit)(&self.values);
        }
        for value in [false, true] {
            self.values[depth] = value;
            let ok = self.checks_at[depth].iter().all(|&ci| {
                self.formula
                    .satisfies_constraint(&self.formula.constraints()[ci], &self.values)
            });
            if ok && !self.run(depth + 1) {
                return false;
            }
        }
        self.values[depth] = false;
        true
    }
}

/// Calls `visit` on every model in lexicographic order until it returns false.
pub fn for_each_model(
    formula: &Formula,
    limits: EnumLimits,
    visit: impl FnMut(&[bool]) -> bool,
) -> Result<()> {
    let n = formula.num_vars();
    if n > limits.max_vars {
        return Err(Error::guard("universe size", n as u128, limits.max_vars as u128));
    }
    let mut checks_at = vec![Vec::new(); n];
    let mut always_false = false;
    for (ci, c) in formula.constraints().iter().enumerate() {
        match c.vars.iter().max() {
            Some(&last) => checks_at[last].push(ci),
            None => always_false |= !formula.relation_of(c).contains(0),
        }
    }
    if always_false {
        return Ok(());
    }
    if n == 0 {
        let mut visit = visit;
        visit(&[]);
        return Ok(());
    }
    let mut e = Enumerator {
        formula,
        checks_at,
        values: vec![false; n],
        visit,
    };
    e.run(0);
    Ok(())
}

pub fn enumerate_models(formula: &Formula) -> Result<Vec<Assignment>> {
    enumerate_models_with(formula, EnumLimits::default())
}

pub fn enumerate_models_with(formula: &Formula, limits: EnumLimits) -> Result<Vec<Assignment>> {
    let mut out = Vec::new();
    for_each_model(formula, limits, |m| {
        out.push(Assignment::new(m.to_vec()));
        true
    })?;
    Ok(out)
}

pub fn cms_bruteforce(formula: &Formula, query: &str) -> Result<CmsAnswer> {
    cms_bruteforce_with(formula, query, EnumLimits::default())
}

pub fn cms_bruteforce_with(formula: &Formula, query: &str, limits: EnumLimits) -> Result<CmsAnswer> {
    let x = formula.require_var(query)?;
    let mut min_weight: Option<usize> = None;
    // lexicographically first model with the query set, per weight level
    let mut best_with_x: Option<(usize, Vec<bool>)> = None;
    for_each_model(formula, limits, |m| {
        let w = m.iter().filter(|&&b| b).count();
        if min_weight.is_none_or(|mw| w < mw) {
            min_weight = Some(w);
        }
        if m[x] && best_with_x.as_ref().is_none_or(|(bw, _)| w < *bw) {
            best_with_x = Some((w, m.to_vec()));
        }
        true
    })?;
    Ok(match (min_weight, best_with_x) {
        (None, _) => CmsAnswer::unsatisfiable(),
        (Some(mw), Some((bw, model))) if bw == mw => CmsAnswer::yes(Assignment::new(model)),
        (Some(mw), _) => CmsAnswer::no(mw),
    })
}

pub fn cms_star_bruteforce(inst: &CmsStarInstance) -> Result<bool> {
    cms_star_bruteforce_with(inst, EnumLimits::default())
}

pub fn cms_star_bruteforce_with(inst: &CmsStarInstance, limits: EnumLimits) -> Result<bool> {
    let ans = cms_bruteforce_with(&inst.formula, &inst.query, limits)?;
    Ok(ans.verdict && ans.min_weight.is_some_and(|w| w <= inst.bound))
}

/// Variables that take the same value in every model, keyed by universe index.
pub fn frozen_vars(formula: &Formula) -> Result<BTreeMap<usize, bool>> {
    frozen_vars_with(formula, EnumLimits::default())
}

pub fn frozen_vars_with(formula: &Formula, limits: EnumLimits) -> Result<BTreeMap<usize, bool>> {
    let n = formula.num_vars();
    let mut first: Option<Vec<bool>> = None;
    let mut frozen = vec![true; n];
    for_each_model(formula, limits, |m| {
        match &first {
            None => first = Some(m.to_vec()),
            Some(f) => {
                for v in 0..n {
                    frozen[v] &= f[v] == m[v];
                }
            }
        }
        true
    })?;
    let first = first.ok_or(Error::Unsatisfiable)?;
    Ok((0..n).filter(|&v| frozen[v]).map(|v| (v, first[v])).collect())
}

/// Frozen variables reported by name.
pub fn frozen_by_name(formula: &Formula, limits: EnumLimits) -> Result<BTreeMap<String, bool>> {
    Ok(frozen_vars_with(formula, limits)?
        .into_iter()
        .map(|(v, b)| (formula.var_name(v).to_string(), b))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Reason;
    use crate::relation::{build_named_relation as rel, Family};

    fn bits(models: &[Assignment]) -> Vec<String> {
        models.iter().map(|m| format!("{m:?}")).collect()
    }

    #[test]
    fn enumerate_or2() {
        let f = Formula::builder()
            .with(&rel(Family::Or, Some(2)).unwrap(), &["x", "y"])
            .unwrap()
            .build();
        assert_eq!(bits(&enumerate_models(&f).unwrap()), vec!["01", "10", "11"]);
    }

    #[test]
    fn enumerate_contradiction() {
        let f = Formula::builder()
            .with(&rel(Family::T, None).unwrap(), &["x"])
            .unwrap()
            .with(&rel(Family::F, None).unwrap(), &["x"])
            .unwrap()
            .build();
        assert!(enumerate_models(&f).unwrap().is_empty());
    }

    #[test]
    fn enumerate_nae_with_repetition() {
        // brute check over the four assignments of (x, y)
        let f = Formula::builder()
            .with(&rel(Family::Nae3, None).unwrap(), &["x", "x", "y"])
            .unwrap()
            .build();
        assert_eq!(bits(&enumerate_models(&f).unwrap()), vec!["01", "10"]);
    }

    #[test]
    fn guard_applies() {
        let t = rel(Family::T, None).unwrap();
        let mut b = Formula::builder();
        for i in 0..30 {
            b.constrain(&t, &[format!("v{i}")]).unwrap();
        }
        let f = b.build();
        assert!(matches!(enumerate_models(&f), Err(Error::Guard { .. })));
        assert_eq!(enumerate_models_with(&f, EnumLimits::vars(30)).unwrap().len(), 1);
    }

    #[test]
    fn cms_examples() {
        let xor3 = rel(Family::Xor, Some(3)).unwrap();
        let f = Formula::builder().with(&xor3, &["x", "y", "z"]).unwrap().build();
        let a = cms_bruteforce(&f, "x").unwrap();
        assert!(a.verdict);
        assert_eq!(a.min_weight, Some(1));
        assert_eq!(format!("{:?}", a.witness.unwrap()), "100");

        let imp = rel(Family::Impl, None).unwrap();
        let f = Formula::builder().with(&imp, &["x", "y"]).unwrap().build();
        assert_eq!(cms_bruteforce(&f, "y").unwrap(), CmsAnswer::no(0));

        let neq = rel(Family::Neq, None).unwrap();
        let f = Formula::builder()
            .with(&neq, &["x", "y"])
            .unwrap()
            .with(&neq, &["y", "z"])
            .unwrap()
            .build();
        assert_eq!(cms_bruteforce(&f, "x").unwrap().key(), (false, Some(1)));
        assert!(cms_bruteforce(&f, "y").unwrap().verdict);
        assert!(matches!(cms_bruteforce(&f, "w"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn witness_is_lexicographically_least() {
        let or2 = rel(Family::Or, Some(2)).unwrap();
        let f = Formula::builder()
            .with(&or2, &["a", "b"])
            .unwrap()
            .with(&or2, &["c", "d"])
            .unwrap()
            .build();
        let a = cms_bruteforce(&f, "a").unwrap();
        assert_eq!(format!("{:?}", a.witness.unwrap()), "1001");
    }

    #[test]
    fn empty_formula_and_declared_universe() {
        let f = Formula::builder().declare_universe(&["p", "q"]).unwrap().build();
        let a = cms_bruteforce(&f, "p").unwrap();
        assert_eq!(a, CmsAnswer::no(0));
        assert_eq!(enumerate_models(&f).unwrap().len(), 4);
    }

    #[test]
    fn cms_star_examples() {
        let xor3 = rel(Family::Xor, Some(3)).unwrap();
        let f = Formula::builder().with(&xor3, &["x", "y", "z"]).unwrap().build();
        assert!(cms_star_bruteforce(&CmsStarInstance::new(f.clone(), "x", 1).unwrap()).unwrap());
        assert!(!cms_star_bruteforce(&CmsStarInstance::new(f, "x", 0).unwrap()).unwrap());
        let nae = rel(Family::Nae3, None).unwrap();
        let f = Formula::builder().with(&nae, &["x", "y", "z"]).unwrap().build();
        assert!(cms_star_bruteforce(&CmsStarInstance::new(f, "x", 1).unwrap()).unwrap());
    }

    #[test]
    fn frozen_examples() {
        let or2 = rel(Family::Or, Some(2)).unwrap();
        let f = Formula::builder().with(&or2, &["x", "y"]).unwrap().build();
        assert!(frozen_vars(&f).unwrap().is_empty());
        let t = rel(Family::T, None).unwrap();
        let fl = rel(Family::F, None).unwrap();
        let f = Formula::builder()
            .with(&t, &["x"])
            .unwrap()
            .with(&fl, &["x"])
            .unwrap()
            .build();
        assert!(matches!(frozen_vars(&f), Err(Error::Unsatisfiable)));
    }

    #[test]
    fn unsat_reason() {
        let t = rel(Family::T, None).unwrap();
        let fl = rel(Family::F, None).unwrap();
        let f = Formula::builder()
            .with(&t, &["x"])
            .unwrap()
            .with(&fl, &["x"])
            .unwrap()
            .build();
        assert_eq!(cms_bruteforce(&f, "x").unwrap().reason, Reason::Unsatisfiable);
    }
}
