//! CardMinSat engines and the dispatcher that picks one per language.

mod generic;
mod horn;
mod width2;

pub use generic::{oracle_budget, sat_leq, solve_generic};
pub use horn::{least_model, solve_horn};
pub use width2::solve_width2affine;

use std::fmt;
use std::str::FromStr;

use crate::brute::cms_bruteforce_with;
use crate::brute::EnumLimits;
use crate::classify::{classify_bucket, Bucket};
use crate::error::{Error, Result};
use crate::formula::{CmsAnswer, ConstraintLanguage, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    Trivial,
    HornFixpoint,
    Width2Affine,
    GenericOracle,
    BruteForce,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Trivial => "Trivial",
            Engine::HornFixpoint => "HornFixpoint",
            Engine::Width2Affine => "Width2Affine",
            Engine::GenericOracle => "GenericOracle",
            Engine::BruteForce => "BruteForce",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub answer: CmsAnswer,
    pub engine: Engine,
    pub oracle_calls: usize,
}

impl SolveReport {
    pub(crate) fn new(answer: CmsAnswer, engine: Engine) -> Self {
        SolveReport {
            answer,
            engine,
            oracle_calls: 0,
        }
    }
}

/// Engine selection as exposed on the command line.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EngineChoice {
    #[default]
    Auto,
    Horn,
    Width2Affine,
    Generic,
    Brute,
}

impl FromStr for EngineChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(EngineChoice::Auto),
            "horn" => Ok(EngineChoice::Horn),
            "w2a" => Ok(EngineChoice::Width2Affine),
            "generic" => Ok(EngineChoice::Generic),
            "brute" => Ok(EngineChoice::Brute),
            other => Err(Error::Precondition(format!("unknown engine `{other}`"))),
        }
    }
}

/// Routes `(φ, x)` to the engine matching the complexity bucket of `lang`.
pub fn dispatch(lang: &ConstraintLanguage, formula: &Formula, query: &str) -> Result<SolveReport> {
    for r in formula.relations() {
        if !lang.contains(r) {
            return Err(Error::ForeignRelation(r.name().to_string()));
        }
    }
    formula.require_var(query)?;
    match classify_bucket(lang) {
        Bucket::Trivial0Valid => Ok(SolveReport::new(CmsAnswer::no(0), Engine::Trivial)),
        Bucket::PolyHorn => solve_horn(formula, query),
        Bucket::PolyWidth2Affine => solve_width2affine(formula, query),
        Bucket::Theta2Complete => solve_generic(formula, query),
    }
}

/// Solves with the language of `formula` itself, or with a forced engine.
pub fn solve(formula: &Formula, query: &str, choice: EngineChoice) -> Result<SolveReport> {
    match choice {
        EngineChoice::Auto => {
            if formula.relations().is_empty() {
                formula.require_var(query)?;
                return Ok(SolveReport::new(CmsAnswer::no(0), Engine::Trivial));
            }
            dispatch(&formula.language()?, formula, query)
        }
        EngineChoice::Horn => solve_horn(formula, query),
        EngineChoice::Width2Affine => solve_width2affine(formula, query),
        EngineChoice::Generic => solve_generic(formula, query),
        EngineChoice::Brute => Ok(SolveReport::new(
            cms_bruteforce_with(formula, query, EnumLimits::default())?,
            Engine::BruteForce,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{build_named_relation as rel, Family};

    fn single(f: Family, k: Option<usize>, vars: &[&str]) -> (ConstraintLanguage, Formula) {
        let r = rel(f, k).unwrap();
        let formula = Formula::builder().with(&r, vars).unwrap().build();
        (ConstraintLanguage::single(r), formula)
    }

    #[test]
    fn dispatch_examples() {
        let (l, f) = single(Family::Impl, None, &["x", "y"]);
        let rep = dispatch(&l, &f, "y").unwrap();
        assert_eq!(rep.engine, Engine::Trivial);
        assert!(!rep.answer.verdict);

        let (l, f) = single(Family::Neq, None, &["x", "y"]);
        let rep = dispatch(&l, &f, "x").unwrap();
        assert_eq!(rep.engine, Engine::Width2Affine);
        assert!(rep.answer.verdict);

        let (l, f) = single(Family::Or, Some(2), &["x", "y"]);
        let rep = dispatch(&l, &f, "x").unwrap();
        assert_eq!(rep.engine, Engine::GenericOracle);
        assert!(rep.answer.verdict);
        assert_eq!(rep.answer.min_weight, Some(1));
    }

    #[test]
    fn dispatch_rejects_foreign_relation() {
        let (_, f) = single(Family::Or, Some(2), &["x", "y"]);
        let l = ConstraintLanguage::single(rel(Family::Impl, None).unwrap());
        assert!(matches!(dispatch(&l, &f, "x"), Err(Error::ForeignRelation(_))));
    }

    #[test]
    fn auto_on_empty_formula() {
        let f = Formula::builder().declare_universe(&["a"]).unwrap().build();
        let rep = solve(&f, "a", EngineChoice::Auto).unwrap();
        assert_eq!(rep.answer, CmsAnswer::no(0));
    }
}
