//! Executable hardness reductions: the chain from OR² down to XOR₃ and the
//! gadgets expressing OR² or XOR₃ through each hard weak base.
//!
//! Every output keeps the source formula so models can be moved in both
//! directions with [`lift_model`] and [`restrict_model`]. The target universe
//! starts with the source universe in the same order, so restriction is a
//! prefix.

mod chain;
mod compose;
mod gadgets;

pub use chain::{
    reduce_nae3_to_xor3_star, reduce_or2_to_nae3, reduce_xor3_star_to_xor4,
    reduce_xor3xor2_to_xor3, reduce_xor4_to_xor3_xor2,
};
pub use compose::{apply_step, compose_chain, Pipeline};
pub use gadgets::reduce_to_weakbase;

use std::collections::BTreeMap;
use std::fmt;

use crate::classify::CoCloneId;
use crate::error::{Error, Result};
use crate::formula::{Assignment, Constraint, Formula};
use crate::relation::Relation;
use crate::solvers::sat_leq;

/// Which construction produced an output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Or2ToNae3,
    Nae3ToXor3Star,
    Xor3StarToXor4,
    Xor4ToXor3Xor2,
    Xor3Xor2ToXor3,
    WeakBase(CoCloneId),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Or2ToNae3 => f.write_str("or2->nae3"),
            Step::Nae3ToXor3Star => f.write_str("nae3->xor3*"),
            Step::Xor3StarToXor4 => f.write_str("xor3*->xor4"),
            Step::Xor4ToXor3Xor2 => f.write_str("xor4->xor3+xor2"),
            Step::Xor3Xor2ToXor3 => f.write_str("xor3+xor2->xor3"),
            Step::WeakBase(c) => {
                let head = if gadgets::takes_xor3(*c) { "xor3" } else { "or2" };
                write!(f, "{head}->B_{c}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionStats {
    pub fresh_var_count: usize,
    /// Number of boost copies, where the construction uses them.
    pub boost_n: Option<usize>,
    /// Exact weight added to every source model by its minimum extension.
    pub declared_weight_offset: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub step: Step,
    pub formula: Formula,
    pub query: String,
    /// Cardinality bound, present when the target is a Cms* instance.
    pub bound: Option<usize>,
    pub stats: ReductionStats,
    /// Fresh global variables the construction freezes, with their values.
    pub frozen_claim: BTreeMap<String, bool>,
    /// Names the construction uses for its global constants, if any.
    pub constants: BTreeMap<&'static str, String>,
    source: Formula,
    sentinel: bool,
}

impl ReductionOutput {
    pub fn source(&self) -> &Formula {
        &self.source
    }

    /// True for the fixed negative instance emitted for unsatisfiable input.
    pub fn is_sentinel(&self) -> bool {
        self.sentinel
    }

    pub fn constant(&self, role: &str) -> Option<&str> {
        self.constants.get(role).map(String::as_str)
    }
}

/// Minimum-weight extension of a source model, lexicographically least
/// among those.
pub fn lift_model(red: &ReductionOutput, sigma: &Assignment) -> Result<Assignment> {
    let src = &red.source;
    if sigma.len() != src.num_vars() || !src.satisfies(sigma) {
        return Err(Error::NotAModel("source"));
    }
    let forced: Vec<(usize, bool)> = sigma.values().iter().copied().enumerate().collect();
    let n = red.formula.num_vars();
    let first = sat_leq(&red.formula, n, &forced)
        .ok_or_else(|| Error::Precondition("source model has no extension".into()))?;
    let (mut lo, mut hi) = (sigma.weight(), first.weight());
    while lo < hi {
        let mid = (lo + hi) / 2;
        match sat_leq(&red.formula, mid, &forced) {
            Some(m) => hi = m.weight(),
            None => lo = mid + 1,
        }
    }
    Ok(sat_leq(&red.formula, lo, &forced).expect("bound reached above"))
}

/// Drops the fresh variables of a target model.
pub fn restrict_model(red: &ReductionOutput, tau: &Assignment) -> Result<Assignment> {
    if tau.len() != red.formula.num_vars() || !red.formula.satisfies(tau) {
        return Err(Error::NotAModel("target"));
    }
    if red.sentinel {
        return Err(Error::Precondition(
            "the fixed negative instance does not extend the source".into(),
        ));
    }
    Ok(Assignment::new(tau.values()[..red.source.num_vars()].to_vec()))
}

/// Every constraint of `formula` must use one of `allowed` (compared by
/// tuples, not names).
pub(crate) fn check_fragment(formula: &Formula, allowed: &[&Relation], what: &str) -> Result<()> {
    for r in formula.relations() {
        if !allowed.iter().any(|a| a.same_tuples(r)) {
            return Err(Error::Precondition(format!(
                "{what} expected, found relation `{}`",
                r.name()
            )));
        }
    }
    Ok(())
}

/// Builds a target formula by index. The source universe is copied first;
/// fresh names share a prefix no source variable starts with.
pub(crate) struct Emitter {
    relations: Vec<Relation>,
    universe: Vec<String>,
    constraints: Vec<Constraint>,
    prefix: String,
    source_len: usize,
}

impl Emitter {
    pub(crate) fn new(source: &Formula, base: &str) -> Self {
        let mut prefix = base.to_string();
        while source.universe().iter().any(|v| v.starts_with(&prefix)) {
            prefix.push('_');
        }
        Emitter {
            relations: Vec::new(),
            universe: source.universe().to_vec(),
            constraints: Vec::new(),
            prefix,
            source_len: source.num_vars(),
        }
    }

    pub(crate) fn relation(&mut self, r: &Relation) -> usize {
        match self.relations.iter().position(|q| q.name() == r.name()) {
            Some(i) => i,
            None => {
                self.relations.push(r.clone());
                self.relations.len() - 1
            }
        }
    }

    pub(crate) fn fresh(&mut self, role: &str) -> usize {
        let name = format!("{}{role}", self.prefix);
        self.universe.push(name);
        self.universe.len() - 1
    }

    pub(crate) fn fresh_at(&mut self, role: &str, i: usize) -> usize {
        let name = format!("{}{role}_{i}", self.prefix);
        self.universe.push(name);
        self.universe.len() - 1
    }

    pub(crate) fn fresh_at2(&mut self, role: &str, i: usize, j: usize) -> usize {
        let name = format!("{}{role}_{i}_{j}", self.prefix);
        self.universe.push(name);
        self.universe.len() - 1
    }

    pub(crate) fn add(&mut self, relation: usize, vars: Vec<usize>) {
        debug_assert_eq!(self.relations[relation].arity(), vars.len());
        self.constraints.push(Constraint { relation, vars });
    }

    pub(crate) fn name(&self, v: usize) -> &str {
        &self.universe[v]
    }

    pub(crate) fn finish(self) -> (Formula, usize) {
        let fresh = self.universe.len() - self.source_len;
        let f = Formula::from_parts_unchecked(self.relations, self.universe, self.constraints);
        (f, fresh)
    }
}

/// Everything a construction reports besides the formula itself.
pub(crate) struct Parts {
    pub step: Step,
    pub query: String,
    pub bound: Option<usize>,
    pub boost_n: Option<usize>,
    pub offset: Option<usize>,
    pub frozen_claim: Vec<(usize, bool)>,
    pub constants: Vec<(&'static str, usize)>,
}

pub(crate) fn assemble(source: &Formula, em: Emitter, parts: Parts) -> ReductionOutput {
    let frozen_claim = parts
        .frozen_claim
        .iter()
        .map(|&(v, b)| (em.name(v).to_string(), b))
        .collect();
    let constants = parts
        .constants
        .iter()
        .map(|&(role, v)| (role, em.name(v).to_string()))
        .collect();
    let (formula, fresh) = em.finish();
    ReductionOutput {
        step: parts.step,
        formula,
        query: parts.query,
        bound: parts.bound,
        stats: ReductionStats {
            fresh_var_count: fresh,
            boost_n: parts.boost_n,
            declared_weight_offset: parts.offset,
        },
        frozen_claim,
        constants,
        source: source.clone(),
        sentinel: false,
    }
}

pub(crate) fn sentinel_output(source: &Formula, step: Step, formula: Formula, query: String) -> ReductionOutput {
    let fresh = formula.num_vars();
    ReductionOutput {
        step,
        formula,
        query,
        bound: None,
        stats: ReductionStats {
            fresh_var_count: fresh,
            boost_n: None,
            declared_weight_offset: None,
        },
        frozen_claim: BTreeMap::new(),
        constants: BTreeMap::new(),
        source: source.clone(),
        sentinel: true,
    }
}
