//! Constraint languages, formulas, assignments and answers.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::relation::Relation;

/// A finite, non-empty set of relations with unique names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintLanguage {
    relations: Vec<Relation>,
}

impl ConstraintLanguage {
    pub fn new(relations: Vec<Relation>) -> Result<Self> {
        if relations.is_empty() {
            return Err(Error::EmptyLanguage);
        }
        for (i, r) in relations.iter().enumerate() {
            if relations[..i].iter().any(|s| s.name() == r.name()) {
                return Err(Error::DuplicateRelation(r.name().to_string()));
            }
        }
        Ok(ConstraintLanguage { relations })
    }

    pub fn single(relation: Relation) -> Self {
        ConstraintLanguage {
            relations: vec![relation],
        }
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn get(&self, name: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.name() == name)
    }

    /// True when a relation with this name and tuple set is present.
    pub fn contains(&self, relation: &Relation) -> bool {
        self.get(relation.name())
            .is_some_and(|r| r.same_tuples(relation))
    }

    pub fn max_arity(&self) -> usize {
        self.relations.iter().map(Relation::arity).max().unwrap_or(0)
    }

    pub fn union(&self, other: &ConstraintLanguage) -> Result<ConstraintLanguage> {
        let mut relations = self.relations.clone();
        for r in &other.relations {
            match self.get(r.name()) {
                Some(s) if s.same_tuples(r) => {}
                Some(_) => return Err(Error::ConflictingRelation(r.name().to_string())),
                None => relations.push(r.clone()),
            }
        }
        ConstraintLanguage::new(relations)
    }
}

/// A relation applied to a list of universe indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub relation: usize,
    pub vars: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    relations: Vec<Relation>,
    universe: Vec<String>,
    constraints: Vec<Constraint>,
}

impl Formula {
    pub fn builder() -> FormulaBuilder {
        FormulaBuilder::default()
    }

    /// Assembles a formula from parts the caller already knows to be
    /// consistent (distinct names, in-range indices, matching arities).
    pub(crate) fn from_parts_unchecked(
        relations: Vec<Relation>,
        universe: Vec<String>,
        constraints: Vec<Constraint>,
    ) -> Formula {
        let f = Formula {
            relations,
            universe,
            constraints,
        };
        debug_assert!(f.check_invariants().is_ok());
        f
    }

    pub(crate) fn check_invariants(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for v in &self.universe {
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }
        for c in &self.constraints {
            let rel = &self.relations[c.relation];
            if rel.arity() != c.vars.len() {
                return Err(Error::ArityMismatch {
                    relation: rel.name().to_string(),
                    expected: rel.arity(),
                    got: c.vars.len(),
                });
            }
            if c.vars.iter().any(|&v| v >= self.universe.len()) {
                return Err(Error::Precondition("constraint variable out of range".into()));
            }
        }
        Ok(())
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn num_vars(&self) -> usize {
        self.universe.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn relation_of(&self, c: &Constraint) -> &Relation {
        &self.relations[c.relation]
    }

    pub fn var_name(&self, v: usize) -> &str {
        &self.universe[v]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.universe.iter().position(|v| v == name)
    }

    pub fn require_var(&self, name: &str) -> Result<usize> {
        self.var_index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// The relations actually used by constraints, as a language.
    pub fn language(&self) -> Result<ConstraintLanguage> {
        let mut used: Vec<Relation> = Vec::new();
        for c in &self.constraints {
            let r = self.relation_of(c);
            if !used.iter().any(|u| u.name() == r.name()) {
                used.push(r.clone());
            }
        }
        ConstraintLanguage::new(used)
    }

    pub fn satisfies_constraint(&self, c: &Constraint, values: &[bool]) -> bool {
        let rel = self.relation_of(c);
        let slot = c.vars.iter().fold(0u32, |acc, &v| (acc << 1) | values[v] as u32);
        rel.contains(slot)
    }

    pub fn satisfies(&self, a: &Assignment) -> bool {
        a.len() == self.num_vars()
            && self
                .constraints
                .iter()
                .all(|c| self.satisfies_constraint(c, a.values()))
    }

    /// Rebuilds the formula with the given constraint order.
    pub fn with_constraints(&self, constraints: Vec<Constraint>) -> Formula {
        Formula {
            constraints,
            ..self.clone()
        }
    }

    /// Renames variables through `rename`, which must be injective.
    pub fn renamed_vars(&self, rename: impl Fn(&str) -> String) -> Result<Formula> {
        let f = Formula {
            universe: self.universe.iter().map(|v| rename(v)).collect(),
            ..self.clone()
        };
        f.check_invariants()?;
        Ok(f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .constraints
            .iter()
            .map(|c| {
                let vars: Vec<&str> = c.vars.iter().map(|&v| self.var_name(v)).collect();
                format!("{}({})", self.relation_of(c).name(), vars.join(","))
            })
            .collect();
        if parts.is_empty() {
            write!(f, "⊤")
        } else {
            write!(f, "{}", parts.join(" ∧ "))
        }
    }
}

/// Incremental, name-based construction of formulas.
#[derive(Default, Debug)]
pub struct FormulaBuilder {
    relations: Vec<Relation>,
    relation_index: HashMap<String, usize>,
    universe: Vec<String>,
    var_index: HashMap<String, usize>,
    constraints: Vec<Constraint>,
    closed_universe: bool,
}

impl FormulaBuilder {
    /// Declares the universe up front; afterwards constraints may only use
    /// declared variables.
    pub fn declare_universe<S: AsRef<str>>(mut self, vars: &[S]) -> Result<Self> {
        for v in vars {
            let v = v.as_ref();
            if self.var_index.contains_key(v) {
                return Err(Error::DuplicateVariable(v.to_string()));
            }
            self.var(v);
        }
        self.closed_universe = true;
        Ok(self)
    }

    pub fn var(&mut self, name: &str) -> usize {
        if let Some(&i) = self.var_index.get(name) {
            return i;
        }
        let i = self.universe.len();
        self.universe.push(name.to_string());
        self.var_index.insert(name.to_string(), i);
        i
    }

    fn lookup_var(&mut self, name: &str) -> Result<usize> {
        if self.closed_universe {
            self.var_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))
        } else {
            Ok(self.var(name))
        }
    }

    pub fn relation(&mut self, relation: &Relation) -> Result<usize> {
        if let Some(&i) = self.relation_index.get(relation.name()) {
            if !self.relations[i].same_tuples(relation) {
                return Err(Error::ConflictingRelation(relation.name().to_string()));
            }
            return Ok(i);
        }
        let i = self.relations.len();
        self.relations.push(relation.clone());
        self.relation_index.insert(relation.name().to_string(), i);
        Ok(i)
    }

    pub fn constrain<S: AsRef<str>>(&mut self, relation: &Relation, vars: &[S]) -> Result<&mut Self> {
        if vars.len() != relation.arity() {
            return Err(Error::ArityMismatch {
                relation: relation.name().to_string(),
                expected: relation.arity(),
                got: vars.len(),
            });
        }
        let rel = self.relation(relation)?;
        let vars = vars
            .iter()
            .map(|v| self.lookup_var(v.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.constraints.push(Constraint { relation: rel, vars });
        Ok(self)
    }

    /// Chaining form of [`FormulaBuilder::constrain`] for tests and small examples.
    pub fn with<S: AsRef<str>>(mut self, relation: &Relation, vars: &[S]) -> Result<Self> {
        self.constrain(relation, vars)?;
        Ok(self)
    }

    pub fn build(self) -> Formula {
        Formula {
            relations: self.relations,
            universe: self.universe,
            constraints: self.constraints,
        }
    }
}

/// A total assignment over a formula's universe, in universe order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment(values)
    }

    pub fn zeros(n: usize) -> Self {
        Assignment(vec![false; n])
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, v: usize) -> bool {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// Names of the variables set to 1.
    pub fn true_vars<'a>(&self, formula: &'a Formula) -> Vec<&'a str> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| formula.var_name(i))
            .collect()
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl From<Vec<bool>> for Assignment {
    fn from(v: Vec<bool>) -> Self {
        Assignment(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    InMinModel,
    Unsatisfiable,
    QueryFalseInAllMinModels,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::InMinModel => "in-min-model",
            Reason::Unsatisfiable => "unsatisfiable",
            Reason::QueryFalseInAllMinModels => "query-false-in-all-min-models",
        }
    }
}

/// Answer to "is the query true in some minimum-weight model?".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmsAnswer {
    pub verdict: bool,
    pub min_weight: Option<usize>,
    pub witness: Option<Assignment>,
    pub reason: Reason,
}

impl CmsAnswer {
    pub fn unsatisfiable() -> Self {
        CmsAnswer {
            verdict: false,
            min_weight: None,
            witness: None,
            reason: Reason::Unsatisfiable,
        }
    }

    pub fn no(min_weight: usize) -> Self {
        CmsAnswer {
            verdict: false,
            min_weight: Some(min_weight),
            witness: None,
            reason: Reason::QueryFalseInAllMinModels,
        }
    }

    pub fn yes(witness: Assignment) -> Self {
        CmsAnswer {
            verdict: true,
            min_weight: Some(witness.weight()),
            witness: Some(witness),
            reason: Reason::InMinModel,
        }
    }

    /// The pair every engine must agree on.
    pub fn key(&self) -> (bool, Option<usize>) {
        (self.verdict, self.min_weight)
    }
}

/// A query with an upper bound on the minimum weight.
#[derive(Clone, Debug)]
pub struct CmsStarInstance {
    pub formula: Formula,
    pub query: String,
    pub bound: usize,
}

impl CmsStarInstance {
    pub fn new(formula: Formula, query: impl Into<String>, bound: usize) -> Result<Self> {
        let query = query.into();
        formula.require_var(&query)?;
        Ok(CmsStarInstance {
            formula,
            query,
            bound,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{build_named_relation, Family};

    #[test]
    fn builder_tracks_first_occurrence_order() {
        let or2 = build_named_relation(Family::Or, Some(2)).unwrap();
        let f = Formula::builder()
            .with(&or2, &["y", "x"])
            .unwrap()
            .with(&or2, &["x", "z"])
            .unwrap()
            .build();
        assert_eq!(f.universe(), &["y", "x", "z"]);
        assert_eq!(f.relations().len(), 1);
        assert_eq!(f.to_string(), "OR2(y,x) ∧ OR2(x,z)");
    }

    #[test]
    fn declared_universe_rejects_strangers() {
        let t = build_named_relation(Family::T, None).unwrap();
        let b = Formula::builder().declare_universe(&["a", "b"]).unwrap();
        assert!(matches!(b.with(&t, &["c"]), Err(Error::UnknownVariable(_))));
        assert!(Formula::builder().declare_universe(&["a", "a"]).is_err());
    }

    #[test]
    fn arity_and_conflicts() {
        let t = build_named_relation(Family::T, None).unwrap();
        let mut b = Formula::builder();
        assert!(matches!(
            b.constrain(&t, &["x", "y"]),
            Err(Error::ArityMismatch { .. })
        ));
        let fake_t = build_named_relation(Family::F, None).unwrap().renamed("T");
        b.constrain(&t, &["x"]).unwrap();
        assert!(matches!(
            b.constrain(&fake_t, &["x"]),
            Err(Error::ConflictingRelation(_))
        ));
    }

    #[test]
    fn language_invariants() {
        assert!(matches!(ConstraintLanguage::new(vec![]), Err(Error::EmptyLanguage)));
        let t = build_named_relation(Family::T, None).unwrap();
        assert!(ConstraintLanguage::new(vec![t.clone(), t]).is_err());
    }

    #[test]
    fn satisfaction_with_repeated_variables() {
        let nae = build_named_relation(Family::Nae3, None).unwrap();
        let f = Formula::builder().with(&nae, &["x", "x", "y"]).unwrap().build();
        assert!(f.satisfies(&Assignment::new(vec![false, true])));
        assert!(!f.satisfies(&Assignment::new(vec![true, true])));
    }
}
