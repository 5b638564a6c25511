//! CardMinSat: deciding whether a variable belongs to some minimum-cardinality
//! model of a Boolean constraint formula, classified by constraint language.

pub mod abduction;
pub mod brute;
pub mod classify;
pub mod error;
pub mod format;
pub mod formula;
pub mod linear;
pub mod reductions;
pub mod relation;
pub mod report;
pub mod solvers;

pub use brute::{cms_bruteforce, cms_star_bruteforce, enumerate_models, frozen_vars, EnumLimits};
pub use error::{Error, Result};
pub use formula::{
    Assignment, CmsAnswer, CmsStarInstance, Constraint, ConstraintLanguage, Formula,
    FormulaBuilder, Reason,
};
pub use relation::{build_named_relation, relation_by_name, Family, Relation};
