//! Pipelines from OR² to the weak base of a hard co-clone.

use std::fmt;

use crate::classify::{bucket_of_coclone, Bucket, CoCloneId, CoCloneTag};
use crate::error::{Error, Result};
use crate::formula::{CmsStarInstance, Formula};

use super::{
    reduce_nae3_to_xor3_star, reduce_or2_to_nae3, reduce_to_weakbase, reduce_xor3_star_to_xor4,
    reduce_xor3xor2_to_xor3, reduce_xor4_to_xor3_xor2, ReductionOutput, Step,
};

/// An ordered list of reduction steps; the first consumes an OR²-instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pipeline {
    pub target: CoCloneId,
    pub steps: Vec<Step>,
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(Step::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

pub fn compose_chain(target: CoCloneId) -> Result<Pipeline> {
    use CoCloneTag::*;
    if bucket_of_coclone(target) != Bucket::Theta2Complete {
        return Err(Error::NoChain(format!("{target} (not Θ₂-hard)")));
    }
    let steps = match target.tag() {
        IL2 | IL3 | IL1 => vec![
            Step::Or2ToNae3,
            Step::Nae3ToXor3Star,
            Step::Xor3StarToXor4,
            Step::Xor4ToXor3Xor2,
            Step::Xor3Xor2ToXor3,
            Step::WeakBase(target),
        ],
        II2 | II1 | IN2 | IV2 | IV1 | IS00 | IS01 | IS02 | IS0 => vec![Step::WeakBase(target)],
        _ => return Err(Error::NoChain(target.to_string())),
    };
    Ok(Pipeline { target, steps })
}

/// Applies one step; `bound` is needed only by the bounded-to-XOR₄ step.
pub fn apply_step(step: Step, formula: &Formula, query: &str, bound: Option<usize>) -> Result<ReductionOutput> {
    match step {
        Step::Or2ToNae3 => reduce_or2_to_nae3(formula, query),
        Step::Nae3ToXor3Star => reduce_nae3_to_xor3_star(formula, query),
        Step::Xor3StarToXor4 => {
            let bound = bound.ok_or_else(|| Error::Precondition("step needs a bounded instance".into()))?;
            reduce_xor3_star_to_xor4(&CmsStarInstance::new(formula.clone(), query, bound)?)
        }
        Step::Xor4ToXor3Xor2 => reduce_xor4_to_xor3_xor2(formula, query),
        Step::Xor3Xor2ToXor3 => reduce_xor3xor2_to_xor3(formula, query),
        Step::WeakBase(c) => reduce_to_weakbase(c, formula, query),
    }
}

impl Pipeline {
    /// Runs every step, returning each intermediate output in order.
    pub fn run(&self, formula: &Formula, query: &str) -> Result<Vec<ReductionOutput>> {
        let mut outs: Vec<ReductionOutput> = Vec::with_capacity(self.steps.len());
        for &step in &self.steps {
            let out = match outs.last() {
                None => apply_step(step, formula, query, None)?,
                Some(prev) => apply_step(step, &prev.formula, &prev.query, prev.bound)?,
            };
            outs.push(out);
        }
        Ok(outs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::cms_bruteforce;
    use crate::relation::{build_named_relation, Family};
    use CoCloneTag::*;

    #[test]
    fn chain_shapes() {
        let p = compose_chain(CoCloneId::plain(IL2)).unwrap();
        assert_eq!(
            p.to_string(),
            "[or2->nae3, nae3->xor3*, xor3*->xor4, xor4->xor3+xor2, xor3+xor2->xor3, xor3->B_IL2]"
        );
        let p = compose_chain(CoCloneId::plain(II2)).unwrap();
        assert_eq!(p.to_string(), "[or2->B_II2]");
        assert!(matches!(compose_chain(CoCloneId::plain(ID2)), Err(Error::NoChain(_))));
        assert!(matches!(compose_chain(CoCloneId::plain(IE2)), Err(Error::NoChain(_))));
        assert!(compose_chain(CoCloneId::is(IS01, 3)).is_ok());
    }

    #[test]
    fn direct_pipeline_runs() {
        let or2 = build_named_relation(Family::Or, Some(2)).unwrap();
        let phi = Formula::builder()
            .with(&or2, &["x", "y"])
            .unwrap()
            .with(&or2, &["y", "z"])
            .unwrap()
            .build();
        for q in ["x", "y"] {
            let outs = compose_chain(CoCloneId::plain(IV2)).unwrap().run(&phi, q).unwrap();
            let last = outs.last().unwrap();
            assert_eq!(
                cms_bruteforce(&phi, q).unwrap().verdict,
                cms_bruteforce(&last.formula, q).unwrap().verdict
            );
        }
    }
}
