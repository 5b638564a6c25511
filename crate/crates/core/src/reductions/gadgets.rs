//! OR² or XOR₃ expressed through the weak base of each hard co-clone, with
//! the auxiliary variables neutralized or boosted so that minimum models
//! correspond.

use crate::classify::{weak_base, CoCloneId, CoCloneTag};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::relation::{build_named_relation, Family};

use super::{assemble, check_fragment, Emitter, Parts, ReductionOutput, Step};

/// Whether the gadget for `c` expects an XOR₃-formula rather than OR².
pub(crate) fn takes_xor3(c: CoCloneId) -> bool {
    matches!(c.tag(), CoCloneTag::IL2 | CoCloneTag::IL3 | CoCloneTag::IL1)
}

pub fn reduce_to_weakbase(c: CoCloneId, phi: &Formula, x: &str) -> Result<ReductionOutput> {
    use CoCloneTag::*;
    let supported = matches!(
        c.tag(),
        II2 | II1 | IN2 | IL2 | IL3 | IL1 | IV2 | IV1 | IS00 | IS01 | IS02 | IS0
    );
    if !supported {
        return Err(Error::NoChain(c.to_string()));
    }
    let head = if takes_xor3(c) {
        build_named_relation(Family::Xor, Some(3))?
    } else {
        build_named_relation(Family::Or, Some(2))?
    };
    if phi.constraints().is_empty() {
        return Err(Error::Precondition("gadget needs at least one constraint".into()));
    }
    check_fragment(phi, &[&head], &format!("{}-formula", head.name()))?;
    phi.require_var(x)?;

    let base = weak_base(c)?;
    let n = phi.num_vars();
    let p = phi.constraints().len();
    let boost = n + p + 1;
    let mut em = Emitter::new(phi, "_b");
    let r = em.relation(&base);
    let uses_f = !matches!(c.tag(), IL1 | IS0);
    let f = if uses_f { em.fresh("f") } else { usize::MAX };
    let t = em.fresh("t");
    let clauses: Vec<Vec<usize>> = phi.constraints().iter().map(|c| c.vars.clone()).collect();

    let mut parts = Parts {
        step: Step::WeakBase(c),
        query: x.to_string(),
        bound: None,
        boost_n: None,
        offset: Some(1),
        frozen_claim: vec![(t, true)],
        constants: vec![("t", t)],
    };
    if uses_f {
        parts.frozen_claim.insert(0, (f, false));
        parts.constants.insert(0, ("f", f));
    }

    match c.tag() {
        II2 => {
            for (i, v) in clauses.iter().enumerate() {
                let aux: Vec<usize> = ["a", "b", "c", "d"].iter().map(|s| em.fresh_at(s, i + 1)).collect();
                em.add(r, vec![aux[0], aux[1], aux[2], aux[3], v[0], v[1], f, t]);
                for (k, s) in ["ap", "bp", "cp", "dp"].iter().enumerate() {
                    let y = aux[k];
                    let yp = em.fresh_at(s, i + 1);
                    em.add(r, vec![y, yp, f, yp, y, t, f, t]);
                }
            }
            parts.offset = Some(4 * p + 1);
        }
        II1 => {
            for (i, v) in clauses.iter().enumerate() {
                let y = em.fresh_at("y", i + 1);
                let z = em.fresh_at("z", i + 1);
                em.add(r, vec![v[0], v[1], y, t]);
                em.add(r, vec![y, z, f, t]);
            }
            for j in 1..=boost {
                let f1 = em.fresh_at("fa", j);
                let f2 = em.fresh_at("fb", j);
                em.add(r, vec![f1, f2, f, t]);
            }
            parts.boost_n = Some(boost);
            parts.offset = Some(p + boost + 1);
            parts.frozen_claim = vec![(t, true)];
        }
        IN2 => {
            for (i, v) in clauses.iter().enumerate() {
                let aux: Vec<usize> = ["a", "b", "c", "d"].iter().map(|s| em.fresh_at(s, i + 1)).collect();
                em.add(r, vec![f, aux[0], aux[1], aux[2], aux[3], v[0], v[1], t]);
                for (k, s) in ["ap", "bp", "cp", "dp"].iter().enumerate() {
                    let y = aux[k];
                    let yp = em.fresh_at(s, i + 1);
                    em.add(r, vec![y, y, y, y, yp, yp, yp, yp]);
                }
            }
            em.add(r, vec![f, f, f, f, t, t, t, t]);
            for j in 1..=boost {
                let fj = em.fresh_at("f", j);
                em.add(r, vec![fj, fj, fj, fj, t, t, t, t]);
            }
            parts.boost_n = Some(boost);
            parts.offset = Some(4 * p + 1);
            parts.frozen_claim = Vec::new();
        }
        IL2 => {
            for (i, v) in clauses.iter().enumerate() {
                let aux: Vec<usize> = ["u", "v", "w"].iter().map(|s| em.fresh_at(s, i + 1)).collect();
                em.add(r, vec![aux[0], aux[1], aux[2], v[0], v[1], v[2], f, t]);
                let primes: Vec<usize> = ["up", "vp", "wp"].iter().map(|s| em.fresh_at(s, i + 1)).collect();
                em.add(r, vec![aux[0], aux[1], aux[2], primes[0], primes[1], primes[2], f, t]);
            }
            parts.offset = Some(3 * p + 1);
        }
        IL3 => {
            for (i, v) in clauses.iter().enumerate() {
                let aux: Vec<usize> = ["u", "v", "w"].iter().map(|s| em.fresh_at(s, i + 1)).collect();
                em.add(r, vec![aux[0], aux[1], aux[2], f, v[0], v[1], v[2], t]);
                let primes: Vec<usize> = ["up", "vp", "wp"].iter().map(|s| em.fresh_at(s, i + 1)).collect();
                em.add(r, vec![aux[0], aux[1], aux[2], f, primes[0], primes[1], primes[2], t]);
            }
            em.add(r, vec![f, f, f, f, t, t, t, t]);
            for j in 1..=boost {
                let fj = em.fresh_at("f", j);
                em.add(r, vec![fj, fj, fj, fj, t, t, t, t]);
            }
            parts.boost_n = Some(boost);
            parts.offset = Some(3 * p + 1);
            parts.frozen_claim = Vec::new();
        }
        IL1 => {
            for v in &clauses {
                em.add(r, vec![v[0], v[1], v[2], t]);
            }
        }
        IV2 | IV1 => {
            for v in &clauses {
                em.add(r, vec![t, v[0], v[1], f, t]);
            }
            if c.tag() == IV1 {
                parts.frozen_claim = vec![(t, true)];
            }
        }
        IS00 | IS01 | IS02 | IS0 => {
            let k = c.width().expect("IS co-clones carry a width");
            for v in &clauses {
                let mut vars = vec![v[0]];
                vars.extend(std::iter::repeat_n(v[1], k - 1));
                match c.tag() {
                    IS00 => vars.extend([f, f, t]),
                    IS01 | IS02 => vars.extend([f, t]),
                    _ => vars.push(t),
                }
                em.add(r, vars);
            }
            if c.tag() == IS01 {
                parts.frozen_claim = vec![(t, true)];
            }
        }
        _ => unreachable!("checked above"),
    }

    Ok(assemble(phi, em, parts))
}
