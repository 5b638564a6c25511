//! The chain OR² → NAE₃ → XOR₃ (bounded) → XOR₄ → {XOR₃, XOR₂} → XOR₃.

use crate::error::{Error, Result};
use crate::formula::{CmsStarInstance, Formula};
use crate::linear::{formula_equations, gauss_solve};
use crate::relation::{build_named_relation, Family, Relation};

use super::{assemble, check_fragment, sentinel_output, Emitter, Parts, ReductionOutput, Step};

fn named(family: Family, k: Option<usize>) -> Relation {
    build_named_relation(family, k).expect("fixed family parameters are in range")
}

fn nonempty(phi: &Formula, what: &str) -> Result<()> {
    if phi.constraints().is_empty() {
        return Err(Error::Precondition(format!("{what} needs at least one constraint")));
    }
    Ok(())
}

/// Each clause `x ∨ y` becomes `NAE₃(x, y, f)`; `f` is tied away from `t`
/// and from `N = n + 1` boost copies, so minimum models set it to 0.
pub fn reduce_or2_to_nae3(phi: &Formula, x: &str) -> Result<ReductionOutput> {
    let or2 = named(Family::Or, Some(2));
    nonempty(phi, "OR² reduction")?;
    check_fragment(phi, &[&or2], "OR²-formula")?;
    phi.require_var(x)?;

    let n = phi.num_vars();
    let big_n = n + 1;
    let mut em = Emitter::new(phi, "_n");
    let nae = em.relation(&named(Family::Nae3, None));
    let f = em.fresh("f");
    let t = em.fresh("t");
    for c in phi.constraints() {
        em.add(nae, vec![c.vars[0], c.vars[1], f]);
    }
    em.add(nae, vec![f, f, t]);
    for j in 1..=big_n {
        let fj = em.fresh_at("f", j);
        em.add(nae, vec![fj, fj, t]);
    }
    Ok(assemble(
        phi,
        em,
        Parts {
            step: Step::Or2ToNae3,
            query: x.to_string(),
            bound: None,
            boost_n: Some(big_n),
            offset: Some(1),
            frozen_claim: Vec::new(),
            constants: vec![("f", f), ("t", t)],
        },
    ))
}

/// Each `NAE₃(x, y, z)` gets three pair detectors `XOR₃(a, b, α)` (α = 1
/// iff a = b), each boosted to weight `N = n + 2`. A satisfied constraint
/// costs exactly `N`, a violated one `3N`, so the bound `(m + 1)N − 1`
/// separates models of the source from the rest.
pub fn reduce_nae3_to_xor3_star(phi: &Formula, x: &str) -> Result<ReductionOutput> {
    let nae3 = named(Family::Nae3, None);
    nonempty(phi, "NAE₃ reduction")?;
    check_fragment(phi, &[&nae3], "NAE₃-formula")?;
    phi.require_var(x)?;

    let n = phi.num_vars();
    let m = phi.constraints().len();
    let big_n = n + 2;
    let bound = (m + 1) * big_n - 1;
    let mut em = Emitter::new(phi, "_x");
    let xor3 = em.relation(&named(Family::Xor, Some(3)));
    let t = em.fresh("t");
    em.add(xor3, vec![t, t, t]);
    for (i, c) in phi.constraints().iter().enumerate() {
        let (a, b, d) = (c.vars[0], c.vars[1], c.vars[2]);
        for (role, p, q) in [("a", a, b), ("b", a, d), ("g", b, d)] {
            let g = em.fresh_at(role, i + 1);
            em.add(xor3, vec![p, q, g]);
            for j in 2..=big_n {
                let gj = em.fresh_at2(role, i + 1, j);
                em.add(xor3, vec![g, gj, t]);
            }
        }
    }
    Ok(assemble(
        phi,
        em,
        Parts {
            step: Step::Nae3ToXor3Star,
            query: x.to_string(),
            bound: Some(bound),
            boost_n: Some(big_n),
            offset: Some(m * big_n + 1),
            frozen_claim: vec![(t, true)],
            constants: vec![("t", t)],
        },
    ))
}

/// `k` copies of a fresh α appended to every XOR₃ constraint. The all-α
/// model has weight `k`, which caps the minimum.
pub fn reduce_xor3_star_to_xor4(inst: &CmsStarInstance) -> Result<ReductionOutput> {
    let phi = &inst.formula;
    let xor3 = named(Family::Xor, Some(3));
    nonempty(phi, "XOR₃ bounded reduction")?;
    check_fragment(phi, &[&xor3], "XOR₃-formula")?;
    if inst.bound == 0 {
        return Err(Error::Precondition("bound must be at least 1".into()));
    }
    phi.require_var(&inst.query)?;

    let k = inst.bound;
    let mut em = Emitter::new(phi, "_q");
    let xor4 = em.relation(&named(Family::Xor, Some(4)));
    let alphas: Vec<usize> = (1..=k).map(|j| em.fresh_at("a", j)).collect();
    for c in phi.constraints() {
        for &a in &alphas {
            em.add(xor4, vec![c.vars[0], c.vars[1], c.vars[2], a]);
        }
    }
    Ok(assemble(
        phi,
        em,
        Parts {
            step: Step::Xor3StarToXor4,
            query: inst.query.clone(),
            bound: None,
            boost_n: None,
            offset: Some(0),
            frozen_claim: Vec::new(),
            constants: Vec::new(),
        },
    ))
}

/// `XOR₄(a, b, c, d)` splits into `XOR₃(a, b, y) ∧ XOR₃(c, d, z) ∧ XOR₂(y, z)`.
pub fn reduce_xor4_to_xor3_xor2(phi: &Formula, x: &str) -> Result<ReductionOutput> {
    let xor4 = named(Family::Xor, Some(4));
    check_fragment(phi, &[&xor4], "XOR₄-formula")?;
    phi.require_var(x)?;

    let p = phi.constraints().len();
    let mut em = Emitter::new(phi, "_r");
    let xor3 = em.relation(&named(Family::Xor, Some(3)));
    let xor2 = em.relation(&named(Family::Xor, Some(2)));
    for (i, c) in phi.constraints().iter().enumerate() {
        let y = em.fresh_at("y", i + 1);
        let z = em.fresh_at("z", i + 1);
        em.add(xor3, vec![c.vars[0], c.vars[1], y]);
        em.add(xor3, vec![c.vars[2], c.vars[3], z]);
        em.add(xor2, vec![y, z]);
    }
    Ok(assemble(
        phi,
        em,
        Parts {
            step: Step::Xor4ToXor3Xor2,
            query: x.to_string(),
            bound: None,
            boost_n: None,
            offset: Some(p),
            frozen_claim: Vec::new(),
            constants: Vec::new(),
        },
    ))
}

/// `XOR₂(a, b)` becomes `XOR₃(a, b, w)` with one global `w` boosted by
/// `N = n + 1` copies. Unsatisfiable input maps to `(XOR₃(y, x, x), x)`,
/// whose only model is y = 1, x = 0.
pub fn reduce_xor3xor2_to_xor3(phi: &Formula, x: &str) -> Result<ReductionOutput> {
    let xor3_rel = named(Family::Xor, Some(3));
    let xor2_rel = named(Family::Xor, Some(2));
    check_fragment(phi, &[&xor3_rel, &xor2_rel], "{XOR₃, XOR₂}-formula")?;
    phi.require_var(x)?;

    let n = phi.num_vars();
    if gauss_solve(n, &formula_equations(phi)?).is_none() {
        let y = if x == "y" { "y0" } else { "y" };
        let target = Formula::builder().with(&xor3_rel, &[y, x, x])?.build();
        return Ok(sentinel_output(phi, Step::Xor3Xor2ToXor3, target, x.to_string()));
    }

    let big_n = n + 1;
    let mut em = Emitter::new(phi, "_w");
    let xor3 = em.relation(&xor3_rel);
    let t = em.fresh("t");
    let w = em.fresh("w");
    for c in phi.constraints() {
        if phi.relation_of(c).arity() == 3 {
            em.add(xor3, c.vars.clone());
        } else {
            em.add(xor3, vec![c.vars[0], c.vars[1], w]);
        }
    }
    em.add(xor3, vec![t, t, t]);
    for i in 1..=big_n {
        let wi = em.fresh_at("w", i);
        em.add(xor3, vec![t, w, wi]);
    }
    Ok(assemble(
        phi,
        em,
        Parts {
            step: Step::Xor3Xor2ToXor3,
            query: x.to_string(),
            bound: None,
            boost_n: Some(big_n),
            offset: Some(1),
            frozen_claim: vec![(t, true)],
            constants: vec![("t", t), ("w", w)],
        },
    ))
}
