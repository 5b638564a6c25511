//! Definability of a relation from a constraint language.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::formula::{ConstraintLanguage, Formula};
use crate::relation::{build_named_relation, coord, Family, Relation};

pub const MAX_DEFINABILITY_ARITY: usize = 10;
const CANDIDATE_GUARD: u128 = 10_000_000;
pub const MAX_PP_TUPLES: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Definability {
    Definable(Formula),
    NotDefinable,
}

impl Definability {
    pub fn witness(&self) -> Option<&Formula> {
        match self {
            Definability::Definable(f) => Some(f),
            Definability::NotDefinable => None,
        }
    }
}

/// Variable names used for the coordinates of a relation of arity `k`.
pub(crate) fn coordinate_names(k: usize) -> Vec<String> {
    if k <= 3 {
        ["x", "y", "z"][..k].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=k).map(|i| format!("x{i}")).collect()
    }
}

type Bits = Vec<u64>;

fn bits_of(k: usize, pred: impl Fn(u32) -> bool) -> Bits {
    let mut b = vec![0u64; (1usize << k).div_ceil(64)];
    for s in 0..1u32 << k {
        if pred(s) {
            b[(s / 64) as usize] |= 1 << (s % 64);
        }
    }
    b
}

/// Decides whether `r` is a conjunction of `lang` constraints (and equalities
/// when `allow_equality`) over its own coordinates, returning a witness.
///
/// All implied constraints are conjoined; `r` is definable iff that
/// conjunction is exact. Redundant conjuncts are then dropped, scanning from
/// the last generated one.
pub fn conjunction_definability(
    r: &Relation,
    lang: &ConstraintLanguage,
    allow_equality: bool,
) -> Result<Definability> {
    let k = r.arity();
    if k > MAX_DEFINABILITY_ARITY {
        return Err(Error::guard("relation arity", k as u128, MAX_DEFINABILITY_ARITY as u128));
    }
    let mut pool: Vec<Relation> = lang.relations().to_vec();
    if allow_equality && lang.get("EQ").is_none() {
        pool.push(build_named_relation(Family::Eq, None)?);
    }
    let total: u128 = pool
        .iter()
        .map(|s| (k as u128).saturating_pow(s.arity() as u32))
        .sum();
    if total > CANDIDATE_GUARD {
        return Err(Error::guard("candidate constraints", total, CANDIDATE_GUARD));
    }
    let target = bits_of(k, |s| r.contains(s));
    let all_ones = bits_of(k, |_| true);

    let mut kept: Vec<(usize, Vec<usize>, Bits)> = Vec::new();
    for (si, s) in pool.iter().enumerate() {
        let a = s.arity();
        let mut vars = vec![0usize; a];
        loop {
            let accepted = bits_of(k, |slot| {
                let t = vars
                    .iter()
                    .fold(0u32, |acc, &v| (acc << 1) | coord(slot, k, v) as u32);
                s.contains(t)
            });
            let implied = target.iter().zip(&accepted).all(|(t, a)| t & !a == 0);
            if implied && accepted != all_ones {
                kept.push((si, vars.clone(), accepted));
            }
            // next tuple in lexicographic order
            let mut d = a;
            loop {
                if d == 0 {
                    break;
                }
                d -= 1;
                vars[d] += 1;
                if vars[d] < k {
                    break;
                }
                vars[d] = 0;
            }
            if vars.iter().all(|&v| v == 0) {
                break;
            }
        }
    }

    let meet = |items: &[&(usize, Vec<usize>, Bits)]| -> Bits {
        let mut m = all_ones.clone();
        for (_, _, acc) in items {
            for (x, y) in m.iter_mut().zip(acc) {
                *x &= y;
            }
        }
        m
    };
    let mut active: Vec<bool> = vec![true; kept.len()];
    let refs: Vec<&(usize, Vec<usize>, Bits)> = kept.iter().collect();
    if meet(&refs) != target {
        return Ok(Definability::NotDefinable);
    }
    for i in (0..kept.len()).rev() {
        active[i] = false;
        let rest: Vec<_> = kept.iter().zip(&active).filter(|(_, &a)| a).map(|(c, _)| c).collect();
        if meet(&rest) != target {
            active[i] = true;
        }
    }

    let names = coordinate_names(k);
    let mut b = Formula::builder().declare_universe(&names)?;
    for ((si, vars, _), _) in kept.iter().zip(&active).filter(|(_, &a)| a) {
        let vs: Vec<&str> = vars.iter().map(|&v| names[v].as_str()).collect();
        b.constrain(&pool[*si], &vs)?;
    }
    Ok(Definability::Definable(b.build()))
}

/// Exact test for `r ∈ ⟨lang⟩` on relations with at most four tuples: every
/// `|r|`-ary polymorphism of `lang` must map the columns of `r` into `r`.
pub fn pp_membership(r: &Relation, lang: &ConstraintLanguage) -> Result<bool> {
    let m = r.len();
    if m > MAX_PP_TUPLES {
        return Err(Error::guard("relation size", m as u128, MAX_PP_TUPLES as u128));
    }
    let k = r.arity();
    let slots: Vec<u32> = r.slots().collect();
    if m == 0 {
        // only constants are 0-ary operations
        return Ok(!lang.relations().iter().any(|s| s.is_zero_valid())
            && !lang.relations().iter().any(|s| s.is_one_valid()));
    }
    // column i of r, read as an m-bit index (tuple 0 most significant)
    let columns: Vec<usize> = (0..k)
        .map(|i| slots.iter().fold(0usize, |acc, &s| (acc << 1) | coord(s, k, i) as usize))
        .collect();
    let points = 1usize << m;

    // Constraints on the unknown table f: for every S and every m tuples of
    // S, the coordinate-wise image lies in S.
    let mut constraints: HashSet<(usize, Vec<usize>)> = HashSet::new();
    for (si, s) in lang.relations().iter().enumerate() {
        let a = s.arity();
        let st: Vec<u32> = s.slots().collect();
        let combos = (st.len() as u128).saturating_pow(m as u32);
        if combos > CANDIDATE_GUARD {
            return Err(Error::guard("polymorphism constraints", combos, CANDIDATE_GUARD));
        }
        if st.is_empty() {
            continue;
        }
        let mut pick = vec![0usize; m];
        loop {
            let idx: Vec<usize> = (0..a)
                .map(|p| pick.iter().fold(0usize, |acc, &j| (acc << 1) | coord(st[j], a, p) as usize))
                .collect();
            constraints.insert((si, idx));
            let mut d = m;
            loop {
                if d == 0 {
                    break;
                }
                d -= 1;
                pick[d] += 1;
                if pick[d] < st.len() {
                    break;
                }
                pick[d] = 0;
            }
            if pick.iter().all(|&j| j == 0) {
                break;
            }
        }
    }
    let mut checks_at: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); points];
    for (si, idx) in constraints {
        let last = *idx.iter().max().expect("arity at least 1");
        checks_at[last].push((si, idx));
    }
    let mut table = vec![false; points];
    let rels = lang.relations();
    Ok(search(0, &mut table, &checks_at, rels, &columns, r))
}

/// Returns false as soon as a polymorphism maps the columns outside `r`.
fn search(
    depth: usize,
    table: &mut [bool],
    checks_at: &[Vec<(usize, Vec<usize>)>],
    rels: &[Relation],
    columns: &[usize],
    r: &Relation,
) -> bool {
    if depth == table.len() {
        let image = columns.iter().fold(0u32, |acc, &c| (acc << 1) | table[c] as u32);
        return r.contains(image);
    }
    for v in [false, true] {
        table[depth] = v;
        let ok = checks_at[depth].iter().all(|(si, idx)| {
            let t = idx.iter().fold(0u32, |acc, &i| (acc << 1) | table[i] as u32);
            rels[*si].contains(t)
        });
        if ok && !search(depth + 1, table, checks_at, rels, columns, r) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::coclone::{CoCloneId, CoCloneTag};
    use crate::classify::weak_base;
    use crate::relation::build_named_relation as rel;

    fn lang(r: Relation) -> ConstraintLanguage {
        ConstraintLanguage::single(r)
    }

    #[test]
    fn equality_from_implication() {
        let eq = rel(Family::Eq, None).unwrap();
        let d = conjunction_definability(&eq, &lang(rel(Family::Impl, None).unwrap()), false).unwrap();
        assert_eq!(d.witness().unwrap().to_string(), "IMPL(x,y) ∧ IMPL(y,x)");
    }

    #[test]
    fn or_not_from_implication() {
        let or2 = rel(Family::Or, Some(2)).unwrap();
        let d = conjunction_definability(&or2, &lang(rel(Family::Impl, None).unwrap()), false).unwrap();
        assert_eq!(d, Definability::NotDefinable);
    }

    #[test]
    fn neq_from_nae() {
        let neq = rel(Family::Neq, None).unwrap();
        let d = conjunction_definability(&neq, &lang(rel(Family::Nae3, None).unwrap()), false).unwrap();
        assert_eq!(d.witness().unwrap().to_string(), "NAE3(x,x,y)");
    }

    #[test]
    fn equality_flag() {
        let eq = rel(Family::Eq, None).unwrap();
        let or2 = lang(rel(Family::Or, Some(2)).unwrap());
        assert_eq!(conjunction_definability(&eq, &or2, false).unwrap(), Definability::NotDefinable);
        assert!(conjunction_definability(&eq, &or2, true).unwrap().witness().is_some());
    }

    #[test]
    fn pp_examples() {
        let or2 = rel(Family::Or, Some(2)).unwrap();
        let ii2 = weak_base(CoCloneId::plain(CoCloneTag::II2)).unwrap();
        assert!(pp_membership(&or2, &lang(ii2)).unwrap());
        assert!(pp_membership(&rel(Family::T, None).unwrap(), &lang(or2.clone())).unwrap());
        assert!(!pp_membership(&rel(Family::F, None).unwrap(), &lang(or2)).unwrap());
    }

    #[test]
    fn pp_guard() {
        let r = rel(Family::Nae3, None).unwrap();
        assert!(matches!(
            pp_membership(&r, &lang(r.clone())),
            Err(Error::Guard { .. })
        ));
    }
}
