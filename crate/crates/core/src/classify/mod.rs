//! Polymorphism tests, property fingerprints and the complexity verdict.

mod coclone;
mod definability;
mod weakbase;

pub use coclone::{
    bucket_of_coclone, coclone_contains, coclone_subset, identify_coclone, labeled_coclones,
    CoCloneId, CoCloneTag,
};
pub use definability::{conjunction_definability, pp_membership, Definability};
pub use weakbase::weak_base;

use std::fmt;

use crate::error::{Error, Result};
use crate::formula::ConstraintLanguage;
use crate::relation::{coord, Relation};

/// A Boolean operation given by its truth table. Row `i` of the table is the
/// value on the argument tuple whose bits, first argument most significant,
/// spell `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanOp {
    arity: usize,
    table: Vec<bool>,
}

impl BooleanOp {
    pub fn new(arity: usize, table: Vec<bool>) -> Result<Self> {
        if arity > 16 || table.len() != 1 << arity {
            return Err(Error::Precondition(format!(
                "truth table of length {} does not fit arity {arity}",
                table.len()
            )));
        }
        Ok(BooleanOp { arity, table })
    }

    pub fn from_fn(arity: usize, f: impl Fn(&[bool]) -> bool) -> Self {
        let table = (0..1u32 << arity)
            .map(|i| {
                let args: Vec<bool> = (0..arity).map(|p| coord(i, arity, p)).collect();
                f(&args)
            })
            .collect();
        BooleanOp { arity, table }
    }

    pub fn and2() -> Self {
        Self::from_fn(2, |a| a[0] && a[1])
    }

    pub fn or2() -> Self {
        Self::from_fn(2, |a| a[0] || a[1])
    }

    pub fn majority3() -> Self {
        Self::from_fn(3, |a| (a[0] as u8 + a[1] as u8 + a[2] as u8) >= 2)
    }

    pub fn minority3() -> Self {
        Self::from_fn(3, |a| a[0] ^ a[1] ^ a[2])
    }

    pub fn not() -> Self {
        Self::from_fn(1, |a| !a[0])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn apply(&self, args: &[bool]) -> bool {
        self.table[args.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)]
    }
}

/// Largest number of argument combinations `closed_under` will visit.
pub const CLOSURE_GUARD: u128 = 10_000_000;

/// Whether applying `op` coordinate-wise to any choice of tuples of `r`
/// yields a tuple of `r`.
pub fn closed_under(r: &Relation, op: &BooleanOp) -> Result<bool> {
    let n = r.len() as u128;
    let combos = n.checked_pow(op.arity as u32).unwrap_or(u128::MAX);
    if combos > CLOSURE_GUARD {
        return Err(Error::guard("closure combinations", combos, CLOSURE_GUARD));
    }
    Ok(closed_under_unchecked(r, op))
}

fn closed_under_unchecked(r: &Relation, op: &BooleanOp) -> bool {
    let slots: Vec<u32> = r.slots().collect();
    let m = op.arity;
    if m == 0 {
        let c = op.table[0];
        let all = if c { (1u32 << r.arity()) - 1 } else { 0 };
        return r.contains(all);
    }
    let k = r.arity();
    let mut idx = vec![0usize; m];
    let mut args = vec![false; m];
    if slots.is_empty() {
        return true;
    }
    loop {
        let mut out = 0u32;
        for pos in 0..k {
            for (a, &i) in args.iter_mut().zip(&idx) {
                *a = coord(slots[i], k, pos);
            }
            out = (out << 1) | op.apply(&args) as u32;
        }
        if !r.contains(out) {
            return false;
        }
        let mut d = m;
        loop {
            if d == 0 {
                return true;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < slots.len() {
                break;
            }
            idx[d] = 0;
        }
    }
}

fn full_mask(r: &Relation) -> u32 {
    ((1u64 << r.arity()) - 1) as u32
}

fn closed_under_binary(r: &Relation, f: impl Fn(u32, u32) -> u32) -> bool {
    let slots: Vec<u32> = r.slots().collect();
    slots
        .iter()
        .enumerate()
        .all(|(i, &a)| slots[i + 1..].iter().all(|&b| r.contains(f(a, b))))
}

pub fn is_horn(r: &Relation) -> bool {
    closed_under_binary(r, |a, b| a & b)
}

pub fn is_dual_horn(r: &Relation) -> bool {
    closed_under_binary(r, |a, b| a | b)
}

pub fn is_complementive(r: &Relation) -> bool {
    let full = full_mask(r);
    r.slots().all(|s| r.contains(s ^ full))
}

/// Closure under majority, tested as: `r` equals the conjunction of its
/// binary projections.
pub fn is_bijunctive(r: &Relation) -> bool {
    let k = r.arity();
    // allowed[i][j] bit (a<<1|b): pattern (t_i, t_j) = (a, b) occurs
    let mut allowed = vec![vec![0u8; k]; k];
    for s in r.slots() {
        for i in 0..k {
            for j in 0..k {
                let p = ((coord(s, k, i) as u8) << 1) | coord(s, k, j) as u8;
                allowed[i][j] |= 1 << p;
            }
        }
    }
    if r.is_empty() {
        return true;
    }
    (0..1u32 << k).all(|u| {
        r.contains(u)
            || (0..k).any(|i| {
                (0..k).any(|j| {
                    let p = ((coord(u, k, i) as u8) << 1) | coord(u, k, j) as u8;
                    allowed[i][j] & (1 << p) == 0
                })
            })
    })
}

pub fn is_affine(r: &Relation) -> bool {
    crate::linear::affine_equations(r).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PropertyFingerprint {
    pub zero_valid: bool,
    pub one_valid: bool,
    pub complementive: bool,
    pub horn: bool,
    pub dual_horn: bool,
    pub bijunctive: bool,
    pub affine: bool,
    pub width2_affine: bool,
    /// Entry `k-1`: every relation is a conjunction of implications,
    /// negative units and positive clauses of width at most `k`.
    pub width_positive: Vec<bool>,
    /// Entry `k-1`: the dual, with negative clauses of width at most `k`.
    pub width_negative: Vec<bool>,
}

impl PropertyFingerprint {
    pub fn is_width_positive(&self, k: usize) -> bool {
        k >= 1 && self.width_positive.get(k - 1).copied().unwrap_or(self.width_positive.last().copied().unwrap_or(true))
    }

    pub fn is_width_negative(&self, k: usize) -> bool {
        k >= 1 && self.width_negative.get(k - 1).copied().unwrap_or(self.width_negative.last().copied().unwrap_or(true))
    }

    /// Component-wise conjunction.
    pub fn meet(&self, other: &PropertyFingerprint) -> PropertyFingerprint {
        let zip = |a: &[bool], b: &[bool], la: bool, lb: bool| -> Vec<bool> {
            let n = a.len().max(b.len());
            (0..n)
                .map(|i| a.get(i).copied().unwrap_or(la) && b.get(i).copied().unwrap_or(lb))
                .collect()
        };
        PropertyFingerprint {
            zero_valid: self.zero_valid && other.zero_valid,
            one_valid: self.one_valid && other.one_valid,
            complementive: self.complementive && other.complementive,
            horn: self.horn && other.horn,
            dual_horn: self.dual_horn && other.dual_horn,
            bijunctive: self.bijunctive && other.bijunctive,
            affine: self.affine && other.affine,
            width2_affine: self.width2_affine && other.width2_affine,
            width_positive: zip(
                &self.width_positive,
                &other.width_positive,
                self.width_positive.last().copied().unwrap_or(true),
                other.width_positive.last().copied().unwrap_or(true),
            ),
            width_negative: zip(
                &self.width_negative,
                &other.width_negative,
                self.width_negative.last().copied().unwrap_or(true),
                other.width_negative.last().copied().unwrap_or(true),
            ),
        }
    }
}

pub fn relation_fingerprint(r: &Relation) -> PropertyFingerprint {
    let affine = is_affine(r);
    let bijunctive = is_bijunctive(r);
    let k = r.arity();
    PropertyFingerprint {
        zero_valid: r.is_zero_valid(),
        one_valid: r.is_one_valid(),
        complementive: is_complementive(r),
        horn: is_horn(r),
        dual_horn: is_dual_horn(r),
        bijunctive,
        affine,
        width2_affine: affine && bijunctive,
        width_positive: (1..=k)
            .map(|w| coclone::clausal_member(r, coclone::Clausal::positive_width(w)))
            .collect(),
        width_negative: (1..=k)
            .map(|w| coclone::clausal_member(r, coclone::Clausal::negative_width(w)))
            .collect(),
    }
}

pub fn fingerprint(lang: &ConstraintLanguage) -> PropertyFingerprint {
    let mut it = lang.relations().iter().map(relation_fingerprint);
    let first = it.next().expect("constraint languages are non-empty");
    it.fold(first, |acc, f| acc.meet(&f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bucket {
    Trivial0Valid,
    PolyHorn,
    PolyWidth2Affine,
    Theta2Complete,
}

impl Bucket {
    pub fn as_str(self) -> &'static str {
        match self {
            Bucket::Trivial0Valid => "Trivial0Valid",
            Bucket::PolyHorn => "PolyHorn",
            Bucket::PolyWidth2Affine => "PolyWidth2Affine",
            Bucket::Theta2Complete => "Theta2Complete",
        }
    }

    pub fn from_fingerprint(fp: &PropertyFingerprint) -> Bucket {
        if fp.zero_valid {
            Bucket::Trivial0Valid
        } else if fp.horn {
            Bucket::PolyHorn
        } else if fp.width2_affine {
            Bucket::PolyWidth2Affine
        } else {
            Bucket::Theta2Complete
        }
    }
}

impl fmt::Display for Bucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationVerdict {
    pub bucket: Bucket,
    pub fingerprint: PropertyFingerprint,
    pub coclone: Option<CoCloneId>,
}

pub fn classify_cms(lang: &ConstraintLanguage) -> ClassificationVerdict {
    let fp = fingerprint(lang);
    ClassificationVerdict {
        bucket: Bucket::from_fingerprint(&fp),
        coclone: identify_coclone(lang).ok(),
        fingerprint: fp,
    }
}

/// Bucket only, without co-clone identification.
pub fn classify_bucket(lang: &ConstraintLanguage) -> Bucket {
    Bucket::from_fingerprint(&fingerprint(lang))
}

/// No two columns of the matrix are equal.
pub fn is_irredundant(r: &Relation) -> bool {
    let cols: Vec<Vec<bool>> = (0..r.arity()).map(|i| r.column(i)).collect();
    (0..cols.len()).all(|i| (i + 1..cols.len()).all(|j| cols[i] != cols[j]))
}

/// Coordinates whose value never affects membership.
pub fn fictitious_coordinates(r: &Relation) -> Vec<usize> {
    let k = r.arity();
    (0..k)
        .filter(|&i| {
            let bit = 1u32 << (k - 1 - i);
            (0..1u32 << k).all(|s| r.contains(s) == r.contains(s ^ bit))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::{build_named_relation as rel, Family};

    fn lang(rs: &[Relation]) -> ConstraintLanguage {
        ConstraintLanguage::new(rs.to_vec()).unwrap()
    }

    #[test]
    fn closure_examples() {
        let or2 = rel(Family::Or, Some(2)).unwrap();
        assert!(!closed_under(&or2, &BooleanOp::and2()).unwrap());
        assert!(closed_under(&or2, &BooleanOp::or2()).unwrap());
        let xor3 = rel(Family::Xor, Some(3)).unwrap();
        assert!(closed_under(&xor3, &BooleanOp::minority3()).unwrap());
    }

    #[test]
    fn closure_guard() {
        let wide = Relation::from_predicate("W", 12, |_| true).unwrap();
        assert!(matches!(
            closed_under(&wide, &BooleanOp::majority3()),
            Err(Error::Guard { .. })
        ));
    }

    #[test]
    fn fingerprint_examples() {
        let fp = fingerprint(&lang(&[rel(Family::Impl, None).unwrap()]));
        assert!(fp.zero_valid && fp.one_valid && fp.horn && fp.dual_horn && fp.bijunctive);
        assert!(!fp.affine);
        let fp = fingerprint(&lang(&[rel(Family::Neq, None).unwrap()]));
        assert!(fp.width2_affine && !fp.zero_valid && fp.complementive);
        let fp = fingerprint(&lang(&[rel(Family::Or, Some(2)).unwrap()]));
        assert!(!fp.horn && fp.one_valid);
        assert!(fp.is_width_positive(2) && !fp.is_width_positive(1));
        assert!(!fp.is_width_negative(2));
    }

    #[test]
    fn bucket_examples() {
        let b = |r: Relation| classify_cms(&lang(&[r])).bucket;
        assert_eq!(b(rel(Family::Or, Some(2)).unwrap()), Bucket::Theta2Complete);
        assert_eq!(b(rel(Family::Impl, None).unwrap()), Bucket::Trivial0Valid);
        assert_eq!(b(rel(Family::Neq, None).unwrap()), Bucket::PolyWidth2Affine);
        assert_eq!(b(rel(Family::T, None).unwrap()), Bucket::PolyHorn);
    }

    #[test]
    fn irredundancy_and_fictitious() {
        let full = Relation::from_matrix("FULL", &["00", "01", "10", "11"]).unwrap();
        assert_eq!(fictitious_coordinates(&full), vec![0, 1]);
        let eq = rel(Family::Eq, None).unwrap();
        assert!(!is_irredundant(&eq));
        assert!(fictitious_coordinates(&eq).is_empty());
        assert!(is_irredundant(&rel(Family::R13Neq, None).unwrap()));
    }

    #[test]
    fn specialized_checks_match_generic_closure() {
        for r in [
            rel(Family::Or, Some(3)).unwrap(),
            rel(Family::Nae3, None).unwrap(),
            rel(Family::Even, Some(3)).unwrap(),
            rel(Family::R13Neq, None).unwrap(),
            rel(Family::Impl, None).unwrap(),
        ] {
            assert_eq!(is_horn(&r), closed_under(&r, &BooleanOp::and2()).unwrap());
            assert_eq!(is_dual_horn(&r), closed_under(&r, &BooleanOp::or2()).unwrap());
            assert_eq!(is_bijunctive(&r), closed_under(&r, &BooleanOp::majority3()).unwrap());
            assert_eq!(is_affine(&r), closed_under(&r, &BooleanOp::minority3()).unwrap());
            assert_eq!(is_complementive(&r), closed_under(&r, &BooleanOp::not()).unwrap());
        }
    }
}
