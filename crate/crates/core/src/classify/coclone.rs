//! Labeled co-clones of Post's lattice, their membership tests and order.
//!
//! Classes below the affine/bijunctive/Horn frontier that are generated by
//! clauses (implications, bounded positive or negative clauses, units) are
//! tested by clause saturation. The remaining classes are characterized by
//! closure properties and tested through the fingerprint.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::ConstraintLanguage;
use crate::relation::{Relation, MAX_ARITY};

use super::{fingerprint, Bucket, PropertyFingerprint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoCloneTag {
    IBF,
    IR0,
    IR1,
    IR2,
    IM,
    IM0,
    IM1,
    IM2,
    IS0,
    IS02,
    IS01,
    IS00,
    IS1,
    IS12,
    IS11,
    IS10,
    ID,
    ID1,
    ID2,
    IL,
    IL0,
    IL1,
    IL2,
    IL3,
    IV,
    IV0,
    IV1,
    IV2,
    IE,
    IE0,
    IE1,
    IE2,
    IN,
    IN2,
    II,
    II0,
    II1,
    II2,
}

use CoCloneTag::*;

pub const ALL_TAGS: [CoCloneTag; 38] = [
    IBF, IR0, IR1, IR2, IM, IM0, IM1, IM2, IS0, IS02, IS01, IS00, IS1, IS12, IS11, IS10, ID, ID1,
    ID2, IL, IL0, IL1, IL2, IL3, IV, IV0, IV1, IV2, IE, IE0, IE1, IE2, IN, IN2, II, II0, II1, II2,
];

impl CoCloneTag {
    pub fn is_is_family(self) -> bool {
        matches!(self, IS0 | IS02 | IS01 | IS00 | IS1 | IS12 | IS11 | IS10)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            IBF => "IBF",
            IR0 => "IR0",
            IR1 => "IR1",
            IR2 => "IR2",
            IM => "IM",
            IM0 => "IM0",
            IM1 => "IM1",
            IM2 => "IM2",
            IS0 => "IS0",
            IS02 => "IS02",
            IS01 => "IS01",
            IS00 => "IS00",
            IS1 => "IS1",
            IS12 => "IS12",
            IS11 => "IS11",
            IS10 => "IS10",
            ID => "ID",
            ID1 => "ID1",
            ID2 => "ID2",
            IL => "IL",
            IL0 => "IL0",
            IL1 => "IL1",
            IL2 => "IL2",
            IL3 => "IL3",
            IV => "IV",
            IV0 => "IV0",
            IV1 => "IV1",
            IV2 => "IV2",
            IE => "IE",
            IE0 => "IE0",
            IE1 => "IE1",
            IE2 => "IE2",
            IN => "IN",
            IN2 => "IN2",
            II => "II",
            II0 => "II0",
            II1 => "II1",
            II2 => "II2",
        }
    }
}

impl FromStr for CoCloneTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_TAGS
            .iter()
            .copied()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidCoClone(s.to_string()))
    }
}

impl fmt::Display for CoCloneTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoCloneId {
    tag: CoCloneTag,
    width: Option<usize>,
}

impl CoCloneId {
    pub fn new(tag: CoCloneTag, width: Option<usize>) -> Result<Self> {
        match (tag.is_is_family(), width) {
            (true, Some(k)) if (2..=MAX_ARITY).contains(&k) => Ok(CoCloneId { tag, width }),
            (false, None) => Ok(CoCloneId { tag, width }),
            (true, Some(k)) => Err(Error::InvalidCoClone(format!("{tag} with width {k}"))),
            (true, None) => Err(Error::InvalidCoClone(format!("{tag} needs a width"))),
            (false, Some(_)) => Err(Error::InvalidCoClone(format!("{tag} takes no width"))),
        }
    }

    pub fn plain(tag: CoCloneTag) -> Self {
        CoCloneId::new(tag, None).expect("tag without width")
    }

    pub fn is(tag: CoCloneTag, k: usize) -> Self {
        CoCloneId::new(tag, Some(k)).expect("IS tag with width")
    }

    /// Parses `TAG` or `TAG^k`; `width` supplies k when the suffix is absent.
    pub fn parse(s: &str, width: Option<usize>) -> Result<Self> {
        let (name, suffix) = match s.split_once('^') {
            Some((n, k)) => (
                n,
                Some(k.parse::<usize>().map_err(|_| Error::InvalidCoClone(s.to_string()))?),
            ),
            None => (s, None),
        };
        let tag: CoCloneTag = name.parse()?;
        let width = suffix.or(if tag.is_is_family() { width } else { None });
        CoCloneId::new(tag, width)
    }

    pub fn tag(&self) -> CoCloneTag {
        self.tag
    }

    pub fn width(&self) -> Option<usize> {
        self.width
    }
}

impl fmt::Display for CoCloneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.width {
            Some(k) => write!(f, "{}^{}", self.tag, k),
            None => write!(f, "{}", self.tag),
        }
    }
}

/// Every labeled co-clone, IS families instantiated at widths `2..=max_width`.
pub fn labeled_coclones(max_width: usize) -> Vec<CoCloneId> {
    let mut out = Vec::new();
    for tag in ALL_TAGS {
        if tag.is_is_family() {
            for k in 2..=max_width {
                out.push(CoCloneId::is(tag, k));
            }
        } else {
            out.push(CoCloneId::plain(tag));
        }
    }
    out
}

/// Relations expressible as conjunctions of equalities plus the allowed
/// clause kinds. `pos`/`neg` bound the width of purely positive/negative
/// clauses (0 = none, 1 = unit only).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Clausal {
    pub imp: bool,
    pub pos: usize,
    pub neg: usize,
}

impl Clausal {
    pub fn positive_width(k: usize) -> Self {
        Clausal { imp: true, pos: k, neg: 1 }
    }

    pub fn negative_width(k: usize) -> Self {
        Clausal { imp: true, pos: 1, neg: k }
    }

    fn subset_of(self, o: Clausal) -> bool {
        (!self.imp || o.imp) && self.pos <= o.pos && self.neg <= o.neg
    }

    fn within(self, fl: Flags) -> bool {
        (!fl.z0 || self.pos == 0)
            && (!fl.o1 || self.neg == 0)
            && (!fl.comp || (!self.imp && self.pos == 0 && self.neg == 0))
            && (!fl.horn || self.pos <= 1)
            && (!fl.dhorn || self.neg <= 1)
            && (!fl.bij || (self.pos <= 2 && self.neg <= 2))
            && (!fl.aff || (!self.imp && self.pos <= 1 && self.neg <= 1))
    }
}

/// Required closure properties.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Flags {
    pub z0: bool,
    pub o1: bool,
    pub comp: bool,
    pub horn: bool,
    pub dhorn: bool,
    pub bij: bool,
    pub aff: bool,
}

impl Flags {
    fn closure(mut self) -> Flags {
        loop {
            let before = self;
            if self.comp && (self.z0 || self.o1) {
                self.z0 = true;
                self.o1 = true;
            }
            if self.aff && self.z0 && self.o1 {
                self.comp = true;
            }
            if self == before {
                return self;
            }
        }
    }

    fn implies(self, o: Flags) -> bool {
        let s = self.closure();
        (!o.z0 || s.z0)
            && (!o.o1 || s.o1)
            && (!o.comp || s.comp)
            && (!o.horn || s.horn)
            && (!o.dhorn || s.dhorn)
            && (!o.bij || s.bij)
            && (!o.aff || s.aff)
    }

    fn satisfied_by(self, fp: &PropertyFingerprint) -> bool {
        (!self.z0 || fp.zero_valid)
            && (!self.o1 || fp.one_valid)
            && (!self.comp || fp.complementive)
            && (!self.horn || fp.horn)
            && (!self.dhorn || fp.dual_horn)
            && (!self.bij || fp.bijunctive)
            && (!self.aff || fp.affine)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum ClassDef {
    Clausal(Clausal),
    Flags(Flags),
}

pub(crate) fn class_def(c: CoCloneId) -> ClassDef {
    let cl = |imp, pos, neg| ClassDef::Clausal(Clausal { imp, pos, neg });
    let k = c.width.unwrap_or(0);
    let fl = |z0, o1, comp, horn, dhorn, bij, aff| {
        ClassDef::Flags(Flags { z0, o1, comp, horn, dhorn, bij, aff })
    };
    match c.tag {
        IBF => cl(false, 0, 0),
        IR0 => cl(false, 0, 1),
        IR1 => cl(false, 1, 0),
        IR2 => cl(false, 1, 1),
        IM => cl(true, 0, 0),
        IM0 => cl(true, 0, 1),
        IM1 => cl(true, 1, 0),
        IM2 => cl(true, 1, 1),
        IS0 => cl(false, k, 0),
        IS02 => cl(false, k, 1),
        IS01 => cl(true, k, 0),
        IS00 => cl(true, k, 1),
        IS1 => cl(false, 0, k),
        IS12 => cl(false, 1, k),
        IS11 => cl(true, 0, k),
        IS10 => cl(true, 1, k),
        //         z0     o1     comp   horn   dhorn  bij    aff
        ID => fl(false, false, true, false, false, true, true),
        ID1 => fl(false, false, false, false, false, true, true),
        ID2 => fl(false, false, false, false, false, true, false),
        IL => fl(true, true, false, false, false, false, true),
        IL0 => fl(true, false, false, false, false, false, true),
        IL1 => fl(false, true, false, false, false, false, true),
        IL2 => fl(false, false, false, false, false, false, true),
        IL3 => fl(false, false, true, false, false, false, true),
        IV => fl(true, true, false, false, true, false, false),
        IV0 => fl(true, false, false, false, true, false, false),
        IV1 => fl(false, true, false, false, true, false, false),
        IV2 => fl(false, false, false, false, true, false, false),
        IE => fl(true, true, false, true, false, false, false),
        IE0 => fl(true, false, false, true, false, false, false),
        IE1 => fl(false, true, false, true, false, false, false),
        IE2 => fl(false, false, false, true, false, false, false),
        IN => fl(true, false, true, false, false, false, false),
        IN2 => fl(false, false, true, false, false, false, false),
        II => fl(true, true, false, false, false, false, false),
        II0 => fl(true, false, false, false, false, false, false),
        II1 => fl(false, true, false, false, false, false, false),
        II2 => fl(false, false, false, false, false, false, false),
    }
}

/// Lattice order `a ⊆ b` between labeled co-clones.
pub fn coclone_subset(a: CoCloneId, b: CoCloneId) -> bool {
    match (class_def(a), class_def(b)) {
        (ClassDef::Clausal(x), ClassDef::Clausal(y)) => x.subset_of(y),
        (ClassDef::Clausal(x), ClassDef::Flags(f)) => x.within(f),
        (ClassDef::Flags(_), ClassDef::Clausal(_)) => false,
        (ClassDef::Flags(f), ClassDef::Flags(g)) => f.implies(g),
    }
}

/// Clause-saturation test: every tuple outside `r` violates some allowed
/// clause (or equality) that all tuples of `r` satisfy.
pub(crate) fn clausal_member(r: &Relation, c: Clausal) -> bool {
    let k = r.arity();
    let full: u32 = ((1u64 << k) - 1) as u32;
    let tuples: Vec<u32> = r.slots().collect();
    let bit = |i: usize| 1u32 << (k - 1 - i);
    // imp_ok[i] = mask of j with x_i → x_j implied; eq similarly.
    let mut imp_ok = vec![full; k];
    for &t in &tuples {
        for (i, m) in imp_ok.iter_mut().enumerate() {
            if t & bit(i) != 0 {
                *m &= t;
            }
        }
    }
    let eq_ok: Vec<u32> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| imp_ok[i] & bit(j) != 0 && imp_ok[j] & bit(i) != 0)
                .fold(0, |m, j| m | bit(j))
        })
        .collect();
    let negated: Vec<u32> = tuples.iter().map(|&t| !t & full).collect();
    (0..=full).all(|u| {
        if r.contains(u) {
            return true;
        }
        let ones = u;
        let zeros = !u & full;
        let by_eq = (0..k).any(|i| {
            let m = eq_ok[i] & !bit(i);
            if u & bit(i) != 0 {
                m & zeros != 0
            } else {
                m & ones != 0
            }
        });
        if by_eq {
            return true;
        }
        if c.imp && (0..k).any(|i| u & bit(i) != 0 && imp_ok[i] & zeros != 0) {
            return true;
        }
        (c.pos > 0 && hitting_set(&tuples, zeros, c.pos, 0))
            || (c.neg > 0 && hitting_set(&negated, ones, c.neg, 0))
    })
}

/// Whether some `S ⊆ allowed` with `|S| ≤ budget` meets every set, given
/// already chosen elements `chosen`.
fn hitting_set(sets: &[u32], allowed: u32, budget: usize, chosen: u32) -> bool {
    match sets.iter().find(|&&s| s & chosen == 0) {
        None => true,
        Some(&s) => {
            if budget == 0 {
                return false;
            }
            let mut cand = s & allowed;
            while cand != 0 {
                let b = cand & cand.wrapping_neg();
                if hitting_set(sets, allowed, budget - 1, chosen | b) {
                    return true;
                }
                cand ^= b;
            }
            false
        }
    }
}

fn member_with(lang: &ConstraintLanguage, fp: &PropertyFingerprint, c: CoCloneId) -> bool {
    match class_def(c) {
        ClassDef::Clausal(cl) => lang.relations().iter().all(|r| clausal_member(r, cl)),
        ClassDef::Flags(f) => f.satisfied_by(fp),
    }
}

/// Whether every relation of `lang` lies in the co-clone `c`.
pub fn coclone_contains(c: CoCloneId, lang: &ConstraintLanguage) -> bool {
    member_with(lang, &fingerprint(lang), c)
}

/// The least labeled co-clone containing `lang`.
pub fn identify_coclone(lang: &ConstraintLanguage) -> Result<CoCloneId> {
    let fp = fingerprint(lang);
    let max_width = lang.max_arity().max(2);
    let containing: Vec<CoCloneId> = labeled_coclones(max_width)
        .into_iter()
        .filter(|&c| member_with(lang, &fp, c))
        .collect();
    containing
        .iter()
        .copied()
        .find(|&c| containing.iter().all(|&d| coclone_subset(c, d)))
        .ok_or(Error::NoCoClone)
}

/// Complexity bucket determined by the position of `c` in the lattice.
pub fn bucket_of_coclone(c: CoCloneId) -> Bucket {
    let below = |t| coclone_subset(c, CoCloneId::plain(t));
    if below(II0) {
        Bucket::Trivial0Valid
    } else if below(IE2) {
        Bucket::PolyHorn
    } else if below(ID1) {
        Bucket::PolyWidth2Affine
    } else {
        Bucket::Theta2Complete
    }
}
