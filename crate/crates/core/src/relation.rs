//! Boolean relations stored as bitsets over tuple slots.
//!
//! A tuple `(t1, .., tk)` lives in slot `t1·2^(k-1) + .. + tk`, so the first
//! coordinate is the most significant bit and a matrix written row by row
//! transcribes directly.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_ARITY: usize = 16;

/// Largest parameter accepted by the parameterized families.
pub const MAX_FAMILY_PARAM: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    name: String,
    arity: usize,
    bits: Vec<u64>,
}

/// Value of coordinate `pos` (0-based, leftmost first) in slot `slot`.
#[inline]
pub fn coord(slot: u32, arity: usize, pos: usize) -> bool {
    (slot >> (arity - 1 - pos)) & 1 == 1
}

/// Slot index of a tuple.
pub fn slot_of(tuple: &[bool]) -> u32 {
    tuple.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32)
}

impl Relation {
    pub fn empty(name: impl Into<String>, arity: usize) -> Result<Self> {
        if arity == 0 || arity > MAX_ARITY {
            return Err(Error::ArityOutOfRange(arity));
        }
        let words = (1usize << arity).div_ceil(64);
        Ok(Relation {
            name: name.into(),
            arity,
            bits: vec![0; words],
        })
    }

    pub fn from_slots(
        name: impl Into<String>,
        arity: usize,
        slots: impl IntoIterator<Item = u32>,
    ) -> Result<Self> {
        let mut rel = Relation::empty(name, arity)?;
        for s in slots {
            if (s as u64) >= (1u64 << arity) {
                return Err(Error::InvalidRow {
                    row: s.to_string(),
                    arity,
                });
            }
            rel.insert(s);
        }
        Ok(rel)
    }

    /// Builds a relation from 0/1 row strings such as `"100011"`.
    pub fn from_matrix(name: impl Into<String>, rows: &[&str]) -> Result<Self> {
        let arity = rows.first().map_or(0, |r| r.len());
        let mut rel = Relation::empty(name, arity)?;
        for row in rows {
            rel.insert(parse_row(row, arity)?);
        }
        Ok(rel)
    }

    pub fn from_predicate(
        name: impl Into<String>,
        arity: usize,
        pred: impl Fn(&[bool]) -> bool,
    ) -> Result<Self> {
        let mut rel = Relation::empty(name, arity)?;
        let mut tuple = vec![false; arity];
        for slot in 0..(1u32 << arity) {
            for (i, t) in tuple.iter_mut().enumerate() {
                *t = coord(slot, arity, i);
            }
            if pred(&tuple) {
                rel.insert(slot);
            }
        }
        Ok(rel)
    }

    fn insert(&mut self, slot: u32) {
        self.bits[(slot / 64) as usize] |= 1 << (slot % 64);
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn renamed(&self, name: impl Into<String>) -> Relation {
        Relation {
            name: name.into(),
            ..self.clone()
        }
    }

    /// Number of tuples.
    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, slot: u32) -> bool {
        (self.bits[(slot / 64) as usize] >> (slot % 64)) & 1 == 1
    }

    pub fn contains_tuple(&self, tuple: &[bool]) -> bool {
        tuple.len() == self.arity && self.contains(slot_of(tuple))
    }

    /// Tuple slots in increasing order.
    pub fn slots(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(wi as u32 * 64 + b)
            })
        })
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<bool>> + '_ {
        self.slots().map(move |s| self.tuple(s))
    }

    pub fn tuple(&self, slot: u32) -> Vec<bool> {
        (0..self.arity).map(|i| coord(slot, self.arity, i)).collect()
    }

    pub fn row_string(&self, slot: u32) -> String {
        (0..self.arity)
            .map(|i| if coord(slot, self.arity, i) { '1' } else { '0' })
            .collect()
    }

    /// Same arity and tuple set, names ignored.
    pub fn same_tuples(&self, other: &Relation) -> bool {
        self.arity == other.arity && self.bits == other.bits
    }

    pub fn is_zero_valid(&self) -> bool {
        self.contains(0)
    }

    pub fn is_one_valid(&self) -> bool {
        self.contains(((1u64 << self.arity) - 1) as u32)
    }

    /// Column `pos` as a bit vector over the tuples in slot order.
    pub fn column(&self, pos: usize) -> Vec<bool> {
        self.slots().map(|s| coord(s, self.arity, pos)).collect()
    }
}

pub(crate) fn parse_row(row: &str, arity: usize) -> Result<u32> {
    if row.len() != arity || !row.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::InvalidRow {
            row: row.to_string(),
            arity,
        });
    }
    Ok(row.bytes().fold(0u32, |acc, b| (acc << 1) | (b - b'0') as u32))
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.slots().map(|s| self.row_string(s)).collect();
        write!(f, "{}/{} {{{}}}", self.name, self.arity, rows.join(", "))
    }
}

/// The named relation families used throughout the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Or,
    Nand,
    Xor,
    Even,
    EvenKNeq,
    Nae3,
    R13Neq,
    T,
    F,
    Eq,
    Neq,
    Impl,
}

impl Family {
    pub fn is_parameterized(self) -> bool {
        matches!(
            self,
            Family::Or | Family::Nand | Family::Xor | Family::Even | Family::EvenKNeq
        )
    }
}

/// Builds a member of a named family. `k` is required for the
/// parameterized families and ignored otherwise.
pub fn build_named_relation(family: Family, k: Option<usize>) -> Result<Relation> {
    let param = || -> Result<usize> {
        match k {
            Some(k) if (1..=MAX_FAMILY_PARAM).contains(&k) => Ok(k),
            Some(k) => Err(Error::ParameterOutOfRange(k)),
            None => Err(Error::Precondition(format!(
                "family {family:?} needs a parameter"
            ))),
        }
    };
    let ones = |t: &[bool]| t.iter().filter(|&&b| b).count();
    match family {
        Family::Or => {
            let k = param()?;
            Relation::from_predicate(format!("OR{k}"), k, |t| t.iter().any(|&b| b))
        }
        Family::Nand => {
            let k = param()?;
            Relation::from_predicate(format!("NAND{k}"), k, |t| !t.iter().all(|&b| b))
        }
        Family::Xor => {
            let k = param()?;
            Relation::from_predicate(format!("XOR{k}"), k, |t| ones(t) % 2 == 1)
        }
        Family::Even => {
            let k = param()?;
            Relation::from_predicate(format!("EVEN{k}"), k, |t| ones(t) % 2 == 0)
        }
        Family::EvenKNeq => {
            let k = param()?;
            Relation::from_predicate(format!("EVEN{k}NEQ"), 2 * k, |t| {
                ones(&t[..k]) % 2 == 0 && (0..k).all(|i| t[i] != t[k + i])
            })
        }
        Family::Nae3 => Relation::from_predicate("NAE3", 3, |t| {
            !(t.iter().all(|&b| b) || t.iter().all(|&b| !b))
        }),
        Family::R13Neq => Relation::from_matrix("R13NEQ", &["100011", "010101", "001110"]),
        Family::T => Relation::from_matrix("T", &["1"]),
        Family::F => Relation::from_matrix("F", &["0"]),
        Family::Eq => Relation::from_matrix("EQ", &["00", "11"]),
        Family::Neq => Relation::from_matrix("NEQ", &["01", "10"]),
        Family::Impl => Relation::from_matrix("IMPL", &["00", "01", "11"]),
    }
}

/// Resolves a family member from its canonical name (`OR3`, `EVEN2NEQ`,
/// `NAE3`, `IMPL`, ...).
pub fn relation_by_name(name: &str) -> Option<Relation> {
    let fixed = [
        ("NAE3", Family::Nae3),
        ("R13NEQ", Family::R13Neq),
        ("T", Family::T),
        ("F", Family::F),
        ("EQ", Family::Eq),
        ("NEQ", Family::Neq),
        ("IMPL", Family::Impl),
    ];
    if let Some(&(_, fam)) = fixed.iter().find(|(n, _)| *n == name) {
        return build_named_relation(fam, None).ok();
    }
    let (fam, rest) = if let Some(r) = name.strip_prefix("NAND") {
        (Family::Nand, r)
    } else if let Some(r) = name.strip_prefix("OR") {
        (Family::Or, r)
    } else if let Some(r) = name.strip_prefix("XOR") {
        (Family::Xor, r)
    } else {
        let r = name.strip_prefix("EVEN")?;
        match r.strip_suffix("NEQ") {
            Some(r) => (Family::EvenKNeq, r),
            None => (Family::Even, r),
        }
    };
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    build_named_relation(fam, Some(rest.parse().ok()?)).ok()
}
