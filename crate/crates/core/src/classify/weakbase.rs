//! Minimal weak bases of the labeled co-clones.

use crate::error::{Error, Result};
use crate::relation::{build_named_relation, Family, Relation, MAX_ARITY};

use super::coclone::{CoCloneId, CoCloneTag};

fn all(xs: &[bool]) -> bool {
    xs.iter().all(|&b| b)
}

fn any(xs: &[bool]) -> bool {
    xs.iter().any(|&b| b)
}

fn even(xs: &[bool]) -> bool {
    xs.iter().filter(|&&b| b).count() % 2 == 0
}

/// `EVEN^k(x1..xk) ∧ xi ≠ x(k+i)` on the first `2k` coordinates.
fn even_neq(x: &[bool], k: usize) -> bool {
    even(&x[..k]) && (0..k).all(|i| x[i] != x[k + i])
}

/// The weak base relation of `c`, named `R_<tag>` (`R_<tag>_<k>` for IS
/// families).
pub fn weak_base(c: CoCloneId) -> Result<Relation> {
    use CoCloneTag::*;
    let name = match c.width() {
        Some(k) => format!("R_{}_{}", c.tag(), k),
        None => format!("R_{}", c.tag()),
    };
    let k = c.width().unwrap_or(0);
    if c.tag().is_is_family() && k + 3 > MAX_ARITY {
        return Err(Error::InvalidCoClone(c.to_string()));
    }
    let p = |arity: usize, f: &dyn Fn(&[bool]) -> bool| Relation::from_predicate(name.clone(), arity, f);
    match c.tag() {
        IBF => p(2, &|x| x[0] == x[1]),
        IR0 => p(1, &|x| !x[0]),
        IR1 => p(1, &|x| x[0]),
        IR2 => p(2, &|x| !x[0] && x[1]),
        IM => p(2, &|x| !x[0] || x[1]),
        IM0 => p(3, &|x| (!x[0] || x[1]) && !x[2]),
        IM1 => p(3, &|x| (!x[0] || x[1]) && x[2]),
        IM2 => p(4, &|x| (!x[0] || x[1]) && !x[2] && x[3]),
        IS0 => p(k + 1, &|x| any(&x[..k]) && x[k]),
        IS02 => p(k + 2, &|x| any(&x[..k]) && !x[k] && x[k + 1]),
        IS01 => p(k + 2, &|x| any(&x[..k]) && (!x[k] || all(&x[..k])) && x[k + 1]),
        IS00 => p(k + 3, &|x| {
            any(&x[..k]) && (!x[k] || all(&x[..k])) && !x[k + 1] && x[k + 2]
        }),
        IS1 => p(k + 1, &|x| !all(&x[..k]) && !x[k]),
        IS12 => p(k + 2, &|x| !all(&x[..k]) && !x[k] && x[k + 1]),
        IS11 => p(k + 2, &|x| !all(&x[..k]) && (x[k] || !any(&x[..k])) && !x[k + 1]),
        IS10 => p(k + 3, &|x| {
            !all(&x[..k]) && (x[k] || !any(&x[..k])) && !x[k + 1] && x[k + 2]
        }),
        ID => Ok(build_named_relation(Family::Neq, None)?.renamed(name)),
        ID1 => p(4, &|x| x[0] != x[1] && !x[2] && x[3]),
        ID2 => p(6, &|x| (x[0] || x[1]) && x[0] != x[2] && x[1] != x[3] && !x[4] && x[5]),
        IL => p(4, &|x| even(x)),
        IL0 => p(4, &|x| even(&x[..3]) && !x[3]),
        IL1 => p(4, &|x| !even(&x[..3]) && x[3]),
        IL2 => p(8, &|x| even_neq(x, 3) && !x[6] && x[7]),
        IL3 => p(8, &|x| even_neq(x, 4)),
        IV => p(4, &|x| x[0] == (x[1] || x[2]) && (!x[3] || (x[1] && x[2]))),
        IV0 => p(4, &|x| x[0] == (x[1] || x[2]) && !x[3]),
        IV1 => p(5, &|x| x[0] == (x[1] || x[2]) && (!x[3] || (x[1] && x[2])) && x[4]),
        IV2 => p(5, &|x| x[0] == (x[1] || x[2]) && !x[3] && x[4]),
        IE => p(4, &|x| x[0] == (x[1] && x[2]) && (!(x[1] || x[2]) || x[3])),
        IE0 => p(5, &|x| x[0] == (x[1] && x[2]) && (!(x[1] || x[2]) || x[3]) && !x[4]),
        IE1 => p(4, &|x| x[0] == (x[1] && x[2]) && x[3]),
        IE2 => p(5, &|x| x[0] == (x[1] && x[2]) && !x[3] && x[4]),
        IN => p(4, &|x| even(x) && (x[0] && x[3]) == (x[1] && x[2])),
        // columns paired as x_i ≠ x_(9-i), matching the matrix the IN2
        // gadget is built on
        IN2 => p(8, &|x| {
            even(&x[..4]) && (0..4).all(|i| x[i] != x[7 - i]) && (x[0] && x[3]) == (x[1] && x[2])
        }),
        II => p(4, &|x| x[0] == (x[1] && x[2]) && x[3] == (x[1] || x[2])),
        II0 => p(4, &|x| !(x[0] && x[1]) && x[2] == (x[0] || x[1]) && !x[3]),
        II1 => p(4, &|x| (x[0] || x[1]) && (x[0] && x[1]) == x[2] && x[3]),
        II2 => {
            let r13 = build_named_relation(Family::R13Neq, None)?;
            p(8, &|x| r13.contains_tuple(&x[..6]) && !x[6] && x[7])
        }
    }
}
