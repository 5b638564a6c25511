//! Width-2 affine formulas: unit and two-variable parity equations solved
//! with a parity union-find.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::{Assignment, CmsAnswer, Formula};
use crate::relation::{coord, Relation};

use super::{Engine, SolveReport};

/// `x_a ⊕ x_b = rhs`, or `x_a = rhs` when `b` is `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Eq2 {
    a: usize,
    b: Option<usize>,
    rhs: bool,
}

/// The implied unit and binary parity equations of `r`, if they define it.
fn compile(r: &Relation) -> Option<Vec<Eq2>> {
    let k = r.arity();
    let slots: Vec<u32> = r.slots().collect();
    let mut eqs = Vec::new();
    for i in 0..k {
        for rhs in [false, true] {
            if slots.iter().all(|&s| coord(s, k, i) == rhs) {
                eqs.push(Eq2 { a: i, b: None, rhs });
            }
        }
        for j in i + 1..k {
            for rhs in [false, true] {
                if slots.iter().all(|&s| (coord(s, k, i) ^ coord(s, k, j)) == rhs) {
                    eqs.push(Eq2 { a: i, b: Some(j), rhs });
                }
            }
        }
    }
    let exact = (0..1u32 << k).all(|s| {
        let sat = eqs.iter().all(|e| {
            let va = coord(s, k, e.a);
            match e.b {
                None => va == e.rhs,
                Some(b) => (va ^ coord(s, k, b)) == e.rhs,
            }
        });
        sat == r.contains(s)
    });
    exact.then_some(eqs)
}

struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n).collect(),
            parity: vec![false; n],
        }
    }

    /// Root of `v` and the parity of `v` relative to it.
    fn find(&mut self, v: usize) -> (usize, bool) {
        let mut path = Vec::new();
        let mut cur = v;
        while self.parent[cur] != cur {
            path.push(cur);
            cur = self.parent[cur];
        }
        let root = cur;
        // compress from the top down
        for &u in path.iter().rev() {
            let p = self.parent[u];
            if p != root {
                self.parity[u] ^= self.parity[p];
            }
            self.parent[u] = root;
        }
        (root, self.parity[v])
    }

    /// Adds `a ⊕ b = rhs`; false on contradiction.
    fn union(&mut self, a: usize, b: usize, rhs: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return (pa ^ pb) == rhs;
        }
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ rhs;
        true
    }
}

pub fn solve_width2affine(formula: &Formula, query: &str) -> Result<SolveReport> {
    let x = formula.require_var(query)?;
    let mut compiled: HashMap<&str, Vec<Eq2>> = HashMap::new();
    for r in formula.relations() {
        let eqs = compile(r).ok_or_else(|| {
            Error::Precondition(format!("relation `{}` is not width-2 affine", r.name()))
        })?;
        compiled.insert(r.name(), eqs);
    }
    let n = formula.num_vars();
    let zero = n;
    let mut uf = ParityUnionFind::new(n + 1);
    for c in formula.constraints() {
        for e in &compiled[formula.relation_of(c).name()] {
            let a = c.vars[e.a];
            let b = e.b.map_or(zero, |b| c.vars[b]);
            if !uf.union(a, b, e.rhs) {
                return Ok(SolveReport::new(CmsAnswer::unsatisfiable(), Engine::Width2Affine));
            }
        }
    }

    // Per component: members in universe order with their parities.
    let (zero_root, _) = uf.find(zero);
    let mut members: HashMap<usize, Vec<(usize, bool)>> = HashMap::new();
    for v in 0..n {
        let (r, p) = uf.find(v);
        members.entry(r).or_default().push((v, p));
    }
    // Value of the root in the chosen minimum model, per component.
    let mut root_value: HashMap<usize, bool> = HashMap::new();
    let mut min_weight = 0;
    let (x_root, x_par) = uf.find(x);
    let mut verdict = false;
    for (&root, vs) in &members {
        if root == zero_root {
            // zero node has value 0; v = parity relative to the shared root
            let (_, zp) = uf.find(zero);
            root_value.insert(root, zp);
            min_weight += vs.iter().filter(|&&(_, p)| p ^ zp).count();
            if root == x_root {
                verdict = x_par ^ zp;
            }
            continue;
        }
        let ones_if_root0 = vs.iter().filter(|&&(_, p)| p).count();
        let ones_if_root1 = vs.len() - ones_if_root0;
        min_weight += ones_if_root0.min(ones_if_root1);
        let candidates: Vec<bool> = [false, true]
            .into_iter()
            .filter(|&rv| {
                let w = if rv { ones_if_root1 } else { ones_if_root0 };
                w == ones_if_root0.min(ones_if_root1)
            })
            .collect();
        let choice = if root == x_root {
            match candidates.iter().find(|&&rv| rv ^ x_par) {
                Some(&rv) => {
                    verdict = true;
                    rv
                }
                None => candidates[0],
            }
        } else {
            // lexicographically least: first member set to 0 when tied
            let (_, first_par) = vs[0];
            if candidates.len() == 2 {
                first_par
            } else {
                candidates[0]
            }
        };
        root_value.insert(root, choice);
    }
    let answer = if verdict {
        let values = (0..n)
            .map(|v| {
                let (r, p) = uf.find(v);
                root_value[&r] ^ p
            })
            .collect();
        CmsAnswer::yes(Assignment::new(values))
    } else {
        CmsAnswer::no(min_weight)
    };
    Ok(SolveReport::new(answer, Engine::Width2Affine))
}
