//! Linear systems over GF(2).
//!
//! Equations are solved by propagation: whenever an equation has a single
//! unknown left, that unknown is expressed through already known values.
//! When nothing propagates, the lowest unknown variable becomes a parameter.
//! Equations whose variables are all known leave a residual condition on the
//! parameters, and only those residuals go through dense elimination. The
//! systems produced by the reductions are long chains, so the residual part
//! stays tiny even with tens of thousands of variables.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::relation::{coord, Relation};

/// `x_{v1} ⊕ … ⊕ x_{vk} = rhs`. Repeated variables cancel.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XorEquation {
    pub vars: Vec<usize>,
    pub rhs: bool,
}

impl XorEquation {
    pub fn new(vars: Vec<usize>, rhs: bool) -> Self {
        XorEquation { vars, rhs }
    }

    pub fn holds(&self, values: &[bool]) -> bool {
        self.vars.iter().fold(false, |acc, &v| acc ^ values[v]) == self.rhs
    }
}

/// Parameter mask split into an inline low word and a spill for the rest,
/// so the common case of fewer than 64 parameters never allocates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Affine {
    lo: u64,
    hi: Vec<u64>,
    c: bool,
}

impl Affine {
    fn constant(c: bool) -> Self {
        Affine { lo: 0, hi: Vec::new(), c }
    }

    fn param(p: usize) -> Self {
        let mut a = Affine::constant(false);
        a.flip(p);
        a
    }

    fn add(&mut self, other: &Affine) {
        self.lo ^= other.lo;
        if !other.hi.is_empty() {
            if self.hi.len() < other.hi.len() {
                self.hi.resize(other.hi.len(), 0);
            }
            for (a, b) in self.hi.iter_mut().zip(&other.hi) {
                *a ^= b;
            }
        }
        self.c ^= other.c;
    }

    fn word(&self, i: usize) -> u64 {
        if i == 0 {
            self.lo
        } else {
            self.hi.get(i - 1).copied().unwrap_or(0)
        }
    }

    fn bit(&self, p: usize) -> bool {
        (self.word(p / 64) >> (p % 64)) & 1 == 1
    }

    fn flip(&mut self, p: usize) {
        let (wi, b) = (p / 64, p % 64);
        if wi == 0 {
            self.lo ^= 1 << b;
        } else {
            if self.hi.len() < wi {
                self.hi.resize(wi, 0);
            }
            self.hi[wi - 1] ^= 1 << b;
        }
    }

    fn params(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.hi.len()).flat_map(move |wi| {
            let w = self.word(wi);
            (0..64).filter(move |b| (w >> b) & 1 == 1).map(move |b| wi * 64 + b)
        })
    }

    fn is_constant(&self) -> bool {
        self.lo == 0 && self.hi.iter().all(|&w| w == 0)
    }
}

/// Solution space of a satisfiable system: every variable that occurs in an
/// equation is an affine function of `free` independent parameters.
#[derive(Clone, Debug)]
pub struct AffineSpace {
    free: usize,
    exprs: Vec<Option<Affine>>,
}

impl AffineSpace {
    /// Number of free parameters (dimension of the solution space restricted
    /// to occurring variables).
    pub fn dimension(&self) -> usize {
        self.free
    }

    /// Whether variable `v` occurs in some equation.
    pub fn is_constrained(&self, v: usize) -> bool {
        self.exprs[v].is_some()
    }

    /// Parameter mask (low 64 parameters) and constant of a constrained
    /// variable.
    pub fn expr_u64(&self, v: usize) -> Option<(u64, bool)> {
        self.exprs[v]
            .as_ref()
            .map(|e| (e.lo, e.c))
    }

    /// Value of every variable when parameters take `params` (indexable bits);
    /// unconstrained variables are 0.
    pub fn evaluate(&self, params: impl Fn(usize) -> bool) -> Vec<bool> {
        self.exprs
            .iter()
            .map(|e| match e {
                None => false,
                Some(a) => a.params().fold(a.c, |acc, p| acc ^ params(p)),
            })
            .collect()
    }
}

/// Equations in one flat buffer, normalized so every variable appears at
/// most once per equation.
struct FlatSystem {
    start: Vec<usize>,
    vars: Vec<usize>,
    rhs: Vec<bool>,
}

impl FlatSystem {
    fn with_capacity(eqs: usize, vars: usize) -> Self {
        let mut start = Vec::with_capacity(eqs + 1);
        start.push(0);
        FlatSystem {
            start,
            vars: Vec::with_capacity(vars),
            rhs: Vec::with_capacity(eqs),
        }
    }

    fn push(&mut self, vars: impl IntoIterator<Item = usize>, rhs: bool) {
        let from = self.vars.len();
        self.vars.extend(vars);
        let slice = &mut self.vars[from..];
        slice.sort_unstable();
        // cancel equal neighbours in place
        let mut w = from;
        let mut r = from;
        while r < self.vars.len() {
            if r + 1 < self.vars.len() && self.vars[r] == self.vars[r + 1] {
                r += 2;
            } else {
                self.vars[w] = self.vars[r];
                w += 1;
                r += 1;
            }
        }
        self.vars.truncate(w);
        self.start.push(w);
        self.rhs.push(rhs);
    }

    fn len(&self) -> usize {
        self.rhs.len()
    }

    fn eq(&self, i: usize) -> &[usize] {
        &self.vars[self.start[i]..self.start[i + 1]]
    }
}

/// Decides the system and describes its solution space, or `None` when it
/// is inconsistent.
pub fn solve_space(num_vars: usize, equations: &[XorEquation]) -> Option<AffineSpace> {
    let total = equations.iter().map(|e| e.vars.len()).sum();
    let mut sys = FlatSystem::with_capacity(equations.len(), total);
    for e in equations {
        sys.push(e.vars.iter().copied(), e.rhs);
    }
    solve_flat(num_vars, &sys)
}

fn solve_flat(num_vars: usize, sys: &FlatSystem) -> Option<AffineSpace> {
    let m = sys.len();
    // occurrence lists, flattened
    let mut occ_start = vec![0usize; num_vars + 1];
    for &v in &sys.vars {
        occ_start[v + 1] += 1;
    }
    for v in 0..num_vars {
        occ_start[v + 1] += occ_start[v];
    }
    let mut occ = vec![0usize; sys.vars.len()];
    let mut fill = occ_start.clone();
    let mut pending = vec![0usize; m];
    let mut done = vec![false; m];
    let mut queue = Vec::new();
    for ei in 0..m {
        let vars = sys.eq(ei);
        if vars.is_empty() {
            if sys.rhs[ei] {
                return None;
            }
            done[ei] = true;
            continue;
        }
        for &v in vars {
            occ[fill[v]] = ei;
            fill[v] += 1;
        }
        pending[ei] = vars.len();
        if pending[ei] == 1 {
            queue.push(ei);
        }
    }
    drop(fill);
    let st = State {
        sys,
        occ_start: &occ_start,
        occ: &occ,
    };

    let mut exprs: Vec<Option<Affine>> = vec![None; num_vars];
    let mut residual: Vec<Affine> = Vec::new();
    let mut params = 0usize;
    // Parameters go to the most shared variables first: a variable occurring
    // everywhere unlocks the most propagation.
    let mut order: Vec<usize> = (0..num_vars).filter(|&v| occ_start[v] < occ_start[v + 1]).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(occ_start[v + 1] - occ_start[v]));
    let mut cursor = 0usize;

    // Each step either drains the queue or introduces a parameter.
    loop {
        while let Some(ei) = queue.pop() {
            if done[ei] {
                continue;
            }
            done[ei] = true;
            let mut value = Affine::constant(sys.rhs[ei]);
            let mut unknown = None;
            for &v in sys.eq(ei) {
                match &exprs[v] {
                    Some(a) => value.add(a),
                    None => unknown = Some(v),
                }
            }
            match unknown {
                Some(u) => st.assign(u, value, &mut exprs, &mut pending, &mut done, &mut queue, &mut residual),
                None => {
                    if value.is_constant() {
                        if value.c {
                            return None;
                        }
                    } else {
                        residual.push(value);
                    }
                }
            }
        }
        while cursor < order.len() && exprs[order[cursor]].is_some() {
            cursor += 1;
        }
        if cursor == order.len() {
            break;
        }
        let p = Affine::param(params);
        params += 1;
        st.assign(order[cursor], p, &mut exprs, &mut pending, &mut done, &mut queue, &mut residual);
    }

    // Dense elimination on the residual conditions.
    let mut pivots: Vec<(usize, Affine)> = Vec::new();
    for mut row in residual {
        for (p, prow) in &pivots {
            if row.bit(*p) {
                row.add(prow);
            }
        }
        let lead = row.params().next();
        match lead {
            None => {
                if row.c {
                    return None;
                }
            }
            Some(p) => {
                for (_, prow) in pivots.iter_mut() {
                    if prow.bit(p) {
                        prow.add(&row);
                    }
                }
                pivots.push((p, row));
            }
        }
    }
    // Row (p, r) reads: x_p = r.c ⊕ (r without p).
    let mut is_pivot = vec![false; params];
    for (p, _) in &pivots {
        is_pivot[*p] = true;
    }
    let mut free_index = vec![usize::MAX; params];
    let mut free = 0;
    for p in 0..params {
        if !is_pivot[p] {
            free_index[p] = free;
            free += 1;
        }
    }
    let mut pivot_row: Vec<Option<Affine>> = vec![None; params];
    for (p, mut r) in pivots {
        r.flip(p);
        pivot_row[p] = Some(r);
    }
    let reindex = |a: &Affine| -> Affine {
        let mut out = Affine::constant(a.c);
        for p in a.params() {
            match &pivot_row[p] {
                Some(r) => {
                    out.c ^= r.c;
                    for q in r.params() {
                        out.flip(free_index[q]);
                    }
                }
                None => out.flip(free_index[p]),
            }
        }
        out
    };
    let exprs = exprs.iter().map(|e| e.as_ref().map(reindex)).collect();
    Some(AffineSpace { free, exprs })
}

struct State<'a> {
    sys: &'a FlatSystem,
    occ_start: &'a [usize],
    occ: &'a [usize],
}

impl State<'_> {
    #[allow(clippy::too_many_arguments)]
    fn assign(
        &self,
        v: usize,
        value: Affine,
        exprs: &mut [Option<Affine>],
        pending: &mut [usize],
        done: &mut [bool],
        queue: &mut Vec<usize>,
        residual: &mut Vec<Affine>,
    ) {
        exprs[v] = Some(value);
        for &ei in &self.occ[self.occ_start[v]..self.occ_start[v + 1]] {
            pending[ei] -= 1;
            if done[ei] {
                continue;
            }
            match pending[ei] {
                1 => queue.push(ei),
                0 => {
                    done[ei] = true;
                    let mut r = Affine::constant(self.sys.rhs[ei]);
                    for &u in self.sys.eq(ei) {
                        r.add(exprs[u].as_ref().expect("all variables known"));
                    }
                    if !r.is_constant() || r.c {
                        residual.push(r);
                    }
                }
                _ => {}
            }
        }
    }
}

/// Solves a GF(2) system; free variables are set to 0.
pub fn gauss_solve(num_vars: usize, equations: &[XorEquation]) -> Option<Vec<bool>> {
    solve_space(num_vars, equations).map(|s| s.evaluate(|_| false))
}

/// Affine equations defining `r`, or `None` if `r` is not affine.
/// Each equation is `(coordinate list, rhs)`.
pub fn affine_equations(r: &Relation) -> Option<Vec<XorEquation>> {
    let k = r.arity();
    let mut slots = r.slots();
    let t0 = match slots.next() {
        Some(s) => s,
        None => return Some(vec![XorEquation::new(vec![], true)]),
    };
    // basis of differences, reduced on leading bit
    let mut basis: Vec<u32> = Vec::new();
    for s in slots {
        let mut d = s ^ t0;
        for &b in &basis {
            d = d.min(d ^ b);
        }
        if d != 0 {
            basis.push(d);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    if r.len() != 1usize << basis.len() {
        return None;
    }
    // Equations: all a with a·b = 0 for every basis vector. Enumerate the
    // orthogonal complement via a basis of the null space.
    let full: u32 = (1u32 << k) - 1;
    let mut rows: Vec<u32> = Vec::new();
    let mut pivcols: Vec<u32> = Vec::new();
    for &b in &basis {
        let mut v = b;
        for (i, &row) in rows.iter().enumerate() {
            if v & pivcols[i] != 0 {
                v ^= row;
            }
        }
        if v == 0 {
            continue;
        }
        let pc = 1u32 << (31 - v.leading_zeros());
        for row in rows.iter_mut() {
            if *row & pc != 0 {
                *row ^= v;
            }
        }
        rows.push(v);
        pivcols.push(pc);
    }
    let pivot_mask: u32 = pivcols.iter().fold(0, |a, &p| a | p);
    let mut eqs = Vec::new();
    for fb in 0..k {
        let f = 1u32 << fb;
        if f & pivot_mask != 0 {
            continue;
        }
        // null vector: free bit f set, pivot bits chosen to cancel
        let mut a = f;
        for (i, &row) in rows.iter().enumerate() {
            if row & f != 0 {
                a |= pivcols[i];
            }
        }
        let a = a & full;
        let vars: Vec<usize> = (0..k).filter(|&pos| coord(a, k, pos)).collect();
        let rhs = (a & t0).count_ones() % 2 == 1;
        eqs.push(XorEquation::new(vars, rhs));
    }
    Some(eqs)
}

/// Translates an affine formula into its defining equation system.
pub fn formula_equations(formula: &Formula) -> Result<Vec<XorEquation>> {
    let cache = equation_cache(formula)?;
    let mut out = Vec::new();
    for c in formula.constraints() {
        for e in &cache[formula.relation_of(c).name()] {
            out.push(XorEquation::new(e.vars.iter().map(|&p| c.vars[p]).collect(), e.rhs));
        }
    }
    Ok(out)
}

fn equation_cache(formula: &Formula) -> Result<HashMap<&str, Vec<XorEquation>>> {
    let mut cache: HashMap<&str, Vec<XorEquation>> = HashMap::new();
    for r in formula.relations() {
        if !cache.contains_key(r.name()) {
            let eqs = affine_equations(r)
                .ok_or_else(|| Error::Precondition(format!("relation `{}` is not affine", r.name())))?;
            cache.insert(r.name(), eqs);
        }
    }
    Ok(cache)
}

fn formula_system(formula: &Formula) -> Result<FlatSystem> {
    let cache = equation_cache(formula)?;
    let mut sys = FlatSystem::with_capacity(formula.constraints().len(), 0);
    for c in formula.constraints() {
        for e in &cache[formula.relation_of(c).name()] {
            sys.push(e.vars.iter().map(|&p| c.vars[p]), e.rhs);
        }
    }
    Ok(sys)
}

/// Exact CardMinSat summary for affine formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSummary {
    pub satisfiable: bool,
    pub min_weight: Option<usize>,
    pub verdict: bool,
}

/// Largest solution-space dimension the transform will enumerate.
pub const MAX_AFFINE_DIMENSION: usize = 22;

/// Decides CardMinSat on an affine formula of any size whose solution space
/// has dimension at most [`MAX_AFFINE_DIMENSION`], via a Walsh–Hadamard
/// transform of the parameter masks.
pub fn affine_cms_summary(formula: &Formula, query: &str) -> Result<AffineSummary> {
    let x = formula.require_var(query)?;
    let space = match solve_flat(formula.num_vars(), &formula_system(formula)?) {
        None => {
            return Ok(AffineSummary {
                satisfiable: false,
                min_weight: None,
                verdict: false,
            })
        }
        Some(s) => s,
    };
    let d = space.dimension();
    if d > MAX_AFFINE_DIMENSION {
        return Err(Error::guard("affine solution dimension", d as u128, MAX_AFFINE_DIMENSION as u128));
    }
    let size = 1usize << d;
    let mut g = vec![0i64; size];
    let mut count = 0i64;
    for v in 0..formula.num_vars() {
        if let Some((m, c)) = space.expr_u64(v) {
            g[m as usize] += if c { -1 } else { 1 };
            count += 1;
        }
    }
    let mut h = 1;
    while h < size {
        for i in (0..size).step_by(h * 2) {
            for j in i..i + h {
                let (a, b) = (g[j], g[j + h]);
                g[j] = a + b;
                g[j + h] = a - b;
            }
        }
        h *= 2;
    }
    // weight(q) = (count - H[q]) / 2
    let best = g.iter().copied().max().expect("non-empty");
    let min_weight = ((count - best) / 2) as usize;
    let verdict = match space.expr_u64(x) {
        None => false,
        Some((m, c)) => g
            .iter()
            .enumerate()
            .any(|(q, &hq)| hq == best && ((m & q as u64).count_ones() % 2 == 1) ^ c),
    };
    Ok(AffineSummary {
        satisfiable: true,
        min_weight: Some(min_weight),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brute::cms_bruteforce;
    use crate::relation::{build_named_relation as rel, Family};

    fn eq(vars: &[usize], rhs: bool) -> XorEquation {
        XorEquation::new(vars.to_vec(), rhs)
    }

    #[test]
    fn triangle_is_inconsistent() {
        let sys = [eq(&[0, 1], true), eq(&[1, 2], true), eq(&[0, 2], true)];
        assert_eq!(gauss_solve(3, &sys), None);
    }

    #[test]
    fn single_equation_sets_free_to_zero() {
        assert_eq!(gauss_solve(2, &[eq(&[0, 1], true)]), Some(vec![false, true]));
    }

    #[test]
    fn unit_then_equality() {
        let sys = [eq(&[0], true), eq(&[0, 1], false)];
        assert_eq!(gauss_solve(2, &sys), Some(vec![true, true]));
    }

    #[test]
    fn repeated_variables_cancel() {
        assert_eq!(gauss_solve(1, &[eq(&[0, 0], true)]), None);
        assert_eq!(gauss_solve(2, &[eq(&[0, 0, 1], true)]), Some(vec![false, true]));
        assert_eq!(gauss_solve(1, &[eq(&[0, 0, 0], true)]), Some(vec![true]));
    }

    #[test]
    fn residual_conditions_are_enforced() {
        // x0 ⊕ x1 ⊕ x2 = 1, x0 ⊕ x1 = 0, x2 ⊕ x3 = 0, x0 ⊕ x3 = 0
        let sys = [
            eq(&[0, 1, 2], true),
            eq(&[0, 1], false),
            eq(&[2, 3], false),
            eq(&[0, 3], false),
        ];
        let s = gauss_solve(4, &sys).unwrap();
        assert!(sys.iter().all(|e| e.holds(&s)));
        assert_eq!(s, vec![true, true, true, true]);
    }

    #[test]
    fn affine_equations_of_xor3() {
        let x = rel(Family::Xor, Some(3)).unwrap();
        let eqs = affine_equations(&x).unwrap();
        assert_eq!(eqs, vec![eq(&[0, 1, 2], true)]);
        assert!(affine_equations(&rel(Family::Or, Some(2)).unwrap()).is_none());
        let t = affine_equations(&rel(Family::T, None).unwrap()).unwrap();
        assert_eq!(t, vec![eq(&[0], true)]);
    }

    #[test]
    fn affine_summary_matches_bruteforce() {
        let xor3 = rel(Family::Xor, Some(3)).unwrap();
        let xor2 = rel(Family::Xor, Some(2)).unwrap();
        let f = Formula::builder()
            .with(&xor3, &["a", "b", "c"])
            .unwrap()
            .with(&xor3, &["c", "d", "e"])
            .unwrap()
            .with(&xor2, &["a", "e"])
            .unwrap()
            .build();
        for v in ["a", "b", "c", "d", "e"] {
            let brute = cms_bruteforce(&f, v).unwrap();
            let s = affine_cms_summary(&f, v).unwrap();
            assert_eq!((s.verdict, s.min_weight), brute.key(), "query {v}");
        }
    }
}
