//! Propositional abduction over parity theories, with cardinality-minimal
//! explanations, and the reduction from CardMinSat over XOR₃.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::linear::{gauss_solve, XorEquation};
use crate::relation::{build_named_relation, Family};

/// Largest variable set handled by the enumeration-based checks.
pub const MAX_PAP_VARS: usize = 20;

/// A parity clause `v1 ⊕ ... ⊕ vk = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityClause {
    pub vars: Vec<usize>,
    pub rhs: bool,
}

/// An abduction problem ⟨V, H, M, T⟩ with a consistent parity theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pap {
    vars: Vec<String>,
    hyp: Vec<usize>,
    man: Vec<usize>,
    theory: Vec<ParityClause>,
}

/// How a candidate explanation S is added to the theory.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Semantics {
    /// S as positive units, hypotheses outside S as negative units.
    #[default]
    ClosedWorldOnH,
    /// S as positive units only.
    PositiveUnits,
}

impl FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cw" => Ok(Semantics::ClosedWorldOnH),
            "pu" => Ok(Semantics::PositiveUnits),
            other => Err(Error::Precondition(format!("unknown semantics `{other}`"))),
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::ClosedWorldOnH => "cw",
            Semantics::PositiveUnits => "pu",
        })
    }
}

impl Pap {
    /// Builds a problem from names; the theory must be consistent.
    pub fn new<S: AsRef<str>>(
        vars: &[S],
        hyp: &[S],
        man: &[S],
        theory: &[(Vec<S>, bool)],
    ) -> Result<Self> {
        let names: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in names.iter().enumerate() {
            if names[..i].contains(v) {
                return Err(Error::DuplicateVariable(v.clone()));
            }
        }
        let index = |v: &S| -> Result<usize> {
            names
                .iter()
                .position(|n| n == v.as_ref())
                .ok_or_else(|| Error::UnknownVariable(v.as_ref().to_string()))
        };
        let set = |vs: &[S]| -> Result<Vec<usize>> {
            let mut out: Vec<usize> = Vec::new();
            for v in vs {
                let i = index(v)?;
                if out.contains(&i) {
                    return Err(Error::DuplicateVariable(v.as_ref().to_string()));
                }
                out.push(i);
            }
            Ok(out)
        };
        let hyp = set(hyp)?;
        let man = set(man)?;
        let theory = theory
            .iter()
            .map(|(vs, rhs)| {
                Ok(ParityClause {
                    vars: vs.iter().map(&index).collect::<Result<_>>()?,
                    rhs: *rhs,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let pap = Pap {
            vars: names,
            hyp,
            man,
            theory,
        };
        if gauss_solve(pap.vars.len(), &pap.equations()).is_none() {
            return Err(Error::InconsistentTheory);
        }
        Ok(pap)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn hypotheses(&self) -> Vec<&str> {
        self.hyp.iter().map(|&i| self.vars[i].as_str()).collect()
    }

    pub fn manifestations(&self) -> Vec<&str> {
        self.man.iter().map(|&i| self.vars[i].as_str()).collect()
    }

    pub fn theory(&self) -> &[ParityClause] {
        &self.theory
    }

    fn equations(&self) -> Vec<XorEquation> {
        self.theory
            .iter()
            .map(|c| XorEquation::new(c.vars.clone(), c.rhs))
            .collect()
    }

    fn var(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn hypothesis(&self, name: &str) -> Result<usize> {
        let i = self.var(name)?;
        if !self.hyp.contains(&i) {
            return Err(Error::NotAHypothesis(name.to_string()));
        }
        Ok(i)
    }

    fn guard(&self) -> Result<()> {
        if self.vars.len() > MAX_PAP_VARS {
            return Err(Error::guard("abduction variables", self.vars.len() as u128, MAX_PAP_VARS as u128));
        }
        Ok(())
    }

    /// `S` given as variable indices, all hypotheses.
    fn solves(&self, s: &[usize], semantics: Semantics, eqs: &[XorEquation]) -> bool {
        let n = self.vars.len();
        let mut fixed: Vec<Option<bool>> = vec![None; n];
        if semantics == Semantics::ClosedWorldOnH {
            for &h in &self.hyp {
                fixed[h] = Some(false);
            }
        }
        for &h in s {
            fixed[h] = Some(true);
        }
        let free: Vec<usize> = (0..n).filter(|&v| fixed[v].is_none()).collect();
        let base: Vec<bool> = fixed.iter().map(|v| v.unwrap_or(false)).collect();
        let mut consistent = false;
        for mask in 0u64..1 << free.len() {
            let mut a = base.clone();
            for (bit, &v) in free.iter().enumerate() {
                a[v] = mask >> bit & 1 == 1;
            }
            if !eqs.iter().all(|e| e.holds(&a)) {
                continue;
            }
            consistent = true;
            if self.man.iter().any(|&m| !a[m]) {
                return false;
            }
        }
        consistent
    }

    fn subsets_by_size(&self, mut visit: impl FnMut(&[usize]) -> bool) {
        fn rec(hyp: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
            if cur.len() == size {
                return visit(cur);
            }
            for i in start..hyp.len() {
                cur.push(hyp[i]);
                let go = rec(hyp, size, i + 1, cur, visit);
                cur.pop();
                if !go {
                    return false;
                }
            }
            true
        }
        for size in 0..=self.hyp.len() {
            if !rec(&self.hyp, size, 0, &mut Vec::new(), &mut visit) {
                return;
            }
        }
    }
}

/// Whether `s` (hypothesis names) explains every manifestation.
pub fn is_solution<S: AsRef<str>>(pap: &Pap, s: &[S], semantics: Semantics) -> Result<bool> {
    pap.guard()?;
    let idx = s.iter().map(|h| pap.hypothesis(h.as_ref())).collect::<Result<Vec<_>>>()?;
    Ok(pap.solves(&idx, semantics, &pap.equations()))
}

/// All solutions, each as hypothesis names in declaration order of `V`.
pub fn all_solutions(pap: &Pap, semantics: Semantics) -> Result<Vec<Vec<String>>> {
    pap.guard()?;
    let eqs = pap.equations();
    let mut out = Vec::new();
    pap.subsets_by_size(|s| {
        if pap.solves(s, semantics, &eqs) {
            let mut s = s.to_vec();
            s.sort_unstable();
            out.push(s.iter().map(|&i| pap.vars[i].clone()).collect());
        }
        true
    });
    Ok(out)
}

/// The solutions of minimum cardinality.
pub fn minimum_solutions(pap: &Pap, semantics: Semantics) -> Result<Vec<Vec<String>>> {
    pap.guard()?;
    let eqs = pap.equations();
    let mut out: Vec<Vec<usize>> = Vec::new();
    pap.subsets_by_size(|s| {
        if out.first().is_some_and(|f| f.len() < s.len()) {
            return false;
        }
        if pap.solves(s, semantics, &eqs) {
            out.push(s.to_vec());
        }
        true
    });
    if out.is_empty() {
        return Err(Error::NoSolution);
    }
    Ok(out
        .into_iter()
        .map(|mut s| {
            s.sort_unstable();
            s.iter().map(|&i| pap.vars[i].clone()).collect()
        })
        .collect())
}

/// Does some minimum-cardinality solution contain `h`?
pub fn relevance_bruteforce(pap: &Pap, h: &str, semantics: Semantics) -> Result<bool> {
    pap.hypothesis(h)?;
    Ok(minimum_solutions(pap, semantics)?
        .iter()
        .any(|s| s.iter().any(|v| v == h)))
}

/// One manifestation `g_i` per constraint with `x ⊕ y ⊕ z ⊕ g_i = 0`, so
/// `g_i` holds exactly when the constraint does. Hypotheses are the formula
/// variables.
pub fn reduce_cms_xor3_to_relevance(phi: &Formula, x: &str) -> Result<(Pap, String)> {
    let xor3 = build_named_relation(Family::Xor, Some(3))?;
    for r in phi.relations() {
        if !r.same_tuples(&xor3) {
            return Err(Error::Precondition(format!(
                "XOR₃-formula expected, found relation `{}`",
                r.name()
            )));
        }
    }
    phi.require_var(x)?;
    let mut prefix = "g".to_string();
    while phi.universe().iter().any(|v| v.starts_with(&prefix)) {
        prefix.push('_');
    }
    let gs: Vec<String> = (1..=phi.constraints().len()).map(|i| format!("{prefix}{i}")).collect();
    let mut vars: Vec<String> = phi.universe().to_vec();
    vars.extend(gs.iter().cloned());
    let theory: Vec<(Vec<String>, bool)> = phi
        .constraints()
        .iter()
        .zip(&gs)
        .map(|(c, g)| {
            let mut vs: Vec<String> = c.vars.iter().map(|&v| phi.var_name(v).to_string()).collect();
            vs.push(g.clone());
            (vs, false)
        })
        .collect();
    let pap = Pap::new(&vars, phi.universe(), &gs, &theory)?;
    Ok((pap, x.to_string()))
}

/// PAP text: `vars ...`, `hyp ...`, `man ...`, then `t v1 ... vk = a` per
/// clause.
pub fn parse_pap(text: &str) -> Result<Pap> {
    let mut vars: Option<Vec<&str>> = None;
    let mut hyp: Option<Vec<&str>> = None;
    let mut man: Option<Vec<&str>> = None;
    let mut theory: Vec<(Vec<&str>, bool)> = Vec::new();
    for (i, line) in text.split('\n').enumerate() {
        let lineno = i + 1;
        if line.is_empty() {
            continue;
        }
        if line.contains("  ") || line.starts_with(' ') || line.ends_with(' ') || line.contains('\r') {
            return Err(Error::parse(lineno, "tokens must be separated by single spaces"));
        }
        let toks: Vec<&str> = line.split(' ').collect();
        let slot = match toks[0] {
            "vars" => &mut vars,
            "hyp" => &mut hyp,
            "man" => &mut man,
            "t" => {
                let n = toks.len();
                if n < 4 || toks[n - 2] != "=" || !matches!(toks[n - 1], "0" | "1") {
                    return Err(Error::parse(lineno, "expected `t v1 ... vk = a`"));
                }
                theory.push((toks[1..n - 2].to_vec(), toks[n - 1] == "1"));
                continue;
            }
            other => return Err(Error::parse(lineno, format!("unknown directive `{other}`"))),
        };
        if slot.is_some() {
            return Err(Error::parse(lineno, format!("`{}` given twice", toks[0])));
        }
        *slot = Some(toks[1..].to_vec());
    }
    let missing = |what: &str| Error::parse(0, format!("missing `{what}` line"));
    let vars = vars.ok_or_else(|| missing("vars"))?;
    let hyp = hyp.ok_or_else(|| missing("hyp"))?;
    let man = man.ok_or_else(|| missing("man"))?;
    Pap::new(&vars, &hyp, &man, &theory).map_err(|e| match e {
        Error::InconsistentTheory => e,
        other => Error::parse(0, other.to_string()),
    })
}

pub fn write_pap(pap: &Pap) -> String {
    let line = |kw: &str, vs: Vec<&str>| {
        let mut s = kw.to_string();
        for v in vs {
            s.push(' ');
            s.push_str(v);
        }
        s.push('\n');
        s
    };
    let mut s = line("vars", pap.vars.iter().map(String::as_str).collect());
    s += &line("hyp", pap.hypotheses());
    s += &line("man", pap.manifestations());
    for c in &pap.theory {
        let mut vs: Vec<&str> = c.vars.iter().map(|&v| pap.vars[v].as_str()).collect();
        vs.push("=");
        vs.push(if c.rhs { "1" } else { "0" });
        s += &line("t", vs);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor3(cs: &[[&str; 3]]) -> Formula {
        let r = build_named_relation(Family::Xor, Some(3)).unwrap();
        let mut b = Formula::builder();
        for c in cs {
            b.constrain(&r, c).unwrap();
        }
        b.build()
    }

    #[test]
    fn single_constraint_problem() {
        let (pap, h) = reduce_cms_xor3_to_relevance(&xor3(&[["x", "y", "z"]]), "x").unwrap();
        assert_eq!(write_pap(&pap), "vars x y z g1\nhyp x y z\nman g1\nt x y z g1 = 0\n");
        assert!(is_solution(&pap, &["x"], Semantics::ClosedWorldOnH).unwrap());
        assert!(!is_solution(&pap, &["x"], Semantics::PositiveUnits).unwrap());
        assert!(relevance_bruteforce(&pap, &h, Semantics::ClosedWorldOnH).unwrap());
        let mins = minimum_solutions(&pap, Semantics::ClosedWorldOnH).unwrap();
        assert_eq!(mins, vec![vec!["x"], vec!["y"], vec!["z"]]);
    }

    #[test]
    fn empty_manifestations() {
        let pap = Pap::new(&["a", "b"], &["a"], &[], &[(vec!["a", "b"], true)]).unwrap();
        for sem in [Semantics::ClosedWorldOnH, Semantics::PositiveUnits] {
            assert!(is_solution::<&str>(&pap, &[], sem).unwrap());
            assert!(!relevance_bruteforce(&pap, "a", sem).unwrap());
        }
    }

    #[test]
    fn errors() {
        let (pap, _) = reduce_cms_xor3_to_relevance(&xor3(&[["x", "y", "z"]]), "x").unwrap();
        assert!(matches!(
            relevance_bruteforce(&pap, "g1", Semantics::default()),
            Err(Error::NotAHypothesis(_))
        ));
        let bad = Pap::new(&["a"], &["a"], &[], &[(vec!["a"], true), (vec!["a"], false)]);
        assert!(matches!(bad, Err(Error::InconsistentTheory)));
        // no subset of {a} makes b true when a ⊕ b = 0 is replaced by b = 0
        let none = Pap::new(&["a", "b"], &["a"], &["b"], &[(vec!["b"], false)]).unwrap();
        assert!(matches!(
            relevance_bruteforce(&none, "a", Semantics::default()),
            Err(Error::NoSolution)
        ));
    }

    #[test]
    fn text_round_trip() {
        let text = "vars a b c\nhyp a\nman\nt a b c = 1\n";
        let pap = parse_pap(text).unwrap();
        assert_eq!(write_pap(&pap), text);
        assert!(matches!(parse_pap("vars a\nhyp b\nman\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_pap("vars a\nhyp a\nman\nt a =\n"), Err(Error::Parse { line: 4, .. })));
    }
}
