//! Plain-text reports: human-readable lines followed by a `[result]` block of
//! `key=value` lines for scripts.

use std::fmt;

use crate::classify::{ClassificationVerdict, PropertyFingerprint};
use crate::formula::{CmsAnswer, ConstraintLanguage, Formula};
use crate::reductions::{Pipeline, ReductionOutput};
use crate::solvers::SolveReport;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    lines: Vec<String>,
    result: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.lines.push(s.into());
        self
    }

    pub fn field(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.result.push((key.to_string(), value.to_string()));
        self
    }

    /// Value of a trailer key, if present.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.result.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        writeln!(f, "[result]")?;
        for (k, v) in &self.result {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

fn flag(b: bool) -> u8 {
    b as u8
}

fn fingerprint_line(fp: &PropertyFingerprint) -> String {
    let widths = |v: &[bool]| -> String {
        match v.iter().position(|&b| b) {
            Some(i) => (i + 1).to_string(),
            None => "-".to_string(),
        }
    };
    format!(
        "0-valid={} 1-valid={} complementive={} horn={} dual-horn={} bijunctive={} affine={} width2-affine={} min-positive-width={} min-negative-width={}",
        flag(fp.zero_valid),
        flag(fp.one_valid),
        flag(fp.complementive),
        flag(fp.horn),
        flag(fp.dual_horn),
        flag(fp.bijunctive),
        flag(fp.affine),
        flag(fp.width2_affine),
        widths(&fp.width_positive),
        widths(&fp.width_negative),
    )
}

pub fn classify_report(lang: &ConstraintLanguage, v: &ClassificationVerdict) -> Report {
    let names: Vec<&str> = lang.relations().iter().map(|r| r.name()).collect();
    let coclone = v.coclone.map_or("none".to_string(), |c| c.to_string());
    let mut r = Report::new();
    r.line(format!("language: {{{}}}", names.join(", ")))
        .line(format!("bucket: {}", v.bucket))
        .line(format!("co-clone: {coclone}"))
        .line(format!("properties: {}", fingerprint_line(&v.fingerprint)));
    r.field("bucket", v.bucket).field("coclone", coclone);
    r
}

fn answer_fields(r: &mut Report, formula: &Formula, a: &CmsAnswer) {
    r.field("verdict", if a.verdict { "yes" } else { "no" })
        .field("min_weight", a.min_weight.map_or("none".to_string(), |w| w.to_string()))
        .field("reason", a.reason.as_str());
    if let Some(w) = &a.witness {
        r.field("witness", w.true_vars(formula).join(","));
    }
}

pub fn solve_report(formula: &Formula, query: &str, s: &SolveReport) -> Report {
    let a = &s.answer;
    let mut r = Report::new();
    r.line(format!("query: {query}"))
        .line(format!("engine: {}", s.engine))
        .line(format!(
            "answer: {} ({})",
            if a.verdict { "yes" } else { "no" },
            a.reason.as_str()
        ));
    if let Some(w) = a.min_weight {
        r.line(format!("minimum weight: {w}"));
    }
    if let Some(m) = &a.witness {
        r.line(format!("witness (true variables): {}", m.true_vars(formula).join(" ")));
    }
    r.field("engine", s.engine);
    answer_fields(&mut r, formula, a);
    r.field("oracle_calls", s.oracle_calls);
    r
}

pub fn reduce_report(pipeline: &Pipeline, outs: &[ReductionOutput]) -> Report {
    let mut r = Report::new();
    r.line(format!("target: {}", pipeline.target))
        .line(format!("pipeline: {pipeline}"));
    for o in outs {
        let mut s = format!(
            "{}: {} variables, {} constraints, {} fresh",
            o.step,
            o.formula.num_vars(),
            o.formula.constraints().len(),
            o.stats.fresh_var_count
        );
        if let Some(n) = o.stats.boost_n {
            s.push_str(&format!(", N={n}"));
        }
        if let Some(k) = o.bound {
            s.push_str(&format!(", bound={k}"));
        }
        if let Some(w) = o.stats.declared_weight_offset {
            s.push_str(&format!(", weight offset +{w}"));
        }
        if o.is_sentinel() {
            s.push_str(", unsatisfiable source replaced by a fixed negative instance");
        }
        r.line(s);
    }
    let last = outs.last().expect("pipelines are non-empty");
    r.field("target", pipeline.target)
        .field("steps", outs.len())
        .field("variables", last.formula.num_vars())
        .field("constraints", last.formula.constraints().len())
        .field("query", &last.query);
    r
}

pub fn verify_report(formula: &Formula, query: &str, engine: &SolveReport, brute: &CmsAnswer) -> Report {
    let agree = engine.answer.key() == brute.key();
    let show = |a: &CmsAnswer| {
        format!(
            "{} min_weight={}",
            if a.verdict { "yes" } else { "no" },
            a.min_weight.map_or("none".to_string(), |w| w.to_string())
        )
    };
    let mut r = Report::new();
    r.line(format!("query: {query}"))
        .line(format!("{}: {}", engine.engine, show(&engine.answer)))
        .line(format!("BruteForce: {}", show(brute)))
        .line(if agree { "engines agree" } else { "ENGINES DISAGREE" }.to_string());
    r.field("agree", agree).field("engine", engine.engine);
    answer_fields(&mut r, formula, &engine.answer);
    r
}

pub fn abduce_report(h: &str, semantics: &str, min_solutions: &[Vec<String>], relevant: bool) -> Report {
    let size = min_solutions.first().map_or(0, Vec::len);
    let mut r = Report::new();
    r.line(format!("hypothesis: {h}"))
        .line(format!("semantics: {semantics}"))
        .line(format!("minimum solution size: {size}"));
    for s in min_solutions {
        r.line(format!("  {{{}}}", s.join(", ")));
    }
    r.line(format!("relevant: {}", if relevant { "yes" } else { "no" }));
    r.field("relevant", if relevant { "yes" } else { "no" })
        .field("min_solution_size", size)
        .field("min_solutions", min_solutions.len());
    r
}
