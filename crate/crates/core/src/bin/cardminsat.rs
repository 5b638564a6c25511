use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cardminsat::abduction::{minimum_solutions, parse_pap, relevance_bruteforce, Semantics};
use cardminsat::brute::{cms_bruteforce_with, EnumLimits};
use cardminsat::classify::{classify_cms, conjunction_definability, weak_base, CoCloneId, Definability};
use cardminsat::format::{load_formula, load_relations, write_formula, write_relation, write_relations, FormulaDoc};
use cardminsat::reductions::{compose_chain, Pipeline, Step};
use cardminsat::report::{abduce_report, classify_report, reduce_report, solve_report, verify_report, Report};
use cardminsat::solvers::{solve, EngineChoice};
use cardminsat::{relation_by_name, ConstraintLanguage, Error, Relation, Result};

#[derive(Parser)]
#[command(name = "cardminsat", version, about = "Cardinality-minimal satisfiability toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the language given as a relation file.
    Classify {
        file: PathBuf,
        /// Also test whether this relation is a conjunction over the language.
        #[arg(long)]
        define: Option<String>,
    },
    /// Decide whether the query is true in some minimum-weight model.
    Solve {
        file: PathBuf,
        #[arg(long)]
        query: Option<String>,
        /// auto, horn, w2a, generic or brute.
        #[arg(long, default_value = "auto")]
        engine: String,
    },
    /// Reduce an OR² (or XOR₃) instance to the weak base of a hard co-clone.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        query: Option<String>,
        /// Co-clone tag such as II2, IL2 or IS00.
        #[arg(long)]
        target: String,
        /// Width for the IS families.
        #[arg(long)]
        width: Option<usize>,
        /// Write the reduced formula here (relations go next to it as .rel).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the dispatched engine with brute force.
    Verify {
        file: PathBuf,
        #[arg(long)]
        query: Option<String>,
        /// Largest universe brute force will enumerate.
        #[arg(long, default_value_t = 24)]
        max_vars: usize,
    },
    /// Print the weak base of a co-clone as a relation file.
    Weakbase {
        tag: String,
        #[arg(long)]
        width: Option<usize>,
    },
    /// Relevance of a hypothesis for cardinality-minimal explanations.
    Abduce {
        file: PathBuf,
        #[arg(long)]
        hyp: String,
        /// cw (closed world on hypotheses) or pu (positive units).
        #[arg(long, default_value = "cw")]
        semantics: String,
    },
}

const EXIT_OTHER: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_DISAGREE: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        Error::Guard { .. } => EXIT_GUARD,
        _ => EXIT_OTHER,
    }
}

fn query_of(doc: &FormulaDoc, flag: Option<String>) -> Result<String> {
    match flag {
        Some(q) => {
            doc.formula.require_var(&q)?;
            Ok(q)
        }
        None => doc.require_query().map(str::to_string),
    }
}

fn classify(file: &Path, define: Option<String>) -> Result<Report> {
    let rels = load_relations(file)?;
    let lang = ConstraintLanguage::new(rels.clone())?;
    let mut report = classify_report(&lang, &classify_cms(&lang));
    if let Some(name) = define {
        let target = rels
            .iter()
            .find(|r| r.name() == name)
            .cloned()
            .or_else(|| relation_by_name(&name))
            .ok_or_else(|| Error::UnknownRelation(name.clone()))?;
        let others: Vec<Relation> = rels.into_iter().filter(|r| r.name() != name).collect();
        let base = ConstraintLanguage::new(others)?;
        match conjunction_definability(&target, &base, false)? {
            Definability::Definable(w) => {
                report.line(format!("{name} is a conjunction over the other relations:"));
                for l in write_formula(&FormulaDoc::new(w, None)).lines() {
                    report.line(format!("  {l}"));
                }
                report.field("definable", "yes");
            }
            Definability::NotDefinable => {
                report.line(format!("{name} is not a conjunction over the other relations"));
                report.field("definable", "no");
            }
        }
    }
    Ok(report)
}

fn solve_cmd(file: &Path, query: Option<String>, engine: &str) -> Result<Report> {
    let doc = load_formula(file)?;
    let q = query_of(&doc, query)?;
    let choice: EngineChoice = engine.parse()?;
    let rep = solve(&doc.formula, &q, choice)?;
    Ok(solve_report(&doc.formula, &q, &rep))
}

/// Writes the formula and, when needed, a relation file next to it.
fn write_output(out: &Path, formula: &cardminsat::Formula, query: &str) -> Result<()> {
    let custom: Vec<Relation> = formula
        .relations()
        .iter()
        .filter(|r| relation_by_name(r.name()).is_none_or(|b| !b.same_tuples(r)))
        .cloned()
        .collect();
    let mut doc = FormulaDoc::new(formula.clone(), Some(query.to_string()));
    if !custom.is_empty() {
        let rel_path = out.with_extension("rel");
        std::fs::write(&rel_path, write_relations(&custom))?;
        let name = rel_path
            .file_name()
            .and_then(|s| s.to_str())
            .ok_or_else(|| Error::Precondition("output path has no file name".into()))?;
        doc.imports.push(name.to_string());
    }
    std::fs::write(out, write_formula(&doc))?;
    Ok(())
}

fn reduce(file: &Path, query: Option<String>, target: &str, width: Option<usize>, out: Option<PathBuf>) -> Result<Report> {
    let doc = load_formula(file)?;
    let q = query_of(&doc, query)?;
    let target = CoCloneId::parse(target, width)?;
    let mut pipeline = compose_chain(target)?;
    // an XOR₃ source can skip straight to the gadget
    let xor3 = relation_by_name("XOR3").expect("built-in");
    let is_xor3 = !doc.formula.relations().is_empty() && doc.formula.relations().iter().all(|r| r.same_tuples(&xor3));
    if is_xor3 && pipeline.steps.len() > 1 {
        pipeline = Pipeline {
            target,
            steps: vec![Step::WeakBase(target)],
        };
    }
    let outs = pipeline.run(&doc.formula, &q)?;
    let report = reduce_report(&pipeline, &outs);
    if let Some(out) = out {
        let last = outs.last().expect("pipelines are non-empty");
        write_output(&out, &last.formula, &last.query)?;
    }
    Ok(report)
}

fn verify(file: &Path, query: Option<String>, max_vars: usize) -> Result<(Report, bool)> {
    let doc = load_formula(file)?;
    let q = query_of(&doc, query)?;
    let brute = cms_bruteforce_with(&doc.formula, &q, EnumLimits::vars(max_vars))?;
    let engine = solve(&doc.formula, &q, EngineChoice::Auto)?;
    let agree = engine.answer.key() == brute.key();
    Ok((verify_report(&doc.formula, &q, &engine, &brute), agree))
}

fn weakbase(tag: &str, width: Option<usize>) -> Result<String> {
    let c = CoCloneId::parse(tag, width)?;
    Ok(write_relation(&weak_base(c)?))
}

fn abduce(file: &Path, hyp: &str, semantics: &str) -> Result<Report> {
    let pap = parse_pap(&std::fs::read_to_string(file)?)?;
    let sem: Semantics = semantics.parse()?;
    let relevant = relevance_bruteforce(&pap, hyp, sem)?;
    let mins = minimum_solutions(&pap, sem)?;
    Ok(abduce_report(hyp, &sem.to_string(), &mins, relevant))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<(String, u8)> = match cli.command {
        Command::Classify { file, define } => classify(&file, define).map(|r| (r.to_string(), 0)),
        Command::Solve { file, query, engine } => solve_cmd(&file, query, &engine).map(|r| (r.to_string(), 0)),
        Command::Reduce {
            file,
            query,
            target,
            width,
            out,
        } => reduce(&file, query, &target, width, out).map(|r| (r.to_string(), 0)),
        Command::Verify { file, query, max_vars } => {
            verify(&file, query, max_vars).map(|(r, ok)| (r.to_string(), if ok { 0 } else { EXIT_DISAGREE }))
        }
        Command::Weakbase { tag, width } => weakbase(&tag, width).map(|s| (s, 0)),
        Command::Abduce { file, hyp, semantics } => abduce(&file, &hyp, &semantics).map(|r| (r.to_string(), 0)),
    };
    match result {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
