//! Line-based text formats.
//!
//! Relation file: `relation NAME k`, one k-character 0/1 row per line, then
//! a blank line. Several blocks may follow each other.
//!
//! Formula file: `lang FILE` imports, an optional `var x1 x2 ...` line,
//! `c NAME v1 ... vk` per constraint and an optional `query x`. Relations
//! not found in the imports are looked up among the built-in families.
//!
//! Tokens are separated by single spaces; lines end with LF.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaBuilder};
use crate::relation::{parse_row, relation_by_name, Relation, MAX_ARITY};

fn tokens(line: &str, lineno: usize) -> Result<Vec<&str>> {
    if line.contains('\r') || line.contains('\t') {
        return Err(Error::parse(lineno, "only single spaces and LF line endings are allowed"));
    }
    let toks: Vec<&str> = line.split(' ').collect();
    if toks.iter().any(|t| t.is_empty()) {
        return Err(Error::parse(lineno, "tokens must be separated by single spaces"));
    }
    Ok(toks)
}

pub fn parse_relations(text: &str) -> Result<Vec<Relation>> {
    let mut out: Vec<Relation> = Vec::new();
    let mut current: Option<(String, usize, Vec<u32>, usize)> = None;
    let finish = |out: &mut Vec<Relation>, cur: (String, usize, Vec<u32>, usize)| -> Result<()> {
        let (name, k, slots, line) = cur;
        if out.iter().any(|r| r.name() == name) {
            return Err(Error::parse(line, format!("relation `{name}` defined twice")));
        }
        out.push(Relation::from_slots(name, k, slots)?);
        Ok(())
    };
    for (i, line) in text.split('\n').enumerate() {
        let lineno = i + 1;
        if line.is_empty() {
            if let Some(cur) = current.take() {
                finish(&mut out, cur)?;
            }
            continue;
        }
        match &mut current {
            Some((_, k, slots, _)) => {
                let s = parse_row(line, *k).map_err(|e| Error::parse(lineno, e.to_string()))?;
                if slots.contains(&s) {
                    return Err(Error::parse(lineno, format!("row {line} repeated")));
                }
                slots.push(s);
            }
            None => {
                let toks = tokens(line, lineno)?;
                let [kw, name, k] = toks[..] else {
                    return Err(Error::parse(lineno, "expected `relation NAME k`"));
                };
                if kw != "relation" {
                    return Err(Error::parse(lineno, "expected `relation NAME k`"));
                }
                let k: usize = k
                    .parse()
                    .ok()
                    .filter(|k| (1..=MAX_ARITY).contains(k))
                    .ok_or_else(|| Error::parse(lineno, format!("arity `{k}` is not in 1..={MAX_ARITY}")))?;
                current = Some((name.to_string(), k, Vec::new(), lineno));
            }
        }
    }
    if let Some(cur) = current.take() {
        finish(&mut out, cur)?;
    }
    Ok(out)
}

pub fn write_relation(r: &Relation) -> String {
    let mut s = format!("relation {} {}\n", r.name(), r.arity());
    for slot in r.slots() {
        s.push_str(&r.row_string(slot));
        s.push('\n');
    }
    s.push('\n');
    s
}

pub fn write_relations(rs: &[Relation]) -> String {
    rs.iter().map(write_relation).collect()
}

/// A parsed formula file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaDoc {
    pub imports: Vec<String>,
    pub formula: Formula,
    pub declared_universe: bool,
    pub query: Option<String>,
}

impl FormulaDoc {
    pub fn new(formula: Formula, query: Option<String>) -> Self {
        FormulaDoc {
            imports: Vec::new(),
            formula,
            declared_universe: true,
            query,
        }
    }

    /// The query, or an error naming what is missing.
    pub fn require_query(&self) -> Result<&str> {
        self.query
            .as_deref()
            .ok_or_else(|| Error::Precondition("no query given".into()))
    }
}

/// Parses a formula file; `import` resolves each `lang` argument.
pub fn parse_formula(text: &str, import: &mut dyn FnMut(&str) -> Result<Vec<Relation>>) -> Result<FormulaDoc> {
    let mut imports = Vec::new();
    let mut known: Vec<Relation> = Vec::new();
    let mut builder: Option<FormulaBuilder> = None;
    let mut declared = false;
    let mut query: Option<(String, usize)> = None;
    for (i, line) in text.split('\n').enumerate() {
        let lineno = i + 1;
        if line.is_empty() {
            continue;
        }
        let toks = tokens(line, lineno)?;
        match toks[0] {
            "lang" => {
                let [_, file] = toks[..] else {
                    return Err(Error::parse(lineno, "expected `lang FILE`"));
                };
                for r in import(file).map_err(|e| match e {
                    Error::Parse { line, msg } => Error::parse(lineno, format!("{file}:{line}: {msg}")),
                    other => other,
                })? {
                    match known.iter().find(|q| q.name() == r.name()) {
                        Some(q) if !q.same_tuples(&r) => {
                            return Err(Error::parse(lineno, format!("relation `{}` imported twice with different tuples", r.name())));
                        }
                        Some(_) => {}
                        None => known.push(r),
                    }
                }
                imports.push(file.to_string());
            }
            "var" => {
                if declared || builder.is_some() {
                    return Err(Error::parse(lineno, "`var` must come once, before any constraint"));
                }
                let b = Formula::builder()
                    .declare_universe(&toks[1..])
                    .map_err(|e| Error::parse(lineno, e.to_string()))?;
                builder = Some(b);
                declared = true;
            }
            "c" => {
                let Some(&name) = toks.get(1) else {
                    return Err(Error::parse(lineno, "expected `c NAME v1 ... vk`"));
                };
                let rel = match known.iter().find(|r| r.name() == name) {
                    Some(r) => r.clone(),
                    None => relation_by_name(name)
                        .ok_or_else(|| Error::parse(lineno, format!("unknown relation `{name}`")))?,
                };
                builder
                    .get_or_insert_with(Formula::builder)
                    .constrain(&rel, &toks[2..])
                    .map_err(|e| Error::parse(lineno, e.to_string()))?;
            }
            "query" => {
                let [_, x] = toks[..] else {
                    return Err(Error::parse(lineno, "expected `query x`"));
                };
                if query.is_some() {
                    return Err(Error::parse(lineno, "query given twice"));
                }
                query = Some((x.to_string(), lineno));
            }
            other => return Err(Error::parse(lineno, format!("unknown directive `{other}`"))),
        }
    }
    let formula = builder.unwrap_or_default().build();
    if let Some((x, lineno)) = &query {
        if formula.var_index(x).is_none() {
            return Err(Error::parse(*lineno, format!("query `{x}` is not in the universe")));
        }
    }
    Ok(FormulaDoc {
        imports,
        formula,
        declared_universe: declared,
        query: query.map(|(x, _)| x),
    })
}

pub fn write_formula(doc: &FormulaDoc) -> String {
    let mut s = String::new();
    for file in &doc.imports {
        s.push_str(&format!("lang {file}\n"));
    }
    if doc.declared_universe {
        s.push_str("var");
        for v in doc.formula.universe() {
            s.push(' ');
            s.push_str(v);
        }
        s.push('\n');
    }
    for c in doc.formula.constraints() {
        s.push_str("c ");
        s.push_str(doc.formula.relation_of(c).name());
        for &v in &c.vars {
            s.push(' ');
            s.push_str(doc.formula.var_name(v));
        }
        s.push('\n');
    }
    if let Some(x) = &doc.query {
        s.push_str(&format!("query {x}\n"));
    }
    s
}

pub fn load_relations(path: &Path) -> Result<Vec<Relation>> {
    parse_relations(&std::fs::read_to_string(path)?)
}

/// Reads a formula file; `lang` paths are relative to its directory.
pub fn load_formula(path: &Path) -> Result<FormulaDoc> {
    let text = std::fs::read_to_string(path)?;
    let dir: PathBuf = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_formula(&text, &mut |file| load_relations(&dir.join(file)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_imports(_: &str) -> Result<Vec<Relation>> {
        Err(Error::Precondition("no imports here".into()))
    }

    #[test]
    fn relation_round_trip() {
        let text = "relation R 3\n001\n110\n\nrelation S 1\n1\n\n";
        let rs = parse_relations(text).unwrap();
        assert_eq!(rs.len(), 2);
        assert_eq!(write_relations(&rs), text);
    }

    #[test]
    fn relation_errors_carry_lines() {
        let err = parse_relations("relation R 2\n01\n011\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_relations("relation R 17\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_relations("relation R 1\n1\n1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_relations("relation  R 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn formula_round_trip() {
        let text = "var x y z\nc OR2 x y\nc NAND2 y z\nquery x\n";
        let doc = parse_formula(text, &mut no_imports).unwrap();
        assert_eq!(doc.formula.num_vars(), 3);
        assert_eq!(write_formula(&doc), text);

        let text = "c XOR3 a b c\n";
        let doc = parse_formula(text, &mut no_imports).unwrap();
        assert_eq!(write_formula(&doc), text);
    }

    #[test]
    fn formula_with_import() {
        let mut import = |f: &str| {
            assert_eq!(f, "lang.rel");
            parse_relations("relation R 2\n01\n10\n\n")
        };
        let text = "lang lang.rel\nc R x y\nquery y\n";
        let doc = parse_formula(text, &mut import).unwrap();
        assert_eq!(doc.formula.relations()[0].name(), "R");
        assert_eq!(write_formula(&doc), text);
    }

    #[test]
    fn formula_errors() {
        let cases = [
            ("c FOO x\n", 1),
            ("var x\nc OR2 x y\n", 2),
            ("c OR2 x y\nvar x y\n", 2),
            ("c OR2 x\n", 1),
            ("c OR2 x y\nquery z\n", 2),
            ("c OR2 x y\nfoo\n", 2),
        ];
        for (text, line) in cases {
            match parse_formula(text, &mut no_imports) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
