use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cardminsat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    let tail = text.split("[result]\n").nth(1)?;
    tail.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

#[test]
fn classify_each_bucket_language() {
    let cases = [
        ("trivial", "Trivial0Valid"),
        ("horn", "PolyHorn"),
        ("width2affine", "PolyWidth2Affine"),
        ("theta2", "Theta2Complete"),
    ];
    for (file, bucket) in cases {
        let path = corpus().join("languages").join(format!("{file}.rel"));
        let o = run(&["classify", path.to_str().unwrap()]);
        assert!(o.status.success(), "{file}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(field(&stdout(&o), "bucket"), Some(bucket), "{file}");
    }
}

#[test]
fn verify_accepts_the_whole_corpus() {
    let mut count = 0;
    for dir in ["buckets", "xor3", "reductions"] {
        for entry in std::fs::read_dir(corpus().join(dir)).unwrap() {
            let path = entry.unwrap().path();
            let o = run(&["verify", path.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(0), "{}: {}", path.display(), stdout(&o));
            assert_eq!(field(&stdout(&o), "agree"), Some("true"));
            count += 1;
        }
    }
    assert!(count >= 20);
}

#[test]
fn definability_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lang.rel");
    std::fs::write(&path, "relation IMPL 2\n00\n01\n11\n\nrelation EQ 2\n00\n11\n\n").unwrap();
    let o = run(&["classify", path.to_str().unwrap(), "--define", "EQ"]);
    let text = stdout(&o);
    assert_eq!(field(&text, "definable"), Some("yes"));
    assert!(text.contains("c IMPL x y"), "{text}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cms");
    std::fs::write(&bad, "c OR2 x y\nc OR2  y z\n").unwrap();
    let o = run(&["solve", bad.to_str().unwrap(), "--query", "x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let big = dir.path().join("big.cms");
    let text: String = (0..6).map(|i| format!("c OR2 a{i} b{i}\n")).collect::<String>() + "query a0\n";
    std::fs::write(&big, text).unwrap();
    let o = run(&["verify", big.to_str().unwrap(), "--max-vars", "8"]);
    assert_eq!(o.status.code(), Some(3));

    let o = run(&["weakbase", "IQ"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reduce_writes_a_solvable_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ii2.cms");
    let src = corpus().join("reductions").join("or2_path.cms");
    let o = run(&[
        "reduce",
        src.to_str().unwrap(),
        "--target",
        "II2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(field(&stdout(&o), "target"), Some("II2"));
    assert!(out.with_extension("rel").exists());

    let before = run(&["solve", src.to_str().unwrap()]);
    let after = run(&["solve", out.to_str().unwrap()]);
    assert!(after.status.success(), "{}", String::from_utf8_lossy(&after.stderr));
    assert_eq!(field(&stdout(&before), "verdict"), field(&stdout(&after), "verdict"));
    let w = |o: &Output| field(&stdout(o), "min_weight").unwrap().parse::<usize>().unwrap();
    // two clauses: 4p + 1 extra
    assert_eq!(w(&after), w(&before) + 9);
}

#[test]
fn reduce_rejects_tractable_targets() {
    let src = corpus().join("reductions").join("or2_path.cms");
    let o = run(&["reduce", src.to_str().unwrap(), "--target", "ID1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn weakbase_prints_a_relation_file() {
    let o = run(&["weakbase", "IS00", "--width", "2"]);
    assert!(o.status.success());
    let rels = cardminsat::format::parse_relations(&stdout(&o)).unwrap();
    assert_eq!(rels.len(), 1);
    assert_eq!(rels[0].arity(), 5);
}

#[test]
fn abduce_relevance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.pap");
    std::fs::write(&path, "vars x1 x2 x3 g\nhyp x1 x2 x3\nman g\nt x1 x2 x3 g = 0\n").unwrap();
    let o = run(&["abduce", path.to_str().unwrap(), "--hyp", "x1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(field(&text, "relevant"), Some("yes"));
    assert_eq!(field(&text, "min_solution_size"), Some("1"));
    assert_eq!(field(&text, "min_solutions"), Some("3"));
}
