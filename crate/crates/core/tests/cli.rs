use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use clasp_core::fixtures;

fn clasp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clasp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const THETA: &str = "skeleton S { interval c1; }\n\
    diagram D on S { legs: a@c1, b@c1; vertices: x(x1,x2,x3), y(y1,y2,y3); edges: a-x1, b-y1, x2-y2, x3-y3; }\n";

#[test]
fn theta_reduce_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "theta.dg", THETA);
    let cert = dir.path().join("out.cert");
    let o = clasp(&[
        "reduce",
        "--in",
        s(&input),
        "--strategy",
        "cycle-first",
        "--cert",
        s(&cert),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "D: i3_345: 2\n");
    let text = std::fs::read_to_string(&cert).unwrap();
    assert!(text.starts_with("INPUT "));
    assert!(text.contains("STEP 1 STU-EXPAND"));

    let o = clasp(&["verify", "--cert", s(&cert), "--degree", "2", "--skeleton", "S"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "OK\n");

    // the input file doubles as a skeleton source
    let o = clasp(&["verify", "--cert", s(&cert), "--skeleton", s(&input)]);
    assert_eq!(stdout(&o), "OK\n");
}

#[test]
fn dangling_half_edge_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.dg",
        "skeleton S { interval c1; }\ndiagram D on S { legs: a@c1, b@c1; edges: a-b, q9-b; }\n",
    );
    let o = clasp(&["validate", "--in", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("q9"));
}

#[test]
fn syntax_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.dg",
        "skeleton S { interval c1; }\ndiagram D on S { legs: a@c1 $ }\n",
    );
    let o = clasp(&["validate", "--in", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"));
    let o = clasp(&["validate", "--in", s(&dir.path().join("missing.dg"))]);
    assert_eq!(o.status.code(), Some(2));
    let o = clasp(&["reduce", "--in", s(&bad), "--strategy", "fastest"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_with_self_test() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "theta.dg", THETA);
    let o = clasp(&["validate", "--in", s(&input), "--seed", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("diagram D ok degree=2 edges=4 betti=1"));
    assert!(out.contains("self-test seed=11 relabelings=100 ok"));
}

#[test]
fn invalid_clasper_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "c.dg",
        "skeleton S { interval c1; }\nclasper C on S { leaf A @ c1; annulus R; edge A-R; }\n",
    );
    let o = clasp(&["validate", "--in", s(&input)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("`R`"));
}

#[test]
fn legless_input_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = fixtures::documents()
        .into_iter()
        .find(|(n, _)| n == "legless_theta")
        .unwrap()
        .1;
    let input = write(dir.path(), "legless.dg", &text);
    let o = clasp(&["reduce", "--in", s(&input)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no legs"));
}

#[test]
fn clasper_reduction_prints_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let text = fixtures::documents()
        .into_iter()
        .find(|(n, _)| n == "dumbbell_clasper")
        .unwrap()
        .1;
    let input = write(dir.path(), "dumbbell.dg", &text);
    let o = clasp(&[
        "reduce",
        "--in",
        s(&input),
        "--strategy",
        "first-leg",
        "--fallback",
        "error",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("C: "));
    assert!(out.lines().any(|l| l.starts_with("ledger step=")));
}

#[test]
fn corrupted_certificate_fails() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "theta.dg", THETA);
    let cert = dir.path().join("out.cert");
    clasp(&["reduce", "--in", s(&input), "--cert", s(&cert)]);
    let text = std::fs::read_to_string(&cert).unwrap();
    let flipped = text.replacen("-> +", "-> -", 1);
    let bad = write(dir.path(), "bad.cert", &flipped);
    let o = clasp(&["verify", "--cert", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "FAILED\n");
    assert!(stderr(&o).contains("step 1"));

    let truncated = write(dir.path(), "short.cert", text.lines().next().unwrap());
    let o = clasp(&["verify", "--cert", s(&truncated)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"));
}

#[test]
fn cert_requires_single_item() {
    let dir = tempfile::tempdir().unwrap();
    let two = format!("{THETA}diagram E on S {{ legs: a@c1, b@c1; edges: a-b; }}\n");
    let input = write(dir.path(), "two.dg", &two);
    let o = clasp(&["reduce", "--in", s(&input)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
    let o = clasp(&["reduce", "--in", s(&input), "--cert", s(&dir.path().join("x.cert"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_and_rank_are_deterministic() {
    let args = [
        "enumerate",
        "--skeleton",
        "interval",
        "--degree",
        "3",
        "--filter",
        "connected",
        "--filter",
        "nonzero",
    ];
    let a = clasp(&args);
    let b = clasp(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert_eq!(out.lines().count(), 10);
    assert!(out.lines().all(|l| l.contains(" diagram D")));

    let r = clasp(&["rank", "--skeleton", "skeleton K { circle k; }", "--degree", "2"]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(
        stdout(&r),
        "skeleton=circle\ndegree=2\nclasses=4\ntree_classes=3\nrelations=2\nquotient_rank=2\n\
         dense_quotient_rank=2\ntree_span_rank=2\nconnected=2\nconnected_in_tree_span=2\n"
    );
}

#[test]
fn enumerated_lines_parse_back() {
    let o = clasp(&["enumerate", "--skeleton", "interval", "--degree", "2"]);
    for line in stdout(&o).lines() {
        let (digest, body) = line.split_once(' ').unwrap();
        let d = clasp_core::text::parse_diagram(&format!("skeleton S {{ interval c1; }}\n{body}")).unwrap();
        assert_eq!(clasp_core::canonicalize(&d).form.digest.as_str(), digest);
    }
}
