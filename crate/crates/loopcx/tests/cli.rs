use std::path::PathBuf;

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixture_dir().join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["loopcx"];
    full.extend_from_slice(args);
    let code = loopcx::cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("loopcx-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn homology_tables() {
    let (code, out, _) = run(&["homology", &fixture("rp2.json")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("degree\trank\ttorsion\n"));
    assert!(out.contains("0\t1\t-\n"));
    assert!(out.contains("1\t0\t2\n"));
    assert!(out.contains("2\t0\t-\n"));
    let (code, out, _) = run(&["--format", "json", "homology", &fixture("torus7.json")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let ranks: Vec<u64> = v.as_array().unwrap().iter().map(|h| h["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, vec![1, 2, 1]);
}

#[test]
fn hochschild_of_the_circle() {
    let (code, out, _) = run(&["hh", &fixture("s1_3.json"), "--degree", "0", "--max-weight", "3"]);
    assert_eq!(code, 0);
    let row = out.lines().nth(1).unwrap();
    let cols: Vec<&str> = row.split('\t').collect();
    assert_eq!(&cols[..3], &["0", "3", "4"]);
}

#[test]
fn cobar_listing() {
    let (code, out, _) = run(&["cobar", &fixture("boundary_tetrahedron.json"), "--show-differential"]);
    assert_eq!(code, 0);
    assert!(out.contains("t12"));
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["hh"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
    let (code, _, err) = run(&["homology", "/nonexistent/k.json"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
}

#[test]
fn resolve_reproduces_the_shipped_ledger() {
    let (code, out, _) = run(&["--fixtures", fixture_dir().to_str().unwrap(), "resolve"]);
    assert_eq!(code, 0);
    assert_eq!(out, std::fs::read_to_string(fixture_dir().join("ledger.txt")).unwrap());
}

#[test]
fn verification_depends_on_the_ledger() {
    let fx = fixture_dir();
    let (code, out, _) = run(&["--fixtures", fx.to_str().unwrap(), "verify", "freeloop"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&["verify", "s1"]);
    assert_eq!(code, 0, "{out}");

    let dir = scratch("tamper");
    let text = std::fs::read_to_string(fx.join("ledger.txt")).unwrap();
    let line = text.lines().find(|l| l.starts_with("d5_split_koszul")).unwrap();
    let tampered = text.replace(line, &line.replacen(" 1", " 0", 1));
    assert_ne!(tampered, text);
    let ledger = dir.join("ledger.txt");
    std::fs::write(&ledger, tampered).unwrap();
    let (code, out, _) = run(&["--fixtures", fx.to_str().unwrap(), "--ledger", ledger.to_str().unwrap(), "verify", "freeloop"]);
    assert_eq!(code, 1);
    assert!(out.contains("\tFAIL\t"), "{out}");
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let args = ["verify", "signs"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.0, 0);
    assert_eq!(a, b);
    let dir = scratch("out");
    let path = dir.join("signs.tsv");
    let (code, out, _) = run(&["--out", path.to_str().unwrap(), "verify", "signs"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(path).unwrap(), a.1);
}

#[test]
fn report_without_fixtures() {
    let dir = scratch("empty");
    let (code, out, _) = run(&["--fixtures", dir.to_str().unwrap(), "report"]);
    assert_eq!(code, 0);
    assert!(out.contains("no fixtures"));
}
