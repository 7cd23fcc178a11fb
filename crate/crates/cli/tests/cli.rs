use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn case(name: &str) -> String {
    fixtures().join("cases").join(format!("{name}.json")).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galcover")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("galcover-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn validate() {
    let o = run(&["validate", &case("hirzebruch-strip")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let dir = temp_dir("validate");
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(case("quartic-three-point")).unwrap()).unwrap();
    v["edges"][0]["planes"] = serde_json::json!([1, 2, 3]);
    let bad = dir.join("bad.json");
    std::fs::write(&bad, v.to_string()).unwrap();
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("no-three-planes-in-a-line"));
}

#[test]
fn present() {
    let o = run(&["present", &case("quartic-three-point")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("generators\ng1\ng1p"));
    assert!(text.contains("# projective relation\ng3p g3 g2p g2 g1p g1"));
    let o = run(&["present", &case("quartic-three-point"), "--affine"]);
    assert!(!stdout(&o).contains("projective"));
}

#[test]
fn analyze() {
    let o = run(&["analyze", &case("quartic-three-point")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: iso-symmetric (24 cosets)"));

    let o = run(&["--json", "analyze", &case("cayley-type-2")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kernel"]["invariants"], "(Z/2)^9");

    let o = run(&["analyze", &case("quintic-four-point-fan"), "--max-cosets", "60"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}

#[test]
fn probe() {
    let c = case("cayley-type-2");
    let o = run(&["probe", &c, "--element", "[g3 g4 g3, g2^-1]"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("disjoint-transposition commutator"));
    assert_eq!(run(&["probe", &c, "--element", "e"]).status.code(), Some(2));
    assert_eq!(run(&["probe", &c, "--element", "g1 g2"]).status.code(), Some(1));
    assert_eq!(run(&["probe", &c, "--element", "g9"]).status.code(), Some(1));
}

#[test]
fn corpus() {
    let dir = temp_dir("corpus");
    let o = run(&["corpus", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let src = fixtures().join("corpus/quartic-three-point.fixture.json");
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(src).unwrap()).unwrap();
    v["case"] = serde_json::json!(case("quartic-three-point"));
    std::fs::write(dir.join("a.fixture.json"), v.to_string()).unwrap();
    let o = run(&["corpus", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    v["expect"]["kernel"] = serde_json::json!("Z/2");
    std::fs::write(dir.join("b.fixture.json"), v.to_string()).unwrap();
    let o = run(&["corpus", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("1/2 fixtures passed"));
}

#[test]
fn audit() {
    let f = fixtures().join("braid/ten-lines-full.txt");
    let o = run(&["audit", f.to_str().unwrap(), "--strands", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("exponent sum: 90 (expected 90)"));
    assert_eq!(run(&["audit", f.to_str().unwrap(), "--strands", "9"]).status.code(), Some(1));

    let dir = temp_dir("audit");
    let short = dir.join("short.txt");
    std::fs::write(&short, "scope: full\nZ2 1 2\nZ2 1 3\n").unwrap();
    assert_eq!(run(&["audit", short.to_str().unwrap(), "--strands", "3"]).status.code(), Some(1));
}
