use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn kirby(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kirby"))
        .args(args)
        .env_remove("KIRBY_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn gluck_on_s2xs2_is_odd() {
    let o = kirby(&["gluck", &path("s2xs2.kd"), "--sphere", "S"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let post = out.split("post:").nth(1).unwrap();
    assert!(post.contains("parity: odd"));
    assert!(post.contains("signature: 0"));
    assert!(post.contains("form_rank: 2"));
    assert!(out.contains("handle K word 1 framing 1"));
}

#[test]
fn check_s2xs2_is_unknown() {
    let o = kirby(&["check", &path("s2xs2.kd"), "--sphere", "S"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "verdict: unknown\n");
}

#[test]
fn check_with_certificate() {
    let o = kirby(&["check", &path("odd_class.kd"), "--sphere", "S", "--cert", &path("odd_class.cert")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("verdict: certified\nwitness: certificate +A -K\n"));
}

#[test]
fn empty_invariants_are_zero() {
    let o = kirby(&["invariants", &path("empty.kd")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "h1_invariant_factors: []\nh2_rank: 0\nform_rank: 0\nsignature: 0\nparity: even\ngram_torsion: []\nthree_handles: false\n"
    );
}

#[test]
fn parse_errors_exit_2_on_stderr() {
    let o = kirby(&["invariants", &path("bad.kd")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("3:17: unknown generator `c`"));
    assert!(err.contains('^'));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(kirby(&["frob"]).status.code(), Some(2));
    assert_eq!(kirby(&["gluck", &path("s2xs2.kd")]).status.code(), Some(2));
    assert_eq!(kirby(&["invariants", "/nonexistent/file.kd"]).status.code(), Some(2));
}

#[test]
fn move_errors_exit_3() {
    let o = kirby(&["surger", &path("s2xs2.kd"), "--sphere", "K", "--dot", "S"]);
    assert_eq!(o.status.code(), Some(3));
    let o = kirby(&["gluck", &path("odd_class.kd"), "--sphere", "A"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn emit_reparses_to_printed_diagram() {
    let dir = std::env::temp_dir().join(format!("kirby-emit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("out.kd");
    let o = kirby(&["apply", &path("pair.kd"), &path("pair.ks"), "--emit", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let emitted = std::fs::read_to_string(&out).unwrap();
    assert_eq!(stdout(&o), emitted);
    let d = kirby_core::parse_diagram(&emitted).unwrap();
    assert_eq!(kirby_core::serialize_diagram(&d), emitted);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn apply_log_prints_chain() {
    let o = kirby(&["apply", &path("pair.kd"), &path("pair.ks"), "--log"]);
    let out = stdout(&o);
    assert!(out.contains("chain:\nstart "));
    assert_eq!(out.lines().filter(|l| l.contains(" -> ")).count(), 5);
}

#[test]
fn trivialize_is_deterministic() {
    let args = ["trivialize", &path("clasp3.kd"), "--sphere", "S", "--handle", "K"];
    let a = kirby(&args);
    let b = kirby(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("verdict: certified\n"));
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_kirby"))
        .args(["trivialize", &path("clasp3.kd"), "--sphere", "S", "--handle", "K"])
        .env("KIRBY_BUDGET", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("verdict: unknown\n"));
}

#[test]
fn selftest_passes() {
    let o = kirby(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with(" passed, 0 failed\n"));
}

#[test]
fn certificate_format_is_documented() {
    let o = kirby(&["check", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("term <handle> sign <+|-> conj <word-expr>"));
}
