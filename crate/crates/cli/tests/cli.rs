//! End-to-end runs of the binary: the documented examples, exit codes, seed
//! handling, and the corpus round-trip guarantee.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kprime"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// One shared generated corpus per test binary run.
fn corpus() -> &'static Path {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("corpus");
        let out = bin().arg("corpus").arg(&dir).output().expect("binary runs");
        assert!(out.status.success(), "corpus generation failed: {}", stderr(&out));
        dir
    })
}

fn corpus_file(name: &str) -> String {
    corpus().join(name).display().to_string()
}

#[test]
fn corpus_files_validate_and_round_trip() {
    let mut names: Vec<PathBuf> = std::fs::read_dir(corpus())
        .expect("corpus dir")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().and_then(|e| e.to_str()) != Some("json") || p.ends_with("ntr3.monoid.json"))
        .collect();
    names.sort();
    assert!(names.len() >= 25, "corpus came out small: {names:?}");
    for path in names {
        if path.file_name().and_then(|n| n.to_str()) == Some("manifest.json") {
            continue;
        }
        let out = run(&["validate", path.to_str().expect("utf8 path")]);
        assert_eq!(code(&out), 0, "{}: {}", path.display(), stderr(&out));
        assert!(
            stdout(&out).contains("canonical: yes"),
            "{} is not canonical:\n{}",
            path.display(),
            stdout(&out)
        );
    }
}

#[test]
fn corpus_regenerates_identically() {
    let first = corpus();
    let second = Path::new(env!("CARGO_TARGET_TMPDIR")).join("corpus-again");
    let out = bin().arg("corpus").arg(&second).output().expect("binary runs");
    assert!(out.status.success());
    let mut checked = 0;
    for entry in std::fs::read_dir(first).expect("corpus dir") {
        let path = entry.expect("entry").path();
        let name = path.file_name().expect("file name");
        let a = std::fs::read(&path).expect("readable");
        let b = std::fs::read(second.join(name)).expect("second copy");
        assert_eq!(a, b, "{} differs between runs", path.display());
        checked += 1;
    }
    assert!(checked >= 25);
}

#[test]
fn k0_example_reports_infinite_cyclic() {
    let out = run(&["k0", &corpus_file("ntr3.monoid"), "--flavor", "pc", "--bound", "4"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("rank 1, torsion none"), "{text}");
    assert!(text.contains("checks: devissage pass, exactness pass, additivity pass"), "{text}");
}

#[test]
fn burnside_example_prints_the_marks() {
    let out = run(&["burnside", &corpus_file("z2.group")]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("rank 2, marks [[2,0],[1,1]]"), "{text}");
}

#[test]
fn pc_example_reports_a_witness() {
    let out = run(&["pc", &corpus_file("idempotent.monoid")]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("false"), "{text}");
    assert!(text.contains("witness"), "{text}");

    let out = run(&["pc", &corpus_file("ntr3.monoid")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("pc(ntr3): true"));

    let out = run(&["pc", &corpus_file("mixed.nset")]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("cycle away from the basepoint"), "{}", stdout(&out));
}

#[test]
fn axiom_reports_reproduce_by_seed() {
    let ntr2 = corpus_file("ntr2.monoid");
    let args = ["acgw", ntr2.as_str(), "--samples", "40", "--json"];
    let by_flag = bin().args(args).args(["--seed", "5"]).output().expect("runs");
    let again = bin().args(args).args(["--seed", "5"]).output().expect("runs");
    let by_env = bin().args(args).env("KPRIME_SEED", "5").output().expect("runs");
    assert_eq!(code(&by_flag), 0, "{}", stderr(&by_flag));
    assert_eq!(stdout(&by_flag), stdout(&again));
    assert_eq!(stdout(&by_flag), stdout(&by_env));
    let other = bin().args(args).args(["--seed", "6"]).output().expect("runs");
    assert_ne!(stdout(&by_flag), stdout(&other));
}

#[test]
fn bad_input_exits_two_with_the_line() {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let bad = dir.join("bad.monoid");
    std::fs::write(&bad, "monoid broken 3\n0 0 0\n0 1\n").expect("writable tmp");
    let out = run(&["validate", bad.to_str().expect("utf8")]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let out = run(&["k0", &corpus_file("ntr2.monoid"), "--flavor", "weird"]);
    assert_eq!(code(&out), 2);

    let out = run(&["validate", dir.join("no-such-file.monoid").to_str().expect("utf8")]);
    assert_eq!(code(&out), 2);

    let out = run(&["localize", &corpus_file("s3plus.monoid"), "2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("abelian"), "{}", stderr(&out));
}

#[test]
fn graph_flavors_need_no_file() {
    let out = run(&["g0", "--flavor", "nset", "--bound", "6"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("rank 6, torsion none"), "{}", stdout(&out));

    let out = run(&["g0", "--flavor", "fgnset", "--bound", "5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("rank 5, torsion none"), "{}", stdout(&out));

    let out = run(&["g0", &corpus_file("ntr2.monoid"), "--flavor", "nset"]);
    assert_eq!(code(&out), 2);

    let out = run(&["enumerate", "--flavor", "pc"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn k0_json_carries_the_schema() {
    let out = run(&["k0", &corpus_file("ntr2.monoid"), "--bound", "3", "--json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    for key in ["monoid", "flavor", "bound", "generators", "relations", "rank", "torsion", "classmap", "checks"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    for key in ["devissage", "exactness", "additivity"] {
        assert!(report["checks"].get(key).is_some(), "missing checks.{key}");
    }
    assert_eq!(report["rank"], 1);
    assert_eq!(report["monoid"], "ntr2");
}

#[test]
fn out_flag_writes_the_json_report() {
    let dest = Path::new(env!("CARGO_TARGET_TMPDIR")).join("k0-report.json");
    let out = run(&[
        "k0",
        &corpus_file("ntr3.monoid"),
        "--bound",
        "4",
        "--out",
        dest.to_str().expect("utf8"),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("rank 1"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&dest).expect("report file")).expect("json");
    assert_eq!(report["monoid"], "ntr3");
}

#[test]
fn dot_export_draws_the_graph() {
    let dest = Path::new(env!("CARGO_TARGET_TMPDIR")).join("rho.dot");
    let out = run(&["validate", &corpus_file("rho.nset"), "--out", dest.to_str().expect("utf8")]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let dot = std::fs::read_to_string(&dest).expect("dot file");
    assert!(dot.starts_with("digraph rho {"), "{dot}");
    assert!(dot.contains("->"), "{dot}");
}

#[test]
fn localize_prints_the_sequence() {
    let out = run(&["localize", &corpus_file("ntr3.monoid"), "e2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("quotient Z, middle Z, local 0"), "{text}");
    assert!(text.contains("kernel equals image: true"), "{text}");
}

#[test]
fn devissage_rejects_infinite_length() {
    let out = run(&["devissage", &corpus_file("stab1p1.monoid")]);
    assert_eq!(code(&out), 2, "{}", stdout(&out));

    let out = run(&["devissage", &corpus_file("ntr4.monoid")]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("all classes decompose: true"));
}

#[test]
fn verify_paper_passes() {
    let out = run(&["verify-paper"]);
    assert_eq!(code(&out), 0, "{}\n{}", stdout(&out), stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("8/8 criteria pass"), "{text}");
    assert!(!text.contains("[FAIL]"), "{text}");
}
