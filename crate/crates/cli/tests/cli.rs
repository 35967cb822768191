use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use klein_cli::schema::{BoundOut, FootprintOut, OracleOut, TableOut, TraceOut, VarietyOut, VerifyOut};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn klein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klein"))
        .args(args)
        .current_dir(root())
        .env_remove("KLEIN_CONFIG")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

#[test]
fn golden_outputs() {
    for cmd in ["footprint", "bound", "table"] {
        for fmt in ["text", "json", "csv"] {
            let o = klein(&[cmd, "--format", fmt]);
            assert_eq!(o.status.code(), Some(0), "{cmd} {fmt}: {}", stderr(&o));
            assert_eq!(stdout(&o), golden(&format!("{cmd}.{fmt}")), "{cmd} --format {fmt}");
        }
    }
}

/// Deserializes and reserializes, expecting the same bytes.
fn round_trip<T: serde::Serialize + serde::de::DeserializeOwned>(text: &str) -> T {
    let v: T = serde_json::from_str(text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    v
}

#[test]
fn json_matches_the_schemas() {
    let fp: FootprintOut = round_trip(&golden("footprint.json"));
    assert_eq!(fp.size, 22);
    assert_eq!(fp.monomials.last().unwrap().monomial, "X^6*Y^2");

    let b: BoundOut = round_trip(&golden("bound.json"));
    let y = b.classes.iter().find(|c| c.monomial == "Y").unwrap();
    assert_eq!((y.baseline, y.bound, y.source.as_str()), (14, 18, "trace"));

    let t: TableOut = round_trip(&golden("table.json"));
    let kd: Vec<(usize, usize)> = t.rows.iter().filter(|r| !r.supplementary).map(|r| (r.k, r.d)).collect();
    assert_eq!(
        kd,
        [(1, 22), (2, 19), (3, 18), (4, 16), (5, 15), (7, 13), (8, 12), (10, 10), (11, 9), (13, 7), (14, 6), (15, 5), (17, 4), (18, 3), (20, 2)]
    );
    let behind: Vec<usize> =
        t.rows.iter().filter(|r| r.comparison.as_deref() == Some("one less")).map(|r| r.k).collect();
    assert_eq!(behind, [4, 14, 15, 18]);

    let v: VarietyOut = round_trip(&stdout(&klein(&["variety", "--format", "json"])));
    assert_eq!((v.n, v.fano), (22, Some(true)));
    assert!(v.points.contains(&vec![0, 0]));

    let o = klein(&["oracle", "--lm", "X*Y", "--mode", "exhaustive", "--format", "json"]);
    let or: OracleOut = round_trip(&stdout(&o));
    assert_eq!((or.min, or.delta, or.ok, or.states), (15, 15, true, 4096));

    let o = klein(&["trace-verify", "traces/xy.trace", "--samples", "3", "--format", "json"]);
    let tr: TraceOut = round_trip(&stdout(&o));
    assert_eq!((tr.monomial.as_str(), tr.bound), ("X*Y", 15));
    assert!(tr.leaves.iter().all(|l| l.violations == Some(0)));
}

#[test]
fn verify_all_is_reproducible() {
    let a = klein(&["verify-all", "--seed", "42"]);
    let b = klein(&["verify-all", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0), "{}{}", stdout(&a), stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("0 failed"));
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    std::fs::write(&cfg, "[limits]\nsamples = 5000\nleaf_samples = 3\nweight_checks = 50\noracle_coefficients = 6\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let one = klein(&["verify-all", "--config", cfg, "--jobs", "1", "--format", "json"]);
    let four = klein(&["verify-all", "--config", cfg, "--jobs", "4", "--format", "json"]);
    assert_eq!(one.status.code(), Some(0), "{}", stderr(&one));
    assert_eq!(one.stdout, four.stdout);
    let v: VerifyOut = round_trip(&stdout(&one));
    assert!(v.passed);

    let s1 = klein(&["oracle", "--lm", "X^3*Y^2", "--mode", "sample", "--samples", "30000", "--seed", "5", "--jobs", "1"]);
    let s3 = klein(&["oracle", "--lm", "X^3*Y^2", "--mode", "sample", "--samples", "30000", "--seed", "5", "--jobs", "3"]);
    assert_eq!(s1.status.code(), Some(0));
    assert_eq!(s1.stdout, s3.stdout);
}

#[test]
fn config_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("hermitian.toml");
    std::fs::write(&cfg, "format = \"csv\"\n[field]\nmodulus = 7\n[ideal]\ngenerators = [\"X^3 + Y^2 + Y\"]\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_klein"))
        .args(["variety"])
        .env("KLEIN_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("x0,x1\n"));
    assert_eq!(text.lines().count(), 9);

    // The built-in traces belong to the default curve; other curves get
    // the divisibility bounds.
    let o = Command::new(env!("CARGO_BIN_EXE_klein"))
        .args(["bound", "--format", "json"])
        .env("KLEIN_CONFIG", &cfg)
        .output()
        .unwrap();
    let b: BoundOut = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(b.n, 8);
    assert!(b.classes.iter().all(|c| c.source == "divisibility" && c.bound == c.baseline));
}

#[test]
fn traces_from_a_directory() {
    let o = klein(&["table", "--traces", "traces", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), golden("table.csv"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["frobnicate"][..],
        &["footprint", "--format", "yaml"],
        &["oracle", "--lm", "X^9", "--mode", "gray"],
        &["oracle", "--lm", "Y", "--mode", "gray", "--samples", "5"],
        &["oracle", "--lm", "X^6*Y^2", "--mode", "exhaustive"],
        &["bound", "--auto", "--traces", "traces"],
        &["bound", "--depth", "2"],
        &["trace-verify", "no/such/file.trace"],
        &["footprint", "--config", "no/such/config.toml"],
    ] {
        let o = klein(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    let o = klein(&["oracle", "--lm", "X^9", "--mode", "gray"]);
    assert!(stderr(&o).contains("--lm"));
}

#[test]
fn rejected_traces_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let src = std::fs::read_to_string(root().join("traces/y.trace")).unwrap();
    let bad = dir.path().join("bad.trace");
    std::fs::write(&bad, src.replacen("claim X^4", "claim X^3", 1)).unwrap();
    let o = klein(&["trace-verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not justified"), "{}", stderr(&o));

    std::fs::write(&bad, "lm Y\nbranch a1 {\n").unwrap();
    assert_eq!(klein(&["trace-verify", bad.to_str().unwrap()]).status.code(), Some(1));

    let o = klein(&["verify-all", "--traces", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL casebound.traces"));
    assert!(stderr(&o).contains("casebound.traces"));
}

#[test]
fn trace_header_can_come_from_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("y.trace");
    std::fs::write(&f, "mul Y^2\nred K head\nred F full\nbranch a1 {\n  claim X^4\n} else {\n}\n").unwrap();
    let o = klein(&["trace-verify", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = klein(&["trace-verify", f.to_str().unwrap(), "--lm", "Y", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("path,claims,established,status,samples,violations\n"));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(klein(&["--help"]).status.code(), Some(0));
    assert_eq!(klein(&["--version"]).status.code(), Some(0));
}
