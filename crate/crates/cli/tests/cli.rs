use std::path::Path;
use std::process::{Command, Output};

use gfsuper_cli::report::{Report, Verdict};

fn gfsuper(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfsuper"))
        .args(args)
        .env("GFSUPER_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn json_report(cache: &Path, args: &[&str]) -> (i32, Report) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = gfsuper(cache, &all);
    let text = String::from_utf8(out.stdout).unwrap();
    let report = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text:?} {:?}", out.stderr));
    (out.status.code().unwrap(), report)
}

#[test]
fn compute_vfield_examples() {
    let dir = tempfile::tempdir().unwrap();
    for (m, n, top, want) in [
        ("1", "1", "4", vec![1, 0, 0, 1, 0]),
        ("0", "1", "3", vec![1, 1, 0, 0]),
        ("0", "2", "4", vec![1, 0, 0, 1, 0]),
    ] {
        let (code, r) = json_report(dir.path(), &["compute-vfield", "--m", m, "--n", n, "--max-degree", top]);
        assert_eq!(code, 0);
        assert_eq!(r.betti.dims(), want.as_slice());
    }
}

#[test]
fn compute_gl_examples() {
    let dir = tempfile::tempdir().unwrap();
    for (n, lambda, top, want) in [
        ("1", "1", "2", vec![1, 2, 1]),
        ("2", "1", "4", vec![1, 1, 0, 1, 1]),
        ("1", "", "1", vec![1, 1]),
    ] {
        let (code, r) = json_report(dir.path(), &["compute-gl", "--n", n, "--lambda", lambda, "--max-degree", top]);
        assert_eq!(code, 0);
        assert_eq!(r.betti.dims(), want.as_slice());
        assert_eq!(r.verdict, Verdict::Match);
    }
}

#[test]
fn invariants_examples() {
    let dir = tempfile::tempdir().unwrap();
    for (m, n, p, want) in [("2", "1", "2", 2), ("1", "1", "1", 1), ("2", "0", "3", 0)] {
        let (code, r) = json_report(dir.path(), &["invariants", "--m", m, "--n", n, "--p", p]);
        assert_eq!(code, 0);
        assert_eq!(r.betti.dims(), &[want]);
        assert_eq!(r.expected.dims(), &[want]);
        assert_eq!(r.verdict, Verdict::Match);
    }
}

#[test]
fn verify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = json_report(dir.path(), &["verify", "--claim", "D", "--m", "1", "--max-degree", "4"]);
    assert_eq!((code, &r.verdict), (0, &Verdict::Match));
    assert_eq!(r.betti.dims(), &[1, 0, 0, 1, 0]);

    let (code, r) = json_report(dir.path(), &["verify", "--claim", "B", "--m", "1", "--n", "2", "--max-degree", "4"]);
    assert_eq!((code, &r.verdict), (0, &Verdict::Match));

    let (code, r) = json_report(dir.path(), &["verify", "--claim", "V1N", "--n", "2", "--max-degree", "4"]);
    assert_eq!((code, &r.verdict), (0, &Verdict::Match));

    let (code, r) = json_report(dir.path(), &["verify", "--claim", "PROP-GLN1", "--n", "2", "--lambda", "1,1", "--max-degree", "5"]);
    assert_eq!((code, &r.verdict), (0, &Verdict::Match));
    assert_eq!(r.betti.dims(), &[1, 2, 1, 1, 2, 1]);
}

#[test]
fn partial_verdict_for_rank_two() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = json_report(dir.path(), &["verify", "--claim", "D", "--m", "2", "--max-degree", "5"]);
    assert_eq!(code, 0);
    assert_eq!(r.verdict, Verdict::Partial(5));
    assert_eq!(r.betti.dims(), &[1, 0, 0, 0, 0, 2]);
    assert_eq!(r.expected.dims(), &[1, 0, 0, 0, 0, 2, 0, 0, 1]);
}

#[test]
fn mismatch_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let (code, mut r) = json_report(dir.path(), &["verify", "--claim", "CONJ", "--m", "1", "--n", "1", "--max-degree", "4"]);
    assert_eq!((code, &r.verdict), (0, &Verdict::Match));
    r.expected = gfsuper_core::BettiTable::new(vec![1, 1]);
    r.verdict = Verdict::compare(&r.betti, &r.expected, 4);
    assert_eq!(r.verdict, Verdict::Mismatch);
    assert_eq!(gfsuper_cli::exit_code(&r, true), gfsuper_cli::EXIT_MISMATCH);
    assert_eq!(gfsuper_cli::exit_code(&r, false), gfsuper_cli::EXIT_OK);
    // V1N is stated for n ≥ 2 only
    let out = gfsuper(dir.path(), &["verify", "--claim", "V1N", "--n", "1", "--max-degree", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["verify", "--claim", "E", "--m", "1", "--max-degree", "2"],
        vec!["compute-gl", "--n", "1", "--lambda", "1,2", "--max-degree", "1"],
        vec!["compute-gl", "--n", "1", "--lambda", "a", "--max-degree", "1"],
        vec!["verify", "--claim", "D", "--max-degree", "2"],
        vec!["verify", "--claim", "B", "--m", "2", "--n", "1", "--max-degree", "2"],
        vec!["compute-vfield", "--m", "1", "--n", "0", "--max-degree", "3", "--dmax", "2"],
        vec!["compute-vfield", "--m", "0", "--n", "0", "--max-degree", "3"],
        vec!["frobnicate"],
    ] {
        let out = gfsuper(dir.path(), &args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn resource_cap_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = gfsuper(
        dir.path(),
        &["compute-vfield", "--m", "2", "--n", "1", "--max-degree", "5", "--max-block", "50", "--no-cache"],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn cache_reproduces_reports() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--claim", "C", "--n", "1", "--max-degree", "4"];
    let (_, first) = json_report(dir.path(), &args);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let (_, cached) = json_report(dir.path(), &args);
    let mut no_cache = args.to_vec();
    no_cache.push("--no-cache");
    let (_, fresh) = json_report(dir.path(), &no_cache);
    for r in [&cached, &fresh] {
        let mut r = r.clone();
        r.wall_time_ms = first.wall_time_ms;
        assert_eq!(r, first);
    }
    std::fs::remove_dir_all(dir.path()).unwrap();
    let (_, rebuilt) = json_report(dir.path(), &args);
    assert_eq!(rebuilt.betti, first.betti);
}

#[test]
fn env_overrides_cache_flag() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let out = gfsuper(
        env_dir.path(),
        &["compute-vfield", "--m", "0", "--n", "1", "--max-degree", "2", "--cache-dir", flag_dir.path().to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(env_dir.path()).unwrap().count(), 1);
    assert_eq!(std::fs::read_dir(flag_dir.path()).unwrap().count(), 0);
}

#[test]
fn table_and_csv_formats() {
    let dir = tempfile::tempdir().unwrap();
    let out = gfsuper(dir.path(), &["compute-vfield", "--m", "0", "--n", "1", "--max-degree", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("computed   1   1   0   0"));
    let out = gfsuper(dir.path(), &["compute-vfield", "--m", "0", "--n", "1", "--max-degree", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("claim,degree,betti,expected,verdict"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn in_process_run_matches_binary() {
    let dir = tempfile::tempdir().unwrap();
    let dir_s = dir.path().to_str().unwrap();
    let o = gfsuper_cli::run([
        "gfsuper", "verify", "--claim", "A", "--m", "1", "--max-degree", "4", "--format", "json", "--cache-dir", dir_s,
        "--no-cache",
    ]);
    assert_eq!(o.code, 0);
    let r: Report = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(r.betti.dims(), &[1, 0, 0, 1, 0]);
    assert_eq!(r.expected.dims(), &[1, 0, 0, 1]);
    let help = gfsuper_cli::run(["gfsuper", "--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("compute-vfield"));
}
