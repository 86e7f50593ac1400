//! End-to-end tests of the command-line binary: exit codes, output shapes,
//! and config plumbing.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multsidon"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf8")
}

fn write_set(dir: &Path, name: &str, elements: &[u64]) -> String {
    let path = dir.join(name);
    let body: String = elements.iter().map(|m| format!("{m}\n")).collect();
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn verify_violation_exits_one_with_canonical_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_set(dir.path(), "bad.txt", &[1, 2, 3, 4, 8, 12]);
    let out = run(&["--format", "json", "verify", "--input", &path, "--k", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["k_sidon_ok"], serde_json::json!(false));
    assert_eq!(v["violation"]["lhs"], serde_json::json!([1, 4, 12]));
    assert_eq!(v["violation"]["rhs"], serde_json::json!([2, 3, 8]));
    assert_eq!(v["violation"]["product"], serde_json::json!(48));
    assert_eq!(v["square_free_ok"], serde_json::json!(false));
}

#[test]
fn verify_clean_set_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_set(dir.path(), "ok.txt", &[2, 3, 5, 7, 11, 13]);
    let out = run(&["verify", "--input", &path, "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn search_exact_small_reports_optimal_full_range() {
    let out = run(&["--format", "json", "search", "--exact", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["size"], serde_json::json!(5));
    assert_eq!(v["optimal"], serde_json::json!(true));
}

#[test]
fn census_row_matches_direct_count() {
    let out = run(&["--format", "csv", "census", "--x", "20", "--i", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,i,N_exact,M_exact,bound_value,remark_exponent"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("20,3,19,5,"), "row was {row:?}");
}

#[test]
fn invalid_inputs_exit_two() {
    // Unreadable set file.
    let out = run(&["verify", "--input", "/nonexistent/set.txt", "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown flag.
    let out = run(&["census", "--x", "20", "--definitely-not-a-flag"]);
    assert_eq!(out.status.code(), Some(2));
    // Out-of-range parameter: sieve smaller than the scan needs.
    let out = run(&["--sieve-limit", "10", "decompose", "--n", "100"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty(), "diagnostic goes to standard error");
    // Zero budget violates the budget invariant.
    let out = run(&["search", "--exact", "--n", "10", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(2));
    // Missing search mode.
    let out = run(&["search", "--n", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn encode_flags_hexagons_with_exit_one() {
    // Six semiprimes chaining the primes 2-3-5-7-11-13 into a cycle:
    // 6*35*143 = 15*77*26 = 30030.
    let dir = tempfile::tempdir().unwrap();
    let path = write_set(dir.path(), "chain.txt", &[6, 15, 26, 35, 77, 143]);
    let out = run(&["--format", "json", "encode", "--n", "150", "--input", &path]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["hexagon"].is_object());
    let lhs: Vec<u64> =
        v["equal_products"]["lhs"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    let rhs: Vec<u64> =
        v["equal_products"]["rhs"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    let p: u128 = lhs.iter().map(|&x| x as u128).product();
    let q: u128 = rhs.iter().map(|&x| x as u128).product();
    assert_eq!(p, q, "labels multiply to the same product");
    assert_eq!(p, 30030);

    // A 3-Sidon input gives a six-cycle-free graph and exit 0.
    let path = write_set(dir.path(), "primes.txt", &[2, 3, 5, 7, 11, 13]);
    let out = run(&["encode", "--n", "13", "--input", &path]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn encode_exports_edge_list() {
    let dir = tempfile::tempdir().unwrap();
    let set = write_set(dir.path(), "set.txt", &[6, 26, 36]);
    let export = dir.path().join("edges.txt");
    let out = run(&[
        "encode",
        "--n",
        "100",
        "--input",
        &set,
        "--export",
        export.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&export).unwrap();
    assert_eq!(text, "3 2 6\n9 4 36\n13 2 26\n");
}

#[test]
fn ledger_csv_shape_and_exit() {
    let out = run(&["--format", "csv", "ledger", "--n", "10000", "--base"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("part_key,h,subkey,k,l,edge_count,cap,cap_kind"));
    assert!(text.lines().any(|l| l.starts_with("G0,")), "has the small-endpoint row");
    assert!(text.lines().any(|l| l.starts_with("GK1,")), "has the large-prime row");
    assert!(text.lines().last().unwrap().starts_with("skipped_squares,"));
}

#[test]
fn config_file_sets_format_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "format=json\n").unwrap();
    let out = run(&["--config", conf.to_str().unwrap(), "census", "--x", "20", "--i", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).trim_start().starts_with('['), "config selects json");

    let out = run(&[
        "--config",
        conf.to_str().unwrap(),
        "--format",
        "csv",
        "census",
        "--x",
        "20",
        "--i",
        "2",
    ]);
    assert!(stdout(&out).starts_with("x,i,"), "flag overrides config");

    let bad = dir.path().join("bad.conf");
    std::fs::write(&bad, "no_such_key=1\n").unwrap();
    let out = run(&["--config", bad.to_str().unwrap(), "census", "--x", "20"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sieve_limit_env_var_is_honored() {
    let out = bin()
        .env("MULTSIDON_SIEVE_LIMIT", "50")
        .args(["decompose", "--n", "100"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "env cap below the scan fails");
    let out = bin()
        .env("MULTSIDON_SIEVE_LIMIT", "1000")
        .args(["decompose", "--n", "100"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "env cap above the scan is fine");
    // An explicit flag wins over the environment.
    let out = bin()
        .env("MULTSIDON_SIEVE_LIMIT", "50")
        .args(["--sieve-limit", "200", "decompose", "--n", "100"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn random_set_runs_are_seed_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let save = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let (a_set, b_set, c_set) = (save("a.txt"), save("b.txt"), save("c.txt"));
    let args = |seed: &str, set: &str| {
        vec![
            "--format".into(),
            "json".into(),
            "--seed".into(),
            seed.to_string(),
            "encode".into(),
            "--n".into(),
            "400".into(),
            "--random-set".into(),
            "120".into(),
            "--save-set".into(),
            set.to_string(),
        ]
    };
    let a = bin().args(args("11", &a_set)).output().unwrap();
    let b = bin().args(args("11", &b_set)).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(
        std::fs::read_to_string(&a_set).unwrap(),
        std::fs::read_to_string(&b_set).unwrap(),
        "same seed, same sample"
    );
    let c = bin().args(args("12", &c_set)).output().unwrap();
    assert_eq!(c.status.code().map(|k| k == 0 || k == 1), Some(true));
    assert_ne!(
        std::fs::read_to_string(&a_set).unwrap(),
        std::fs::read_to_string(&c_set).unwrap(),
        "different seed, different sample"
    );
}

#[test]
fn extremal_and_bounds_tables_have_expected_rows() {
    let out = run(&["--format", "csv", "extremal", "--max-n", "5", "--bipartite", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "general,5,,10,5.3625,8.5499"), "ex(5) = 10 row");
    assert!(text.lines().any(|l| l.starts_with("bipartite,2,2,4,")), "z(2,2) = 4 row");

    let out = run(&["--format", "csv", "bounds", "--n-from", "100", "--n-to", "10000"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4, "header plus 100, 1000, 10000");
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("100,25,15,0.926588,88.69"), "row was {row:?}");
}
