use super::*;

fn run_args(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("primpair").chain(args.iter().copied());
    let code = main_with_args(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn open_case_is_unknown_with_exit_zero() {
    let (code, out, _) = run_args(&["classify", "-p", "2", "-k", "6", "--m1", "3", "--m2", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["status"], "Unknown");
    assert_eq!(v["k"], "6");
    assert!(v["reason"].is_null());
}

#[test]
fn factor_of_two_to_36_minus_one() {
    let (code, out, _) = run_args(&["factor", "68719476735"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let primes: Vec<&str> = v["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|pe| pe[0].as_str().unwrap())
        .collect();
    assert_eq!(primes, ["3", "5", "7", "13", "19", "37", "73", "109"]);
    assert_eq!(v["factors"][0][1], "3");

    let (code, same, _) = run_args(&["factor", "-p", "2", "-k", "36"]);
    assert_eq!(code, 0);
    assert_eq!(same, out);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["frobnicate"],
        vec!["classify", "-p", "2"],
        vec!["classify", "-p", "2", "-k", "x"],
        vec!["classify", "-p", "4", "-k", "3"],
        vec!["classify", "-p", "2", "-k", "3", "--t", "4"],
        vec!["table", "-p", "2", "--kmax", "0"],
        vec!["factor", "12", "-p", "2", "-k", "3"],
        vec!["factor", "twelve"],
        vec!["--format", "xml", "factor", "12"],
    ] {
        let (code, _, err) = run_args(&args);
        assert_eq!(code, 1, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
    assert_eq!(run_args(&["--help"]).0, 0);
}

#[test]
fn capacity_errors_exit_two() {
    for args in [
        vec!["table", "-p", "2", "--kmax", "101"],
        vec!["certify", "-p", "2", "-k", "6"],
        vec!["certify", "-p", "2", "-k", "3", "--cap", "20000000000"],
        vec!["certify", "-p", "2", "-k", "30"],
        vec!["verify", "-p", "2", "-k", "17"],
        vec!["classify", "-p", "2", "-k", "8", "--brute-cap", "1000"],
        vec!["factor", "--budget", "1", "340282366920938463463374607431768211457"],
    ] {
        let (code, _, err) = run_args(&args);
        assert_eq!(code, 2, "{args:?}: {err}");
    }
}

#[test]
fn table_json_and_csv_carry_the_same_rows() {
    let base = ["table", "-p", "2", "--m1", "3", "--m2", "2", "--kmax", "16"];
    let (code, json, _) = run_args(&base);
    assert_eq!(code, 0);
    let from_json: Vec<TableRow> = json
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();

    let mut args = vec!["--format", "csv"];
    args.extend(base);
    let (code, csv_text, _) = run_args(&args);
    assert_eq!(code, 0);
    assert!(csv_text.starts_with("k,status,reason,ell,sieve_primes,delta,Delta\n"));
    let from_csv: Vec<TableRow> = csv::Reader::from_reader(csv_text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .unwrap();
    assert_eq!(from_json, from_csv);

    let row = |k: &str| from_json.iter().find(|r| r.k == k).unwrap();
    assert_eq!(row("11").sieve_primes, "23 89");
    assert_eq!(row("11").ell, "1");
    // First passing ascending-prefix split, not necessarily the reference pick.
    assert_eq!(row("14").ell, "1");
    assert_eq!(row("14").sieve_primes, "3 43 127");
    assert_eq!(row("16").ell, "3");
    assert_eq!(row("6").status, "Unknown");
    assert_eq!(row("13").reason, "corollary");
}

#[test]
fn output_is_reproducible() {
    let args = ["verify", "-p", "3", "-k", "2", "--samples", "4", "--seed", "7"];
    let (c1, a, _) = run_args(&args);
    let (c2, b, _) = run_args(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let (_, other, _) = run_args(&["verify", "-p", "3", "-k", "2", "--samples", "4", "--seed", "8"]);
    assert_ne!(a, other);

    let t = ["--format", "pretty", "table", "-p", "3", "--kmax", "20", "--jobs", "2"];
    assert_eq!(run_args(&t).1, run_args(&t).1);
}

#[test]
fn verify_records_all_pass() {
    let (code, out, _) = run_args(&["verify", "-p", "2", "-k", "4", "--samples", "5"]);
    assert_eq!(code, 0);
    let mut checks = std::collections::BTreeSet::new();
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], true, "{line}");
        assert_eq!(v["q"], "16");
        for key in ["check", "f", "l1", "l2", "lhs", "rhs"] {
            assert!(!v[key].is_null(), "{key} missing in {line}");
        }
        checks.insert(v["check"].as_str().unwrap().to_string());
    }
    assert_eq!(checks.len(), 3);
}

#[test]
fn certify_reports_member_and_witness() {
    let (code, out, _) = run_args(&["certify", "-p", "2", "-k", "3", "--m1", "2", "--m2", "1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["status"], "Member");
    assert!(v["stats"].get("wall_time_ms").is_none());

    let (_, out, _) = run_args(&["certify", "-p", "2", "-k", "4", "--m1", "1", "--m2", "1", "--timing"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["status"], "NonMember");
    assert!(v["counterexample"]["f1"].is_array());
    assert!(v["stats"]["wall_time_ms"].is_number());
}

#[test]
fn factorizations_round_trip_through_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, first, _) = run_args(&["--cache-dir", d, "factor", "-p", "3", "-k", "40"]);
    assert_eq!(code, 0);
    let file = cache::path(dir.path(), 3, 40);
    let stored: crate::arith::Factorization =
        serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(stored.value(), &(BigUint::from(3u32).pow(40) - 1u32));
    let (_, second, _) = run_args(&["--cache-dir", d, "factor", "-p", "3", "-k", "40"]);
    assert_eq!(first, second);

    // A corrupt entry is ignored, never trusted.
    std::fs::write(cache::path(dir.path(), 3, 41), r#"{"value":"6","factors":[["6","1"]]}"#).unwrap();
    let (code, out, _) = run_args(&["--cache-dir", d, "classify", "-p", "3", "-k", "41"]);
    assert_eq!(code, 0);
    assert!(out.contains("InGamma"));
    let repaired: crate::arith::Factorization =
        serde_json::from_str(&std::fs::read_to_string(cache::path(dir.path(), 3, 41)).unwrap()).unwrap();
    assert_eq!(repaired.value(), &(BigUint::from(3u32).pow(41) - 1u32));
}
