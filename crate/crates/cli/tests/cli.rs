use std::process::{Command, Output};

use serde_json::Value;

fn metacomm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metacomm")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = metacomm(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn primes_lists_p_plus_one_classes() {
    let v = json(&["primes", "--p", "13"]);
    assert_eq!(v.as_array().unwrap().len(), 14);
    let csv = metacomm(&["primes", "--p", "3", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 5);
}

#[test]
fn cycles_example() {
    let v = json(&["cycles", "--p", "19", "--xi", "3,-2,-2,0"]);
    assert_eq!(v["length"], 3);
    assert_eq!(v["fixed_count"], 2);
    assert_eq!(v["cycle_count"], 6);
    assert_eq!(v["f_poly"], "x^2 + x + 1");
    assert_eq!(v["agrees"], true);

    let v = json(&["cycles", "--p", "19", "--xi", "1,2,1,1", "--predict-only"]);
    assert_eq!(v["length"], 5);
    assert_eq!(v["matched_cyclotomic_t"], 5);
}

#[test]
fn engines_match_from_the_command_line() {
    let a = json(&["permute", "--p", "23", "--xi", "1/2,3/2,-5/2,3/2"]);
    let b = json(&["permute", "--p", "23", "--xi", "1/2,3/2,-5/2,3/2", "--engine", "conic"]);
    assert_eq!(a["image"], b["image"]);
    assert_eq!(a["image"].as_array().unwrap().len(), 24);
}

#[test]
fn fixed_methods_agree() {
    let args = ["fixed", "--p", "19", "--xi", "3,-2,-2,0", "--method"];
    let direct = json(&[&args[..], &["direct"]].concat());
    for m in ["congruence", "trace"] {
        assert_eq!(json(&[&args[..], &[m]].concat())["fixed"], direct["fixed"]);
    }
    assert_eq!(direct["fixed"].as_array().unwrap().len(), 2);
}

#[test]
fn search_and_construct() {
    let v = json(&["search", "--p", "19", "--length", "5", "--bounds", "2"]);
    assert_eq!(v["verified"], true);

    let out = metacomm(&["search", "--p", "7", "--length", "5"]);
    assert_eq!(out.status.code(), Some(1));

    let v = json(&["construct", "--p", "3"]);
    assert_eq!(v["xi"], "2,1,2,2");
    assert_eq!(v["certificate"]["q"], 13);

    let v = json(&["construct", "--p", "13", "--pair"]);
    assert_ne!(v[0]["fixed_classes"], v[1]["fixed_classes"]);
}

#[test]
fn common_divisors() {
    let v = json(&["common-divisors", "--alpha", "1,1,1,0", "--m", "3"]);
    assert_eq!(v["divisors"].as_array().unwrap().len(), 6);
    let out = metacomm(&["common-divisors", "--alpha", "1,1,1,0", "--m", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--p-max", "31", "--samples", "3", "--format", "json", "--seed", "9"];
    let a = metacomm(&args);
    let b = metacomm(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["status"] != "fail"));
}

#[test]
fn verify_empty_check_set() {
    let out = metacomm(&["verify", "--checks", "", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v, Value::Array(vec![]));
}

#[test]
fn usage_and_domain_errors_exit_2() {
    for args in [
        &["cycles", "--p", "4", "--xi", "1,2,1,1"][..],
        &["cycles", "--p", "19", "--xi", "1/2,1,1,1"],
        &["primes", "--p", "2"],
        &["primes", "--p", "101", "--max-p", "100"],
        &["verify", "--checks", "bogus"],
        &["frobnicate"],
    ] {
        assert_eq!(metacomm(args).status.code(), Some(2), "{args:?}");
    }
}
