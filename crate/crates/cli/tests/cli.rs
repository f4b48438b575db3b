use std::process::Command;

use arc_cover::num::{parse_rational, rational_to_f64};
use arc_cover_cli::run;
use serde_json::Value;

const R5: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/r5.dg");
const SCHEMA: &str = include_str!("../schema/run-report.schema.json");

fn validate(report: &Value) {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(report).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
}

fn ok(args: &[&str]) -> Value {
    let out = run(args.iter().copied());
    assert_eq!(out.exit_code, 0, "stderr: {} stdout: {}", out.stderr, out.stdout);
    let report: Value = serde_json::from_str(&out.stdout).unwrap();
    validate(&report);
    report
}

fn exact(v: &Value) -> String {
    v["exact"].as_str().unwrap().to_string()
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn cover_on_rotational_five() {
    let rep = ok(&["cover", "--host", R5, "--h", "cycle:3", "--l", "tt:3"]);
    let res = &rep["result"];
    assert_eq!(exact(&res["nu_star"]), "5/2");
    let weight = parse_rational(&exact(&res["cover_weight"])).unwrap();
    assert!(weight <= parse_rational("5").unwrap());
    assert_eq!(res["certified"], true);
    assert_eq!(res["ht_check"]["consistent"], true);
    assert_eq!(rep["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn fparam_on_five_cycle() {
    let rep = ok(&["fparam", "--h", "cycle:5", "--rmax", "4"]);
    assert_eq!(exact(&rep["result"]["search"]["f_upper"]), "25/8");
    assert_eq!(rep["result"]["search"]["best_l_name"], "T_4");
    let rep = ok(&["fparam", "--h", "c2", "--l", "tt:4", "--rmax", "2"]);
    assert_eq!(exact(&rep["result"]["given_l"]["f"]), "5/4");
    assert_eq!(rep["result"]["search"]["attained"], false);
}

#[test]
fn exact_on_rotational_five() {
    let rep = ok(&["exact", "--host", R5, "--h", "cycle:3"]);
    assert_eq!(exact(&rep["result"]["tau"]), "3");
    assert_eq!(exact(&rep["result"]["nu"]), "2");
    let rep = ok(&["exact", "--host", "rotational:5", "--h", "cycle:4"]);
    assert_eq!(exact(&rep["result"]["tau"]), "2");
    assert_eq!(exact(&rep["result"]["nu"]), "1");
}

#[test]
fn lp_in_both_modes() {
    let rep = ok(&["lp", "--host", R5, "--h", "cycle:3"]);
    assert_eq!(exact(&rep["result"]["nu_star"]), "5/2");
    assert_eq!(rep["result"]["complementary_slackness"]["passed"], true);
    let rep = ok(&["lp", "--host", R5, "--h", "cycle:3", "--float"]);
    assert_eq!(rep["arithmetic"], "float");
    assert!((rep["result"]["nu_star"]["float"].as_f64().unwrap() - 2.5).abs() < 1e-9);
}

#[test]
fn rationals_round_trip() {
    let rep = ok(&["lp", "--host", "tournament:7", "--h", "cycle:3", "--seed", "4"]);
    for v in rep["result"]["cover"].as_array().unwrap().iter().chain(rep["result"]["packing"].as_array().unwrap()) {
        let r = parse_rational(&exact(v)).unwrap();
        assert_eq!(rational_to_f64(&r), v["float"].as_f64().unwrap());
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["experiment-ratio", "--family", "random-digraph:6:0.5", "--h", "cycle:3", "--l", "tt:3", "--trials", "4", "--seed", "9"];
    let a = without_timing(ok(&args));
    let b = without_timing(ok(&args));
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn ratio_experiment_on_tournaments() {
    let rep = ok(&["experiment-ratio", "--family", "random-tournament:8", "--h", "cycle:3", "--l", "tt:3", "--trials", "20"]);
    let res = &rep["result"];
    assert_eq!(res["all_certified"], true);
    for t in res["trials"].as_array().unwrap() {
        if !t["ratio_to_nu_star"].is_null() {
            assert!(parse_rational(&exact(&t["ratio_to_nu_star"])).unwrap() <= parse_rational("2").unwrap());
        }
    }
}

#[test]
fn ratio_experiment_on_constructions_and_empty_hosts() {
    let rep = ok(&["experiment-ratio", "--family", "constructed:7:3", "--h", "cycle:3", "--l", "tt:3", "--trials", "5"]);
    for t in rep["result"]["trials"].as_array().unwrap() {
        assert_eq!(exact(&t["nu_star"]), "7");
        assert_eq!(exact(&t["target_nu_star"]), "7");
    }
    let rep = ok(&["experiment-ratio", "--family", "random-digraph:6:0", "--h", "cycle:4", "--l", "tt:3", "--trials", "1"]);
    let t = &rep["result"]["trials"][0];
    assert_eq!(exact(&t["nu_star"]), "0");
    assert_eq!(exact(&t["cover_weight"]), "0");
}

#[test]
fn orientation_experiment() {
    let rep = ok(&["experiment-orientation", "--graph", "complete:8", "--samples", "20"]);
    for s in rep["result"]["samples"].as_array().unwrap() {
        let r = s["gamma_ratio"]["float"].as_f64().unwrap();
        assert!((0.5..=1.0).contains(&r));
    }
    let rep = ok(&["experiment-orientation", "--graph", "matching:3", "--samples", "1"]);
    assert_eq!(rep["result"]["samples"][0]["gamma_ratio"]["float"], 1.0);
    let rep = ok(&["experiment-orientation", "--graph", "complete:6", "--samples", "10"]);
    assert!(rep["result"]["gamma_ratio"]["mean"]["float"].is_number());
}

#[test]
fn construct_and_kk_cover() {
    let dir = std::env::temp_dir().join(format!("arc-cover-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("k7.dec");
    let rep = ok(&["construct", "--n", "7", "--k", "3", "--out", out.to_str().unwrap(), "--tau"]);
    assert_eq!(rep["result"]["packing_certified"], true);
    assert_eq!(exact(&rep["result"]["nu_star"]), "7");
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("7 3\n"));
    let rep = ok(&["construct", "--n", "9", "--k", "4", "--seed", "2"]);
    assert_eq!(exact(&rep["result"]["nu_star"]), "9");
    assert_eq!(rep["result"]["regular"], true);

    let rep = ok(&["kk-cover", "--graph", "complete:4", "--k", "3"]);
    assert_eq!(exact(&rep["result"]["nu_star"]), "2");
    assert_eq!(exact(&rep["result"]["f_of_l"]), "2");
    assert_eq!(rep["result"]["certified"], true);
}

#[test]
fn copies_listing() {
    let rep = ok(&["copies", "--host", R5, "--h", "cycle:3", "--list"]);
    assert_eq!(rep["result"]["copy_count"], 5);
    assert_eq!(rep["result"]["copies"].as_array().unwrap().len(), 5);
}

#[test]
fn validation_errors_exit_with_two() {
    for args in [
        vec!["cover", "--host", R5, "--h", "wheel:3", "--l", "tt:3"],
        vec!["copies", "--host", "/nonexistent/file.dg", "--h", "cycle:3"],
        vec!["construct", "--n", "6", "--k", "3"],
        vec!["copies", "--host", R5],
    ] {
        let out = run(args.iter().copied());
        assert_eq!(out.exit_code, 2, "{args:?}: {}", out.stderr);
        assert!(out.stdout.is_empty());
    }
    let out = run(["copies", "--host", "cycle:1", "--h", "cycle:3"]);
    let err: Value = serde_json::from_str(&out.stderr).unwrap();
    validate(&err);
    assert_eq!(err["error"]["kind"], "validation");
}

#[test]
fn resource_caps_exit_with_three() {
    let bin = env!("CARGO_BIN_EXE_arc-cover");
    let out = Command::new(bin)
        .args(["exact", "--host", R5, "--h", "cycle:3"])
        .env("ARC_COVER_CAPS", "oracle_copies=2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "resource_cap");

    let out = Command::new(bin).args(["copies", "--host", R5, "--h", "cycle:3"]).env("ARC_COVER_CAPS", "nonsense=1").output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(bin).args(["copies", "--host", R5, "--h", "cycle:3", "--compact"]).env_remove("ARC_COVER_CAPS").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["result"]["copy_count"], 5);
}
