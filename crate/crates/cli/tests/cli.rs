use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlawka")).args(args).env_remove("HLAWKA_CAP_POINTS").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn planner_example_picks_1009() {
    let out = run(&["effective", "plan", "--base", "zn", "--n", "100", "--delta", "0.3333", "--nu", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["p_chosen"], 1009);
    assert_eq!(v["command"], "effective plan");
    assert!(v["version"].as_str().is_some_and(|s| !s.is_empty()));
}

#[test]
fn svp_on_a2_file() {
    let path = tmp("a2.json");
    std::fs::write(&path, r#"{"m": 2, "gram": [[2, 1], [1, 2]], "scale_num": 1, "scale_den": 1}"#).unwrap();
    let out = run(&["lattice", "svp", "--gram", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["lambda1_sq"], "2");
    assert_eq!(v["result"]["kissing_number"], 6);
}

#[test]
fn loeliger_identity_holds() {
    let out = run(&["ensemble", "loeliger", "--p", "2", "--n", "3", "--k", "2", "--g", "ones"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["all_equal"], true);
    let r = &v["result"]["runs"][0];
    assert_eq!(r["lhs"], r["rhs"]);
    let out = run(&["ensemble", "loeliger", "--p", "3", "--n", "3", "--k", "1", "--g", "random", "--seed", "9", "--count", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["seed"], 9);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["lattice", "svp", "--gram", "a2", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["lattice"]).status.code(), Some(2));
    // a stochastic command without its seed is a usage error
    assert_eq!(run(&["cyclo", "rogers", "--q", "5", "--p", "11"]).status.code(), Some(2));
    // bad parameters
    let out = run(&["effective", "craig", "--q", "9", "--l", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "invalid_parameter");
    // cap refusal, via flag and via the environment
    let out = run(&["lattice", "count", "--gram", "z2", "--r", "10", "--cap-points", "10"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "cap_exceeded");
    let out = Command::new(env!("CARGO_BIN_EXE_hlawka"))
        .args(["lattice", "count", "--gram", "z2", "--r", "10"])
        .env("HLAWKA_CAP_POINTS", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftests_pass() {
    for g in ["lattice", "reduce", "cyclo", "quat", "ensemble", "effective"] {
        let out = run(&[g, "--selftest"]);
        assert_eq!(out.status.code(), Some(0), "{g}: {}", String::from_utf8_lossy(&out.stdout));
        let v = json(&out);
        assert!(v["result"].as_array().is_some_and(|a| !a.is_empty()));
    }
}

#[test]
fn output_is_deterministic_across_threads() {
    let args = ["ensemble", "avg", "--base", "z4", "--p", "11", "--k", "2", "--f", "ball:1.2", "--primitive", "--mode", "mc:300:42", "--format", "csv"];
    let a = run(&[&args[..], &["--threads", "1"]].concat());
    let b = run(&[&args[..], &["--threads", "4"]].concat());
    let c = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("# seed: 42"));
    assert!(text.contains("p,k,trials,estimate,target,stderr,kernel_term"));
}

#[test]
fn table1_to_csv_file() {
    let path = tmp("table1.csv");
    let out = run(&["effective", "table1", "--n", "1e3,1e4,1e5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "construction,n,rank,code,delta,p_formula,ln_p,family_formula,log_family_size");
    assert_eq!(data.len(), 13);
}

#[test]
fn reduce_and_lift_pipeline() {
    // the full output envelope is accepted as input
    let red_path = tmp("red.json");
    assert_eq!(run(&["reduce", "natural", "--base", "z3", "--p", "5", "--out", red_path.to_str().unwrap()]).status.code(), Some(0));
    let code_path = tmp("code.json");
    std::fs::write(&code_path, r#"{"p": 5, "n": 3, "k": 1, "gen": [[1, 2, 3]]}"#).unwrap();
    let out = run(&["reduce", "lift", "--reduction", red_path.to_str().unwrap(), "--code", code_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["index"], "25");
    assert!((v["result"]["volume"].as_f64().unwrap() - 25.0).abs() < 1e-9);
}

#[test]
fn quaternion_commands() {
    let v = json(&run(&["quat", "iso", "--p", "7"]));
    assert_eq!((v["result"]["a"].clone(), v["result"]["b"].clone()), (2.into(), 3.into()));
    let out = run(&["quat", "lemma1", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["singular"], 145);
    let out = run(&["quat", "balanced", "--p", "2", "--m", "2", "--k", "1", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sandwich_and_mh() {
    let v = json(&run(&["effective", "sandwich", "--gram", "z2", "--r", "10"]));
    assert_eq!(v["result"]["exact"], 317);
    assert_eq!(v["result"]["holds"], true);
    let out = run(&["ensemble", "mh", "--base", "z8", "--p", "127", "--k", "3", "--eps", "0.3", "--L", "2", "--mode", "mc:100:5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["certificate"]["ok"], true);
}
