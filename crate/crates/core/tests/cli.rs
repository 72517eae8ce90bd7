use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fermat-syz"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env_remove("FERMAT_SYZ_ORACLE_BUDGET").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_line(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.push("--json");
    let o = run(&full);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    serde_json::from_str(text.trim_end()).unwrap()
}

#[test]
fn classify_septic_record() {
    let v = json_line(&["classify", "--p", "3", "--n", "7", "--a", "1"]);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["instance"], serde_json::json!({"p": 3, "n": 7, "a": 1}));
    let r = &v["results"];
    assert_eq!(r["delta"], "1/63");
    assert_eq!(r["hkm"], "427/81");
    assert_eq!(r["hn"], serde_json::json!({"s": 2, "sub": -13, "quot": -14}));
    assert_eq!(r["e0"], 3);
    assert_eq!(r["split_degrees"], serde_json::json!([-39, -42]));
}

#[test]
fn json_records_round_trip() {
    let cases: &[&[&str]] = &[
        &["classify", "--p", "3", "--n", "7", "--a", "1"],
        &["classify", "--p", "37", "--n", "14", "--a", "1"],
        &["classify", "--p", "2", "--n", "3", "--a", "1"],
        &["classify", "--p", "0", "--n", "5", "--a", "5"],
        &["delta", "--p", "3", "--t", "1/7,1/7,1/7"],
        &["hkm", "--p", "3", "--n", "7", "--a", "1"],
        &["hkf", "--p", "37", "--n", "14", "--a", "1", "--e", "2"],
        &["periodicity", "--p", "37", "--n", "14", "--a", "1"],
        &["hn", "--p", "3", "--n", "7", "--a", "1"],
        &["series", "--n", "7", "--r", "2", "--trunc", "12"],
        &["resolution", "--n", "5", "--b", "22"],
    ];
    for args in cases {
        let mut full = args.to_vec();
        full.push("--json");
        let text = stdout(&run(&full));
        let line = text.trim_end();
        let parsed: Value = serde_json::from_str(line).unwrap();
        assert_eq!(serde_json::to_string(&parsed).unwrap(), line, "{args:?}");
    }
}

#[test]
fn hkf_table_output() {
    let o = run(&["hkf", "--p", "37", "--n", "14", "--a", "1", "--e", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row = text.lines().find(|l| l.starts_with("hkf ")).unwrap();
    assert_eq!(row.split_whitespace().nth(1), Some("14253"));
    assert!(text.contains("provenance"));
}

#[test]
fn delta_from_instance_and_triple_agree() {
    let a = json_line(&["delta", "--p", "3", "--n", "7", "--a", "1"]);
    let b = json_line(&["delta", "--p", "3", "--t", "1/7, 1/7, 1/7"]);
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["results"]["delta_witness"]["s"], 2);
}

#[test]
fn characteristic_zero_routing() {
    let v = json_line(&["hn", "--p", "0", "--n", "5", "--a", "5"]);
    assert_eq!(v["results"]["hn"], serde_json::json!({"s": 0, "sub": -5, "quot": -10}));
    let v = json_line(&["classify", "--p", "0", "--n", "7", "--a", "4"]);
    assert_eq!(v["results"]["semistable"], true);
    for cmd in ["hkm", "periodicity", "delta"] {
        assert_eq!(run(&[cmd, "--p", "0", "--n", "7", "--a", "4"]).status.code(), Some(2), "{cmd}");
    }
    assert_eq!(run(&["hkf", "--p", "0", "--n", "7", "--a", "4", "--e", "1"]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "--p", "7", "--n", "14", "--a", "1"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--p", "9", "--n", "7", "--a", "1"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--p", "3", "--n", "7"]).status.code(), Some(2));
    assert_eq!(run(&["hkf", "--p", "3", "--n", "7", "--a", "1"]).status.code(), Some(2));
    assert_eq!(run(&["delta", "--p", "3", "--t", "1/2,x,1"]).status.code(), Some(2));
    assert_eq!(run(&["hn", "--p", "11", "--n", "5", "--a", "1"]).status.code(), Some(2));
    assert_eq!(run(&["series", "--n", "5", "--r", "5"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let o = run(&["hkf", "--p", "3", "--n", "7", "--a", "1", "--e", "5", "--oracle"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn oracle_budget_from_environment() {
    let args = ["hkf", "--p", "3", "--n", "7", "--a", "1", "--e", "2", "--oracle", "--json"];
    let o = run(&args);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(stdout(&o).trim_end()).unwrap();
    assert_eq!(v["results"]["hkf"], "419");
    assert_eq!(v["provenance"], "oracle");
    let o = bin().args(args).env("FERMAT_SYZ_ORACLE_BUDGET", "20").output().unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_sweep() {
    let args = ["verify", "--max-p", "7", "--max-n", "8", "--max-a", "4", "--max-e", "1", "--json"];
    let one = bin().args(args).env("RAYON_NUM_THREADS", "1").output().unwrap();
    let many = bin().args(args).env("RAYON_NUM_THREADS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    let v: Value = serde_json::from_str(stdout(&one).trim_end()).unwrap();
    assert_eq!(v["results"]["status"], "ok");
    assert!(v["results"]["matched"].as_u64().unwrap() > 100);
}

#[test]
fn classify_is_deterministic() {
    let args = ["classify", "--p", "37", "--n", "14", "--a", "1", "--json"];
    let a = bin().args(args).env("RAYON_NUM_THREADS", "1").output().unwrap();
    let b = bin().args(args).env("RAYON_NUM_THREADS", "8").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}
