//! End-to-end checks of the binary: output formats, the JSON schema and the
//! exit-code contract.

use std::process::Command;

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_quadtwist"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn triple_subcommand() {
    let (stdout, _, code) = run(&["triple", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "7,23,17");
}

#[test]
fn genus_json_schema() {
    let (stdout, _, code) = run(&["genus", "--n", "17", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["n"], 17);
    assert_eq!(v["h2"], 1);
    assert_eq!(v["h4"], 1);
    assert_eq!(v["h8"], 0);
    assert_eq!(v["d0"], 2);
    assert_eq!(v["oracle_agrees"], true);
}

#[test]
fn sha_17() {
    let (stdout, _, code) = run(&["sha", "--triple", "1,1,1", "--n", "17", "--theorem", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("sha_predicate = true"));
    let (stdout, _, _) = run(&["sha", "--n", "17", "--theorem", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["sha_predicate"], true);
    assert_eq!(v["h4"], 1);
    assert_eq!(v["h8"], 0);
    assert_eq!(v["d"], 1);
}

#[test]
fn selmer_with_oracle() {
    let (stdout, _, code) = run(&[
        "selmer", "--triple", "1,1,1", "--n", "17", "--oracle", "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["s2"], 2);
    assert_eq!(v["oracle_agrees"], true);
    assert_eq!(v["elements"].as_array().unwrap().len(), 4);
}

#[test]
fn cassels_pairing_value() {
    let (stdout, _, code) = run(&["cassels", "--n", "17", "--theorem", "1", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["pairing"], -1);
    assert_eq!(v["d"], 17);
    // seeded witness rotation must not change the value
    let (stdout, _, _) = run(&[
        "cassels",
        "--n",
        "17",
        "--theorem",
        "1",
        "--json",
        "--seed",
        "1",
    ]);
    let w: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(w["pairing"], -1);
    assert_ne!(v["witness"]["gamma"], w["witness"]["gamma"]);
}

#[test]
fn contract_violation_exits_2() {
    let (_, stderr, code) = run(&["genus", "--n", "12"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("square-free"));
    let (_, stderr, code) = run(&["sha", "--n", "15", "--theorem", "2"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("admissible"));
    let (_, _, code) = run(&["cassels", "--n", "17", "--theorem", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn density_csv_rows() {
    let (stdout, _, code) = run(&[
        "density",
        "--triple",
        "1,1,1",
        "--k",
        "1",
        "--x",
        "300",
        "--theorem",
        "2",
        "--csv",
    ]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("# triple=1,1,1 k=1 x=300 theorem=2"));
    assert_eq!(
        lines.next().unwrap(),
        "n,k,admissible,s2,h4,h8,d,pairing,sha_predicate"
    );
    let body: Vec<&str> = lines.collect();
    // primes up to 300 (62 of them), admissible ones carry full columns
    assert_eq!(body.len(), 62);
    assert!(body.contains(&"17,1,true,2,1,0,1,-1,true"));
    assert!(body.contains(&"3,1,false,,,,,,"));
}

#[test]
fn density_json_rows_mirror_csv() {
    let (stdout, _, code) = run(&[
        "density", "--k", "1", "--x", "300", "--theorem", "2", "--csv", "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 62);
    let r17 = rows.iter().find(|r| r["n"] == 17).unwrap();
    assert_eq!(r17["admissible"], true);
    assert_eq!(r17["s2"], 2);
    assert_eq!(r17["pairing"], -1);
    assert_eq!(r17["sha_predicate"], true);
    let r3 = rows.iter().find(|r| r["n"] == 3).unwrap();
    assert_eq!(r3["admissible"], false);
    assert_eq!(r3["h4"], serde_json::Value::Null);
}

#[test]
fn torsion_output() {
    let (stdout, _, code) = run(&["torsion", "--triple", "7,23,17", "--n", "127", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["ono_order4"], false);
    assert_eq!(v["ono_order3"], false);
    assert_eq!(v["oracle_shape"], "(Z/2Z)^2");
}

#[test]
fn count_matrices_table() {
    let (stdout, _, code) = run(&["count-matrices", "--k", "2", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["count"], "4");
    assert_eq!(rows[2]["enumeration"], 4);
}

#[test]
fn ck_set_reports_both_constants() {
    let (stdout, _, code) = run(&[
        "ck-set", "--alpha", "5,13", "--matrix", "0,0;0,0", "--x", "5000", "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert!(v["count"].as_u64().unwrap() <= v["c_count"].as_u64().unwrap());
    assert_eq!(v["predicted_statement"], "1/256");
    assert_eq!(v["predicted_proof"], "1/256");
}
