use std::process::{Command, Output};

use serde_json::Value;

fn cartier(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartier"))
        .args(args)
        .output()
        .expect("spawn cartier")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = cartier(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_str(stdout(&out).trim()).unwrap()
}

#[test]
fn invalid_prime_exits_2() {
    for p in ["4", "5", "9"] {
        let out = cartier(&["matrix", "--family", "minus", "--p", p]);
        assert_eq!(out.status.code(), Some(2), "p = {p}");
    }
    let out = cartier(&["matrix", "--family", "minus", "--p", "7", "--t0", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn singular_fiber_exits_3() {
    for (fam, t0) in [("minus", "0"), ("minus", "1"), ("plus", "1")] {
        let out = cartier(&["matrix", "--family", fam, "--p", "11", "--t0", t0]);
        assert_eq!(out.status.code(), Some(3), "{fam} t0 = {t0}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("singular"));
    }
}

#[test]
fn json_envelope() {
    let v = json(&["matrix", "--family", "minus", "--p", "11"]);
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"]["name"], "matrix");
    assert!(v["timing_ms"].is_number());
    let rows = &v["payload"]["entries"]["rows"];
    // split prime: off-diagonal entries vanish identically
    assert_eq!(rows[0][1], serde_json::json!([]));
    assert_eq!(rows[1][0], serde_json::json!([]));
    assert!(!rows[0][0].as_array().unwrap().is_empty());
}

#[test]
fn csv_matrix_zero_entries() {
    let out = cartier(&["matrix", "--family", "minus", "--p", "11", "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("row,col,degree,coefficients"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1], "1,2,-,0");
    assert_eq!(rows[2], "2,1,-,0");
}

#[test]
fn inert_prime_is_antidiagonal() {
    let v = json(&["matrix", "--family", "minus", "--p", "7"]);
    let rows = &v["payload"]["entries"]["rows"];
    assert_eq!(rows[0][0], serde_json::json!([]));
    assert_eq!(rows[1][1], serde_json::json!([]));
    assert_eq!(v["payload"]["split_class"], serde_json::json!("inert"));
}

#[test]
fn fiber_classification() {
    let v = json(&["matrix", "--family", "plus", "--p", "7", "--t0", "4"]);
    assert_eq!(v["payload"]["classification"]["tag"], "Supersingular");
    let v = json(&["matrix", "--family", "plus", "--p", "7", "--t0", "2"]);
    assert_eq!(v["payload"]["classification"]["tag"], "Ordinary");
}

#[test]
fn split_table_first_row() {
    let out = cartier(&["table", "--which", "split", "--pmax", "11"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "p,deg_d,non_ordinary,difference\n11,4,3,1\n");
}

#[test]
fn inert_table_csv_matches_json() {
    let out = cartier(&["table", "--which", "inert", "--pmax", "103"]);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let csv_rows: Vec<[i64; 4]> = reader.deserialize().map(|r| r.unwrap()).collect();
    assert_eq!(csv_rows.len(), 13);
    assert_eq!(csv_rows[0], [7, 13, 2, 11]);

    let v = json(&["table", "--which", "inert", "--pmax", "103", "--format", "json"]);
    let json_rows: Vec<[i64; 4]> = v["payload"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            let f = |k: &str| r[k].as_i64().unwrap();
            [f("p"), f("genus"), f("deg_d"), f("genus_minus_degree")]
        })
        .collect();
    assert_eq!(csv_rows, json_rows);
}

#[test]
fn output_is_deterministic() {
    let args = ["table", "--which", "split", "--pmax", "71", "--format", "json"];
    let mut a = json(&args);
    let mut b = json(&[&args[..], &["--jobs", "1"]].concat());
    a.as_object_mut().unwrap().remove("timing_ms");
    b.as_object_mut().unwrap().remove("timing_ms");
    assert_eq!(a["payload"], b["payload"]);
    assert_eq!(a["schema_version"], b["schema_version"]);
}

#[test]
fn scan_tags() {
    let v = json(&["scan", "--family", "minus", "--p", "7"]);
    let fibers = v["payload"]["fibers"].as_array().unwrap();
    assert_eq!(fibers.len(), 7);
    let degenerate: Vec<u64> = fibers
        .iter()
        .filter(|f| f["degenerate"] == true)
        .map(|f| f["t0"].as_u64().unwrap())
        .collect();
    assert_eq!(degenerate, [0, 1]);
    for f in fibers.iter().filter(|f| f["degenerate"] == false) {
        let tag = f["tag"].as_str().unwrap();
        assert!(tag == "Ordinary" || tag == "Supersingular" || tag == "ProductOfSupersingularEC");
    }

    let out = cartier(&["scan", "--family", "plus", "--p", "7", "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.contains("4,Supersingular,1"), "{text}");
    assert!(text.contains("0,Degenerate,"));
}

#[test]
fn verify_exit_codes() {
    for check in ["shape", "genus", "lemma", "corollary"] {
        let out = cartier(&["verify", "--check", check, "--pmax", "43"]);
        assert_eq!(out.status.code(), Some(0), "{check}");
        let v: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
        assert_eq!(v["payload"]["summary"]["failed"], 0);
    }
    // the remark check reports a finding and always exits 0
    let v = json(&["verify", "--check", "remark", "--pmax", "43"]);
    assert_eq!(v["payload"]["summary"]["passed"], 0);

    let out = cartier(&["verify", "--check", "shape", "--pmin", "50", "--pmax", "40"]);
    assert_eq!(out.status.code(), Some(2));
    let out = cartier(&["table", "--which", "split", "--pmax", "11", "--jobs", "0"]);
    assert_eq!(out.status.code(), Some(2));
}
