use serde_json::Value;
use std::process::{Command, Output};

fn cvbell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvbell")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_body(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn json_lines(text: &str) -> Vec<Value> {
    text.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn b2ps_table_has_caption_columns() {
    let o = cvbell(&["figure", "B2PS", "--grid", "0.2:1:5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with('#') && l.contains("eta=0.8 N3=0.1")));
    let (header, rows) = csv_body(&text);
    assert_eq!(header, ["N", "f_twb", "f_1", "f_tr"]);
    assert_eq!(rows.len(), 5);
    for r in &rows[1..] {
        assert!(r[2] >= r[3], "{r:?}");
    }
}

#[test]
fn e2h_and_b3dpn_columns() {
    let (h, rows) = csv_body(&stdout(&cvbell(&["figure", "E2H", "--grid", "-1:1:3"])));
    assert_eq!(h, ["psi", "E_classical", "E_n2_0.5", "E_n2_1", "E_n2_5"]);
    for r in &rows {
        for e in &r[2..] {
            assert!(e.abs() <= r[1].abs() + 1e-12);
        }
    }
    let (h, rows) = csv_body(&stdout(&cvbell(&["figure", "B3DPN", "--grid", "1:100:2"])));
    assert_eq!(h, ["N", "B3_vlb_opt", "B3_t_opt"]);
    assert!(rows.iter().all(|r| r[1] > 2.0 && r[2] > 2.0));
}

#[test]
fn violating_rows_only() {
    let (h, rows) = csv_body(&stdout(&cvbell(&["figure", "B3DPVLBGen", "--grid", "0.5:1.5:3"])));
    assert_eq!(h, ["r", "J", "B3"]);
    assert!(!rows.is_empty() && rows.iter().all(|r| r[2] > 2.0));
}

#[test]
fn output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = cvbell(&["figure", "B2DPTWBA", "--grid", "1:3:3", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn json_figure_is_one_object_per_line() {
    let v = json_lines(&stdout(&cvbell(&["figure", "B2PS", "--grid", "1:2:3", "--format", "json"])));
    assert_eq!(v.len(), 3);
    assert!(v.iter().all(|r| r["f_twb"].as_f64().unwrap() > 0.0));
}

#[test]
fn exit_codes() {
    let o = cvbell(&["figure", "B4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown figure id"));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("x.csv");
    let o = cvbell(&["figure", "E2H", "--grid", "0:1:2", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(cvbell(&["point", "--bogus"]).status.code(), Some(2));
    assert_eq!(cvbell(&["figure", "E2H", "--state", "t"]).status.code(), Some(2));
}

#[test]
fn inconsistent_point_names_the_rule() {
    let o = cvbell(&["point", "--state", "twb", "--test", "dp3", "--n", "1", "--optimize"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("three-mode"));
    let o = cvbell(&["point", "--state", "t", "--test", "dp3", "--n", "1", "--j", "0.1", "--optimize"]);
    assert!(stderr(&o).contains("mutually exclusive"));
}

#[test]
fn t_dp3_optimized_at_large_energy() {
    let o = cvbell(&["point", "--state", "t", "--test", "dp3", "--n", "10000", "--optimize"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json_lines(&stdout(&o));
    assert_eq!(v.len(), 1);
    assert!((v[0]["value"].as_f64().unwrap() - 2.89).abs() < 0.01);
    assert!(v[0]["evaluations"].as_u64().unwrap() > 0);
}

#[test]
fn twb_ps2_vacuum_gives_two() {
    let v = json_lines(&stdout(&cvbell(&["point", "--state", "twb", "--test", "ps2", "--n", "0"])));
    assert_eq!(v[0]["value"].as_f64().unwrap(), 2.0);
}

#[test]
fn conditional_homodyne_sweep_stays_classical() {
    let o = cvbell(&["point", "--state", "conditional", "--test", "homodyne", "--n3", "0.5", "--grid", "0.5:5:3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json_lines(&stdout(&o));
    assert_eq!(v.len(), 3);
    assert_eq!(v[1]["n2"].as_f64().unwrap(), 2.75);
    assert!(v.iter().all(|r| r["value"].as_f64().unwrap() <= 2.0));
}

#[test]
fn verify_passes_and_breaks_at_small_cutoff() {
    let o = cvbell(&["verify"]);
    let text = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert!(text.contains("0 failed"));
    assert!(text.contains("s_z s_z s_z"));
    let o = cvbell(&["verify", "--cutoff", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("too small"));
}
