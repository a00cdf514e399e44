use std::process::{Command, Output};

use serde_json::Value;

fn vanseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vanseq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_out(args: &[&str]) -> Value {
    let o = vanseq(args);
    assert!(o.status.success(), "{}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

/// Data rows of a CSV artifact (comment and header lines dropped).
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn vanish_csv_matches_the_plane_sequence() {
    let o = vanseq(&["vanish", "--model", "p2:1", "--m", "2", "--val", "mon:1,1@0,0", "--out", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("# format: vanseq/1\n# config: {"));
    assert!(text.contains("m,j,a_j_num,a_j_den\n"));
    let values: Vec<(String, String, String)> = csv_rows(&text)
        .into_iter()
        .map(|r| {
            assert_eq!(r[0], "2");
            assert_eq!(r[3], "1");
            (r[0].clone(), r[1].clone(), r[2].clone())
        })
        .collect();
    let a: Vec<&str> = values.iter().map(|v| v.2.as_str()).collect();
    assert_eq!(a, ["0", "1", "1", "2", "2", "2"]);
    assert!(stderr(&o).starts_with("vanish:"));
}

#[test]
fn equidist_ks_is_small_at_level_twenty() {
    let doc = json_out(&["equidist", "--model", "p2:1", "--val", "mon:1,1@0,0", "--m", "20", "--ref", "simplex"]);
    assert!(doc["ks"].as_f64().unwrap() <= 0.1);
    let (num, den) = (doc["ks_num"].as_i64().unwrap(), doc["ks_den"].as_i64().unwrap());
    assert!((num as f64 / den as f64 - doc["ks"].as_f64().unwrap()).abs() < 1e-12);
    assert_eq!(doc["format_version"], "vanseq/1");
    assert_eq!(doc["config"]["model"], "p2:1");
}

#[test]
fn non_integral_level_is_a_usage_error() {
    let o = vanseq(&["vanish", "--model", "blp2:1/3", "--m", "2", "--val", "ordF"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("m·λ not integral"), "{err}");
    assert!(err.contains("--m"), "{err}");
    assert!(stdout(&o).is_empty());
}

#[test]
fn usage_errors_name_the_flag() {
    let cases: [(&[&str], &str); 6] = [
        (&["vanish", "--model", "p3:1", "--m", "2", "--val", "ordflag"], "--model"),
        (&["vanish", "--model", "p2:1", "--m", "2", "--val", "bogus"], "--val"),
        (&["vanish", "--model", "p2:1", "--m", "two", "--val", "ordflag"], "--m"),
        (&["vanish", "--model", "p2:1", "--m", "2", "--val", "ordflag", "--out", "svg"], "--out"),
        (&["restvol", "--model", "blp2:1/2", "--m", "8", "--val", "ordF", "--t", "1/3"], "--t"),
        (&["vanish", "--model", "p2:1", "--m", "2"], "--val"),
    ];
    for (args, flag) in cases {
        let o = vanseq(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains(flag), "{args:?}: {}", stderr(&o));
    }
    let o = vanseq(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn worker_count_comes_from_the_environment() {
    let base = ["vanish", "--model", "p2:1", "--m", "3..5", "--val", "arc-exp"];
    let one = Command::new(env!("CARGO_BIN_EXE_vanseq")).args(base).env("VANSEQ_WORKERS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_vanseq")).args(base).env("VANSEQ_WORKERS", "4").output().unwrap();
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_vanseq")).args(base).env("VANSEQ_WORKERS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("VANSEQ_WORKERS"));
}

#[test]
fn artifacts_are_byte_identical_across_runs() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let o = vanseq(&[
            "transform", "--model", "blp2:1/2", "--m", "4", "--val", "ordF", "--out", "csv,json,svg", "--out-dir",
            d.path().to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).starts_with("transform:"));
    }
    for ext in ["csv", "json", "svg"] {
        let name = format!("transform.{ext}");
        let a = std::fs::read(dirs[0].path().join(&name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(&name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn toml_config_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "model = \"p2:1\"\nval = \"mon:1,2@0,0\"\nm = [2, 3]\nout = \"json\"\n").unwrap();
    let from_file = vanseq(&["vanish", "--config", cfg.to_str().unwrap()]);
    let from_flags = vanseq(&["vanish", "--model", "p2:1", "--val", "mon:1,2@0,0", "--m", "2,3", "--out", "json"]);
    assert!(from_file.status.success(), "{}", stderr(&from_file));
    assert_eq!(from_file.stdout, from_flags.stdout);
    // flags win over the file
    let over = vanseq(&["vanish", "--config", cfg.to_str().unwrap(), "--m", "2"]);
    let doc: Value = serde_json::from_slice(&over.stdout).unwrap();
    assert_eq!(doc["config"]["m"], serde_json::json!([2]));

    std::fs::write(&cfg, "modle = \"p2:1\"\n").unwrap();
    let o = vanseq(&["vanish", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--config"));
}

#[test]
fn json_rationals_round_trip() {
    let doc = json_out(&["vanish", "--model", "p1:3", "--m", "2", "--val", "mon:1/2@0", "--out", "json"]);
    let values: Vec<String> = doc["sequences"][0]["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(values, ["0/1", "1/2", "1/1", "3/2", "2/1", "5/2", "3/1"]);
    let doc = json_out(&["vanish", "--model", "p2:1", "--m", "1", "--val", "mon-sqrt2@0,0", "--out", "json"]);
    let values = doc["sequences"][0]["values"].as_array().unwrap();
    assert_eq!(values[2], "0/1+1/1*sqrt2");
}

#[test]
fn theoremb_reports_a_non_conical_apex() {
    let doc = json_out(&["theoremb", "--k", "4,16"]);
    assert_eq!(doc["verdict"], "non-conical");
    assert_eq!(doc["dq_dx2"], "-2/1");
    let e: Vec<f64> = doc["approach"].as_array().unwrap().iter().map(|a| a["E_approx"].as_f64().unwrap()).collect();
    assert!(e.iter().all(|&v| v <= 0.5));
}

#[test]
fn okounkov_json_shape() {
    let doc = json_out(&["okounkov", "--model", "p2:1", "--m", "2", "--val", "ordflag"]);
    assert_eq!(doc["m"], 2);
    assert_eq!(doc["points"].as_array().unwrap().len(), 6);
    assert_eq!(doc["hull"].as_array().unwrap().len(), 3);
    assert_eq!(doc["G"][0], serde_json::json!([0, 0, 0, 1]));
    assert_eq!(doc["pushforward_matches"], true);
}
