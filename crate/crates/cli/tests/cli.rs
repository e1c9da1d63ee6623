use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn rga_kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rga-kit"))
        .args(args)
        .env_remove("RGA_KIT_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = rga_kit(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn entries(v: &Value) -> Vec<f64> {
    v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    for args in [
        &["rga", "--fixture", "sakai", "--format", "json"][..],
        &["pair", "--fixture", "tfg-seconds", "--format", "json"],
        &["audit", "--fixture", "sakai", "--fuzz", "20", "--seed", "9", "--format", "json"],
    ] {
        let a = rga_kit(args);
        let b = rga_kit(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn report_envelope() {
    let d = json(&["rga", "--fixture", "A", "--format", "json"]);
    assert_eq!(d["schema"], "rga-kit.report/1");
    assert_eq!(d["command"], "rga");
    assert_eq!(d["input"]["source"], "fixture:A");
    assert_eq!(d["input"]["sha256"].as_str().unwrap().len(), 64);
    let methods: Vec<&str> = d["results"]["methods"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["method"].as_str().unwrap())
        .collect();
    assert_eq!(methods, ["mp", "uc", "exact"]);
    for m in d["results"]["methods"].as_array().unwrap() {
        assert!(m["property_violations"].as_array().unwrap().is_empty());
    }
}

#[test]
fn all_methods_skips_exact_on_wide_plants() {
    let d = json(&["rga", "--fixture", "AB", "--format", "json"]);
    assert_eq!(d["results"]["methods"].as_array().unwrap().len(), 2);
    assert_eq!(d["results"]["skipped"][0]["method"], "exact");
}

#[test]
fn exit_codes() {
    assert_eq!(rga_kit(&["fixtures", "list"]).status.code(), Some(0));
    // usage and input problems
    assert_eq!(rga_kit(&["fixtures", "show", "nope"]).status.code(), Some(2));
    assert_eq!(rga_kit(&["rga", "/definitely/not/here.csv"]).status.code(), Some(2));
    assert_eq!(rga_kit(&["rga", "--fixture", "AB", "--method", "exact"]).status.code(), Some(2));
    assert_eq!(rga_kit(&["parse", "--fixture", "A"]).status.code(), Some(2));
    assert_eq!(rga_kit(&["audit", "--fixture", "A"]).status.code(), Some(2));
    assert_eq!(
        rga_kit(&["pair", "--fixture", "A", "--require-input", "7"]).status.code(),
        Some(2)
    );
    // singular plant under the ordinary inverse
    let out = rga_kit(&["rga", "--fixture", "ones3", "--method", "exact"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn malformed_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = dir.path().join("ragged.csv");
    fs::write(&ragged, "1,2\n3\n").unwrap();
    assert_eq!(rga_kit(&["rga", ragged.to_str().unwrap()]).status.code(), Some(2));
    let bad_tf = dir.path().join("bad.tf");
    fs::write(&bad_tf, "inputs: a\noutputs: b\n3/(1+\n").unwrap();
    assert_eq!(rga_kit(&["parse", bad_tf.to_str().unwrap()]).status.code(), Some(2));
    let bad_json = dir.path().join("bad.json");
    fs::write(&bad_json, r#"{"rows": 2, "cols": 2, "entries": [1, 2, 3]}"#).unwrap();
    assert_eq!(rga_kit(&["rga", bad_json.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn csv_round_trip_keeps_values_and_units() {
    let dir = tempfile::tempdir().unwrap();
    let plant = dir.path().join("sakai.csv");
    let shown = rga_kit(&["fixtures", "show", "sakai", "--format", "csv"]);
    assert!(shown.status.success());
    fs::write(&plant, &shown.stdout).unwrap();

    let from_file = json(&["rga", plant.to_str().unwrap(), "--method", "uc", "--format", "json"]);
    let from_fixture = json(&["rga", "--fixture", "sakai", "--method", "uc", "--format", "json"]);
    assert_eq!(
        from_file["results"]["plant"]["entries"],
        from_fixture["results"]["plant"]["entries"]
    );
    assert_eq!(
        from_file["results"]["plant"]["row_units"],
        from_fixture["results"]["plant"]["row_units"]
    );
    assert_eq!(
        from_file["results"]["methods"][0]["lambda"],
        from_fixture["results"]["methods"][0]["lambda"]
    );

    // and the RGA itself written as CSV parses back as a plant
    let lambda = dir.path().join("lambda.csv");
    let out = rga_kit(&["rga", "--fixture", "sakai", "--method", "uc", "--format", "csv"]);
    fs::write(&lambda, &out.stdout).unwrap();
    let back = json(&["rga", lambda.to_str().unwrap(), "--method", "mp", "--format", "json"]);
    assert_eq!(
        back["results"]["plant"]["entries"],
        from_fixture["results"]["methods"][0]["lambda"]["entries"]
    );
}

#[test]
fn fixtures_list_has_nine_plants() {
    let d = json(&["fixtures", "list", "--format", "json"]);
    let names: Vec<&str> = d["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["name"].as_str().unwrap())
        .collect();
    assert_eq!(names.len(), 9);
    assert!(names.contains(&"sakai"));
    assert_eq!(stdout(&rga_kit(&["fixtures", "list"])).lines().count(), 9);
}

#[test]
fn sakai_uc_gains_and_pairing() {
    let d = json(&["pair", "--fixture", "sakai", "--method", "uc", "--format", "json"]);
    let m = &d["results"]["methods"][0];
    let lambda = entries(&m["rga"]["lambda"]);
    let printed = [1.2586, -0.2889, 0.0, 0.0, 0.0303];
    for (got, want) in lambda.iter().zip(printed) {
        assert!((got - want).abs() < 5e-5, "{got} vs {want}");
    }
    let pairs: Vec<(u64, u64)> = m["pairing"]["assignments"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| (a["output"].as_u64().unwrap(), a["input"].as_u64().unwrap()))
        .collect();
    assert_eq!(pairs, [(0, 0), (1, 1), (2, 2), (3, 3)]);
    assert_eq!(m["pairing"]["unmatched_inputs"], serde_json::json!([4]));
}

#[test]
fn require_input_accepts_labels_and_indices() {
    let by_index = json(&[
        "pair", "--fixture", "sakai", "--method", "mp", "--require-input", "3", "--format", "json",
    ]);
    let by_label = json(&[
        "pair", "--fixture", "sakai", "--method", "mp", "--require-input", "u3", "--format", "json",
    ]);
    assert_eq!(by_index["results"], by_label["results"]);
    assert_eq!(by_index["parameters"]["rules"]["required_inputs"], serde_json::json!([2]));
    assert_eq!(by_index["results"]["methods"][0]["pairing"]["near_tie"], true);
}

#[test]
fn seconds_to_minutes_moves_mp_but_not_uc() {
    let d = json(&[
        "audit", "--fixture", "tfg-seconds", "--scenario", "seconds-to-minutes", "--format", "json",
    ]);
    let verdicts = d["results"]["verdicts"].as_array().unwrap();
    assert_eq!(verdicts[0]["method"], "mp");
    assert_eq!(verdicts[0]["pairing_changed"], true);
    assert_eq!(verdicts[1]["method"], "uc");
    assert_eq!(verdicts[1]["pairing_changed"], false);
    assert_eq!(verdicts[1]["rga_changed"], false);
}

#[test]
fn scenario_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    fs::write(
        &path,
        r#"{"name": "double-first-output", "row_factors": [2, 1, 1], "col_factors": [1, 1, 1, 1], "description": ""}"#,
    )
    .unwrap();
    let d = json(&[
        "audit", "--fixture", "tfg-seconds", "--scenario", path.to_str().unwrap(), "--format", "json",
    ]);
    assert_eq!(d["results"]["scenario"]["name"], "double-first-output");
    assert_eq!(d["results"]["verdicts"][1]["pairing_changed"], false);

    fs::write(&path, r#"{"name": "x", "row_factors": [2, 1], "col_factors": [1, 1, 1, 1]}"#).unwrap();
    let out = rga_kit(&["audit", "--fixture", "tfg-seconds", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn temperature_factor_on_sakai() {
    let d = json(&[
        "audit", "--fixture", "sakai", "--temperature-factor", "10", "--format", "json",
    ]);
    let s = &d["results"]["scenario"];
    assert_eq!(s["row_factors"], serde_json::json!([10.0, 10.0, 10.0, 1.0]));
    assert_eq!(s["col_factors"], serde_json::json!([0.1, 1.0, 1.0, 1.0, 0.1]));
    let v = d["results"]["verdicts"].as_array().unwrap();
    assert_eq!(v[0]["pairing_changed"], true);
    assert_eq!(v[1]["pairing_changed"], false);
}

#[test]
fn unit_factor_fuzz_never_flips() {
    let d = json(&[
        "audit", "--fixture", "sakai", "--fuzz", "1", "--seed", "0", "--factor-min", "1",
        "--factor-max", "1", "--format", "json",
    ]);
    for m in d["results"]["fuzz"]["methods"].as_array().unwrap() {
        assert_eq!(m["pairing_changed_trials"], 0);
    }
}

#[test]
fn parse_reports_steady_state_and_evaluation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plant.tf");
    fs::write(
        &path,
        "inputs: u1, u2\noutputs: y1, y2\n2/(1+5s) & 0.5*exp(-3s)/(1+2s)\n-1/(1+s) & 4\n",
    )
    .unwrap();
    let d = json(&["parse", path.to_str().unwrap(), "--at", "0,1", "--format", "json"]);
    assert_eq!(
        entries(&d["results"]["steady_state"]),
        [2.0, 0.5, -1.0, 4.0]
    );
    let z = &d["results"]["evaluation"]["values"][1][0];
    // -1/(1+i) = -0.5 + 0.5i
    assert!((z[0].as_f64().unwrap() + 0.5).abs() < 1e-12);
    assert!((z[1].as_f64().unwrap() - 0.5).abs() < 1e-12);

    let canonical = d["results"]["canonical"].as_str().unwrap().to_string();
    let again = dir.path().join("again.tf");
    fs::write(&again, &canonical).unwrap();
    let d2 = json(&["parse", again.to_str().unwrap(), "--format", "json"]);
    assert_eq!(d2["results"]["canonical"].as_str().unwrap(), canonical);
}

#[test]
fn precision_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_rga-kit"))
        .args(["rga", "--fixture", "A", "--method", "mp"])
        .env("RGA_KIT_PRECISION", "2")
        .output()
        .unwrap();
    assert!(stdout(&out).contains("-2.47"));
    assert!(!stdout(&out).contains("-2.471"));
    let bad = Command::new(env!("CARGO_BIN_EXE_rga-kit"))
        .args(["rga", "--fixture", "A"])
        .env("RGA_KIT_PRECISION", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
