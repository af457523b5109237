//! End-to-end checks of the command-line surface: formats, manifests,
//! determinism, exit codes, and the cap override.

use std::process::{Command, Output};

fn rookmix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rookmix"))
        .args(args)
        .env_remove("ROOKMIX_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn data_lines(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn tv_curve_exact_fractions() {
    let out = rookmix(&["tv-curve", "--n", "3", "--d", "2", "--t-max", "2", "--mode", "exact"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# command=tv-curve"));
    assert!(text.contains("# mode=exact"));
    let lines = data_lines(&text);
    assert_eq!(lines, vec!["t,tv", "0,8/9", "1,5/9", "2,7/36"]);
    // Header ends with \n line endings only.
    assert!(!text.contains('\r'));
}

#[test]
fn tv_curve_zero_horizon_single_row() {
    let out = rookmix(&["tv-curve", "--n", "4", "--d", "3", "--t-max", "0", "--mode", "exact"]);
    let text = stdout(&out);
    assert_eq!(data_lines(&text), vec!["t,tv", "0,63/64"]);
}

#[test]
fn tv_curve_float_tracks_exact() {
    let exact = stdout(&rookmix(&["tv-curve", "--n", "3", "--d", "2", "--t-max", "8", "--mode", "exact"]));
    let float = stdout(&rookmix(&["tv-curve", "--n", "3", "--d", "2", "--t-max", "8", "--mode", "float"]));
    let parse = |text: &str, exact_mode: bool| -> Vec<f64> {
        data_lines(text)
            .iter()
            .skip(1)
            .map(|l| {
                let v = l.split(',').nth(1).unwrap();
                if exact_mode && v.contains('/') {
                    let (p, q) = v.split_once('/').unwrap();
                    p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap()
                } else {
                    v.parse::<f64>().unwrap()
                }
            })
            .collect()
    };
    for (e, f) in parse(&exact, true).iter().zip(parse(&float, false)) {
        assert!((e - f).abs() <= 1e-12);
    }
}

#[test]
fn tv_curve_spectral_flag_agrees() {
    let direct = stdout(&rookmix(&["tv-curve", "--n", "3", "--d", "2", "--t-max", "6", "--mode", "exact"]));
    let spectral = stdout(&rookmix(&[
        "tv-curve", "--n", "3", "--d", "2", "--t-max", "6", "--mode", "exact", "--spectral",
    ]));
    assert!(spectral.contains("# flag=spectral"));
    assert_eq!(data_lines(&direct), data_lines(&spectral));
}

#[test]
fn mixing_time_rows() {
    let out = rookmix(&["mixing-time", "--n", "3", "--d", "2", "--eps", "0.25,0.8888888888888889"]);
    let text = stdout(&out);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "n,d,eps,tmix");
    assert_eq!(lines[1], "3,2,0.25,2");
    assert!(lines[2].ends_with(",0"));
}

#[test]
fn bounds_json_small_board() {
    let out = rookmix(&["bounds", "--n", "3", "--d", "2", "--eps", "0.25"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let results = &doc["results"];
    assert_eq!(results["exact_tmix"], 2);
    assert_eq!(results["mcleman_upper"], 8);
    assert!((results["kim_lower"].as_f64().unwrap() - 0.9241962407465937).abs() < 1e-12);
    assert!((results["kim_upper"].as_f64().unwrap() - 4.778025251274813).abs() < 1e-12);
    // Wilson hypothesis fails at d(n-1) = 4 <= 2n = 6.
    assert!(results["wilson_lower"].is_null());
    assert_eq!(results["flags"]["wilson_lower"], "not_applicable");
    assert_eq!(results["flags"]["kim_upper"], "holds");
    assert_eq!(doc["manifest"]["schema_version"], 1);
}

#[test]
fn bounds_wilson_present_at_larger_d() {
    let out = rookmix(&["bounds", "--n", "3", "--d", "10", "--eps", "0.25"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let results = &doc["results"];
    assert!((results["wilson_lower"].as_f64().unwrap() - 7.084051993541991).abs() < 1e-9);
    assert!((results["l2_upper_paper"].as_f64().unwrap() - 12.637823850573564).abs() < 1e-9);
    assert_eq!(results["exact_tmix"], 13);
}

#[test]
fn bounds_extreme_eps_well_formed() {
    let out = rookmix(&["bounds", "--n", "3", "--d", "10", "--eps", "0.999"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc["results"]["wilson_lower"].as_f64().unwrap() < 0.0);
}

#[test]
fn verify_passes_and_reports() {
    let out = rookmix(&["verify", "--n", "3", "--d", "2", "--mode", "exact"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["results"]["summary"]["failed"], 0);
    assert_eq!(doc["results"]["summary"]["skipped"], 0);
    assert!(doc["results"]["discrepancy"].is_null());
}

#[test]
fn verify_discrepancy_record() {
    let out = rookmix(&["verify", "--n", "3", "--d", "2", "--mode", "exact", "--report-discrepancies"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let disc = &doc["results"]["discrepancy"];
    assert_eq!(disc["four_tv_sq"], "100/81");
    assert_eq!(disc["as_stated_sum"], "3/8");
    assert_eq!(disc["orthonormal_sum"], "5/4");
    assert_eq!(disc["as_stated_bounds_tv"], false);
    assert_eq!(disc["orthonormal_bounds_tv"], true);
}

#[test]
fn verify_skips_capped_checks_without_failing() {
    let out = rookmix(&["verify", "--n", "3", "--d", "13", "--mode", "float"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["results"]["summary"]["skipped"], 2);
    assert_eq!(doc["results"]["summary"]["failed"], 0);
    let lumping = doc["results"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "lumping_equivalence")
        .unwrap();
    assert_eq!(lumping["status"], "skipped");
}

#[test]
fn verify_strict_turns_skips_into_failure() {
    let out = rookmix(&["verify", "--n", "3", "--d", "13", "--mode", "float", "--strict"]);
    assert!(!out.status.success());
}

#[test]
fn cap_flag_overrides_environment() {
    // Env cap small enough to force a skip...
    let out = Command::new(env!("CARGO_BIN_EXE_rookmix"))
        .args(["verify", "--n", "3", "--d", "3", "--mode", "exact"])
        .env("ROOKMIX_CAP", "10")
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["results"]["summary"]["skipped"], 2);
    // ...and the flag wins over the environment.
    let out = Command::new(env!("CARGO_BIN_EXE_rookmix"))
        .args(["verify", "--n", "3", "--d", "3", "--mode", "exact", "--cap", "100"])
        .env("ROOKMIX_CAP", "10")
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["results"]["summary"]["skipped"], 0);
}

#[test]
fn simulate_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path_a = dir.path().join("a.csv");
    let path_b = dir.path().join("b.csv");
    for path in [&path_a, &path_b] {
        let out = rookmix(&[
            "simulate", "--n", "3", "--d", "10", "--t", "20", "--samples", "20000", "--seed", "7",
            "--out", path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let a = std::fs::read(&path_a).unwrap();
    let b = std::fs::read(&path_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn cutoff_csv_shape() {
    let out = rookmix(&["cutoff", "--n", "3", "--d", "10,20", "--eps", "0.25,0.5"]);
    let text = stdout(&out);
    let lines = data_lines(&text);
    assert_eq!(lines[0], "n,d,eps,tmix,t_c,w,u_low,u_high,ratio");
    assert_eq!(lines.len(), 5);
    // eps = 0.5 rows have ratio exactly 1.
    for line in &lines[1..] {
        let cols: Vec<&str> = line.split(',').collect();
        if cols[2] == "0.5" {
            assert_eq!(cols[8], "1");
        }
    }
}

#[test]
fn invalid_parameters_exit_with_usage_error() {
    let out = rookmix(&["tv-curve", "--n", "2", "--d", "2", "--t-max", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rookmix(&["tv-curve", "--d", "2", "--t-max", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rookmix(&["mixing-time", "--n", "3", "--d", "2", "--eps", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rookmix(&["bounds", "--n", "3", "--d", "2", "--eps", "0.25", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_path_fails() {
    let out = rookmix(&[
        "tv-curve", "--n", "3", "--d", "2", "--t-max", "1", "--out", "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn d1_warning_lands_in_manifest() {
    let out = rookmix(&["tv-curve", "--n", "3", "--d", "1", "--t-max", "1", "--mode", "exact"]);
    let text = stdout(&out);
    assert!(text.contains("# warning="));
    assert_eq!(data_lines(&text), vec!["t,tv", "0,2/3", "1,1/3"]);
}

#[test]
fn json_format_has_manifest_and_results() {
    let out = rookmix(&[
        "tv-curve", "--n", "3", "--d", "2", "--t-max", "1", "--mode", "exact", "--format", "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(doc.get("manifest").is_some());
    assert_eq!(doc["results"]["curve"][0]["tv"], "8/9");
    assert_eq!(doc["results"]["curve"][1]["tv"], "5/9");
}
