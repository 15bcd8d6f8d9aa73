//! End-to-end checks of the CLI surface: exit codes, artifact shape,
//! config round-trips, determinism.

use aquarium_cli::emit::reparse_config;
use aquarium_cli::{dispatch, scan_csv::parse_scan_csv};

fn run_to_file(args: &[&str]) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out");
    let mut argv: Vec<String> = ["aquarium"]
        .iter()
        .chain(args.iter())
        .map(|s| s.to_string())
        .collect();
    argv.push("--out".into());
    argv.push(path.to_str().unwrap().into());
    let code = dispatch(argv);
    let text = std::fs::read_to_string(&path).unwrap_or_default();
    (code, text)
}

#[test]
fn empty_argv_usage_exit_2() {
    assert_eq!(dispatch(["aquarium"]), 2);
}

#[test]
fn unknown_subcommand_exit_2() {
    assert_eq!(dispatch(["aquarium", "frobnicate"]), 2);
}

#[test]
fn bad_domain_json_exit_2() {
    let (code, _) = run_to_file(&["rotnum", "--domain", r#"{"type":"hexagon"}"#, "--lambda", "0.5"]);
    assert_eq!(code, 2);
}

#[test]
fn bad_lambda_exit_3() {
    // lambda outside (0,1) is a numerical-domain failure at billiard level
    let (code, _) = run_to_file(&["rotnum", "--domain", "disk", "--lambda", "1.5"]);
    assert_eq!(code, 3);
}

#[test]
fn rotnum_square_matches_closed_form() {
    let (code, text) = run_to_file(&[
        "rotnum", "--domain", "square", "--lambda", "0.6", "--orbit", "50000",
    ]);
    assert_eq!(code, 0);
    let data_line = text.lines().nth(2).unwrap();
    let fields: Vec<f64> = data_line.split(',').map(|s| s.parse().unwrap()).collect();
    assert!((fields[1] - 3.0 / 7.0).abs() < 1e-4);
    assert!(fields[2] <= 3.0 / 7.0 && 3.0 / 7.0 <= fields[3]);
}

#[test]
fn every_csv_command_round_trips_config() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["scan", "--domain", "disk", "--grid", "4", "--orbit", "500"],
        vec!["rotnum", "--domain", "disk", "--lambda", "0.4", "--orbit", "500"],
        vec!["orbit", "--domain", "square", "--lambda", "0.55", "--steps", "16"],
        vec!["square-evolve", "--lambda0", "0.77", "--tmax", "5", "--dt", "1", "--modes", "8"],
        vec![
            "spectral-measure",
            "--center",
            "0.5",
            "--eps-list",
            "0.1,0.01",
            "--modes",
            "16",
        ],
        vec!["dyadic", "--lambda0", "0.77", "--modes", "8", "--t", "3"],
        vec![
            "layer-solve",
            "--domain",
            "disk",
            "--omega",
            "0.6,0.1",
            "--probes",
            "3",
            "--nodes",
            "32",
        ],
        vec![
            "lap-sweep",
            "--domain",
            "disk",
            "--lambda0",
            "0.7",
            "--h-start",
            "0.1",
            "--h-steps",
            "2",
            "--probes",
            "2",
            "--nodes",
            "32",
        ],
    ];
    for args in runs {
        let (code, text) = run_to_file(&args);
        assert_eq!(code, 0, "{args:?} failed:\n{text}");
        let cfg = reparse_config(&text)
            .unwrap_or_else(|| panic!("{args:?}: no config comment"))
            .unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert_eq!(cfg.command, args[0]);
        // header row follows the comment
        assert!(text.lines().nth(1).unwrap().contains(','));
    }
}

#[test]
fn orbit_csv_shape_and_lift() {
    let (code, text) = run_to_file(&[
        "orbit", "--domain", "disk", "--lambda", "0.707106781186547", "--steps", "4",
        "--theta0", "0",
    ]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(2)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 5);
    let lift: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    for (k, v) in [0.0, 0.5, 1.0, 1.5, 2.0].iter().enumerate() {
        assert!((lift[k] - v).abs() < 1e-9);
    }
}

#[test]
fn scan_determinism_byte_identical() {
    let args = [
        "scan", "--domain", r#"{"type":"tilted_square","eta":0.15707963267948966}"#,
        "--grid", "6", "--orbit", "2000", "--seed", "11",
    ];
    let (c1, t1) = run_to_file(&args);
    let (c2, t2) = run_to_file(&args);
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    assert_eq!(t1, t2);
}

#[test]
fn diophantine_value_emits_profile_json() {
    let (code, text) = run_to_file(&["diophantine", "--value", "0.5", "--qmax", "10"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["profiles"][0]["resonant"][1], 2);
    assert!(doc["note"].as_str().unwrap().contains("finite-scale"));
}

#[test]
fn diophantine_from_scan_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let scan_path = dir.path().join("scan.csv");
    let code = dispatch([
        "aquarium",
        "scan",
        "--domain",
        "disk",
        "--grid",
        "4",
        "--orbit",
        "2000",
        "--out",
        scan_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let out_path = dir.path().join("prof.json");
    let code = dispatch([
        "aquarium",
        "diophantine",
        "--from-scan",
        scan_path.to_str().unwrap(),
        "--qmax",
        "100",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(doc["profiles"].as_array().unwrap().len(), 4);
}

#[test]
fn scan_csv_reader_accepts_emitted_output() {
    let (code, text) = run_to_file(&["scan", "--domain", "disk", "--grid", "5", "--orbit", "1000"]);
    assert_eq!(code, 0);
    let rows = parse_scan_csv(&text).unwrap();
    assert_eq!(rows.len(), 5);
}

#[test]
fn conjugate_emits_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("conj.json");
    let csv_path = dir.path().join("phi.csv");
    let code = dispatch([
        "aquarium",
        "conjugate",
        "--domain",
        "disk",
        "--lambda",
        "0.77",
        "--birkhoff-n",
        "2000",
        "--grid",
        "256",
        "--kam-iters",
        "2",
        "--csv-out",
        csv_path.to_str().unwrap(),
        "--out",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(json_path).unwrap()).unwrap();
    // the disk billiard is already a rotation, so the conjugacy is trivial
    let hist = doc["residual_history"].as_array().unwrap();
    assert!(hist[hist.len() - 1].as_f64().unwrap() < 1e-9);
    let csv = std::fs::read_to_string(csv_path).unwrap();
    assert_eq!(csv.lines().count(), 2 + 1024);
}

#[test]
fn square_evolve_energy_starts_at_zero() {
    let (code, text) = run_to_file(&[
        "square-evolve", "--lambda0", "0.8", "--tmax", "2", "--dt", "0.5", "--modes", "16",
    ]);
    assert_eq!(code, 0);
    let first_data: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(first_data[0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(first_data[1].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn threads_env_accepted() {
    std::env::set_var("AQUARIUM_THREADS", "2");
    let (code, _) = run_to_file(&["rotnum", "--domain", "disk", "--lambda", "0.3", "--orbit", "100"]);
    std::env::remove_var("AQUARIUM_THREADS");
    assert_eq!(code, 0);
}
