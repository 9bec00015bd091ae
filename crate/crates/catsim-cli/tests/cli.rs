use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const SMALL_IDLE: &str = r#"
scenario = "idle_bitflip"
horizon = 50e-6
grid_points = 51
fit_window = [10e-6, 50e-6]

[params]
preset = "bare_kerr"
alpha2 = 3.0
"#;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catsim"))
        .args(args)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn run_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "idle.toml", SMALL_IDLE);
    let out = run(&["run", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("out/idle_bitflip.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "time,z_plus_alpha,z_minus_alpha,z_avg,leakage");
    assert_eq!(lines.count(), 51);
    let json = read_json(&dir.path().join("out/idle_bitflip.json"));
    assert_eq!(json["version"], env!("CARGO_PKG_VERSION"));
    let kerr = json["config"]["params"]["kerr"].as_f64().unwrap();
    assert!((kerr - 2.0 * std::f64::consts::PI * 10e6).abs() < 1e-3);
    assert_eq!(json["fit"]["window"][0].as_f64().unwrap(), 10e-6);
    assert!(json["fit"]["residual_rms"].is_number());
    assert!(json["simulated"]["gamma_x"].as_f64().unwrap() > 0.0);
    assert!(json["analytic"]["gamma_x_plateau"].as_f64().unwrap() > 0.0);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "idle.toml", SMALL_IDLE);
    assert_eq!(run(&["run", &cfg], dir.path()).status.code(), Some(0));
    let csv1 = fs::read(dir.path().join("out/idle_bitflip.csv")).unwrap();
    let json1 = fs::read(dir.path().join("out/idle_bitflip.json")).unwrap();
    assert_eq!(run(&["run", &cfg, "--workers", "3"], dir.path()).status.code(), Some(0));
    assert_eq!(csv1, fs::read(dir.path().join("out/idle_bitflip.csv")).unwrap());
    assert_eq!(json1, fs::read(dir.path().join("out/idle_bitflip.json")).unwrap());
}

#[test]
fn fit_failure_exits_two_and_keeps_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("residual_tolerance = 1e-15\n{SMALL_IDLE}");
    let cfg = write_config(dir.path(), "strict.toml", &text);
    let out = run(&["run", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let json = read_json(&dir.path().join("out/idle_bitflip.json"));
    assert!(json["fit_error"].is_string());
    assert!(json["fit"].is_null());

    let relaxed = run(&["run", &cfg, "--tolerance-scale", "1e20"], dir.path());
    assert_eq!(relaxed.status.code(), Some(0));
}

#[test]
fn dimension_cap_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "cap.toml",
        r#"
scenario = "parity_decay"
horizon = 1e-6
grid_points = 16
initial_state = "plus_cat"

[params]
preset = "paper_colored_preset"
alpha2 = 6.0
modes = 3

[model]
joint_dim_cap = 20
"#,
    );
    assert_eq!(run(&["run", &cfg], dir.path()).status.code(), Some(3));
}

#[test]
fn config_errors_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.toml");
    assert_eq!(
        run(&["run", missing.to_str().unwrap()], dir.path()).status.code(),
        Some(4)
    );

    let unknown = write_config(dir.path(), "unknown.toml", &format!("{SMALL_IDLE}\nbogus = 1\n"));
    assert_eq!(run(&["run", &unknown], dir.path()).status.code(), Some(4));

    let window = SMALL_IDLE.replace("fit_window = [10e-6, 50e-6]", "fit_window = [10e-6, 80e-6]");
    let bad = write_config(dir.path(), "window.toml", &window);
    assert_eq!(run(&["run", &bad], dir.path()).status.code(), Some(4));

    let grid = SMALL_IDLE.replace("grid_points = 51", "grid_points = 8");
    let bad = write_config(dir.path(), "grid.toml", &grid);
    assert_eq!(run(&["run", &bad], dir.path()).status.code(), Some(4));

    let custom = SMALL_IDLE.replace("preset = \"bare_kerr\"", "preset = \"custom\"");
    let bad = write_config(dir.path(), "custom.toml", &custom);
    assert_eq!(run(&["run", &bad], dir.path()).status.code(), Some(4));
}

#[test]
fn rates_sweep_writes_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "rates.toml",
        &format!("{SMALL_IDLE}\n[sweep]\nalpha2 = [3.0, 4.0]\nn_th = [0.01, 0.1]\n"),
    );
    let out = run(&["rates", &cfg, "--workers", "2"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(dir.path().join("out/idle_bitflip_rates.csv")).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "alpha2");
    assert!(headers.iter().any(|h| h == "chi1_numeric"));
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 4);
    let alpha: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(alpha, [3.0, 3.0, 4.0, 4.0]);
    let json = read_json(&dir.path().join("out/idle_bitflip_rates.json"));
    assert_eq!(json["points"], 4);
    assert_eq!(json["errors"].as_array().unwrap().len(), 0);
}

#[test]
fn sweep_run_writes_numbered_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "sweep.toml",
        &format!("output = \"idle\"\n{SMALL_IDLE}\n[sweep]\nalpha2 = [3.0, 3.5]\n"),
    );
    assert_eq!(run(&["run", &cfg], dir.path()).status.code(), Some(0));
    for i in 0..2 {
        assert!(dir.path().join(format!("out/idle_{i:02}.csv")).exists());
        let json = read_json(&dir.path().join(format!("out/idle_{i:02}.json")));
        assert_eq!(json["config"]["params"]["alpha2"].as_f64().unwrap(), [3.0, 3.5][i]);
    }
}

#[test]
fn dump_basis_writes_levels() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "basis.toml",
        "scenario = \"basis_dump\"\n[params]\nalpha2 = 6.0\n[model]\nd_gauge = 4\n",
    );
    let out = run(&["dump-basis", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("out/basis_dump_basis.csv")).unwrap();
    assert!(csv.starts_with("level,energy_even,energy_odd,chi_prime,lambda_0n,chi_empirical"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn colored_preset_follows_kerr_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "colored.toml",
        r#"
scenario = "leakage_accumulation"
horizon = 1e-7
grid_points = 16

[params]
preset = "paper_colored_preset"
alpha2 = 4.0
modes = 1
kerr = 5e6
"#,
    );
    assert_eq!(run(&["run", &cfg], dir.path()).status.code(), Some(0));
    let p = &read_json(&dir.path().join("out/leakage_accumulation.json"))["config"]["params"];
    let two_pi = 2.0 * std::f64::consts::PI;
    let delta = p["delta"].as_f64().unwrap();
    assert!((delta + 3.6 * two_pi * 5e6 * 4.0).abs() < 1e-3);
    assert!((p["g"].as_f64().unwrap() - delta.abs() / 25.0).abs() < 1e-6);
}
