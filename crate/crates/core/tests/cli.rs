//! End-to-end runs of the `smol` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn smol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smol"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn config(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const SMALL: &str = r#"
diffusion_coefficient = 1.0

[sink]
type = "constant"
k0 = 1.0

[ic]
type = "delta"
x0 = -1.0

[grid]
t_max = 1.0
n_steps = 128
half_width = 16.0
n_points = 321
"#;

#[test]
fn origin_writes_csv_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = smol(&["origin", "--config", &cfg, "--out", out.to_str().unwrap(), "--quiet"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stderr.is_empty());
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let text = String::from_utf8(text).unwrap();
    assert!(text.starts_with("t,origin_density,free_forcing\n") && text.ends_with('\n'));
    assert_eq!(text.lines().count(), 130);
}

#[test]
fn stdout_when_no_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let o = smol(&["origin", "--config", &cfg, "--method", "analytic"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(
        text.lines().nth(1),
        Some("0.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0")
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("via analytic"));
}

#[test]
fn field_rows_and_off_grid_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let o = smol(&["field", "--config", &cfg, "--times", "0.5,1", "--quiet"]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 1 + 2 * 321);
    let o = smol(&[
        "field", "--config", &cfg, "--times", "0.5,1", "--method", "fdoracle", "--quiet",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 1 + 2 * 321);

    let o = smol(&["field", "--config", &cfg, "--times", "0.3"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("0.296875") && err.contains("0.3046875"), "{err}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |body: &str, args: &[&str]| {
        let cfg = write_config(dir.path(), body);
        let mut all = vec![args[0], "--config", cfg.as_str()];
        all.extend_from_slice(&args[1..]);
        smol(&all).status.code()
    };
    assert_eq!(
        smol(&["origin", "--config", "/no/such/file.toml"]).status.code(),
        Some(1)
    );
    assert_eq!(run("diffusion_coefficient = [", &["origin"]), Some(2));
    assert_eq!(smol(&["frobnicate"]).status.code(), Some(2));
    let origin_delta = SMALL
        .replace("type = \"constant\"\nk0 = 1.0", "type = \"inverse_time\"\nalpha = 1.0")
        .replace("x0 = -1.0", "x0 = 0.0");
    assert_eq!(run(&origin_delta, &["origin"]), Some(3));
    assert_eq!(
        run(
            &SMALL.replace("type = \"constant\"\nk0 = 1.0", "type = \"linear\"\nalpha = 1.0"),
            &["origin", "--method", "analytic"]
        ),
        Some(3)
    );
    // a sink with no decay cannot be summed as a shift series
    let growing = SMALL.replace(
        "type = \"constant\"\nk0 = 1.0",
        "type = \"exponential\"\nbeta = 1.0\ndecay = 0.0",
    );
    assert_eq!(run(&growing, &["origin", "--method", "laplace"]), Some(3));
    // the shift series needs more terms than the cap allows
    let stiff = SMALL.replace(
        "type = \"constant\"\nk0 = 1.0",
        "type = \"exponential\"\nbeta = 20.0\ndecay = 5.0",
    );
    assert_eq!(run(&stiff, &["origin", "--method", "laplace"]), Some(4));
    let narrow = SMALL
        .replace("half_width = 16.0", "half_width = 3.0")
        .replace("n_points = 321", "n_points = 61");
    assert_eq!(run(&narrow, &["origin", "--method", "fdoracle"]), Some(5));
    assert_eq!(run(SMALL, &["converge", "--ladder", "64,128"]), Some(3));
}

#[test]
fn validate_passes_and_coarse_grid_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = smol(&[
        "validate",
        "--config",
        &config("constant.toml"),
        "--out",
        out.to_str().unwrap(),
        "--quiet",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["methods"].as_array().unwrap().len(), 4);

    let o = smol(&["validate", "--config", &config("constant_coarse.toml"), "--quiet"]);
    assert_eq!(o.status.code(), Some(6));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn validate_zero_sink_passes() {
    let o = smol(&["validate", "--config", &config("zero.toml"), "--quiet"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn converge_reports_second_order() {
    let o = smol(&["converge", "--config", &config("constant.toml"), "--quiet"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(
        rows.iter().map(|r| r[0]).collect::<Vec<_>>(),
        ["512", "1024", "2048", "4096"]
    );
    assert_eq!(rows[0][2], "");
    for r in &rows[1..] {
        let order: f64 = r[2].parse().unwrap();
        assert!(order.is_finite() && order >= 1.5, "{text}");
    }
}

#[test]
fn shipped_configs_parse() {
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let cfg = smoluchowski::cli::RunConfig::load(&path).unwrap();
        cfg.problem().unwrap();
        assert_eq!(cfg.diffusion_coefficient, 1.0);
        assert_eq!(cfg.grid.t_max, 4.0);
    }
}
