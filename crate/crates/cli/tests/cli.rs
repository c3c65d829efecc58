use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use monopole_cli::RunConfig;

fn monopole(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monopole"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove(monopole_cli::OUT_ENV)
        .output()
        .expect("binary runs")
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("csv" | "json")))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect()
}

#[test]
fn phaseshift_reports_the_phase_table_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = monopole(&["phaseshift", "--n", "1", "--ell", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1);
    let table = std::fs::read_to_string(dir.path().join("phaseshift.csv")).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("n,ell,delta_long_time,delta_asymptotic,defect"));
    let fields: Vec<f64> = lines.next().unwrap().split(',').map(|f| f.parse().unwrap()).collect();
    assert!((fields[2] - 0.6).abs() <= 1e-2 && (fields[3] - 0.6).abs() <= 1e-2, "{fields:?}");
    assert!(dir.path().join("phaseshift.csv.config.json").exists());
    assert!(dir.path().join("phaseshift.svg").exists());
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("never");
    let out = monopole(&["waveop", "--n", "1", "--ell", "0"], &target);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("channel"));
    assert!(!target.exists());
    let out = monopole(&["cook", "--n", "1", "--ell", "1", "--t-max", "0"], &target);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty time schedule"));
    assert_eq!(monopole(&["scatter"], &target).status.code(), Some(2));
    assert_eq!(monopole(&["cook", "--bogus", "1"], &target).status.code(), Some(2));
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[channel]\nspin = 1\n").unwrap();
    assert_eq!(monopole(&["cook", "--config", bad.to_str().unwrap()], &target).status.code(), Some(2));
    assert!(!target.exists());
}

#[test]
fn nonconvergence_exits_with_one_and_keeps_the_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let out = monopole(&["waveop", "--n", "1", "--ell", "1", "--t-max", "20"], dir.path());
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let diag: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("waveop.error.json")).unwrap()).unwrap();
    assert!(diag["defect"].as_f64().unwrap() > 1e-3);
    assert_eq!(diag["threshold"].as_f64(), Some(1e-3));
    let table = std::fs::read_to_string(dir.path().join("waveop_defects.csv")).unwrap();
    assert_eq!(table.lines().count(), 3, "{table}");
}

#[test]
fn refused_potential_exits_with_two_after_writing_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = monopole(&["perturb", "--potential", "power", "--exponent", "-1", "--t-max", "10"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("square integrable"));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("perturb_report.json")).unwrap()).unwrap();
    assert_eq!(report["v2_ok"], serde_json::Value::Bool(false));
    assert_eq!(report["evolution_ok"], serde_json::Value::Bool(true));
}

#[test]
fn config_file_flags_and_sidecar_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(
        &path,
        "command = \"harmonics\"\n[channel]\nn = 2\nell = 2\n[tolerance]\nconvergence = 2e-3\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = monopole(&["harmonics", "--config", path.to_str().unwrap(), "--ell", "3"], &out_dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let sidecar = std::fs::read_to_string(out_dir.join("harmonics.json.config.json")).unwrap();
    let cfg: RunConfig = serde_json::from_str(&sidecar).unwrap();
    assert_eq!((cfg.channel.n, cfg.channel.ell, cfg.tolerance.convergence), (2, 3, 2e-3));
    assert_eq!(cfg.output_dir.as_deref(), Some(out_dir.as_path()));
    assert_eq!(RunConfig::from_toml(&cfg.to_toml().unwrap()).unwrap(), cfg);
    let summary: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out_dir.join("harmonics.json")).unwrap()).unwrap();
    assert_eq!(summary["basis_size"], 5 + 7);
    // The file names a different command.
    let out = monopole(&["cook", "--config", path.to_str().unwrap()], &out_dir);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<BTreeMap<String, Vec<u8>>> = (0..2)
        .map(|_| {
            let _ = std::fs::remove_dir_all(dir.path());
            for args in [&["transform", "--ell", "2"][..], &["cook", "--t-max", "16"][..]] {
                assert_eq!(monopole(args, dir.path()).status.code(), Some(0));
            }
            snapshot(dir.path())
        })
        .collect();
    assert!(runs[0].len() >= 10);
    assert_eq!(runs[0], runs[1]);
    let svg = std::fs::read_to_string(dir.path().join("cook.svg")).unwrap();
    assert!(svg.starts_with("<svg") && !svg.contains("<metadata>"));
}

#[test]
fn output_directory_falls_back_to_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_monopole"))
        .args(["harmonics", "--n", "1", "--ell", "1"])
        .env(monopole_cli::OUT_ENV, dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("harmonics_gram.csv").exists());
}
