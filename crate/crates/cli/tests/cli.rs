use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn default_config() -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml");
    std::fs::read_to_string(path).unwrap()
}

fn run(dir: &Path, cmd: &str, config: &str, extra: &[&str]) -> (Output, PathBuf) {
    let cfg = dir.join(format!("{cmd}.toml"));
    std::fs::write(&cfg, config).unwrap();
    let out = dir.join(format!("{cmd}.out"));
    let output = Command::new(env!("CARGO_BIN_EXE_gravphase"))
        .arg(cmd)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(extra)
        .output()
        .unwrap();
    (output, out)
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn missing_key_names_field_and_exits_2() {
    let dir = TempDir::new().unwrap();
    let cfg = default_config().replace("n = 256\n", "");
    let (out, _) = run(dir.path(), "evolve", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid.n"));
}

#[test]
fn unknown_key_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = default_config().replace("[grid]\n", "[grid]\nspacing = 0.1\n");
    let (out, _) = run(dir.path(), "interfere", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("spacing"));
}

#[test]
fn interfere_rows_match_canonical_values() {
    let dir = TempDir::new().unwrap();
    let (out, csv) = run(dir.path(), "interfere", &default_config(), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let header = std::fs::read_to_string(&csv).unwrap();
    assert!(header.starts_with(
        "t,re_overlap,im_overlap,visibility,phase,phase_unwrapped,predicted_phase,predicted_visibility\n"
    ));
    let rows = rows(&csv);
    assert_eq!(rows.len(), 11);
    let first: Vec<f64> = rows[0][1..].iter().map(|s| num(s)).collect();
    for (got, want) in first.iter().zip([1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]) {
        assert!((got - want).abs() < 1e-12, "{first:?}");
    }
    let last = &rows[10];
    assert_eq!(num(&last[0]), 1.0);
    assert!((num(&last[5]) - 1.0 / 3.0).abs() < 1e-5);
    assert!((num(&last[3]) - (-0.625_f64).exp()).abs() < 1e-4);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let (_, a) = run(dir.path(), "interfere", &default_config(), &[]);
    let first = std::fs::read(&a).unwrap();
    let (_, b) = run(dir.path(), "interfere", &default_config(), &[]);
    assert_eq!(first, std::fs::read(&b).unwrap());
}

#[test]
fn evolve_spread_column_ignores_gravity() {
    let dir = TempDir::new().unwrap();
    let (o1, falling) = run(dir.path(), "evolve", &default_config(), &[]);
    assert!(o1.status.success());
    let falling = rows(&falling);
    let free_dir = TempDir::new().unwrap();
    let (o2, free) = run(free_dir.path(), "evolve", &default_config().replace("g = 1.0", "g = 0.0"), &[]);
    assert!(o2.status.success());
    for (a, b) in falling.iter().zip(&rows(&free)) {
        assert!((num(&a[3]) - num(&b[3])).abs() < 1e-10);
        assert!((num(&a[5]) - num(&b[5])).abs() < 1e-6);
    }
}

#[test]
fn verify_on_tiny_grid_fails_with_report() {
    let dir = TempDir::new().unwrap();
    let cfg = default_config()
        .replace("n = 256", "n = 8")
        .replace("sigma0 = 1.0", "sigma0 = 10.0");
    let (out, json) = run(dir.path(), "verify", &cfg, &[]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL initial_state"));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(report["all_passed"], false);
}

#[test]
fn verify_default_passes_and_seed_override_is_recorded() {
    let dir = TempDir::new().unwrap();
    let (out, json) = run(dir.path(), "verify", &default_config(), &["--seed", "99"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = std::fs::read_to_string(json).unwrap();
    assert!(text.contains("seed 99"));
}

#[test]
fn sparse_times_exit_4() {
    let dir = TempDir::new().unwrap();
    let cfg = default_config()
        .replace("g = 1.0", "g = 2.0")
        .replace("times = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]", "times = [0.0, 0.8, 1.6]");
    let (out, _) = run(dir.path(), "interfere", &cfg, &[]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("times"));
}

#[test]
fn packet_leaving_grid_exits_3() {
    let dir = TempDir::new().unwrap();
    let cfg = default_config().replace("times = [0.0, 0.5, 1.0, 1.5, 2.0]", "times = [0.0, 6.0]");
    let (out, _) = run(dir.path(), "evolve", &cfg, &[]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
