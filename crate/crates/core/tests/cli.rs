use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wicknls-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> i32 {
    let mut full = vec!["wicknls"];
    full.extend_from_slice(args);
    wicknls::cli::run(full)
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["no-such-command"]), wicknls::cli::EXIT_USAGE);
    let out = scratch("noseed");
    assert_eq!(run(&["sample", "--out-dir", out.to_str().unwrap()]), wicknls::cli::EXIT_USAGE);
    assert_eq!(run(&["count", "--max-n", "6", "--out-dir", out.to_str().unwrap()]), wicknls::cli::EXIT_USAGE);
}

#[test]
fn count_writes_csv_and_json() {
    let out = scratch("count");
    assert_eq!(run(&["count", "--max-n", "4", "--out-dir", out.to_str().unwrap()]), 0);
    let csv = std::fs::read_to_string(out.join("count.csv")).unwrap();
    assert!(csv.starts_with("# schema_version:"));
    assert!(csv.lines().filter(|l| !l.starts_with('#')).count() > 2);
    let json: Value = serde_json::from_str(&std::fs::read_to_string(out.join("count.json")).unwrap()).unwrap();
    assert_eq!(json["status"], "pass");
    assert_eq!(json["command"], "count");
    assert!(json["schema_version"].is_string() || json["schema_version"].is_number());
}

#[test]
fn flags_override_config_file() {
    let out = scratch("config");
    let cfg = out.join("run.json");
    std::fs::write(&cfg, r#"{"max-n": 2, "eps": 0.3}"#).unwrap();
    assert_eq!(run(&["count", "--config", cfg.to_str().unwrap(), "--max-n", "4", "--out-dir", out.to_str().unwrap()]), 0);
    let json: Value = serde_json::from_str(&std::fs::read_to_string(out.join("count.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["max_n"], 4);
    assert_eq!(json["config"]["eps"], 0.3);

    std::fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    assert_eq!(run(&["count", "--config", cfg.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]), wicknls::cli::EXIT_USAGE);
}

#[test]
fn seeded_artifacts_are_byte_identical() {
    let (a, b) = (scratch("det-a"), scratch("det-b"));
    for dir in [&a, &b] {
        let status = Command::new(env!("CARGO_BIN_EXE_wicknls"))
            .args(["sample", "--n", "4", "--samples", "500", "--seed", "9", "--out-dir", dir.to_str().unwrap()])
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    for name in ["sample.json"] {
        let x = std::fs::read_to_string(a.join(name)).unwrap().replace(a.to_str().unwrap(), "");
        let y = std::fs::read_to_string(b.join(name)).unwrap().replace(b.to_str().unwrap(), "");
        assert_eq!(x, y);
    }
}

#[test]
fn binary_reports_status_line() {
    let out = scratch("bin");
    let output = Command::new(env!("CARGO_BIN_EXE_wicknls"))
        .args(["strichartz", "--sweep", "4,8", "--out-dir", out.to_str().unwrap()])
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.starts_with("strichartz: pass"), "{stdout}");
    assert_eq!(output.status.code(), Some(0));
}
