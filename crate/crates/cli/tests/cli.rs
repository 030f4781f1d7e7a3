use std::process::{Command, Output};

fn bateman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bateman"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = bateman(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn rows(v: &serde_json::Value) -> Vec<(i64, i64, i64, i64)> {
    v["result"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            let g = |k: &str| r[k].as_i64().unwrap();
            (g("n1"), g("n2"), g("p"), g("q"))
        })
        .collect()
}

#[test]
fn spectrum_is_plus() {
    let v = json(&[
        "spectrum",
        "--approach",
        "is",
        "--branch",
        "+",
        "--n-cap",
        "1",
    ]);
    assert_eq!(rows(&v), vec![(0, 0, 1, 0), (0, 1, 2, -1), (1, 0, 2, 1)]);
    assert_eq!(v["passed"], true);
}

#[test]
fn spectrum_ft_minus_vacuum() {
    let v = json(&["spectrum", "--approach", "ft", "--branch=-", "--n-cap", "0"]);
    assert_eq!(rows(&v), vec![(0, 0, 0, -1)]);
    assert_eq!(v["result"]["rows"][0]["class"], "decaying");
}

#[test]
fn chi_sign_selects_is_branch() {
    let v = json(&[
        "spectrum",
        "--approach",
        "is",
        "--chi-sign",
        "-",
        "--n-cap",
        "1",
    ]);
    assert_eq!(rows(&v)[1], (0, 1, 2, 1));
}

#[test]
fn verify_all_passes() {
    let out = bateman(&["verify", "all"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn verify_small_cutoff() {
    assert_eq!(
        bateman(&["verify", "ft", "--n-max", "4"]).status.code(),
        Some(0)
    );
}

#[test]
fn injected_fault_fails() {
    let out = bateman(&["verify", "algebra", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
}

#[test]
fn output_is_deterministic() {
    let args = ["norms", "--n1", "1", "--n2", "0"];
    let a = bateman(&args);
    let b = bateman(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        bateman(&["spectrum", "--n-cap", "17"]).status.code(),
        Some(2)
    );
    assert_eq!(bateman(&["--no-such-flag"]).status.code(), Some(2));
    assert_eq!(bateman(&["classify", "--k", "0.1"]).status.code(), Some(2));
    assert_eq!(
        bateman(&["verify", "--tol-scale", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn csv_trajectory() {
    let out = bateman(&["evolve", "--format", "csv", "--steps", "4", "--t-max", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,re_factor,im_factor,abs2_factor");
    assert_eq!(lines.len(), 6);
    // FT + vacuum grows as e^{2 lambda t} in squared modulus
    let last: Vec<f64> = lines[5].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((last[3] - 2f64.exp()).abs() < 1e-12);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("bateman-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "gamma = 0.5\nn-cap = 0\nbranch = \"-\"\n").unwrap();
    let path = cfg.to_str().unwrap();
    let v = json(&["spectrum", "--config", path]);
    assert_eq!(v["params"]["gamma"].as_f64(), Some(0.5));
    assert_eq!(rows(&v), vec![(0, 0, 0, -1)]);
    let v = json(&["spectrum", "--config", path, "--gamma", "1", "--n-cap", "1"]);
    assert_eq!(v["params"]["gamma"].as_f64(), Some(1.0));
    assert_eq!(rows(&v).len(), 3);
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(
        bateman(&["spectrum", "--config", path]).status.code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).ok();
}
