use std::fs;
use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_unitary-measure"))
}

fn read_dir_sorted(dir: &std::path::Path) -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read_to_string(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn series_scenario_writes_exact_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r1");
    let status = binary().args(["run", "--scenario", "zerodim-series", "--out"]).arg(&out).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let text = fs::read_to_string(out.join("coefficients.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# unitary-measure"));
    assert_eq!(lines.next(), Some("n,numerator,denominator"));
    assert_eq!(lines.next(), Some("0,1,1"));
    assert_eq!(lines.next(), Some("1,-15,1"));
    assert_eq!(lines.count(), 7);
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("check,measured,tolerance,status"));
    assert!(!summary.contains("FAIL"));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = binary()
            .args(["run", "--scenario", "polar-equivalence", "--seed", "7", "--out"])
            .arg(&out)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
        read_dir_sorted(&out)
    };
    let a = run("a");
    let b = run("b");
    assert_eq!(a, b);
    let polar = &a.iter().find(|(n, _)| n == "polar.csv").unwrap().1;
    assert!(polar.lines().next().unwrap().contains("seed=7"));
}

#[test]
fn different_seeds_change_random_scenarios() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str| {
        let out = dir.path().join(seed);
        binary()
            .args(["run", "--scenario", "unitarity", "--seed", seed, "--out"])
            .arg(&out)
            .status()
            .unwrap();
        fs::read_to_string(out.join("unitarity.csv")).unwrap()
    };
    assert_ne!(run("1"), run("2"));
}

#[test]
fn bad_config_exits_two_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.cfg");
    fs::write(&config, "# harmonic\nlevels = 8\nepsilon = fast\n").unwrap();
    let output = binary()
        .args(["run", "--scenario", "proper-time", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line 3"), "{stderr}");
    assert!(!dir.path().join("out").exists());
}

#[test]
fn unknown_scenario_and_flags_exit_two() {
    let status = binary().args(["run", "--scenario", "nonsense"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
    let status = binary().args(["run", "--scenario", "unitarity", "--tol-scale", "0"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
    let status = binary().args(["run", "--bogus"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn failed_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("tight.cfg");
    fs::write(&config, "tolerance = 1e-30\n").unwrap();
    let out = dir.path().join("out");
    let status = binary()
        .args(["run", "--scenario", "zerodim-borel", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
    assert!(fs::read_to_string(out.join("summary.txt")).unwrap().contains("FAIL"));
}

#[test]
fn config_supplies_seed_and_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("from-config");
    let config = dir.path().join("run.cfg");
    fs::write(&config, format!("out = {}\nseed = 11\n", out.display())).unwrap();
    let status = binary().args(["run", "--scenario", "action-angle", "--config"]).arg(&config).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.starts_with("# unitary-measure"));
    assert!(summary.lines().next().unwrap().contains("seed=11"));
}

#[test]
fn tolerance_scale_loosens_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scaled");
    let status = binary()
        .args(["run", "--scenario", "action-decomposition", "--tol-scale", "100", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(fs::read_to_string(out.join("summary.txt")).unwrap().contains("5.000000e0"));
}
