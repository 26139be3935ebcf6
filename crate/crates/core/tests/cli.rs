use std::path::Path;
use std::process::{Command, Output};

fn combwalk(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_combwalk"))
        .args(args)
        .env_remove("COMBWALK_OUT")
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("run.toml");
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn config_errors_exit_2_and_list_every_violation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "experiment = \"distance_cdf\"\nk = 1\nwalkers = 2\n");
    let out = combwalk(&["experiment", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("k: distance experiments need at least 2 walkers"), "{err}");
    assert!(err.contains("walkers: unknown key"), "{err}");
}

#[test]
fn missing_config_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = combwalk(&["experiment", "--config", "nope.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn resource_guard_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "horizon = 9000\n");
    let out = combwalk(&["exact", "--config", &cfg, "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn failing_verdict_exits_1_and_is_listed_in_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "experiment = \"lil\"\nn_max = 2000\nreplicates = 4\nband_low = 10.0\nband_high = 11.0\n",
    );
    let out = combwalk(&["experiment", "--config", &cfg, "--out", "o", "--format", "json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/experiment.json")).unwrap()).unwrap();
    assert_eq!(json["passed"], false);
    assert_eq!(json["experiments"][0]["verdicts"][0]["passed"], false);
    assert_eq!(json["experiments"][0]["verdicts"][0]["claim"], "law of the iterated logarithm");
    assert!(!dir.path().join("o/experiment.csv").exists());
}

#[test]
fn passing_experiment_exits_0_with_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "experiment = \"reversibility\"\nk_max = 4\nhorizon = 40\n");
    let out = combwalk(&["experiment", "--config", &cfg, "--seed", "9", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("o/experiment.csv")).unwrap();
    let first = csv.lines().next().unwrap();
    assert!(first.starts_with("# combwalk-csv v1 config_hash="), "{first}");
    assert!(first.ends_with("seed=9"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/experiment.json")).unwrap()).unwrap();
    assert_eq!(json["seed"], 9);
    assert_eq!(json["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "experiment = \"series\"\ngraph = \"comb\"\nk = 3\n");
    let out = Command::new(env!("CARGO_BIN_EXE_combwalk"))
        .args(["experiment", "--config", &cfg, "--format", "csv"])
        .env("COMBWALK_OUT", dir.path().join("envout"))
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("envout/experiment.csv").exists());
}

#[test]
fn csv_is_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "experiment = \"collisions\"\ngraph = \"comb\"\nk = 3\nn_max = 5000\nwindow_start = 1000\nreplicates = 64\n",
    );
    let mut seen = Vec::new();
    for (threads, out_dir) in [("1", "a"), ("8", "b"), ("8", "c")] {
        let out = combwalk(&["experiment", "--config", &cfg, "--threads", threads, "--out", out_dir], dir.path());
        assert!(out.status.code().is_some_and(|c| c <= 1));
        seen.push(std::fs::read(dir.path().join(out_dir).join("experiment.csv")).unwrap());
    }
    assert!(seen[0] == seen[1], "1 vs 8 threads differ");
    assert!(seen[1] == seen[2], "repeated runs differ");
}

#[test]
fn simulate_and_exact_write_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "graph = \"comb\"\nk = 3\nn_max = 4096\nreplicates = 8\nhorizon = 8\n");
    assert_eq!(combwalk(&["simulate", "--config", &cfg, "--out", "s"], dir.path()).status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("s/simulate.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("simulate_comb_k3,4096,8,max_distance_mean,")));
    assert_eq!(combwalk(&["exact", "--config", &cfg, "--out", "e"], dir.path()).status.code(), Some(0));
    let table = std::fs::read_to_string(dir.path().join("e/kernel_origin_n8.txt")).unwrap();
    assert_eq!(table, include_str!("data/kernel_origin_n8.txt"));
}
