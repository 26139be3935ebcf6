//! CSV and JSON artifacts.
//!
//! CSV schema v1: a comment line `# combwalk-csv v1 config_hash=<hex> seed=<u64>`,
//! then the header
//! `experiment,checkpoint_n,replicate_count,statistic_name,value,target,tolerance,verdict`.
//! Floats use the shortest representation that round-trips; absent
//! targets, tolerances and verdicts are empty fields; verdicts are `pass` or `fail`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lab::{ExperimentReport, Verdict};

pub const CSV_SCHEMA: &str = "combwalk-csv v1";
pub const CSV_HEADER: &str = "experiment,checkpoint_n,replicate_count,statistic_name,value,target,tolerance,verdict";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn render_csv(reports: &[ExperimentReport], config_hash: &str, seed: u64) -> String {
    let mut out = String::new();
    writeln!(out, "# {CSV_SCHEMA} config_hash={config_hash} seed={seed}").expect("string write");
    writeln!(out, "{CSV_HEADER}").expect("string write");
    for r in reports.iter().flat_map(|r| &r.rows) {
        let verdict = match r.verdict {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "",
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.experiment,
            r.checkpoint_n,
            r.replicate_count,
            r.statistic_name,
            r.value,
            opt(r.target),
            opt(r.tolerance),
            verdict
        )
        .expect("string write");
    }
    out
}

#[derive(Debug, Serialize)]
pub struct Summary<'a> {
    pub schema: &'static str,
    pub command: &'a str,
    pub config_hash: &'a str,
    pub seed: u64,
    pub wall_time_seconds: f64,
    pub passed: bool,
    pub experiments: Vec<ExperimentSummary<'a>>,
}

#[derive(Debug, Serialize)]
pub struct ExperimentSummary<'a> {
    pub experiment: &'a str,
    pub passed: bool,
    pub verdicts: &'a [Verdict],
}

pub fn render_json(command: &str, reports: &[ExperimentReport], config_hash: &str, seed: u64, wall_time_seconds: f64) -> String {
    let summary = Summary {
        schema: "combwalk-summary v1",
        command,
        config_hash,
        seed,
        wall_time_seconds,
        passed: reports.iter().all(|r| r.passed()),
        experiments: reports
            .iter()
            .map(|r| ExperimentSummary {
                experiment: &r.experiment,
                passed: r.passed(),
                verdicts: &r.verdicts,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&summary).expect("summary serializes")
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout_is_pinned() {
        let mut rep = ExperimentReport::new("demo", 7);
        rep.row(16, 3, "mean", 0.5).with_target(0.25, 0.1, false);
        rep.row(32, 3, "median", 1.0);
        let csv = render_csv(&[rep], "abc", 7);
        assert_eq!(
            csv,
            "# combwalk-csv v1 config_hash=abc seed=7\n\
             experiment,checkpoint_n,replicate_count,statistic_name,value,target,tolerance,verdict\n\
             demo,16,3,mean,0.5,0.25,0.1,fail\n\
             demo,32,3,median,1,,,\n"
        );
    }

    #[test]
    fn json_lists_verdicts() {
        let mut rep = ExperimentReport::new("demo", 7);
        rep.verdict("x <= 1", "a bound", false, "x = 2");
        let json = render_json("experiment", &[rep], "abc", 7, 0.1);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["passed"], false);
        assert_eq!(v["experiments"][0]["verdicts"][0]["claim"], "a bound");
    }
}
