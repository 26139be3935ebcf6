//! Monte Carlo experiments on walker ensembles.
//!
//! Every experiment draws walker `i` of replicate `r` from
//! `RngStream::for_walker(seed, key, i, r)`, runs replicates through
//! [`run_replicates`] and reduces in replicate order, so results do not
//! depend on the thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub mod collisions;
pub mod construction;
pub mod distance_cdf;
pub mod lil;
pub mod pairs;
pub mod series;
pub mod tails;

pub use collisions::{collision_growth_experiment, CollisionGrowth};
pub use construction::{construction_equivalence, hitting_time_gof, ConstructionCheck, HittingGof};
pub use distance_cdf::{distance_cdf_experiment, DistanceCdf};
pub use lil::{lil_profile, lil_profiles, LilProfile, LilSpec, Statistic};
pub use pairs::{
    backbone_coincidence_experiment, comb_pair_run, lower_class_experiment, CombPairRun,
    LowerClassSpec, CONSTANT_SMALL_DISTANCE,
};
pub use series::{series_classify, Family, SeriesCriterion, SeriesVerdict};
pub use tails::{tail_bound_checks, TailChecks, TailSpec};

/// Underlying lattice of an experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "graph")]
pub enum Graph {
    Zd { d: usize },
    Comb,
}

impl Graph {
    pub fn label(&self) -> String {
        match self {
            Graph::Zd { d } => format!("z{d}"),
            Graph::Comb => "comb".into(),
        }
    }
}

/// Run `count` replicates in parallel and return their results in replicate order.
pub fn run_replicates<T, F>(count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

/// `log log n`, defined for `n >= 16` so that the normalizers built on it are increasing.
pub fn log_log(n: u64) -> Result<f64> {
    if n < 16 {
        return Err(domain(format!("log log normalizers need n >= 16, got {n}")));
    }
    Ok((n as f64).ln().ln())
}

/// One CSV row: a statistic at a checkpoint, with optional target and verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub experiment: String,
    pub checkpoint_n: u64,
    pub replicate_count: u64,
    pub statistic_name: String,
    pub value: f64,
    pub target: Option<f64>,
    pub tolerance: Option<f64>,
    pub verdict: Option<bool>,
}

/// A pass/fail rule applied to an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub rule: String,
    /// The mathematical statement the rule probes.
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub config_hash: String,
    pub rows: Vec<Row>,
    pub verdicts: Vec<Verdict>,
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>, seed: u64) -> Self {
        Self {
            experiment: experiment.into(),
            seed,
            config_hash: String::new(),
            rows: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn row(&mut self, checkpoint_n: u64, replicate_count: u64, name: &str, value: f64) -> &mut Row {
        self.rows.push(Row {
            experiment: self.experiment.clone(),
            checkpoint_n,
            replicate_count,
            statistic_name: name.to_string(),
            value,
            target: None,
            tolerance: None,
            verdict: None,
        });
        self.rows.last_mut().expect("just pushed")
    }

    pub fn verdict(&mut self, rule: &str, claim: &str, passed: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            rule: rule.to_string(),
            claim: claim.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn merge(&mut self, other: ExperimentReport) {
        self.rows.extend(other.rows);
        self.verdicts.extend(other.verdicts);
    }
}

impl Row {
    pub fn with_target(&mut self, target: f64, tolerance: f64, verdict: bool) -> &mut Self {
        self.target = Some(target);
        self.tolerance = Some(tolerance);
        self.verdict = Some(verdict);
        self
    }

    pub fn with_verdict(&mut self, verdict: bool) -> &mut Self {
        self.verdict = Some(verdict);
        self
    }
}

/// Checkpoints `>= from`: the powers of two up to `n_max`, plus `n_max` itself.
pub fn dyadic_from(from: u64, n_max: u64) -> Vec<u64> {
    let mut t: Vec<u64> = crate::walk::dyadic_times(n_max)
        .into_iter()
        .filter(|&t| t >= from)
        .collect();
    if t.last() != Some(&n_max) && n_max >= from {
        t.push(n_max);
    }
    t
}
