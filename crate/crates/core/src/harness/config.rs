//! Flat key-value experiment configuration (TOML syntax).
//!
//! Every key is optional and falls back to [`ExperimentConfig::default`].
//! Unknown keys, type errors and precondition violations are all collected
//! before anything runs.
//!
//! | key | type | meaning |
//! |---|---|---|
//! | `experiment` | string | one of [`ExperimentKind`] (snake case) |
//! | `graph` | `"zd"` or `"comb"` | lattice |
//! | `d` | integer | dimension for `zd` |
//! | `k` | integer | number of walkers |
//! | `n_max` | integer | horizon |
//! | `replicates` | integer | ensemble size |
//! | `master_seed` | integer | root of all random streams |
//! | `statistic` | string | `max_distance`, `abs_c1`, `abs_c2` or `norm` |
//! | `burn_in` | integer | first time in LIL running maxima (>= 16) |
//! | `eps` | float | small-distance exponent slack, in (0, 1/8) |
//! | `delta` | float | geometric-sum excess |
//! | `window_start` | integer | first time scanned for the envelope event |
//! | `level` | integer | hitting level r |
//! | `horizon` | integer | hitting horizon / DP steps |
//! | `k_max` | integer | largest tooth height or displacement in DP scans |
//! | `alpha`, `beta` | float | series test-function parameters |
//! | `family` | `"power"` or `"log_power"` | series family |
//! | `p_threshold` | float | chi-square acceptance (p above) |
//! | `ks_threshold` | float | KS acceptance (distance at most) |
//! | `band_low`, `band_high` | float | LIL band; defaults depend on the statistic |
//! | `tolerance` | float | acceptance tolerance; default depends on the experiment |
//! | `scale` | `"full"` or `"smoke"` | problem sizes for `verify-all` |
//! | `output_dir` | string | artifact directory |
//! | `format` | `"csv"`, `"json"` or `"both"` | artifact kinds |

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::lab::{Graph, Statistic};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    HittingGof,
    HittingLimit,
    DistanceCdf,
    Reversibility,
    BackboneReturn,
    VerticalProfile,
    Lil,
    Collisions,
    BackboneCoincidence,
    LowerClass,
    TailBounds,
    Series,
    Construction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Zd,
    Comb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Power,
    LogPower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Full,
    Smoke,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    #[default]
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub graph: GraphKind,
    pub d: u64,
    pub k: u64,
    pub n_max: u64,
    pub replicates: u64,
    pub master_seed: u64,
    pub statistic: Statistic,
    pub burn_in: u64,
    pub eps: f64,
    pub delta: f64,
    pub window_start: u64,
    pub level: u64,
    pub horizon: u64,
    pub k_max: u64,
    pub family: FamilyKind,
    pub alpha: f64,
    pub beta: f64,
    pub p_threshold: f64,
    pub ks_threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub band_low: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub band_high: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub scale: Scale,
    pub output_dir: String,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: ExperimentKind::Lil,
            graph: GraphKind::Zd,
            d: 1,
            k: 2,
            n_max: 1_000_000,
            replicates: 200,
            master_seed: 20_240_601,
            statistic: Statistic::MaxDistance,
            burn_in: 16,
            eps: 0.05,
            delta: 0.5,
            window_start: 10_000,
            level: 5,
            horizon: 4096,
            k_max: 20,
            family: FamilyKind::LogPower,
            alpha: 0.5,
            beta: 2.0,
            p_threshold: 0.001,
            ks_threshold: 0.02,
            band_low: None,
            band_high: None,
            tolerance: None,
            scale: Scale::Full,
            output_dir: "combwalk-out".into(),
            format: Format::Both,
        }
    }
}

const KEYS: &[&str] = &[
    "experiment",
    "graph",
    "d",
    "k",
    "n_max",
    "replicates",
    "master_seed",
    "statistic",
    "burn_in",
    "eps",
    "delta",
    "window_start",
    "level",
    "horizon",
    "k_max",
    "family",
    "alpha",
    "beta",
    "p_threshold",
    "ks_threshold",
    "band_low",
    "band_high",
    "tolerance",
    "scale",
    "output_dir",
    "format",
];

fn enum_value<T: for<'de> Deserialize<'de>>(key: &str, v: &Value, errs: &mut Vec<String>) -> Option<T> {
    match T::deserialize(v.clone()) {
        Ok(x) => Some(x),
        Err(_) => {
            errs.push(format!("{key}: unrecognized value {v}"));
            None
        }
    }
}

fn uint(key: &str, v: &Value, errs: &mut Vec<String>) -> Option<u64> {
    match v.as_integer() {
        Some(i) if i >= 0 => Some(i as u64),
        _ => {
            errs.push(format!("{key}: expected a nonnegative integer, got {v}"));
            None
        }
    }
}

fn float(key: &str, v: &Value, errs: &mut Vec<String>) -> Option<f64> {
    match v {
        Value::Float(f) => Some(*f),
        Value::Integer(i) => Some(*i as f64),
        _ => {
            errs.push(format!("{key}: expected a number, got {v}"));
            None
        }
    }
}

impl ExperimentConfig {
    /// Parse a document, collecting every violation.
    pub fn parse(text: &str) -> Result<Self> {
        let table: Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::Config(vec![format!("malformed document: {}", e.message())]))?;
        let mut cfg = Self::default();
        let mut errs = Vec::new();
        for (key, v) in &table {
            let e = &mut errs;
            macro_rules! set {
                ($field:ident, $f:expr) => {
                    if let Some(x) = $f(key, v, e) {
                        cfg.$field = x;
                    }
                };
            }
            match key.as_str() {
                "experiment" => set!(experiment, enum_value),
                "graph" => set!(graph, enum_value),
                "statistic" => set!(statistic, enum_value),
                "family" => set!(family, enum_value),
                "scale" => set!(scale, enum_value),
                "format" => set!(format, enum_value),
                "d" => set!(d, uint),
                "k" => set!(k, uint),
                "n_max" => set!(n_max, uint),
                "replicates" => set!(replicates, uint),
                "master_seed" => set!(master_seed, uint),
                "burn_in" => set!(burn_in, uint),
                "window_start" => set!(window_start, uint),
                "level" => set!(level, uint),
                "horizon" => set!(horizon, uint),
                "k_max" => set!(k_max, uint),
                "eps" => set!(eps, float),
                "delta" => set!(delta, float),
                "alpha" => set!(alpha, float),
                "beta" => set!(beta, float),
                "p_threshold" => set!(p_threshold, float),
                "ks_threshold" => set!(ks_threshold, float),
                "tolerance" => {
                    if let Some(x) = float(key, v, e) {
                        cfg.tolerance = Some(x);
                    }
                }
                "band_low" => {
                    if let Some(x) = float(key, v, e) {
                        cfg.band_low = Some(x);
                    }
                }
                "band_high" => {
                    if let Some(x) = float(key, v, e) {
                        cfg.band_high = Some(x);
                    }
                }
                "output_dir" => match v.as_str() {
                    Some(s) => cfg.output_dir = s.to_string(),
                    None => e.push(format!("output_dir: expected a string, got {v}")),
                },
                _ => e.push(format!("{key}: unknown key (known: {})", KEYS.join(", "))),
            }
        }
        errs.extend(cfg.violations());
        if errs.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Config(errs))
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn graph(&self) -> Graph {
        match self.graph {
            GraphKind::Zd => Graph::Zd { d: self.d as usize },
            GraphKind::Comb => Graph::Comb,
        }
    }

    /// Precondition violations of the selected experiment.
    pub fn violations(&self) -> Vec<String> {
        use ExperimentKind::*;
        let mut v = Vec::new();
        let mut need = |ok: bool, msg: String| {
            if !ok {
                v.push(msg);
            }
        };
        need(self.replicates >= 1, format!("replicates: must be >= 1, got {}", self.replicates));
        need(
            self.p_threshold > 0.0 && self.p_threshold < 1.0,
            format!("p_threshold: must lie in (0, 1), got {}", self.p_threshold),
        );
        need(self.ks_threshold > 0.0, format!("ks_threshold: must be > 0, got {}", self.ks_threshold));
        if let Some(t) = self.tolerance {
            need(t > 0.0, format!("tolerance: must be > 0, got {t}"));
        }
        if self.graph == GraphKind::Zd {
            need(self.d >= 1, "d: dimension must be >= 1".into());
        }
        if let (Some(lo), Some(hi)) = (self.band_low, self.band_high) {
            need(lo <= hi, format!("band_low ({lo}) exceeds band_high ({hi})"));
        }
        let distance = self.statistic == Statistic::MaxDistance;
        match self.experiment {
            DistanceCdf => {
                need(self.k >= 2, format!("k: distance experiments need at least 2 walkers, got {}", self.k));
                need(self.graph == GraphKind::Zd && self.d == 1, "graph: the distance CDF is for zd with d = 1".into());
                need(self.n_max >= 1, "n_max: must be >= 1".into());
            }
            Lil => {
                if distance {
                    need(self.k >= 2, format!("k: distance experiments need at least 2 walkers, got {}", self.k));
                }
                need(self.k >= 1, "k: need at least one walker".into());
                need(self.n_max >= 1000, format!("n_max: LIL profiles need n_max >= 1000, got {}", self.n_max));
                need(self.burn_in >= 16, format!("burn_in: log log normalizers need >= 16, got {}", self.burn_in));
                need(self.burn_in <= self.n_max, "burn_in: exceeds n_max".into());
                let ok = matches!(
                    (self.graph, self.statistic),
                    (GraphKind::Zd, Statistic::MaxDistance | Statistic::Norm)
                        | (GraphKind::Comb, Statistic::MaxDistance | Statistic::Horizontal | Statistic::Vertical)
                );
                need(ok, format!("statistic: {} is not defined on graph {:?}", self.statistic.label(), self.graph));
            }
            Collisions => {
                need(self.k >= 2, format!("k: collision experiments need at least 2 walkers, got {}", self.k));
                need(self.n_max >= 1, "n_max: must be >= 1".into());
            }
            BackboneCoincidence | LowerClass => {
                need(self.eps > 0.0 && self.eps < 0.125, format!("eps: must lie in (0, 1/8), got {}", self.eps));
                need(self.window_start >= 16, "window_start: must be >= 16".into());
                need(self.window_start <= self.n_max, "window_start: exceeds n_max".into());
            }
            HittingGof => {
                need(self.level >= 1, "level: must be >= 1".into());
                need(self.horizon >= self.level, "horizon: must be >= level".into());
            }
            HittingLimit => need(self.level >= 1, "level: must be >= 1".into()),
            Reversibility | BackboneReturn | VerticalProfile => {
                // the DP step guard is a resource limit, reported when the sweep starts
                if self.experiment == VerticalProfile {
                    need(
                        self.k_max as f64 <= (self.horizon as f64).powf(0.45),
                        format!("k_max: must be <= horizon^0.45 = {:.2}", (self.horizon as f64).powf(0.45)),
                    );
                }
            }
            TailBounds => {
                need(self.delta > 0.0, "delta: must be > 0".into());
                need(self.n_max >= 1, "n_max: must be >= 1".into());
            }
            Series => {
                need(self.k >= 1, "k: need at least one walker".into());
                need(self.alpha >= 0.0 && self.beta >= 0.0, "alpha, beta: must be >= 0".into());
            }
            Construction => need(self.n_max >= 1, "n_max: must be >= 1".into()),
        }
        v
    }

    /// Canonical TOML: every field, fixed order.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("flat config serializes")
    }

    /// SHA-256 of the canonical form, hex. Where and how artifacts are
    /// written (`output_dir`, `format`) does not enter the hash.
    pub fn hash(&self) -> String {
        let defaults = Self::default();
        let key = Self {
            output_dir: defaults.output_dir,
            format: defaults.format,
            ..self.clone()
        };
        hex::encode(Sha256::digest(key.canonical().as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        assert_eq!(ExperimentConfig::parse("").unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn canonical_round_trip() {
        let cfg = ExperimentConfig::parse("experiment = \"collisions\"\ngraph = \"comb\"\nk = 3\nband_low = 0.5\n").unwrap();
        let again = ExperimentConfig::parse(&cfg.canonical()).unwrap();
        assert_eq!(cfg, again);
        assert_eq!(cfg.hash(), again.hash());
        assert_eq!(cfg.hash().len(), 64);
        let moved = ExperimentConfig { output_dir: "elsewhere".into(), ..cfg.clone() };
        assert_eq!(moved.hash(), cfg.hash());
        let reseeded = ExperimentConfig { master_seed: 1, ..cfg.clone() };
        assert_ne!(reseeded.hash(), cfg.hash());
    }

    #[test]
    fn all_violations_reported() {
        let err = ExperimentConfig::parse("experiment = \"distance_cdf\"\nk = 1\nwalkers = 3\nd = \"x\"\n").unwrap_err();
        let Error::Config(list) = err else { panic!() };
        assert!(list.iter().any(|m| m.starts_with("k:")), "{list:?}");
        assert!(list.iter().any(|m| m.starts_with("walkers: unknown key")));
        assert!(list.iter().any(|m| m.starts_with("d: expected")));
        assert!(list.len() >= 3);
    }

    #[test]
    fn malformed_and_enum_errors() {
        assert!(ExperimentConfig::parse("k = ").is_err());
        let Error::Config(list) = ExperimentConfig::parse("experiment = \"bogus\"").unwrap_err() else { panic!() };
        assert!(list[0].starts_with("experiment:"));
    }
}
