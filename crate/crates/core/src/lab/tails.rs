//! Tail frequencies of geometric sums and of the local time at zero,
//! against their bounds and exact laws.

use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use super::{run_replicates, ExperimentReport};
use crate::error::{domain, Result};
use crate::exact::compensated_sum;
use crate::rng::{experiment_key, RngStream};
use crate::stats::least_squares;
use crate::walk::sample_geometric;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailSpec {
    /// Number of geometric summands.
    pub n: u64,
    pub delta: f64,
    pub samples: u64,
    pub local_time_n: u64,
    pub local_time_samples: u64,
    /// Levels `x` of the local-time tail `P(xi(0,n) >= x √n)`.
    pub xs: Vec<f64>,
    pub seed: u64,
}

impl Default for TailSpec {
    fn default() -> Self {
        Self {
            n: 100,
            delta: 0.5,
            samples: 1_000_000,
            local_time_n: 10_000,
            local_time_samples: 200_000,
            xs: vec![1.5, 2.0, 2.5],
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailChecks {
    pub spec: TailSpec,
    /// `λ = √(32 n)`.
    pub lambda: f64,
    /// Frequency of `max_j |Σ_{i<=j} (G_i - 1)| > λ`.
    pub max_deviation_frequency: f64,
    /// `2 exp(-λ²/(8n))`.
    pub max_deviation_bound: f64,
    /// Frequency of `Σ G_i >= (1 + δ) n`.
    pub sum_tail_frequency: f64,
    pub sum_tail_exact: f64,
    /// `1/n²`.
    pub sum_tail_bound: f64,
    pub local_time_frequency: Vec<f64>,
    pub local_time_exact: Vec<f64>,
    /// Least-squares slope of `log frequency` against `-x²/2`.
    pub local_time_slope: f64,
    pub local_time_exact_slope: f64,
}

/// `P(G_1 + ... + G_n >= m)` for `P(G = k) = 2^{-k-1}`: at least `m`
/// failures before the `n`-th success, i.e. `P(Bin(n + m - 1, 1/2) <= n - 1)`.
pub fn geometric_sum_tail(n: u64, m: u64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let trials = n + m - 1;
    let ln2 = std::f64::consts::LN_2 * trials as f64;
    compensated_sum((0..n).map(|j| (ln_binomial(trials, j) - ln2).exp()))
}

/// `P(xi(0,n) >= j)` for the simple walk on the line, from
/// `P(xi(0,2m) = k) = 2^{-(2m-k)} C(2m-k, m)`.
pub fn local_time_tail(n: u64, j: u64) -> f64 {
    let m = n / 2;
    if j > m {
        return 0.0;
    }
    let terms = (j..=m).map(|k| {
        let top = 2 * m - k;
        (ln_binomial(top, m) - std::f64::consts::LN_2 * top as f64).exp()
    });
    compensated_sum(terms)
}

pub fn tail_bound_checks(spec: &TailSpec) -> Result<TailChecks> {
    if spec.n == 0 || spec.samples == 0 || spec.local_time_samples == 0 || spec.local_time_n == 0 {
        return Err(domain("tail checks need positive sizes"));
    }
    if !(spec.delta > 0.0) || spec.xs.len() < 2 || spec.xs.iter().any(|&x| !(x > 0.0)) {
        return Err(domain("need delta > 0 and at least two positive levels"));
    }
    let n = spec.n;
    let lambda = (32.0 * n as f64).sqrt();
    let m = ((1.0 + spec.delta) * n as f64).ceil() as u64;
    let key = experiment_key("tails/geometric");
    let geo: Vec<(bool, bool)> = run_replicates(spec.samples, |r| {
        let mut rng = RngStream::for_walker(spec.seed, key, 0, r);
        let (mut centered, mut worst, mut sum) = (0i64, 0i64, 0u64);
        for _ in 0..n {
            let g = sample_geometric(&mut rng);
            sum += g;
            centered += g as i64 - 1;
            worst = worst.max(centered.abs());
        }
        (worst as f64 > lambda, sum >= m)
    });
    let freq = |f: &dyn Fn(&(bool, bool)) -> bool| geo.iter().filter(|x| f(x)).count() as f64 / spec.samples as f64;
    let max_deviation_frequency = freq(&|x| x.0);
    let sum_tail_frequency = freq(&|x| x.1);

    let ln = spec.local_time_n;
    let levels: Vec<u64> = spec.xs.iter().map(|x| (x * (ln as f64).sqrt()).ceil() as u64).collect();
    let key = experiment_key("tails/local_time");
    let times: Vec<u64> = run_replicates(spec.local_time_samples, |r| {
        let mut rng = RngStream::for_walker(spec.seed, key, 0, r);
        let (mut s, mut visits) = (0i64, 0u64);
        for _ in 0..ln {
            s += if rng.bit() { 1 } else { -1 };
            if s == 0 {
                visits += 1;
            }
        }
        visits
    });
    let local_time_frequency: Vec<f64> = levels
        .iter()
        .map(|&j| times.iter().filter(|&&v| v >= j).count() as f64 / spec.local_time_samples as f64)
        .collect();
    let local_time_exact: Vec<f64> = levels.iter().map(|&j| local_time_tail(ln, j)).collect();
    let abscissa: Vec<f64> = spec.xs.iter().map(|x| -x * x / 2.0).collect();
    let log_freq: Vec<f64> = local_time_frequency.iter().map(|f| f.ln()).collect();
    let local_time_slope = if log_freq.iter().all(|v| v.is_finite()) {
        least_squares(&abscissa, &log_freq)?.0
    } else {
        f64::NAN
    };
    let log_exact: Vec<f64> = local_time_exact.iter().map(|f| f.ln()).collect();
    let local_time_exact_slope = least_squares(&abscissa, &log_exact)?.0;

    Ok(TailChecks {
        spec: spec.clone(),
        lambda,
        max_deviation_frequency,
        max_deviation_bound: 2.0 * (-lambda * lambda / (8.0 * n as f64)).exp(),
        sum_tail_frequency,
        sum_tail_exact: geometric_sum_tail(n, m),
        sum_tail_bound: 1.0 / (n as f64 * n as f64),
        local_time_frequency,
        local_time_exact,
        local_time_slope,
        local_time_exact_slope,
    })
}

impl TailChecks {
    pub fn report(&self) -> ExperimentReport {
        let mut rep = ExperimentReport::new("tail_bounds", self.spec.seed);
        let (n, s) = (self.spec.n, self.spec.samples);
        rep.row(n, s, "max_deviation_frequency", self.max_deviation_frequency);
        rep.row(n, s, "max_deviation_bound", self.max_deviation_bound);
        rep.row(n, s, "sum_tail_frequency", self.sum_tail_frequency);
        rep.row(n, s, "sum_tail_exact", self.sum_tail_exact);
        rep.row(n, s, "sum_tail_bound", self.sum_tail_bound);
        let (ln, ls) = (self.spec.local_time_n, self.spec.local_time_samples);
        for ((x, f), e) in self.spec.xs.iter().zip(&self.local_time_frequency).zip(&self.local_time_exact) {
            rep.row(ln, ls, &format!("local_time_tail_x{x}"), *f);
            rep.row(ln, ls, &format!("local_time_tail_exact_x{x}"), *e);
        }
        rep.row(ln, ls, "local_time_slope", self.local_time_slope);
        rep.row(ln, ls, "local_time_exact_slope", self.local_time_exact_slope);
        rep
    }
}
