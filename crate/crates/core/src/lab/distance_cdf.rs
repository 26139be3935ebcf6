//! Empirical law of `D_K(n) / √n` on the line against its limit.

use serde::{Deserialize, Serialize};

use super::{run_replicates, ExperimentReport};
use crate::error::{domain, Error, Result};
use crate::exact::dk_limit_cdf;
use crate::rng::{experiment_key, RngStream};
use crate::stats::EmpiricalCdf;
use crate::walk::line_endpoint;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceCdf {
    pub k: usize,
    pub n: u64,
    /// `D_K(n) / √n` per replicate, in replicate order.
    pub samples: Vec<f64>,
    pub ks_distance: f64,
    /// Fraction of replicates with all walkers on one site at time n.
    pub collision_frequency: f64,
    pub ecdf_at_zero: f64,
}

impl DistanceCdf {
    pub fn report(&self, seed: u64) -> Result<ExperimentReport> {
        let mut rep = ExperimentReport::new(format!("distance_cdf_k{}", self.k), seed);
        let reps = self.samples.len() as u64;
        let ecdf = EmpiricalCdf::new(self.samples.clone())?;
        for z in [0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0] {
            rep.row(self.n, reps, &format!("ecdf_z{z}"), ecdf.eval(z));
            rep.row(self.n, reps, &format!("limit_cdf_z{z}"), dk_limit_cdf(z, self.k)?);
        }
        rep.row(self.n, reps, "ks_distance", self.ks_distance);
        rep.row(self.n, reps, "collision_frequency", self.collision_frequency);
        Ok(rep)
    }
}

/// `d` must be 1 and `K >= 2`. Endpoints are sampled exactly as `2 Bin(n, 1/2) - n`.
pub fn distance_cdf_experiment(d: usize, k: usize, n: u64, replicates: u64, seed: u64) -> Result<DistanceCdf> {
    if d != 1 {
        return Err(domain(format!("the limiting law is for walkers on the line, got d = {d}")));
    }
    if k < 2 {
        return Err(Error::TooFewWalkers { needed: 2, got: k });
    }
    if n == 0 || replicates == 0 {
        return Err(domain("need n >= 1 and at least one replicate"));
    }
    let key = experiment_key("distance_cdf");
    let raw: Vec<u64> = run_replicates(replicates, |r| {
        let ends: Vec<i64> = (0..k as u64)
            .map(|i| line_endpoint(n, &mut RngStream::for_walker(seed, key, i, r)))
            .collect();
        (ends.iter().max().expect("k >= 2") - ends.iter().min().expect("k >= 2")) as u64
    });
    let scale = (n as f64).sqrt();
    let samples: Vec<f64> = raw.iter().map(|&d| d as f64 / scale).collect();
    let ecdf = EmpiricalCdf::new(samples.clone())?;
    let ks_distance = ecdf.ks_distance(|z| dk_limit_cdf(z, k))?;
    let collision_frequency = raw.iter().filter(|&&d| d == 0).count() as f64 / replicates as f64;
    Ok(DistanceCdf {
        k,
        n,
        samples,
        ks_distance,
        collision_frequency,
        ecdf_at_zero: ecdf.eval(0.0),
    })
}
