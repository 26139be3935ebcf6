//! Agreement of the constructed comb walk with the direct one, and of
//! simulated first-passage times with their exact law.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{run_replicates, ExperimentReport};
use crate::error::{domain, Result};
use crate::exact::{hitting_partial_sum, hitting_pmf};
use crate::lattice::CombVertex;
use crate::rng::{experiment_key, RngStream};
use crate::stats::{chi_square_gof, two_sample_chi_square, Acceptance, StatTest};
use crate::walk::{comb_step_direct, ConstructedCombWalker};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionCheck {
    pub n: u64,
    pub samples: u64,
    pub test: StatTest,
    /// `H_n + V_n = n` held on every constructed run.
    pub step_counts_consistent: bool,
    /// Mean `H_n` of the constructed walks.
    pub mean_horizontal: f64,
}

/// Two-sample chi-square between the endpoints at time `n` of direct and
/// constructed comb walks.
pub fn construction_equivalence(n: u64, samples: u64, seed: u64, p_threshold: f64) -> Result<ConstructionCheck> {
    if samples == 0 {
        return Err(domain("need at least one sample"));
    }
    let key = experiment_key("construction");
    let direct: Vec<CombVertex> = run_replicates(samples, |r| {
        let mut rng = RngStream::for_walker(seed, key, 0, r);
        let mut v = CombVertex::ORIGIN;
        for _ in 0..n {
            v = comb_step_direct(v, &mut rng);
        }
        v
    });
    let built: Vec<(CombVertex, bool, u64)> = run_replicates(samples, |r| {
        let mut w = ConstructedCombWalker::new(&RngStream::for_walker(seed, key, 1, r));
        for _ in 0..n {
            w.step();
        }
        (w.pos(), w.horizontal_steps + w.vertical_steps == n, w.horizontal_steps)
    });
    let mut bins: BTreeMap<CombVertex, (u64, u64)> = BTreeMap::new();
    for v in &direct {
        bins.entry(*v).or_default().0 += 1;
    }
    for (v, _, _) in &built {
        bins.entry(*v).or_default().1 += 1;
    }
    let (a, b): (Vec<u64>, Vec<u64>) = bins.values().copied().unzip();
    let test = two_sample_chi_square(&a, &b, Acceptance::PValueAbove { threshold: p_threshold })?;
    Ok(ConstructionCheck {
        n,
        samples,
        test,
        step_counts_consistent: built.iter().all(|(_, ok, _)| *ok),
        mean_horizontal: built.iter().map(|b| b.2 as f64).sum::<f64>() / samples as f64,
    })
}

impl ConstructionCheck {
    pub fn report(&self, seed: u64) -> ExperimentReport {
        let mut rep = ExperimentReport::new("construction_equivalence", seed);
        rep.row(self.n, self.samples, "chi_square", self.test.statistic);
        rep.row(self.n, self.samples, "p_value", self.test.p_value.unwrap_or(f64::NAN));
        rep.row(self.n, self.samples, "mean_horizontal_steps", self.mean_horizontal);
        rep.row(self.n, self.samples, "step_counts_consistent", f64::from(u8::from(self.step_counts_consistent)));
        rep
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HittingGof {
    pub level: u64,
    pub horizon: u64,
    pub replicates: u64,
    pub test: StatTest,
    /// Replicates that had not reached the level by the horizon.
    pub censored: u64,
}

/// Chi-square of simulated `β(r)` against the exact pmf, with one extra bin
/// for `β(r) > horizon`.
pub fn hitting_time_gof(level: u64, horizon: u64, replicates: u64, seed: u64, p_threshold: f64) -> Result<HittingGof> {
    if level == 0 || horizon < level {
        return Err(domain("need 1 <= level <= horizon"));
    }
    let key = experiment_key("hitting_gof");
    let times: Vec<Option<u64>> = run_replicates(replicates, |r| {
        let mut rng = RngStream::for_walker(seed, key, 0, r);
        let mut s = 0i64;
        for t in 1..=horizon {
            s += if rng.bit() { 1 } else { -1 };
            if s == level as i64 {
                return Some(t);
            }
        }
        None
    });
    let support: Vec<u64> = (level..=horizon).step_by(2).collect();
    let mut observed = vec![0u64; support.len() + 1];
    for t in &times {
        match t {
            Some(t) => observed[((t - level) / 2) as usize] += 1,
            None => *observed.last_mut().expect("nonempty") += 1,
        }
    }
    let mut probs = support.iter().map(|&t| hitting_pmf(level, t)).collect::<Result<Vec<f64>>>()?;
    probs.push(1.0 - hitting_partial_sum(level, horizon + 1)?);
    let test = chi_square_gof(&observed, &probs, Acceptance::PValueAbove { threshold: p_threshold })?;
    Ok(HittingGof {
        level,
        horizon,
        replicates,
        censored: *observed.last().expect("nonempty"),
        test,
    })
}

impl HittingGof {
    pub fn report(&self, seed: u64) -> ExperimentReport {
        let mut rep = ExperimentReport::new("hitting_gof", seed);
        rep.row(self.horizon, self.replicates, "chi_square", self.test.statistic);
        rep.row(self.horizon, self.replicates, "p_value", self.test.p_value.unwrap_or(f64::NAN));
        rep.row(self.horizon, self.replicates, "censored", self.censored as f64);
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_construction_check_runs() {
        let c = construction_equivalence(16, 5_000, 1, 0.001).unwrap();
        assert!(c.step_counts_consistent);
        assert!(c.test.dof.unwrap() > 5);
    }

    #[test]
    fn small_hitting_check_runs() {
        let h = hitting_time_gof(2, 200, 10_000, 1, 0.001).unwrap();
        assert!(h.censored > 0);
        assert!(hitting_time_gof(3, 2, 10, 0, 0.001).is_err());
    }
}
