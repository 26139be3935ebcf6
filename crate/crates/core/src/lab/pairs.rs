//! Two comb walkers: simultaneous backbone visits and small-distance events.

use serde::{Deserialize, Serialize};

use super::lil::block_end_after;
use super::{dyadic_from, log_log, run_replicates, ExperimentReport};
use crate::error::{domain, Result};
use crate::lattice::CombVertex;
use crate::metrics::comb_graph_distance;
use crate::rng::{experiment_key, RngStream};
use crate::stats::{mean, median};
use crate::walk::comb_step_direct;

/// `2^{9/4} / 3^{3/4}`: scale of the small-distance envelope
/// `c n^{1/4} (log log n)^{3/4}` for two comb walkers.
pub const CONSTANT_SMALL_DISTANCE: f64 = 2.086_779_440_097_716;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerClassSpec {
    pub n_max: u64,
    pub replicates: u64,
    pub seed: u64,
    /// `0 < eps < 1/8`.
    pub eps: f64,
    /// The envelope event is looked for at every `n` in `[window_start, n_max]`.
    pub window_start: u64,
    /// First dyadic checkpoint for the `D_2 <= n^{1/4 - eps}` counters.
    pub small_from: u64,
}

impl LowerClassSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 0.125) {
            return Err(domain(format!("eps must lie in (0, 1/8), got {}", self.eps)));
        }
        log_log(self.window_start)?;
        if self.window_start > self.n_max {
            return Err(domain("window_start exceeds n_max"));
        }
        Ok(())
    }

    pub fn envelope(&self, n: u64) -> f64 {
        let ll = (n as f64).ln().ln();
        (1.0 + self.eps) * CONSTANT_SMALL_DISTANCE * (n as f64).powf(0.25) * ll.powf(0.75)
    }

    pub fn small_radius(&self, n: u64) -> f64 {
        (n as f64).powf(0.25 - self.eps)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CombPairRun {
    pub spec: LowerClassSpec,
    pub checkpoints: Vec<u64>,
    /// Cumulative count of `m <= n` with both walkers on the backbone.
    pub coincidences: Vec<Vec<u64>>,
    /// Dyadic times for the small-distance counters.
    pub small_times: Vec<u64>,
    /// Replicates with `D_2(n) <= n^{1/4-eps}` and the walkers on different teeth.
    pub small_different_teeth: Vec<u64>,
    /// The same event with both walkers on one tooth.
    pub small_same_tooth: Vec<u64>,
    /// First `n` in the window with `D_2(n)` under the envelope.
    pub first_envelope_hit: Vec<Option<u64>>,
    pub final_distance: Vec<u64>,
}

impl CombPairRun {
    fn column(&self, n: u64) -> Option<Vec<f64>> {
        let c = self.checkpoints.iter().position(|&t| t == n)?;
        Some(self.coincidences.iter().map(|r| r[c] as f64).collect())
    }

    pub fn mean_coincidences(&self, n: u64) -> Option<f64> {
        self.column(n).map(|c| mean(&c))
    }

    /// `(2/π) log n`, the growth of the expected coincidence count.
    pub fn coincidence_target(n: u64) -> f64 {
        2.0 / std::f64::consts::PI * (n as f64).ln()
    }

    pub fn envelope_hit_fraction(&self) -> f64 {
        let hits = self.first_envelope_hit.iter().filter(|h| h.is_some()).count();
        hits as f64 / self.first_envelope_hit.len() as f64
    }

    /// Fraction of replicates with `D_2(n_max) > n_max^{1/4 - eps}`.
    pub fn above_small_radius_fraction(&self) -> f64 {
        let r = self.spec.small_radius(self.spec.n_max);
        let above = self.final_distance.iter().filter(|&&d| d as f64 > r).count();
        above as f64 / self.final_distance.len() as f64
    }

    pub fn small_frequency(&self) -> Vec<f64> {
        let n = self.final_distance.len() as f64;
        self.small_different_teeth
            .iter()
            .zip(&self.small_same_tooth)
            .map(|(a, b)| (a + b) as f64 / n)
            .collect()
    }

    pub fn report(&self) -> ExperimentReport {
        let reps = self.final_distance.len() as u64;
        let mut rep = ExperimentReport::new("comb_pair", self.spec.seed);
        for &t in &self.checkpoints {
            let c = self.column(t).expect("own checkpoint");
            rep.row(t, reps, "backbone_coincidences_mean", mean(&c));
            rep.row(t, reps, "backbone_coincidences_median", median(&c));
            rep.row(t, reps, "coincidence_target", Self::coincidence_target(t.max(1)));
        }
        for (i, &t) in self.small_times.iter().enumerate() {
            rep.row(t, reps, "small_distance_different_teeth", self.small_different_teeth[i] as f64);
            rep.row(t, reps, "small_distance_same_tooth", self.small_same_tooth[i] as f64);
        }
        rep.row(self.spec.n_max, reps, "envelope_hit_fraction", self.envelope_hit_fraction());
        rep.row(self.spec.n_max, reps, "above_small_radius_fraction", self.above_small_radius_fraction());
        rep
    }
}

pub fn comb_pair_run(spec: &LowerClassSpec, extra_checkpoints: &[u64]) -> Result<CombPairRun> {
    spec.validate()?;
    let n_max = spec.n_max;
    let mut checkpoints = dyadic_from(1, n_max);
    checkpoints.extend(extra_checkpoints.iter().copied().filter(|&t| (1..=n_max).contains(&t)));
    checkpoints.push(spec.window_start);
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let small_times: Vec<u64> = crate::walk::dyadic_times(n_max)
        .into_iter()
        .filter(|&t| t >= spec.small_from)
        .collect();
    let key = experiment_key("comb_pair");
    struct Rep {
        coincidences: Vec<u64>,
        small: Vec<(bool, bool)>,
        first_hit: Option<u64>,
        final_distance: u64,
    }
    let reps: Vec<Rep> = run_replicates(spec.replicates, |r| {
        let mut a_rng = RngStream::for_walker(spec.seed, key, 0, r);
        let mut b_rng = RngStream::for_walker(spec.seed, key, 1, r);
        let (mut a, mut b) = (CombVertex::ORIGIN, CombVertex::ORIGIN);
        let mut count = 0u64;
        let mut coincidences = Vec::with_capacity(checkpoints.len());
        let mut small = Vec::with_capacity(small_times.len());
        let (mut next_cp, mut next_small) = (0, 0);
        let mut first_hit = None;
        let (mut block_end, mut sure, mut never) = (0u64, 0.0f64, 0.0f64);
        for t in 1..=n_max {
            a = comb_step_direct(a, &mut a_rng);
            b = comb_step_direct(b, &mut b_rng);
            if a.y == 0 && b.y == 0 {
                count += 1;
            }
            if checkpoints.get(next_cp) == Some(&t) {
                coincidences.push(count);
                next_cp += 1;
            }
            let small_due = small_times.get(next_small) == Some(&t);
            if first_hit.is_none() && t >= spec.window_start || small_due {
                let d = comb_graph_distance(a, b) as f64;
                if small_due {
                    let hit = d <= spec.small_radius(t);
                    small.push((hit && a.x != b.x, hit && a.x == b.x));
                    next_small += 1;
                }
                if first_hit.is_none() && t >= spec.window_start {
                    // the envelope increases: on [t0, t1) it lies in [env(t0), env(t1)]
                    if t >= block_end {
                        block_end = block_end_after(t);
                        sure = spec.envelope(t);
                        never = spec.envelope(block_end);
                    }
                    if d <= sure || (d <= never && d <= spec.envelope(t)) {
                        first_hit = Some(t);
                    }
                }
            }
        }
        Rep {
            coincidences,
            small,
            first_hit,
            final_distance: comb_graph_distance(a, b),
        }
    });
    let mut run = CombPairRun {
        spec: spec.clone(),
        checkpoints,
        coincidences: Vec::with_capacity(reps.len()),
        small_times: small_times.clone(),
        small_different_teeth: vec![0; small_times.len()],
        small_same_tooth: vec![0; small_times.len()],
        first_envelope_hit: Vec::with_capacity(reps.len()),
        final_distance: Vec::with_capacity(reps.len()),
    };
    for r in reps {
        for (i, (diff, same)) in r.small.iter().enumerate() {
            run.small_different_teeth[i] += u64::from(*diff);
            run.small_same_tooth[i] += u64::from(*same);
        }
        run.coincidences.push(r.coincidences);
        run.first_envelope_hit.push(r.first_hit);
        run.final_distance.push(r.final_distance);
    }
    Ok(run)
}

/// Simultaneous backbone visits of two comb walkers up to `n_max`.
pub fn backbone_coincidence_experiment(n_max: u64, replicates: u64, seed: u64) -> Result<CombPairRun> {
    comb_pair_run(
        &LowerClassSpec {
            n_max,
            replicates,
            seed,
            eps: 0.05,
            window_start: 16.max(n_max / 100).min(n_max),
            small_from: 4096,
        },
        &[],
    )
}

pub fn lower_class_experiment(spec: &LowerClassSpec) -> Result<CombPairRun> {
    comb_pair_run(spec, &[])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> LowerClassSpec {
        LowerClassSpec {
            n_max: 1 << 14,
            replicates: 40,
            seed: 2,
            eps: 0.05,
            window_start: 1024,
            small_from: 256,
        }
    }

    #[test]
    fn constant_is_computed_value() {
        let c = 2f64.powf(2.25) / 3f64.powf(0.75);
        assert!((c - CONSTANT_SMALL_DISTANCE).abs() < 1e-14);
    }

    #[test]
    fn counts_nondecreasing_and_hits_inside_window() {
        let run = comb_pair_run(&spec(), &[5000]).unwrap();
        assert!(run.checkpoints.contains(&5000) && run.checkpoints.contains(&1024));
        for c in &run.coincidences {
            assert!(c.windows(2).all(|w| w[1] >= w[0]));
        }
        for h in run.first_envelope_hit.iter().flatten() {
            assert!((1024..=1 << 14).contains(h));
        }
        assert_eq!(run.small_times, vec![256, 512, 1024, 2048, 4096, 8192, 16384]);
        assert_eq!(run.final_distance.len(), 40);
    }

    #[test]
    fn first_hit_agrees_with_a_direct_scan() {
        let s = spec();
        let run = comb_pair_run(&s, &[]).unwrap();
        let key = experiment_key("comb_pair");
        for r in 0..s.replicates {
            let mut ra = RngStream::for_walker(s.seed, key, 0, r);
            let mut rb = RngStream::for_walker(s.seed, key, 1, r);
            let (mut a, mut b) = (CombVertex::ORIGIN, CombVertex::ORIGIN);
            let mut first = None;
            for t in 1..=s.n_max {
                a = comb_step_direct(a, &mut ra);
                b = comb_step_direct(b, &mut rb);
                if first.is_none() && t >= s.window_start && comb_graph_distance(a, b) as f64 <= s.envelope(t) {
                    first = Some(t);
                }
            }
            assert_eq!(first, run.first_envelope_hit[r as usize]);
        }
    }

    #[test]
    fn eps_range_enforced() {
        let mut s = spec();
        s.eps = 0.2;
        assert!(comb_pair_run(&s, &[]).is_err());
        s.eps = 0.05;
        s.window_start = 8;
        assert!(comb_pair_run(&s, &[]).is_err());
    }
}
