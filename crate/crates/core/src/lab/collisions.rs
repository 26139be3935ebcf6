//! Growth of collision counts in walker ensembles.

use serde::{Deserialize, Serialize};

use super::{dyadic_from, run_replicates, ExperimentReport, Graph};
use crate::error::{Error, Result};
use crate::lattice::{CombVertex, ZdPoint};
use crate::metrics::CollisionTally;
use crate::rng::{experiment_key, RngStream};
use crate::stats::{mean, median};
use crate::walk::{comb_step_direct, zd_step};

/// Cumulative collision counts over `1..=n` at each checkpoint, per replicate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollisionGrowth {
    pub graph: Graph,
    pub k: usize,
    pub checkpoints: Vec<u64>,
    /// Summed over all pairs.
    pub pairwise: Vec<Vec<u64>>,
    pub full: Vec<Vec<u64>>,
}

fn column(data: &[Vec<u64>], c: usize) -> Vec<f64> {
    data.iter().map(|r| r[c] as f64).collect()
}

impl CollisionGrowth {
    fn index(&self, n: u64) -> Option<usize> {
        self.checkpoints.iter().position(|&t| t == n)
    }

    pub fn median_full(&self, n: u64) -> Option<f64> {
        Some(median(&column(&self.full, self.index(n)?)))
    }

    pub fn mean_pairwise(&self, n: u64) -> Option<f64> {
        Some(mean(&column(&self.pairwise, self.index(n)?)))
    }

    /// Per-replicate pairwise collisions at times in `(from, to]`.
    pub fn pairwise_between(&self, from: u64, to: u64) -> Option<Vec<u64>> {
        let (a, b) = (self.index(from)?, self.index(to)?);
        Some(self.pairwise.iter().map(|r| r[b] - r[a]).collect())
    }

    pub fn report(&self, seed: u64) -> ExperimentReport {
        let mut rep = ExperimentReport::new(format!("collisions_{}_k{}", self.graph.label(), self.k), seed);
        let n = self.pairwise.len() as u64;
        for (c, &t) in self.checkpoints.iter().enumerate() {
            let p = column(&self.pairwise, c);
            let f = column(&self.full, c);
            rep.row(t, n, "pairwise_mean", mean(&p));
            rep.row(t, n, "pairwise_median", median(&p));
            rep.row(t, n, "full_mean", mean(&f));
            rep.row(t, n, "full_median", median(&f));
        }
        rep
    }
}

pub fn collision_growth_experiment(
    graph: Graph,
    k: usize,
    n_max: u64,
    replicates: u64,
    seed: u64,
    extra_checkpoints: &[u64],
) -> Result<CollisionGrowth> {
    if k < 2 {
        return Err(Error::TooFewWalkers { needed: 2, got: k });
    }
    if let Graph::Zd { d: 0 } = graph {
        return Err(Error::InvalidDimension(0));
    }
    let mut checkpoints = dyadic_from(1, n_max);
    checkpoints.extend(extra_checkpoints.iter().copied().filter(|&t| t >= 1 && t <= n_max));
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let key = experiment_key(&format!("collisions/{}", graph.label()));
    let results: Vec<(Vec<u64>, Vec<u64>)> = run_replicates(replicates, |rep| {
        let mut rngs: Vec<RngStream> = (0..k as u64)
            .map(|i| RngStream::for_walker(seed, key, i, rep))
            .collect();
        let mut tally = CollisionTally::new(k);
        let mut pairwise = Vec::with_capacity(checkpoints.len());
        let mut full = Vec::with_capacity(checkpoints.len());
        let mut next = 0;
        let mut after_step = |t: u64, tally: &CollisionTally| {
            if checkpoints.get(next) == Some(&t) {
                pairwise.push(tally.pairs.iter().sum());
                full.push(tally.full);
                next += 1;
            }
        };
        match graph {
            Graph::Zd { d: 1 } => {
                let mut pos = vec![0i64; k];
                for t in 1..=n_max {
                    for (p, rng) in pos.iter_mut().zip(rngs.iter_mut()) {
                        *p += if rng.bit() { 1 } else { -1 };
                    }
                    tally.observe(&pos);
                    after_step(t, &tally);
                }
            }
            Graph::Zd { d } => {
                let mut pos = vec![ZdPoint::origin(d).expect("d checked"); k];
                for t in 1..=n_max {
                    for (p, rng) in pos.iter_mut().zip(rngs.iter_mut()) {
                        p.apply(zd_step(d, rng).expect("d checked"));
                    }
                    tally.observe(&pos);
                    after_step(t, &tally);
                }
            }
            Graph::Comb => {
                let mut pos = vec![CombVertex::ORIGIN; k];
                for t in 1..=n_max {
                    for (p, rng) in pos.iter_mut().zip(rngs.iter_mut()) {
                        *p = comb_step_direct(*p, rng);
                    }
                    tally.observe(&pos);
                    after_step(t, &tally);
                }
            }
        }
        (pairwise, full)
    });
    let (pairwise, full) = results.into_iter().unzip();
    Ok(CollisionGrowth {
        graph,
        k,
        checkpoints,
        pairwise,
        full,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_are_cumulative_and_full_bounded_by_pairwise() {
        let g = collision_growth_experiment(Graph::Zd { d: 1 }, 3, 4096, 20, 5, &[1000]).unwrap();
        assert!(g.checkpoints.contains(&1000));
        for (p, f) in g.pairwise.iter().zip(&g.full) {
            assert!(p.windows(2).all(|w| w[1] >= w[0]));
            assert!(f.windows(2).all(|w| w[1] >= w[0]));
            assert!(f.iter().zip(p).all(|(f, p)| 3 * f <= *p));
        }
        assert!(g.pairwise_between(1000, 4096).is_some());
        assert!(g.median_full(3).is_none());
    }

    #[test]
    fn walker_two_is_the_same_path_in_both_ensembles() {
        let a = collision_growth_experiment(Graph::Comb, 2, 512, 8, 9, &[]).unwrap();
        let b = collision_growth_experiment(Graph::Comb, 3, 512, 8, 9, &[]).unwrap();
        for (x, y) in a.pairwise.iter().zip(&b.pairwise) {
            assert!(x.iter().zip(y).all(|(x, y)| y >= x));
        }
    }

    #[test]
    fn single_walker_rejected() {
        assert!(collision_growth_experiment(Graph::Comb, 1, 100, 1, 0, &[]).is_err());
    }
}
