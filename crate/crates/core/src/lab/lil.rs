//! Running maxima of normalized walker statistics.

use serde::{Deserialize, Serialize};

use super::{dyadic_from, log_log, run_replicates, Graph};
use crate::error::{domain, Error, Result};
use crate::lattice::{CombVertex, ZdPoint};
use crate::metrics::max_pairwise_comb;
use crate::rng::{experiment_key, RngStream};
use crate::stats::median;
use crate::walk::{comb_step_direct, zd_step};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    /// `D_K(n)`: largest distance among the K walkers.
    MaxDistance,
    /// `|C1(n)|` of the first comb walker.
    #[serde(rename = "abs_c1")]
    Horizontal,
    /// `|C2(n)|` of the first comb walker.
    #[serde(rename = "abs_c2")]
    Vertical,
    /// Euclidean norm of the first walker on Z^d.
    Norm,
}

impl Statistic {
    pub fn label(&self) -> &'static str {
        match self {
            Statistic::MaxDistance => "max_distance",
            Statistic::Horizontal => "abs_c1",
            Statistic::Vertical => "abs_c2",
            Statistic::Norm => "norm",
        }
    }
}

/// Normalizer, its label and the almost-sure limsup of statistic/normalizer.
#[derive(Clone, Copy, Debug)]
pub struct Scaling {
    kind: ScalingKind,
    pub target: f64,
    pub label: &'static str,
}

#[derive(Clone, Copy, Debug)]
enum ScalingKind {
    /// `c sqrt(n log log n)`
    Sqrt(f64),
    /// `n^{1/4} (log log n)^{3/4}`
    Quartic,
}

impl Scaling {
    pub fn for_statistic(graph: Graph, statistic: Statistic) -> Result<Self> {
        use Statistic::*;
        let s = match (graph, statistic) {
            (Graph::Zd { d }, MaxDistance) => Scaling {
                kind: ScalingKind::Sqrt(1.0),
                target: 2.0 / (d as f64).sqrt(),
                label: "sqrt(n loglog n)",
            },
            (Graph::Zd { d }, Norm) => Scaling {
                kind: ScalingKind::Sqrt(1.0),
                target: (2.0 / d as f64).sqrt(),
                label: "sqrt(n loglog n)",
            },
            (Graph::Comb, MaxDistance) => Scaling {
                kind: ScalingKind::Sqrt(2.0),
                target: 1.0,
                label: "2 sqrt(n loglog n)",
            },
            (Graph::Comb, Vertical) => Scaling {
                kind: ScalingKind::Sqrt(std::f64::consts::SQRT_2),
                target: 1.0,
                label: "sqrt(2 n loglog n)",
            },
            (Graph::Comb, Horizontal) => Scaling {
                kind: ScalingKind::Quartic,
                target: 2f64.powf(1.25) / 3f64.powf(0.75),
                label: "n^(1/4) (loglog n)^(3/4)",
            },
            (g, s) => {
                return Err(domain(format!("statistic {} is not defined on {}", s.label(), g.label())))
            }
        };
        Ok(s)
    }

    /// Normalizer at `n >= 16`.
    pub fn at(&self, n: u64) -> f64 {
        let ll = (n as f64).ln().ln();
        match self.kind {
            ScalingKind::Sqrt(c) => c * (n as f64 * ll).sqrt(),
            ScalingKind::Quartic => (n as f64).powf(0.25) * ll.powf(0.75),
        }
    }
}

/// `sup_{burn_in <= m <= n} s(m) / norm(m)`, maintained step by step.
///
/// The normalizer increases, so on a block `[a, a + a/64]` a value `s` can
/// only raise the maximum if `s > max * norm(a)`; the division is skipped
/// otherwise.
#[derive(Clone, Debug)]
pub struct RunningMax {
    scaling: Scaling,
    burn_in: u64,
    best: f64,
    block_start: u64,
    block_end: u64,
    threshold: f64,
}

const THRESHOLD_SLACK: f64 = 1.0 - 1e-12;

/// End (exclusive) of the threshold block starting at `t`.
#[inline]
pub(crate) fn block_end_after(t: u64) -> u64 {
    t + 1 + t / 64
}

impl RunningMax {
    pub fn new(scaling: Scaling, burn_in: u64) -> Self {
        Self {
            scaling,
            burn_in,
            best: 0.0,
            block_start: 0,
            block_end: 0,
            threshold: 0.0,
        }
    }

    #[inline]
    pub fn offer(&mut self, t: u64, s: f64) {
        if t < self.burn_in {
            return;
        }
        if t >= self.block_end {
            self.block_start = t;
            self.block_end = block_end_after(t);
            self.threshold = self.best * self.scaling.at(t) * THRESHOLD_SLACK;
        }
        if s > self.threshold {
            let r = s / self.scaling.at(t);
            if r > self.best {
                self.best = r;
                self.threshold = self.best * self.scaling.at(self.block_start) * THRESHOLD_SLACK;
            }
        }
    }

    pub fn value(&self) -> f64 {
        self.best
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LilSpec {
    pub graph: Graph,
    pub k: usize,
    pub n_max: u64,
    pub replicates: u64,
    pub seed: u64,
    /// First time included in the running maximum (at least 16).
    pub burn_in: u64,
}

impl LilSpec {
    pub fn validate(&self, statistics: &[Statistic]) -> Result<()> {
        if self.n_max < 1000 {
            return Err(domain(format!("n_max must be at least 1000, got {}", self.n_max)));
        }
        log_log(self.burn_in)?;
        if self.burn_in > self.n_max {
            return Err(domain("burn_in exceeds n_max"));
        }
        if let Graph::Zd { d: 0 } = self.graph {
            return Err(Error::InvalidDimension(0));
        }
        if self.k == 0 {
            return Err(Error::TooFewWalkers { needed: 1, got: 0 });
        }
        for &s in statistics {
            Scaling::for_statistic(self.graph, s)?;
            if s == Statistic::MaxDistance && self.k < 2 {
                return Err(Error::TooFewWalkers { needed: 2, got: self.k });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LilProfile {
    pub graph: Graph,
    pub statistic: Statistic,
    pub k: usize,
    pub normalizer: String,
    pub target_constant: f64,
    pub checkpoints: Vec<u64>,
    /// `running_max[r][c]`: replicate `r` at checkpoint `c`.
    pub running_max: Vec<Vec<f64>>,
    pub ensemble_max: Vec<f64>,
    pub ensemble_median: Vec<f64>,
}

impl LilProfile {
    pub fn final_ensemble_max(&self) -> f64 {
        *self.ensemble_max.last().expect("at least one checkpoint")
    }
}

fn stat_zd(points: &[ZdPoint], statistic: Statistic) -> f64 {
    match statistic {
        Statistic::Norm => (points[0].norm_sq() as f64).sqrt(),
        _ => {
            let mut best = 0i64;
            for i in 0..points.len() {
                for j in i + 1..points.len() {
                    let d2: i64 = points[i]
                        .coords()
                        .iter()
                        .zip(points[j].coords())
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum();
                    best = best.max(d2);
                }
            }
            (best as f64).sqrt()
        }
    }
}

fn stat_line(points: &[i64], statistic: Statistic) -> f64 {
    match statistic {
        Statistic::Norm => points[0].unsigned_abs() as f64,
        _ => {
            let (lo, hi) = points
                .iter()
                .fold((i64::MAX, i64::MIN), |(lo, hi), &p| (lo.min(p), hi.max(p)));
            (hi - lo) as f64
        }
    }
}

fn stat_comb(points: &[CombVertex], statistic: Statistic) -> f64 {
    match statistic {
        Statistic::Horizontal => points[0].x.unsigned_abs() as f64,
        Statistic::Vertical => points[0].y.unsigned_abs() as f64,
        _ => max_pairwise_comb(points) as f64,
    }
}

/// Profiles of several statistics computed on the same walkers.
pub fn lil_profiles(spec: &LilSpec, statistics: &[Statistic]) -> Result<Vec<LilProfile>> {
    spec.validate(statistics)?;
    let scalings: Vec<Scaling> = statistics
        .iter()
        .map(|&s| Scaling::for_statistic(spec.graph, s))
        .collect::<Result<_>>()?;
    let checkpoints = dyadic_from(spec.burn_in, spec.n_max);
    let key = experiment_key(&format!("lil/{}", spec.graph.label()));
    let per_rep: Vec<Vec<Vec<f64>>> = run_replicates(spec.replicates, |rep| {
        let mut rngs: Vec<RngStream> = (0..spec.k as u64)
            .map(|i| RngStream::for_walker(spec.seed, key, i, rep))
            .collect();
        let mut maxes: Vec<RunningMax> = scalings.iter().map(|&s| RunningMax::new(s, spec.burn_in)).collect();
        let mut out = vec![Vec::with_capacity(checkpoints.len()); statistics.len()];
        let mut next_cp = 0;
        let mut record = |t: u64, maxes: &[RunningMax], out: &mut Vec<Vec<f64>>| {
            if next_cp < checkpoints.len() && checkpoints[next_cp] == t {
                for (o, m) in out.iter_mut().zip(maxes) {
                    o.push(m.value());
                }
                next_cp += 1;
            }
        };
        match spec.graph {
            Graph::Zd { d: 1 } => {
                let mut pos = vec![0i64; spec.k];
                for t in 1..=spec.n_max {
                    for (p, rng) in pos.iter_mut().zip(rngs.iter_mut()) {
                        *p += if rng.bit() { 1 } else { -1 };
                    }
                    for (m, &s) in maxes.iter_mut().zip(statistics) {
                        m.offer(t, stat_line(&pos, s));
                    }
                    record(t, &maxes, &mut out);
                }
            }
            Graph::Zd { d } => {
                let mut pos = vec![ZdPoint::origin(d).expect("d validated"); spec.k];
                for t in 1..=spec.n_max {
                    for (p, rng) in pos.iter_mut().zip(rngs.iter_mut()) {
                        p.apply(zd_step(d, rng).expect("d validated"));
                    }
                    for (m, &s) in maxes.iter_mut().zip(statistics) {
                        m.offer(t, stat_zd(&pos, s));
                    }
                    record(t, &maxes, &mut out);
                }
            }
            Graph::Comb => {
                let mut pos = vec![CombVertex::ORIGIN; spec.k];
                for t in 1..=spec.n_max {
                    for (p, rng) in pos.iter_mut().zip(rngs.iter_mut()) {
                        *p = comb_step_direct(*p, rng);
                    }
                    for (m, &s) in maxes.iter_mut().zip(statistics) {
                        m.offer(t, stat_comb(&pos, s));
                    }
                    record(t, &maxes, &mut out);
                }
            }
        }
        out
    });
    let profiles = statistics
        .iter()
        .zip(&scalings)
        .enumerate()
        .map(|(si, (&statistic, scaling))| {
            let running_max: Vec<Vec<f64>> = per_rep.iter().map(|r| r[si].clone()).collect();
            let column = |c: usize| running_max.iter().map(|r| r[c]).collect::<Vec<f64>>();
            let ensemble_max = (0..checkpoints.len())
                .map(|c| column(c).into_iter().fold(f64::MIN, f64::max))
                .collect();
            let ensemble_median = (0..checkpoints.len()).map(|c| median(&column(c))).collect();
            LilProfile {
                graph: spec.graph,
                statistic,
                k: spec.k,
                normalizer: scaling.label.to_string(),
                target_constant: scaling.target,
                checkpoints: checkpoints.clone(),
                running_max,
                ensemble_max,
                ensemble_median,
            }
        })
        .collect();
    Ok(profiles)
}

pub fn lil_profile(spec: &LilSpec, statistic: Statistic) -> Result<LilProfile> {
    Ok(lil_profiles(spec, &[statistic])?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(graph: Graph, k: usize) -> LilSpec {
        LilSpec {
            graph,
            k,
            n_max: 4096,
            replicates: 16,
            seed: 3,
            burn_in: 16,
        }
    }

    #[test]
    fn running_max_matches_naive_computation() {
        let scaling = Scaling::for_statistic(Graph::Comb, Statistic::Horizontal).unwrap();
        let mut fast = RunningMax::new(scaling, 16);
        let mut naive = 0.0f64;
        let mut rng = RngStream::new(1, 1);
        let mut x = 0i64;
        for t in 1..=50_000u64 {
            x += if rng.bit() { 1 } else { -1 };
            let s = x.unsigned_abs() as f64;
            fast.offer(t, s);
            if t >= 16 {
                naive = naive.max(s / scaling.at(t));
            }
            assert_eq!(fast.value(), naive, "t {t}");
        }
    }

    #[test]
    fn profiles_are_nondecreasing_and_max_dominates_median() {
        for (g, stats) in [
            (Graph::Zd { d: 1 }, vec![Statistic::MaxDistance, Statistic::Norm]),
            (Graph::Zd { d: 2 }, vec![Statistic::MaxDistance, Statistic::Norm]),
            (Graph::Comb, vec![Statistic::MaxDistance, Statistic::Horizontal, Statistic::Vertical]),
        ] {
            for p in lil_profiles(&spec(g, 3), &stats).unwrap() {
                for r in &p.running_max {
                    assert!(r.windows(2).all(|w| w[1] >= w[0]));
                }
                for (m, med) in p.ensemble_max.iter().zip(&p.ensemble_median) {
                    assert!(m >= med);
                }
                assert_eq!(p.checkpoints.last(), Some(&4096));
            }
        }
    }

    #[test]
    fn more_walkers_never_shrink_the_max_distance() {
        for g in [Graph::Zd { d: 1 }, Graph::Comb] {
            let two = lil_profile(&spec(g, 2), Statistic::MaxDistance).unwrap();
            let four = lil_profile(&spec(g, 4), Statistic::MaxDistance).unwrap();
            for (a, b) in two.running_max.iter().zip(&four.running_max) {
                assert!(a.iter().zip(b).all(|(x, y)| y >= x));
            }
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut s = spec(Graph::Comb, 1);
        assert!(lil_profile(&s, Statistic::MaxDistance).is_err());
        assert!(lil_profile(&s, Statistic::Norm).is_err());
        s.n_max = 999;
        assert!(lil_profile(&s, Statistic::Vertical).is_err());
        let mut s = spec(Graph::Zd { d: 1 }, 2);
        s.burn_in = 8;
        assert!(lil_profile(&s, Statistic::MaxDistance).is_err());
    }
}
