//! Walk engines: simple symmetric walks on Z^d and two independent
//! constructions of the simple walk on the comb.
//!
//! The direct comb walk samples the one-step kernel `1/deg(u)`. The
//! constructed walk interleaves horizontal runs of an independent walk `S1`,
//! whose lengths are i.i.d. geometric `P(G = k) = 2^{-k-1}`, with complete
//! excursions of a vertical driver walk `S2` away from zero. Both have the
//! same law; the construction additionally exposes the return clock of the
//! driver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{CombVertex, ZdIncrement, ZdPoint};
use crate::rng::RngStream;

/// Which times a trajectory records.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Checkpoints {
    /// Time 0, the powers of two up to the horizon, any extra times, and the horizon.
    Dyadic { extra: Vec<u64> },
    /// Every time step.
    Full,
}

impl Checkpoints {
    pub fn dyadic() -> Self {
        Checkpoints::Dyadic { extra: Vec::new() }
    }

    pub fn dyadic_with(extra: impl IntoIterator<Item = u64>) -> Self {
        Checkpoints::Dyadic {
            extra: extra.into_iter().collect(),
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, Checkpoints::Full)
    }

    /// Sorted, deduplicated checkpoint times in `[0, n]`.
    pub fn times(&self, n: u64) -> Vec<u64> {
        match self {
            Checkpoints::Full => (0..=n).collect(),
            Checkpoints::Dyadic { extra } => {
                let mut t = dyadic_times(n);
                t.push(0);
                t.push(n);
                t.extend(extra.iter().copied().filter(|&e| e <= n));
                t.sort_unstable();
                t.dedup();
                t
            }
        }
    }
}

/// Powers of two `1, 2, 4, ...` not exceeding `n`.
pub fn dyadic_times(n: u64) -> Vec<u64> {
    (0..64)
        .map(|j| 1u64 << j)
        .take_while(|&t| t <= n)
        .collect()
}

/// A recorded walker path with its step counters.
///
/// For comb walks `horizontal_steps`/`vertical_steps` are `H_n`/`V_n`,
/// `local_time_zero` counts vertical steps that land on the backbone (the
/// local time at zero of the vertical driver) and `max_abs_horizontal` is
/// `max_{k <= n} |C1(k)|`. For Z^d walks the first coordinate plays the
/// horizontal role and `local_time_zero` counts visits to the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<S> {
    pub checkpoints: Vec<(u64, S)>,
    pub horizontal_steps: u64,
    pub vertical_steps: u64,
    pub local_time_zero: u64,
    pub max_abs_horizontal: u64,
    pub full_record: bool,
}

impl<S> Trajectory<S> {
    pub fn elapsed(&self) -> u64 {
        self.checkpoints.last().map_or(0, |(t, _)| *t)
    }

    pub fn final_state(&self) -> &S {
        &self.checkpoints.last().expect("trajectory has time 0").1
    }

    pub fn state_at(&self, time: u64) -> Option<&S> {
        self.checkpoints
            .binary_search_by_key(&time, |(t, _)| *t)
            .ok()
            .map(|i| &self.checkpoints[i].1)
    }
}

struct Recorder<S> {
    times: Vec<u64>,
    next: usize,
    out: Vec<(u64, S)>,
}

impl<S: Clone> Recorder<S> {
    fn new(schedule: &Checkpoints, n: u64) -> Self {
        let times = schedule.times(n);
        let cap = times.len();
        Self {
            times,
            next: 0,
            out: Vec::with_capacity(cap),
        }
    }

    #[inline]
    fn offer(&mut self, t: u64, state: &S) {
        if self.next < self.times.len() && self.times[self.next] == t {
            self.out.push((t, state.clone()));
            self.next += 1;
        }
    }
}

/// One step `±e_i` of the simple symmetric walk on Z^d, each of the `2d`
/// outcomes with probability `1/(2d)`.
pub fn zd_step(d: usize, rng: &mut RngStream) -> Result<ZdIncrement> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let k = rng.below(2 * d as u64);
    Ok(ZdIncrement {
        axis: (k / 2) as usize,
        sign: if k.is_multiple_of(2) { 1 } else { -1 },
    })
}

/// ±1 step of the walk on Z.
#[inline]
pub fn line_step(rng: &mut RngStream) -> i64 {
    if rng.bit() {
        1
    } else {
        -1
    }
}

/// `S(n)` of the simple walk on Z started at 0, sampled exactly as
/// `2 * Bin(n, 1/2) - n` by counting set bits.
pub fn line_endpoint(n: u64, rng: &mut RngStream) -> i64 {
    let mut ones = 0u64;
    let mut left = n;
    while left >= 64 {
        ones += u64::from(rng.word().count_ones());
        left -= 64;
    }
    if left > 0 {
        ones += u64::from((rng.word() & ((1u64 << left) - 1)).count_ones());
    }
    2 * ones as i64 - n as i64
}

pub fn simulate_zd(
    d: usize,
    n: u64,
    rng: &mut RngStream,
    schedule: &Checkpoints,
) -> Result<Trajectory<ZdPoint>> {
    let mut pos = ZdPoint::origin(d)?;
    let mut rec = Recorder::new(schedule, n);
    rec.offer(0, &pos);
    let (mut horizontal, mut vertical, mut visits, mut max_h) = (0u64, 0u64, 0u64, 0u64);
    for t in 1..=n {
        let inc = zd_step(d, rng)?;
        pos.apply(inc);
        if inc.axis == 0 {
            horizontal += 1;
            max_h = max_h.max(pos.coords()[0].unsigned_abs());
        } else {
            vertical += 1;
        }
        if pos.is_origin() {
            visits += 1;
        }
        rec.offer(t, &pos);
    }
    Ok(Trajectory {
        checkpoints: rec.out,
        horizontal_steps: horizontal,
        vertical_steps: vertical,
        local_time_zero: visits,
        max_abs_horizontal: max_h,
        full_record: schedule.is_full(),
    })
}

/// One step of the comb walk from `v`: off the backbone up/down with
/// probability 1/2 each, on the backbone to each of the four neighbours with
/// probability 1/4.
#[inline]
pub fn comb_step_direct(v: CombVertex, rng: &mut RngStream) -> CombVertex {
    if v.y != 0 {
        CombVertex::new(v.x, if rng.bit() { v.y + 1 } else { v.y - 1 })
    } else {
        match rng.bits(2) {
            0 => CombVertex::new(v.x - 1, 0),
            1 => CombVertex::new(v.x + 1, 0),
            2 => CombVertex::new(v.x, 1),
            _ => CombVertex::new(v.x, -1),
        }
    }
}

/// The one-step law out of `v`: `1/deg(v)` to each neighbour.
pub fn comb_step_law(v: CombVertex) -> Vec<(CombVertex, f64)> {
    let p = 1.0 / f64::from(v.degree());
    v.neighbors().map(|w| (w, p)).collect()
}

/// Incremental direct comb walker with the trajectory counters.
#[derive(Clone, Debug, Default)]
pub struct CombWalker {
    pub pos: CombVertex,
    pub horizontal_steps: u64,
    pub vertical_steps: u64,
    pub local_time_zero: u64,
    pub max_abs_horizontal: u64,
}

impl CombWalker {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn step(&mut self, rng: &mut RngStream) -> CombVertex {
        let next = comb_step_direct(self.pos, rng);
        if next.x != self.pos.x {
            self.horizontal_steps += 1;
            self.max_abs_horizontal = self.max_abs_horizontal.max(next.x.unsigned_abs());
        } else {
            self.vertical_steps += 1;
            if next.y == 0 {
                self.local_time_zero += 1;
            }
        }
        self.pos = next;
        next
    }
}

pub fn simulate_comb_direct(
    n: u64,
    rng: &mut RngStream,
    schedule: &Checkpoints,
) -> Trajectory<CombVertex> {
    let mut walker = CombWalker::new();
    let mut rec = Recorder::new(schedule, n);
    rec.offer(0, &walker.pos);
    for t in 1..=n {
        let pos = walker.step(rng);
        rec.offer(t, &pos);
    }
    Trajectory {
        checkpoints: rec.out,
        horizontal_steps: walker.horizontal_steps,
        vertical_steps: walker.vertical_steps,
        local_time_zero: walker.local_time_zero,
        max_abs_horizontal: walker.max_abs_horizontal,
        full_record: schedule.is_full(),
    }
}

/// Geometric variable with `P(k) = 2^{-k-1}`, `k = 0, 1, 2, ...`.
///
/// Inverse CDF on one uniform: `k = floor(-log2 u)`, which is the number of
/// leading zero bits of `u`'s binary expansion. An all-zero word (probability
/// `2^-64`) continues into the next word, so the law is exact with no clipping.
pub fn sample_geometric(rng: &mut RngStream) -> u64 {
    let mut k = 0;
    loop {
        let w = rng.word();
        if w != 0 {
            return k + u64::from(w.leading_zeros());
        }
        k += 64;
    }
}

/// Return times of the vertical driver and the geometric run lengths.
///
/// `returns[N-1]` is `rho_2(N)` measured in driver steps and
/// `run_lengths[i-1]` is `G_i`; one more run length than completed returns is
/// always present (the run in progress, possibly truncated at the horizon).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnClock {
    pub returns: Vec<u64>,
    pub run_lengths: Vec<u64>,
}

impl ReturnClock {
    /// `T_N = G_1 + ... + G_N`.
    pub fn partial_sum(&self, n: usize) -> u64 {
        self.run_lengths[..n.min(self.run_lengths.len())].iter().sum()
    }

    pub fn completed_returns(&self) -> usize {
        self.returns.len()
    }
}

/// Comb walk built from a horizontal walk `S1`, a vertical driver `S2` and
/// geometric run lengths, each from its own child stream.
///
/// The first `G_1` steps are horizontal; afterwards every return of `S2` to
/// zero is followed by a fresh horizontal run. Returns of `S2` are generated
/// lazily, one driver step at a time.
#[derive(Clone, Debug)]
pub struct ConstructedCombWalker {
    horizontal: RngStream,
    vertical: RngStream,
    runs: RngStream,
    s1: i64,
    s2: i64,
    run_left: u64,
    pub clock: ReturnClock,
    pub horizontal_steps: u64,
    pub vertical_steps: u64,
    pub max_abs_horizontal: u64,
}

impl ConstructedCombWalker {
    pub fn new(rng: &RngStream) -> Self {
        let mut runs = rng.split(2);
        let first = sample_geometric(&mut runs);
        Self {
            horizontal: rng.split(0),
            vertical: rng.split(1),
            runs,
            s1: 0,
            s2: 0,
            run_left: first,
            clock: ReturnClock {
                returns: Vec::new(),
                run_lengths: vec![first],
            },
            horizontal_steps: 0,
            vertical_steps: 0,
            max_abs_horizontal: 0,
        }
    }

    pub fn pos(&self) -> CombVertex {
        CombVertex::new(self.s1, self.s2)
    }

    pub fn step(&mut self) -> CombVertex {
        if self.run_left > 0 {
            self.run_left -= 1;
            self.s1 += line_step(&mut self.horizontal);
            self.horizontal_steps += 1;
            self.max_abs_horizontal = self.max_abs_horizontal.max(self.s1.unsigned_abs());
        } else {
            self.s2 += line_step(&mut self.vertical);
            self.vertical_steps += 1;
            if self.s2 == 0 {
                self.clock.returns.push(self.vertical_steps);
                let g = sample_geometric(&mut self.runs);
                self.clock.run_lengths.push(g);
                self.run_left = g;
            }
        }
        self.pos()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructedPath {
    pub trajectory: Trajectory<CombVertex>,
    pub clock: ReturnClock,
}

pub fn simulate_comb_constructed(
    n: u64,
    rng: &RngStream,
    schedule: &Checkpoints,
) -> ConstructedPath {
    let mut walker = ConstructedCombWalker::new(rng);
    let mut rec = Recorder::new(schedule, n);
    rec.offer(0, &walker.pos());
    for t in 1..=n {
        let pos = walker.step();
        rec.offer(t, &pos);
    }
    ConstructedPath {
        trajectory: Trajectory {
            checkpoints: rec.out,
            horizontal_steps: walker.horizontal_steps,
            vertical_steps: walker.vertical_steps,
            local_time_zero: walker.clock.returns.len() as u64,
            max_abs_horizontal: walker.max_abs_horizontal,
            full_record: schedule.is_full(),
        },
        clock: walker.clock,
    }
}

/// `xi(0, n)`: number of `j in [1, n]` with `S(j) = 0` for a fully recorded
/// one-dimensional trajectory.
pub fn local_time_zero(traj: &Trajectory<ZdPoint>) -> Result<u64> {
    if !traj.full_record {
        return Err(Error::SparseTrajectory);
    }
    if let Some((_, s)) = traj.checkpoints.first() {
        if s.dim() != 1 {
            return Err(Error::NotOneDimensional(s.dim()));
        }
    }
    Ok(traj
        .checkpoints
        .iter()
        .skip(1)
        .filter(|(_, s)| s.coords()[0] == 0)
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_trajectory(steps: &[i64]) -> Trajectory<ZdPoint> {
        let mut pos = 0;
        let mut checkpoints = vec![(0, ZdPoint::new(vec![0]).unwrap())];
        for (t, s) in steps.iter().enumerate() {
            pos += s;
            checkpoints.push((t as u64 + 1, ZdPoint::new(vec![pos]).unwrap()));
        }
        Trajectory {
            checkpoints,
            horizontal_steps: steps.len() as u64,
            vertical_steps: 0,
            local_time_zero: 0,
            max_abs_horizontal: 0,
            full_record: true,
        }
    }

    #[test]
    fn zd_step_rejects_zero_dimension() {
        let mut rng = RngStream::new(0, 0);
        assert!(matches!(zd_step(0, &mut rng), Err(Error::InvalidDimension(0))));
        assert!(simulate_zd(0, 5, &mut rng, &Checkpoints::Full).is_err());
    }

    #[test]
    fn zd_step_frequencies_d2_within_three_sigma() {
        let mut rng = RngStream::new(3, 1);
        let draws = 1_000_000u64;
        let mut counts = [0u64; 4];
        for _ in 0..draws {
            let inc = zd_step(2, &mut rng).unwrap();
            counts[inc.axis * 2 + usize::from(inc.sign < 0)] += 1;
        }
        let p = 0.25;
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - draws as f64 * p).abs() < 3.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn zero_step_trajectory_sits_at_origin() {
        let mut rng = RngStream::new(1, 1);
        let t = simulate_zd(3, 0, &mut rng, &Checkpoints::dyadic()).unwrap();
        assert_eq!(t.checkpoints.len(), 1);
        assert!(t.final_state().is_origin());
        let c = simulate_comb_direct(0, &mut rng, &Checkpoints::dyadic());
        assert_eq!(c.checkpoints, vec![(0, CombVertex::ORIGIN)]);
        assert_eq!((c.horizontal_steps, c.vertical_steps), (0, 0));
    }

    #[test]
    fn local_time_counts_returns() {
        let t = line_trajectory(&[1, -1, 1]);
        let states: Vec<i64> = t.checkpoints.iter().skip(1).map(|(_, s)| s.coords()[0]).collect();
        assert_eq!(states, vec![1, 0, 1]);
        assert_eq!(local_time_zero(&t).unwrap(), 1);
        assert_eq!(local_time_zero(&line_trajectory(&[1, -1, 1, -1])).unwrap(), 2);
        assert_eq!(local_time_zero(&line_trajectory(&[1, 1, 1, -1])).unwrap(), 0);
    }

    #[test]
    fn local_time_rejects_sparse_and_multidimensional() {
        let mut rng = RngStream::new(5, 5);
        let sparse = simulate_zd(1, 100, &mut rng, &Checkpoints::dyadic()).unwrap();
        assert!(matches!(local_time_zero(&sparse), Err(Error::SparseTrajectory)));
        let planar = simulate_zd(2, 10, &mut rng, &Checkpoints::Full).unwrap();
        assert!(matches!(local_time_zero(&planar), Err(Error::NotOneDimensional(2))));
    }

    #[test]
    fn simulate_zd_counts_match_local_time() {
        let mut rng = RngStream::new(9, 9);
        let t = simulate_zd(1, 5000, &mut rng, &Checkpoints::Full).unwrap();
        assert_eq!(local_time_zero(&t).unwrap(), t.local_time_zero);
        for w in t.checkpoints.windows(2) {
            assert!(w[0].1.is_neighbor(&w[1].1));
            assert_eq!(w[0].0 + 1, w[1].0);
        }
    }

    #[test]
    fn comb_step_law_matches_kernel() {
        let law = comb_step_law(CombVertex::new(3, 0));
        assert_eq!(law.len(), 4);
        assert!(law.iter().all(|&(_, p)| p == 0.25));
        let law = comb_step_law(CombVertex::new(3, 2));
        let mut targets: Vec<_> = law.iter().map(|&(v, _)| v).collect();
        targets.sort();
        assert_eq!(targets, vec![CombVertex::new(3, 1), CombVertex::new(3, 3)]);
        assert!(law.iter().all(|&(_, p)| p == 0.5));
        for x in -10..=10 {
            for y in -10..=10 {
                let total: f64 = comb_step_law(CombVertex::new(x, y)).iter().map(|p| p.1).sum();
                assert_eq!(total, 1.0);
            }
        }
    }

    #[test]
    fn comb_direct_sampler_matches_law() {
        let mut rng = RngStream::new(4, 4);
        let mut backbone = std::collections::HashMap::new();
        let mut tooth = std::collections::HashMap::new();
        let draws = 400_000;
        for _ in 0..draws {
            *backbone
                .entry(comb_step_direct(CombVertex::new(3, 0), &mut rng))
                .or_insert(0u64) += 1;
            *tooth
                .entry(comb_step_direct(CombVertex::new(3, 2), &mut rng))
                .or_insert(0u64) += 1;
        }
        assert_eq!(backbone.len(), 4);
        assert_eq!(tooth.len(), 2);
        for (counts, p) in [(&backbone, 0.25), (&tooth, 0.5)] {
            let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
            for &c in counts.values() {
                assert!((c as f64 - draws as f64 * p).abs() < 4.0 * sigma);
            }
        }
    }

    #[test]
    fn geometric_point_masses_and_mean() {
        let mut rng = RngStream::new(11, 0);
        let draws = 10_000_000u64;
        let mut sum = 0u64;
        let mut zeros = 0u64;
        let mut twos = 0u64;
        for _ in 0..draws {
            let g = sample_geometric(&mut rng);
            sum += g;
            zeros += u64::from(g == 0);
            twos += u64::from(g == 2);
        }
        let n = draws as f64;
        // mean 1, variance 2
        let mean = sum as f64 / n;
        assert!((mean - 1.0).abs() < 3.0 * (2.0 / n).sqrt(), "mean {mean}");
        for (count, p) in [(zeros, 0.5), (twos, 0.125)] {
            let sigma = (n * p * (1.0 - p)).sqrt();
            assert!((count as f64 - n * p).abs() < 4.0 * sigma);
        }
    }

    #[test]
    fn constructed_walk_with_empty_first_run_starts_vertically() {
        // find a stream whose first run length is zero
        let rng = (0..100)
            .map(|i| RngStream::new(21, i))
            .find(|r| ConstructedCombWalker::new(r).clock.run_lengths[0] == 0)
            .expect("G_1 = 0 has probability 1/2");
        let path = simulate_comb_constructed(1, &rng, &Checkpoints::Full);
        let first = path.trajectory.checkpoints[1].1;
        assert_eq!(first.x, 0);
        assert_eq!(first.y.abs(), 1);
    }

    #[test]
    fn constructed_walk_counters_and_run_sandwich() {
        for rep in 0..200 {
            let rng = RngStream::new(77, rep);
            let n = 1 + rep * 13;
            let path = simulate_comb_constructed(n, &rng, &Checkpoints::Full);
            let t = &path.trajectory;
            assert_eq!(t.horizontal_steps + t.vertical_steps, n);
            for w in t.checkpoints.windows(2) {
                assert!(w[0].1.is_neighbor(w[1].1));
            }
            let xi = path.clock.completed_returns();
            assert_eq!(t.local_time_zero, xi as u64);
            // completed runs are all used; the run in progress may be truncated
            assert!(path.clock.partial_sum(xi) <= t.horizontal_steps);
            assert!(t.horizontal_steps <= path.clock.partial_sum(xi + 1));
            assert_eq!(path.clock.run_lengths.len(), xi + 1);
            assert!(path.clock.returns.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
