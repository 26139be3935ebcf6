//! Distances between walkers and collision detection.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{CombVertex, ZdPoint};

/// Graph distance on the comb.
///
/// Between distinct teeth every path must descend to the backbone, cross it
/// and climb the other tooth, so the distance is `|y1| + |x1 - x2| + |y2|`.
#[inline]
pub fn comb_graph_distance(u: CombVertex, v: CombVertex) -> u64 {
    if u.x == v.x {
        (u.y - v.y).unsigned_abs()
    } else {
        u.y.unsigned_abs() + (u.x - v.x).unsigned_abs() + v.y.unsigned_abs()
    }
}

/// Shortest-path length by breadth-first search over comb adjacency.
pub fn comb_graph_distance_bfs(u: CombVertex, v: CombVertex, radius_cap: u64) -> Result<u64> {
    let mut seen = HashSet::from([u]);
    let mut frontier = VecDeque::from([(u, 0u64)]);
    while let Some((w, d)) = frontier.pop_front() {
        if w == v {
            return Ok(d);
        }
        if d == radius_cap {
            continue;
        }
        for next in w.neighbors() {
            if seen.insert(next) {
                frontier.push_back((next, d + 1));
            }
        }
    }
    Err(Error::RadiusCapExceeded { cap: radius_cap })
}

pub fn euclidean_distance(p: &ZdPoint, q: &ZdPoint) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    let sq: i64 = p
        .coords()
        .iter()
        .zip(q.coords())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok((sq as f64).sqrt())
}

/// A lattice position that walkers can occupy.
pub trait Position: Clone + PartialEq {
    fn distance(&self, other: &Self) -> Result<f64>;

    fn dim(&self) -> usize;
}

impl Position for ZdPoint {
    fn distance(&self, other: &Self) -> Result<f64> {
        euclidean_distance(self, other)
    }

    fn dim(&self) -> usize {
        ZdPoint::dim(self)
    }
}

impl Position for CombVertex {
    fn distance(&self, other: &Self) -> Result<f64> {
        Ok(comb_graph_distance(*self, *other) as f64)
    }

    fn dim(&self) -> usize {
        2
    }
}

/// Positions of `K` walkers at a common time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSnapshot<P> {
    pub time: u64,
    states: Vec<P>,
}

impl<P: Position> EnsembleSnapshot<P> {
    pub fn new(time: u64, states: Vec<P>) -> Result<Self> {
        let Some(first) = states.first() else {
            return Err(Error::TooFewWalkers { needed: 1, got: 0 });
        };
        let d = first.dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch {
                left: d,
                right: bad.dim(),
            });
        }
        Ok(Self { time, states })
    }

    pub fn states(&self) -> &[P] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// `D_K`: the largest distance between two of the walkers.
pub fn max_pairwise_distance<P: Position>(snap: &EnsembleSnapshot<P>) -> Result<f64> {
    let s = snap.states();
    if s.len() < 2 {
        return Err(Error::TooFewWalkers {
            needed: 2,
            got: s.len(),
        });
    }
    let mut best = 0.0f64;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            best = best.max(s[i].distance(&s[j])?);
        }
    }
    Ok(best)
}

/// `D_K` on the comb, in exact integers.
pub fn max_pairwise_comb(states: &[CombVertex]) -> u64 {
    let mut best = 0;
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            best = best.max(comb_graph_distance(states[i], states[j]));
        }
    }
    best
}

/// `D_K` on Z: the spread of the positions.
pub fn max_pairwise_line(states: &[i64]) -> u64 {
    let (lo, hi) = states
        .iter()
        .fold((i64::MAX, i64::MIN), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if states.is_empty() {
        0
    } else {
        (hi - lo).unsigned_abs()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CollisionMode {
    Pairwise,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CollisionKind {
    Pairwise(usize, usize),
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollisionEvent<P> {
    pub time: u64,
    pub kind: CollisionKind,
    pub location: P,
}

/// Scan a synchronized ensemble and report every same-time, same-place meeting.
///
/// In pairwise mode each colliding pair `(i, j)`, `i < j`, yields its own
/// event; in full mode an event requires all walkers to coincide.
pub fn detect_collisions<P, I>(stream: I, mode: CollisionMode) -> Vec<CollisionEvent<P>>
where
    P: Position,
    I: IntoIterator<Item = EnsembleSnapshot<P>>,
{
    let mut events = Vec::new();
    for snap in stream {
        let s = snap.states();
        match mode {
            CollisionMode::Pairwise => {
                for i in 0..s.len() {
                    for j in i + 1..s.len() {
                        if s[i] == s[j] {
                            events.push(CollisionEvent {
                                time: snap.time,
                                kind: CollisionKind::Pairwise(i, j),
                                location: s[i].clone(),
                            });
                        }
                    }
                }
            }
            CollisionMode::Full => {
                if s.len() >= 2 && s.iter().all(|p| *p == s[0]) {
                    events.push(CollisionEvent {
                        time: snap.time,
                        kind: CollisionKind::Full,
                        location: s[0].clone(),
                    });
                }
            }
        }
    }
    events
}

/// Streaming collision tally for hot loops: per-pair and full counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollisionTally {
    k: usize,
    pub pairs: Vec<u64>,
    pub full: u64,
}

impl CollisionTally {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            pairs: vec![0; k * k.saturating_sub(1) / 2],
            full: 0,
        }
    }

    pub fn observe<T: PartialEq>(&mut self, states: &[T]) {
        debug_assert_eq!(states.len(), self.k);
        let mut idx = 0;
        let mut all = true;
        for i in 0..self.k {
            for j in i + 1..self.k {
                if states[i] == states[j] {
                    self.pairs[idx] += 1;
                } else if i == 0 {
                    all = false;
                }
                idx += 1;
            }
        }
        if all && self.k >= 2 {
            self.full += 1;
        }
    }

    /// Count for pair `(i, j)`, `i < j`.
    pub fn pair(&self, i: usize, j: usize) -> u64 {
        assert!(i < j && j < self.k);
        let idx = i * (2 * self.k - i - 1) / 2 + (j - i - 1);
        self.pairs[idx]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use crate::walk::comb_step_direct;

    fn v(x: i64, y: i64) -> CombVertex {
        CombVertex::new(x, y)
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(comb_graph_distance(v(0, 0), v(0, 5)), 5);
        assert_eq!(comb_graph_distance(v(2, 3), v(2, 7)), 4);
        assert_eq!(comb_graph_distance(v(1, 2), v(3, 1)), 5);
    }

    #[test]
    fn bfs_examples_and_cap() {
        assert_eq!(comb_graph_distance_bfs(v(0, 0), v(0, 0), 0).unwrap(), 0);
        assert_eq!(comb_graph_distance_bfs(v(0, 1), v(1, 1), 10).unwrap(), 3);
        assert_eq!(comb_graph_distance_bfs(v(1, 2), v(3, 1), 5).unwrap(), 5);
        assert!(matches!(
            comb_graph_distance_bfs(v(1, 2), v(3, 1), 4),
            Err(Error::RadiusCapExceeded { cap: 4 })
        ));
    }

    #[test]
    fn euclidean_examples() {
        let p = |c: Vec<i64>| ZdPoint::new(c).unwrap();
        assert_eq!(euclidean_distance(&p(vec![1, 2]), &p(vec![1, 2])).unwrap(), 0.0);
        assert_eq!(euclidean_distance(&p(vec![3]), &p(vec![-2])).unwrap(), 5.0);
        assert_eq!(euclidean_distance(&p(vec![0, 0]), &p(vec![3, 4])).unwrap(), 5.0);
        assert!(matches!(
            euclidean_distance(&p(vec![0]), &p(vec![0, 0])),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn max_pairwise_examples() {
        let line = |xs: &[i64]| {
            EnsembleSnapshot::new(0, xs.iter().map(|&x| ZdPoint::new(vec![x]).unwrap()).collect())
                .unwrap()
        };
        assert_eq!(max_pairwise_distance(&line(&[4, 4, 4])).unwrap(), 0.0);
        assert_eq!(max_pairwise_distance(&line(&[-1, 6])).unwrap(), 7.0);
        assert_eq!(max_pairwise_distance(&line(&[0, 4, 9])).unwrap(), 9.0);
        assert_eq!(max_pairwise_line(&[0, 4, 9]), 9);
        assert!(matches!(
            max_pairwise_distance(&line(&[1])),
            Err(Error::TooFewWalkers { needed: 2, got: 1 })
        ));
        assert!(EnsembleSnapshot::<CombVertex>::new(0, vec![]).is_err());
        let mixed = vec![ZdPoint::new(vec![0]).unwrap(), ZdPoint::new(vec![0, 0]).unwrap()];
        assert!(EnsembleSnapshot::new(0, mixed).is_err());
    }

    #[test]
    fn identical_paths_collide_every_step() {
        let mut a = RngStream::new(1, 1);
        let mut b = RngStream::new(1, 1);
        let (mut p, mut q) = (CombVertex::ORIGIN, CombVertex::ORIGIN);
        let snaps: Vec<_> = (1..=50)
            .map(|t| {
                p = comb_step_direct(p, &mut a);
                q = comb_step_direct(q, &mut b);
                EnsembleSnapshot::new(t, vec![p, q]).unwrap()
            })
            .collect();
        let events = detect_collisions(snaps.clone(), CollisionMode::Pairwise);
        assert_eq!(events.len(), 50);
        assert!(events.iter().all(|e| e.kind == CollisionKind::Pairwise(0, 1)));
        assert_eq!(detect_collisions(snaps, CollisionMode::Full).len(), 50);
    }

    #[test]
    fn full_collisions_never_exceed_pairwise() {
        let mut rngs: Vec<_> = (0..3).map(|i| RngStream::new(5, i)).collect();
        let mut pos = [0i64; 3];
        let mut tally = CollisionTally::new(3);
        let mut snaps = Vec::new();
        for t in 1..=20_000u64 {
            for (p, r) in pos.iter_mut().zip(rngs.iter_mut()) {
                *p += crate::walk::line_step(r);
            }
            tally.observe(&pos);
            assert!(tally.pairs.iter().all(|&c| c >= tally.full));
            if t <= 2000 {
                snaps.push(
                    EnsembleSnapshot::new(t, pos.iter().map(|&x| ZdPoint::new(vec![x]).unwrap()).collect())
                        .unwrap(),
                );
            }
        }
        let pairwise = detect_collisions(snaps.clone(), CollisionMode::Pairwise);
        let full = detect_collisions(snaps, CollisionMode::Full);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let c = pairwise
                .iter()
                .filter(|e| e.kind == CollisionKind::Pairwise(i, j))
                .count();
            assert!(c >= full.len());
        }
        assert_eq!(tally.pair(0, 2), tally.pairs[1]);
        assert_eq!(tally.pair(1, 2), tally.pairs[2]);
    }
}
