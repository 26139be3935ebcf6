//! n-step transition tables of the comb walk by dynamic programming.
//!
//! [`KernelSweep`] pushes the distribution from an arbitrary start forward
//! one step at a time. Storage is one dense vector per tooth covering the
//! radius-n ball, updated in place, so a sweep to `n` costs `O(n^2)` memory
//! and `O(n^3)` time. [`OriginSweep`] does the same for start `(0,0)` on the
//! quadrant `x, y >= 0`, folding the walk by its two reflection symmetries,
//! which cuts memory and work by four. Both sweeps are deterministic: every
//! entry is computed by the same expression regardless of thread count.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::CombVertex;
use crate::metrics::comb_graph_distance;

/// Largest step count accepted by the floating-point sweeps.
pub const DP_STEP_GUARD: u64 = 8192;

/// Largest step count of the exact-rational mode (numerators over `4^n` fit in `u128`).
pub const EXACT_STEP_GUARD: u64 = 32;

const PAR_TEETH: usize = 64;

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn check_guard(n: u64, limit: u64) -> Result<()> {
    if n > limit {
        Err(Error::BudgetExceeded {
            requested: n,
            limit,
        })
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct Tooth {
    y_lo: i64,
    p: Vec<f64>,
}

impl Tooth {
    fn y_hi(&self) -> i64 {
        self.y_lo + self.p.len() as i64 - 1
    }

    fn get(&self, y: i64) -> f64 {
        if y < self.y_lo || y > self.y_hi() {
            0.0
        } else {
            self.p[(y - self.y_lo) as usize]
        }
    }

    /// One step restricted to `[lo, hi]`, with the backbone inflow from the
    /// neighbouring teeth. Entries outside the window are zero before and after.
    fn advance(&mut self, lo: i64, hi: i64, inflow_left: f64, inflow_right: f64) {
        let lo = lo.max(self.y_lo);
        let hi = hi.min(self.y_hi());
        if lo > hi {
            return;
        }
        let base = self.y_lo;
        let weight = |y: i64| if y == 0 { 0.25 } else { 0.5 };
        let i0 = (lo - base) as usize;
        let i1 = (hi - base) as usize;
        let mut prev = if i0 > 0 {
            weight(lo - 1) * self.p[i0 - 1]
        } else {
            0.0
        };
        for i in i0..=i1 {
            let y = base + i as i64;
            let cur = self.p[i];
            let next = if i + 1 < self.p.len() {
                weight(y + 1) * self.p[i + 1]
            } else {
                0.0
            };
            self.p[i] = prev + next;
            prev = weight(y) * cur;
        }
        if lo <= 0 && 0 <= hi {
            let i = (-base) as usize;
            self.p[i] = self.p[i] + 0.25 * inflow_left + 0.25 * inflow_right;
        }
    }
}

/// Forward distribution of the comb walk from a fixed start.
#[derive(Clone, Debug)]
pub struct KernelSweep {
    start: CombVertex,
    steps: u64,
    max_steps: u64,
    x_lo: i64,
    teeth: Vec<Tooth>,
}

impl KernelSweep {
    pub fn new(start: CombVertex, max_steps: u64) -> Result<Self> {
        check_guard(max_steps, DP_STEP_GUARD)?;
        let n = max_steps as i64;
        let reach = (n - start.y.abs()).max(0);
        let x_lo = start.x - reach;
        let teeth = (x_lo..=start.x + reach)
            .map(|x| {
                let j = (x - start.x).abs();
                let (lo, hi) = if j == 0 {
                    (start.y - n, start.y + n)
                } else {
                    (-(reach - j), reach - j)
                };
                let mut p = vec![0.0; (hi - lo + 1) as usize];
                if j == 0 {
                    p[(start.y - lo) as usize] = 1.0;
                }
                Tooth { y_lo: lo, p }
            })
            .collect();
        Ok(Self {
            start,
            steps: 0,
            max_steps,
            x_lo,
            teeth,
        })
    }

    pub fn start(&self) -> CombVertex {
        self.start
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn step(&mut self) -> Result<()> {
        if self.steps >= self.max_steps {
            return Err(Error::BudgetExceeded {
                requested: self.steps + 1,
                limit: self.max_steps,
            });
        }
        let m = self.steps as i64 + 1;
        let sx = self.start.x;
        let sy = self.start.y;
        let backbone: Vec<f64> = self.teeth.iter().map(|t| t.get(0)).collect();
        let x_lo = self.x_lo;
        let update = |(i, tooth): (usize, &mut Tooth)| {
            let x = x_lo + i as i64;
            let j = (x - sx).abs();
            let (lo, hi) = if j == 0 {
                (sy - m, sy + m)
            } else {
                let r = m - sy.abs() - j;
                if r < 0 {
                    return;
                }
                (-r, r)
            };
            let left = if i > 0 { backbone[i - 1] } else { 0.0 };
            let right = backbone.get(i + 1).copied().unwrap_or(0.0);
            tooth.advance(lo, hi, left, right);
        };
        if self.teeth.len() >= PAR_TEETH {
            self.teeth.par_iter_mut().enumerate().for_each(update);
        } else {
            self.teeth.iter_mut().enumerate().for_each(update);
        }
        self.steps += 1;
        Ok(())
    }

    pub fn advance_to(&mut self, n: u64) -> Result<()> {
        while self.steps < n {
            self.step()?;
        }
        Ok(())
    }

    pub fn prob(&self, v: CombVertex) -> f64 {
        let i = v.x - self.x_lo;
        if i < 0 || i as usize >= self.teeth.len() {
            return 0.0;
        }
        self.teeth[i as usize].get(v.y)
    }

    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.teeth.iter().flat_map(|t| t.p.iter().copied()))
    }

    /// `P(C2(n) = 0)` for the walk from `start`.
    pub fn backbone_mass(&self) -> f64 {
        compensated_sum(self.teeth.iter().map(|t| t.get(0)))
    }

    pub fn table(&self) -> KernelTable {
        let mut probs = BTreeMap::new();
        for (i, t) in self.teeth.iter().enumerate() {
            let x = self.x_lo + i as i64;
            for (k, &p) in t.p.iter().enumerate() {
                if p != 0.0 {
                    probs.insert(CombVertex::new(x, t.y_lo + k as i64), p);
                }
            }
        }
        KernelTable {
            start: self.start,
            steps: self.steps,
            probs,
        }
    }
}

/// Forward distribution from `(0,0)`, folded onto the quadrant `x, y >= 0`.
///
/// Entry `q(x, y)` holds the total mass of the (up to four) vertices
/// `(±x, ±y)`.
#[derive(Clone, Debug)]
pub struct OriginSweep {
    steps: u64,
    max_steps: u64,
    teeth: Vec<Vec<f64>>,
}

impl OriginSweep {
    pub fn new(max_steps: u64) -> Result<Self> {
        check_guard(max_steps, DP_STEP_GUARD)?;
        let mut teeth: Vec<Vec<f64>> = (0..=max_steps)
            .map(|x| vec![0.0; (max_steps - x + 1) as usize])
            .collect();
        teeth[0][0] = 1.0;
        Ok(Self {
            steps: 0,
            max_steps,
            teeth,
        })
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn step(&mut self) -> Result<()> {
        if self.steps >= self.max_steps {
            return Err(Error::BudgetExceeded {
                requested: self.steps + 1,
                limit: self.max_steps,
            });
        }
        let m = (self.steps + 1) as usize;
        let active = (m + 1).min(self.teeth.len());
        let backbone: Vec<f64> = self.teeth[..active].iter().map(|t| t[0]).collect();
        self.step_impl(m, &backbone);
        self.steps += 1;
        Ok(())
    }

    fn step_impl(&mut self, m: usize, backbone: &[f64]) {
        let update = |(x, tooth): (usize, &mut Vec<f64>)| {
            if x > m || tooth.is_empty() {
                return;
            }
            let hi = (m - x).min(tooth.len() - 1);
            let old1 = if tooth.len() > 1 { tooth[1] } else { 0.0 };
            // (x, y) <- (x, y±1) with probability 1/2; the backbone sends 1/4
            // to each of (x, ±1), which folds to 1/2
            let mut prev = 0.5 * tooth[0];
            for y in 1..=hi {
                let cur = tooth[y];
                let next = if y + 1 < tooth.len() { 0.5 * tooth[y + 1] } else { 0.0 };
                tooth[y] = prev + next;
                prev = 0.5 * cur;
            }
            let from_left = match x {
                0 => 0.0,
                1 => 0.5 * backbone[0],
                _ => 0.25 * backbone[x - 1],
            };
            let from_right = backbone.get(x + 1).map_or(0.0, |&b| 0.25 * b);
            tooth[0] = 0.5 * old1 + from_left + from_right;
        };
        if self.teeth.len() >= PAR_TEETH {
            self.teeth.par_iter_mut().enumerate().for_each(update);
        } else {
            self.teeth.iter_mut().enumerate().for_each(update);
        }
    }

    pub fn advance_to(&mut self, n: u64) -> Result<()> {
        while self.steps < n {
            self.step()?;
        }
        Ok(())
    }

    /// `p((0,0), v, n)` at the current step.
    pub fn prob(&self, v: CombVertex) -> f64 {
        let (x, y) = (v.x.unsigned_abs() as usize, v.y.unsigned_abs() as usize);
        let Some(q) = self.teeth.get(x).and_then(|t| t.get(y)) else {
            return 0.0;
        };
        let images = (if x != 0 { 2.0 } else { 1.0 }) * (if y != 0 { 2.0 } else { 1.0 });
        q / images
    }

    pub fn total_mass(&self) -> f64 {
        compensated_sum(self.teeth.iter().flat_map(|t| t.iter().copied()))
    }

    pub fn backbone_mass(&self) -> f64 {
        compensated_sum(self.teeth.iter().map(|t| t[0]))
    }

    pub fn table(&self) -> KernelTable {
        let mut probs = BTreeMap::new();
        for (x, t) in self.teeth.iter().enumerate() {
            for (y, _) in t.iter().enumerate().filter(|(_, &q)| q != 0.0) {
                for sx in if x == 0 { vec![1] } else { vec![-1, 1] } {
                    for sy in if y == 0 { vec![1] } else { vec![-1, 1] } {
                        let v = CombVertex::new(sx * x as i64, sy * y as i64);
                        probs.insert(v, self.prob(v));
                    }
                }
            }
        }
        KernelTable {
            start: CombVertex::ORIGIN,
            steps: self.steps,
            probs,
        }
    }
}

/// Exact `n`-step table: `p(start, v, n)` as sparse map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelTable {
    pub start: CombVertex,
    pub steps: u64,
    pub probs: BTreeMap<CombVertex, f64>,
}

impl KernelTable {
    pub fn prob(&self, v: CombVertex) -> f64 {
        self.probs.get(&v).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        compensated_sum(self.probs.values().copied())
    }

    /// Largest mass sitting on a vertex of the wrong parity (must be exactly zero).
    pub fn parity_violation(&self) -> f64 {
        self.probs
            .iter()
            .filter(|(v, _)| (self.steps + comb_graph_distance(self.start, **v)) % 2 == 1)
            .map(|(_, &p)| p.abs())
            .fold(0.0, f64::max)
    }

    /// Largest graph distance from the start among supported vertices.
    pub fn support_radius(&self) -> u64 {
        self.probs
            .keys()
            .map(|&v| comb_graph_distance(self.start, v))
            .max()
            .unwrap_or(0)
    }

    /// Golden-file text: one `x y prob` line per vertex, probabilities with
    /// 17 significant digits, sorted by `(x, y)`.
    pub fn to_golden(&self) -> String {
        let mut out = String::new();
        for (v, p) in &self.probs {
            writeln!(out, "{} {} {:.16e}", v.x, v.y, p).expect("string write");
        }
        out
    }

    pub fn from_golden(start: CombVertex, steps: u64, text: &str) -> Result<Self> {
        let mut probs = BTreeMap::new();
        let mut last: Option<CombVertex> = None;
        for (i, line) in text.lines().enumerate() {
            let err = |msg: &str| Error::GoldenParse {
                line: i + 1,
                msg: msg.to_string(),
            };
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(x), Some(y), Some(p), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(err("expected three fields"));
            };
            let v = CombVertex::new(
                x.parse().map_err(|_| err("bad x"))?,
                y.parse().map_err(|_| err("bad y"))?,
            );
            let p: f64 = p.parse().map_err(|_| err("bad probability"))?;
            if last.is_some_and(|l| l >= v) {
                return Err(err("lines not sorted by (x, y)"));
            }
            last = Some(v);
            probs.insert(v, p);
        }
        Ok(Self { start, steps, probs })
    }

    /// Table from exact numerators over `4^steps`.
    pub fn from_exact(exact: &ExactKernel) -> Self {
        let denom = 4f64.powi(exact.steps as i32);
        Self {
            start: exact.start,
            steps: exact.steps,
            probs: exact
                .numerators
                .iter()
                .map(|(&v, &num)| (v, num as f64 / denom))
                .collect(),
        }
    }
}

/// Exact n-step probabilities: numerators over the common denominator `4^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactKernel {
    pub start: CombVertex,
    pub steps: u64,
    pub numerators: BTreeMap<CombVertex, u128>,
}

/// Exact-rational mode for small `n` (golden files and hand examples).
pub fn exact_kernel(start: CombVertex, n: u64) -> Result<ExactKernel> {
    check_guard(n, EXACT_STEP_GUARD)?;
    let mut cur: HashMap<CombVertex, u128> = HashMap::from([(start, 1)]);
    for _ in 0..n {
        let mut next: HashMap<CombVertex, u128> = HashMap::with_capacity(cur.len() * 2);
        for (&u, &num) in &cur {
            // over 4^(m+1): each neighbour of u gets num * 4 / deg(u)
            let w = num * u128::from(4 / u.degree());
            for v in u.neighbors() {
                *next.entry(v).or_insert(0) += w;
            }
        }
        cur = next;
    }
    Ok(ExactKernel {
        start,
        steps: n,
        numerators: cur.into_iter().collect(),
    })
}

/// `p(start, ., n)` as a table.
pub fn comb_kernel_dp(start: CombVertex, n: u64) -> Result<KernelTable> {
    let mut sweep = KernelSweep::new(start, n)?;
    sweep.advance_to(n)?;
    Ok(sweep.table())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64, y: i64) -> CombVertex {
        CombVertex::new(x, y)
    }

    #[test]
    fn zero_steps_is_unit_mass() {
        let t = comb_kernel_dp(v(2, -3), 0).unwrap();
        assert_eq!(t.probs.len(), 1);
        assert_eq!(t.prob(v(2, -3)), 1.0);
    }

    #[test]
    fn two_step_hand_values() {
        let t = comb_kernel_dp(CombVertex::ORIGIN, 2).unwrap();
        assert_eq!(t.prob(v(0, 0)), 3.0 / 8.0);
        assert_eq!(t.prob(v(0, 2)), 1.0 / 8.0);
        let mut o = OriginSweep::new(2).unwrap();
        o.advance_to(2).unwrap();
        assert_eq!(o.prob(v(0, 0)), 3.0 / 8.0);
        assert_eq!(o.prob(v(0, -2)), 1.0 / 8.0);
        assert_eq!(o.prob(v(2, 0)), 1.0 / 16.0);
        assert_eq!(o.prob(v(1, 1)), 1.0 / 16.0);
    }

    #[test]
    fn guard_rejects_oversized_sweeps() {
        assert!(matches!(
            KernelSweep::new(CombVertex::ORIGIN, DP_STEP_GUARD + 1),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(OriginSweep::new(DP_STEP_GUARD + 1).is_err());
        assert!(exact_kernel(CombVertex::ORIGIN, 33).is_err());
        let mut s = KernelSweep::new(CombVertex::ORIGIN, 1).unwrap();
        s.step().unwrap();
        assert!(s.step().is_err());
    }

    #[test]
    fn tables_normalized_parity_exact_and_within_ball() {
        for start in [v(0, 0), v(0, 3), v(-2, 1), v(4, 0)] {
            let mut s = KernelSweep::new(start, 60).unwrap();
            for n in 1..=60 {
                s.step().unwrap();
                let t = s.table();
                assert!((t.total() - 1.0).abs() < 1e-12, "start {start} n {n}");
                assert_eq!(t.parity_violation(), 0.0);
                assert!(t.support_radius() <= n);
            }
        }
    }

    #[test]
    fn float_sweep_matches_exact_rational_mode() {
        for start in [v(0, 0), v(0, 2), v(1, -1)] {
            let exact = exact_kernel(start, 20).unwrap();
            let float = comb_kernel_dp(start, 20).unwrap();
            let from_exact = KernelTable::from_exact(&exact);
            assert_eq!(float.probs.len(), from_exact.probs.len());
            for (v, p) in &from_exact.probs {
                assert_eq!(float.prob(*v), *p, "{v}");
            }
            let total: u128 = exact.numerators.values().sum();
            assert_eq!(total, 4u128.pow(20));
        }
    }

    #[test]
    fn folded_sweep_matches_general_sweep() {
        let mut general = KernelSweep::new(CombVertex::ORIGIN, 120).unwrap();
        let mut folded = OriginSweep::new(120).unwrap();
        for _ in 0..120 {
            general.step().unwrap();
            folded.step().unwrap();
            assert!((general.backbone_mass() - folded.backbone_mass()).abs() < 1e-14);
        }
        let a = general.table();
        let b = folded.table();
        assert_eq!(a.probs.len(), b.probs.len());
        for (v, p) in &a.probs {
            assert!((p - b.prob(*v)).abs() < 1e-15, "{v}");
        }
        assert!((folded.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chapman_kolmogorov_at_eight_plus_eight() {
        let half = comb_kernel_dp(CombVertex::ORIGIN, 8).unwrap();
        let full = comb_kernel_dp(CombVertex::ORIGIN, 16).unwrap();
        let mut conv: BTreeMap<CombVertex, f64> = BTreeMap::new();
        for (&w, &p) in &half.probs {
            let from_w = comb_kernel_dp(w, 8).unwrap();
            for (&u, &q) in &from_w.probs {
                *conv.entry(u).or_insert(0.0) += p * q;
            }
        }
        let mut worst = 0.0f64;
        for (u, p) in &conv {
            worst = worst.max((p - full.prob(*u)).abs());
        }
        assert_eq!(conv.len(), full.probs.len());
        assert!(worst < 1e-12, "defect {worst}");
    }

    #[test]
    fn golden_round_trip_and_format() {
        let t = KernelTable::from_exact(&exact_kernel(CombVertex::ORIGIN, 2).unwrap());
        let text = t.to_golden();
        let first = text.lines().next().unwrap();
        assert_eq!(first, "-2 0 6.2500000000000000e-2");
        let back = KernelTable::from_golden(t.start, t.steps, &text).unwrap();
        assert_eq!(back, t);
        assert!(KernelTable::from_golden(t.start, 2, "0 0\n").is_err());
        assert!(KernelTable::from_golden(t.start, 2, "1 0 0.5\n0 0 0.5\n").is_err());
    }
}
