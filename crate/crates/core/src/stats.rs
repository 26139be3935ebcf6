//! Goodness-of-fit tests, empirical CDFs and slope fits.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Bins whose expected count falls below this are pooled with their neighbour.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    ChiSquare,
    TwoSampleChiSquare,
    Ks,
    SlopeFit,
}

/// How the verdict is read off the statistic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum Acceptance {
    /// Pass when the p-value exceeds the threshold.
    PValueAbove { threshold: f64 },
    /// Pass when the statistic is at most the threshold.
    AtMost { threshold: f64 },
    /// Pass when `|statistic / target - 1| <= tolerance`.
    RelativeTo { target: f64, tolerance: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatTest {
    pub kind: TestKind,
    pub statistic: f64,
    pub dof: Option<u64>,
    pub p_value: Option<f64>,
    pub acceptance: Acceptance,
    pub verdict: bool,
}

impl StatTest {
    pub fn new(kind: TestKind, statistic: f64, dof: Option<u64>, p_value: Option<f64>, acceptance: Acceptance) -> Self {
        let verdict = decide(statistic, p_value, acceptance);
        Self {
            kind,
            statistic,
            dof,
            p_value,
            acceptance,
            verdict,
        }
    }
}

pub fn decide(statistic: f64, p_value: Option<f64>, acceptance: Acceptance) -> bool {
    match acceptance {
        Acceptance::PValueAbove { threshold } => p_value.is_some_and(|p| p > threshold),
        Acceptance::AtMost { threshold } => statistic <= threshold,
        Acceptance::RelativeTo { target, tolerance } => (statistic / target - 1.0).abs() <= tolerance,
    }
}

fn chi_square_sf(statistic: f64, dof: u64) -> Result<f64> {
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::StatTest(e.to_string()))?;
    Ok(dist.sf(statistic))
}

/// Merge adjacent bins left to right until each merged bin has
/// `weight >= min`; a light remainder joins the last bin. Returns bin groups.
fn pool_bins(weights: &[f64], min: f64) -> Vec<std::ops::Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if acc >= min {
            groups.push(start..i + 1);
            start = i + 1;
            acc = 0.0;
        }
    }
    if start < weights.len() {
        match groups.last_mut() {
            Some(last) => last.end = weights.len(),
            None => groups.push(start..weights.len()),
        }
    }
    groups
}

/// Pearson chi-square of observed counts against a pmf over the same bins.
///
/// The bins must partition the sample space: `probs` sums to 1. Bins are
/// pooled in order until each expected count is at least [`MIN_EXPECTED`].
pub fn chi_square_gof(observed: &[u64], probs: &[f64], acceptance: Acceptance) -> Result<StatTest> {
    if observed.len() != probs.len() {
        return Err(Error::StatTest(format!(
            "{} observed bins vs {} probabilities",
            observed.len(),
            probs.len()
        )));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::StatTest("empty sample".into()));
    }
    let mass: f64 = probs.iter().sum();
    if (mass - 1.0).abs() > 1e-9 || probs.iter().any(|&p| p < 0.0) {
        return Err(Error::StatTest(format!("bin probabilities sum to {mass}")));
    }
    let n = total as f64;
    let expected: Vec<f64> = probs.iter().map(|p| p * n).collect();
    let groups = pool_bins(&expected, MIN_EXPECTED);
    if groups.len() < 2 {
        return Err(Error::StatTest("fewer than two bins after pooling".into()));
    }
    let mut stat = 0.0;
    for g in &groups {
        let o: u64 = observed[g.clone()].iter().sum();
        let e: f64 = expected[g.clone()].iter().sum();
        if e <= 0.0 {
            return Err(Error::StatTest("bin with zero expected count".into()));
        }
        stat += (o as f64 - e).powi(2) / e;
    }
    let dof = groups.len() as u64 - 1;
    let p = chi_square_sf(stat, dof)?;
    Ok(StatTest::new(TestKind::ChiSquare, stat, Some(dof), Some(p), acceptance))
}

/// Two-sample chi-square homogeneity test on aligned bin counts.
pub fn two_sample_chi_square(a: &[u64], b: &[u64], acceptance: Acceptance) -> Result<StatTest> {
    if a.len() != b.len() {
        return Err(Error::StatTest("samples binned differently".into()));
    }
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    if na == 0 || nb == 0 {
        return Err(Error::StatTest("empty sample".into()));
    }
    let combined: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x + y) as f64).collect();
    let groups = pool_bins(&combined, 2.0 * MIN_EXPECTED);
    if groups.len() < 2 {
        return Err(Error::StatTest("fewer than two bins after pooling".into()));
    }
    let ra = (nb as f64 / na as f64).sqrt();
    let rb = (na as f64 / nb as f64).sqrt();
    let mut stat = 0.0;
    for g in &groups {
        let x: u64 = a[g.clone()].iter().sum();
        let y: u64 = b[g.clone()].iter().sum();
        stat += (x as f64 * ra - y as f64 * rb).powi(2) / (x + y) as f64;
    }
    let dof = groups.len() as u64 - 1;
    let p = chi_square_sf(stat, dof)?;
    Ok(StatTest::new(TestKind::TwoSampleChiSquare, stat, Some(dof), Some(p), acceptance))
}

/// Empirical CDF of a finite sample.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::StatTest("empty sample".into()));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::StatTest("NaN in sample".into()));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.sorted.len() as f64
    }

    /// `(value, F(value-), F(value))` at each distinct sample value.
    pub fn jumps(&self) -> Vec<(f64, f64, f64)> {
        let n = self.sorted.len() as f64;
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.sorted.len() {
            let v = self.sorted[i];
            let mut j = i;
            while j < self.sorted.len() && self.sorted[j] == v {
                j += 1;
            }
            out.push((v, i as f64 / n, j as f64 / n));
            i = j;
        }
        out
    }

    /// `sup_x |F_n(x) - F(x)|` against a continuous CDF; ties handled by
    /// checking both sides of every jump.
    pub fn ks_distance(&self, cdf: impl Fn(f64) -> Result<f64>) -> Result<f64> {
        let mut d = 0.0f64;
        for (v, before, after) in self.jumps() {
            let f = cdf(v)?;
            d = d.max((before - f).abs()).max((after - f).abs());
        }
        Ok(d)
    }
}

pub fn ks_test(ecdf: &EmpiricalCdf, cdf: impl Fn(f64) -> Result<f64>, threshold: f64) -> Result<StatTest> {
    let d = ecdf.ks_distance(cdf)?;
    Ok(StatTest::new(TestKind::Ks, d, None, None, Acceptance::AtMost { threshold }))
}

/// Least-squares line through `(x, y)`: returns `(slope, intercept)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::StatTest("slope fit needs at least two paired points".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::StatTest("slope fit with constant abscissa".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

pub fn slope_test(xs: &[f64], ys: &[f64], target: f64, tolerance: f64) -> Result<StatTest> {
    let (slope, _) = least_squares(xs, ys)?;
    Ok(StatTest::new(
        TestKind::SlopeFit,
        slope,
        None,
        None,
        Acceptance::RelativeTo { target, tolerance },
    ))
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Quantile by the lower order statistic: the smallest sample `x` with
/// `F_n(x) >= q`.
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let idx = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1;
    v[idx]
}

/// Median as the mean of the two middle order statistics.
pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn pooling_keeps_every_bin() {
        let g = pool_bins(&[1.0, 6.0, 2.0, 2.0, 2.0, 0.5], 5.0);
        assert_eq!(g, vec![0..2, 2..6]);
        let g = pool_bins(&[1.0, 1.0], 5.0);
        assert_eq!(g, vec![0..2]);
    }

    #[test]
    fn two_sample_identical_is_zero() {
        let a = [10, 20, 30, 40];
        let t = two_sample_chi_square(&a, &a, Acceptance::PValueAbove { threshold: 0.001 }).unwrap();
        assert_eq!(t.statistic, 0.0);
        assert!(t.verdict);
    }

    #[test]
    fn errors_on_empty_or_mismatched_input() {
        let acc = Acceptance::PValueAbove { threshold: 0.01 };
        assert!(chi_square_gof(&[0, 0], &[0.5, 0.5], acc).is_err());
        assert!(chi_square_gof(&[1, 2], &[0.5], acc).is_err());
        assert!(chi_square_gof(&[1, 2], &[0.5, 0.4], acc).is_err());
        assert!(chi_square_gof(&[1, 2], &[0.5, 0.5], acc).is_err());
        assert!(two_sample_chi_square(&[0], &[1], acc).is_err());
        assert!(EmpiricalCdf::new(vec![]).is_err());
        assert!(least_squares(&[1.0, 1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn gof_p_values_are_calibrated() {
        // fair die, 600 rolls, 200 repetitions
        let probs = [1.0 / 6.0; 6];
        let mut rejections = 0;
        for rep in 0..200 {
            let mut rng = RngStream::new(7, rep);
            let mut counts = [0u64; 6];
            for _ in 0..600 {
                counts[rng.below(6) as usize] += 1;
            }
            let t = chi_square_gof(&counts, &probs, Acceptance::PValueAbove { threshold: 0.05 }).unwrap();
            if !t.verdict {
                rejections += 1;
            }
        }
        let frac = rejections as f64 / 200.0;
        assert!((0.01..=0.12).contains(&frac), "{frac}");
    }

    #[test]
    fn ks_with_ties_and_steps() {
        let e = EmpiricalCdf::new(vec![1.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(e.eval(0.5), 0.0);
        assert_eq!(e.eval(1.0), 0.5);
        assert_eq!(e.eval(3.0), 1.0);
        assert_eq!(e.jumps()[0], (1.0, 0.0, 0.5));
        let d = e.ks_distance(|x| Ok((x / 4.0).clamp(0.0, 1.0))).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ks_of_normal_sample() {
        let mut rng = RngStream::new(11, 0);
        let xs: Vec<f64> = (0..100_000)
            .map(|_| {
                // Box-Muller
                let u1 = 1.0 - rng.uniform();
                let u2 = rng.uniform();
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        let e = EmpiricalCdf::new(xs).unwrap();
        let t = ks_test(&e, |x| Ok(crate::exact::normal_cdf(x)), 0.01).unwrap();
        assert!(t.verdict, "{}", t.statistic);
    }

    #[test]
    fn slope_and_summaries() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [3.0, 5.0, 7.0, 9.0];
        assert_eq!(least_squares(&xs, &ys).unwrap(), (2.0, 1.0));
        assert!(slope_test(&xs, &ys, 2.1, 0.05).unwrap().verdict);
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0], 0.5), 2.0);
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0], 1.0), 4.0);
        assert_eq!(mean(&xs), 2.5);
    }
}
