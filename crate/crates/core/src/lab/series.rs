//! Convergence of `Σ_n a(2^n)^p` for the lower-class test functions.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum Family {
    /// `a(t) = t^{-alpha}`
    Power { alpha: f64 },
    /// `a(t) = (log2 t)^{-beta}`
    LogPower { beta: f64 },
    /// Any other test function; classified as inconclusive.
    Other { label: String },
}

impl Family {
    /// `a(t)` for `t >= 2`.
    pub fn eval(&self, t: f64) -> Option<f64> {
        match self {
            Family::Power { alpha } => Some(t.powf(-alpha)),
            Family::LogPower { beta } => Some(t.log2().powf(-beta)),
            Family::Other { .. } => None,
        }
    }

    /// Checks on a grid over `[2, 2^60]` that `a` is nonnegative and nonincreasing.
    pub fn validate(&self) -> Result<()> {
        if let Family::Other { .. } = self {
            return Ok(());
        }
        let mut prev = f64::INFINITY;
        for i in 0..=600 {
            let t = 2f64.powf(1.0 + i as f64 * 0.1);
            let a = self.eval(t).expect("analytic family");
            if !(a >= 0.0) || a > prev * (1.0 + 1e-12) {
                return Err(domain(format!("{self:?} is not nonincreasing and nonnegative near t = {t:e}")));
            }
            prev = a;
        }
        Ok(())
    }
}

/// The series `Σ_n a(2^n)^exponent` whose convergence decides lower-class membership.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesCriterion {
    pub family: Family,
    pub exponent: i64,
}

impl SeriesCriterion {
    /// K walkers on Z^d: exponent `Kd - d - 2`.
    pub fn zd(family: Family, k: i64, d: i64) -> Self {
        Self {
            family,
            exponent: k * d - d - 2,
        }
    }

    /// K walkers on the comb: exponent `K - 2`.
    pub fn comb(family: Family, k: i64) -> Self {
        Self { family, exponent: k - 2 }
    }

    /// One walker on Z^d: exponent `d - 2`.
    pub fn single(family: Family, d: i64) -> Self {
        Self { family, exponent: d - 2 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesVerdict {
    Convergent,
    Divergent,
    Inconclusive,
}

/// Closed-form classification: the power family gives a geometric series with
/// ratio `2^{-alpha p}`, the log-power family a p-series `Σ n^{-beta p}`.
pub fn series_classify(c: &SeriesCriterion) -> Result<SeriesVerdict> {
    if c.exponent <= 0 {
        return Err(Error::DegenerateCriterion(c.exponent));
    }
    c.family.validate()?;
    let p = c.exponent as f64;
    Ok(match &c.family {
        Family::Power { alpha } if alpha * p > 0.0 => SeriesVerdict::Convergent,
        Family::Power { .. } => SeriesVerdict::Divergent,
        Family::LogPower { beta } if beta * p > 1.0 => SeriesVerdict::Convergent,
        Family::LogPower { .. } => SeriesVerdict::Divergent,
        Family::Other { .. } => SeriesVerdict::Inconclusive,
    })
}

/// `Σ_{n=1}^{terms} a(2^n)^exponent`, for illustration next to the verdict.
pub fn partial_sum(c: &SeriesCriterion, terms: u32) -> Option<f64> {
    (1..=terms)
        .map(|n| c.family.eval(2f64.powi(n as i32)).map(|a| a.powi(c.exponent as i32)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples() {
        let c = SeriesCriterion::zd(Family::LogPower { beta: 1.0 }, 2, 3);
        assert_eq!(c.exponent, 1);
        assert_eq!(series_classify(&c).unwrap(), SeriesVerdict::Divergent);
        let c = SeriesCriterion::zd(Family::LogPower { beta: 2.0 }, 2, 3);
        assert_eq!(series_classify(&c).unwrap(), SeriesVerdict::Convergent);
        let c = SeriesCriterion::zd(Family::Power { alpha: 0.1 }, 4, 1);
        assert_eq!(c.exponent, 1);
        assert_eq!(series_classify(&c).unwrap(), SeriesVerdict::Convergent);
    }

    #[test]
    fn degenerate_and_invalid() {
        let c = SeriesCriterion::zd(Family::Power { alpha: 0.5 }, 2, 1);
        assert!(matches!(series_classify(&c), Err(Error::DegenerateCriterion(-1))));
        let c = SeriesCriterion::comb(Family::Power { alpha: 0.5 }, 2);
        assert!(matches!(series_classify(&c), Err(Error::DegenerateCriterion(0))));
        let c = SeriesCriterion::comb(Family::Power { alpha: -0.5 }, 4);
        assert!(series_classify(&c).is_err());
        let c = SeriesCriterion::comb(Family::Other { label: "custom".into() }, 4);
        assert_eq!(series_classify(&c).unwrap(), SeriesVerdict::Inconclusive);
    }

    #[test]
    fn partial_sums_track_the_verdict() {
        let div = SeriesCriterion::single(Family::LogPower { beta: 1.0 }, 3);
        let conv = SeriesCriterion::single(Family::LogPower { beta: 2.0 }, 3);
        let h = partial_sum(&div, 1000).unwrap();
        assert!((h - (1000f64.ln() + 0.5772)).abs() < 1e-3);
        assert!(partial_sum(&conv, 1000).unwrap() < std::f64::consts::PI.powi(2) / 6.0);
    }
}
