//! First-passage law of the simple random walk on the line.

use num_rational::Ratio;
use statrs::function::factorial::ln_binomial;

use super::kernel::compensated_sum;
use super::quadrature::{adaptive_simpson, normal_pdf, normal_sf};
use crate::error::{domain, Error, Result};

/// Largest `N` for the exact rational pmf (`N * 2^N` must fit in `u128`).
pub const EXACT_HITTING_GUARD: u64 = 112;

/// First time `β(r)` at which a walk from 0 reaches level `r`, observed up to `horizon`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HittingSpec {
    level: u64,
    horizon: u64,
}

impl HittingSpec {
    pub fn new(level: u64, horizon: u64) -> Result<Self> {
        if level == 0 {
            return Err(domain("hitting level must be >= 1"));
        }
        Ok(Self { level, horizon })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// `P(β(r) <= horizon)`.
    pub fn cdf(&self) -> f64 {
        hitting_partial_sum(self.level, self.horizon + 1).expect("level checked")
    }
}

fn check_level(r: u64) -> Result<()> {
    if r == 0 {
        Err(domain("hitting level must be >= 1"))
    } else {
        Ok(())
    }
}

fn feasible(r: u64, n: u64) -> bool {
    n >= r && (n + r).is_multiple_of(2)
}

/// `P(β(r) = N) = (r/N) C(N, (N+r)/2) 2^-N`; zero off the support.
pub fn hitting_pmf(r: u64, n: u64) -> Result<f64> {
    check_level(r)?;
    if !feasible(r, n) {
        return Ok(0.0);
    }
    let nf = n as f64;
    let ln = ln_binomial(n, (n + r) / 2) - nf * std::f64::consts::LN_2;
    Ok(r as f64 / nf * ln.exp())
}

/// The same pmf as an exact rational, for `N <= EXACT_HITTING_GUARD`.
pub fn hitting_pmf_exact(r: u64, n: u64) -> Result<Ratio<u128>> {
    check_level(r)?;
    if n > EXACT_HITTING_GUARD {
        return Err(Error::BudgetExceeded {
            requested: n,
            limit: EXACT_HITTING_GUARD,
        });
    }
    if !feasible(r, n) {
        return Ok(Ratio::from_integer(0));
    }
    let k = (n + r) / 2;
    let binom = (0..k.min(n - k)).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1));
    Ok(Ratio::new(
        u128::from(r) * binom,
        u128::from(n) << n,
    ))
}

/// `Σ_{N < bound} P(β(r) = N)`.
pub fn hitting_partial_sum(r: u64, bound: u64) -> Result<f64> {
    check_level(r)?;
    let mut terms = Vec::new();
    let mut n = r;
    while n < bound {
        terms.push(hitting_pmf(r, n)?);
        n += 2;
    }
    Ok(compensated_sum(terms))
}

/// `lim_r P(β(r) < u r^2) = √(2/π) ∫_{1/√u}^∞ e^{-s²/2} ds`, by quadrature.
pub fn hitting_limit_cdf(u: f64) -> Result<f64> {
    if !(u > 0.0) || u.is_nan() {
        return Err(domain(format!("u must be > 0, got {u}")));
    }
    if u.is_infinite() {
        return Ok(1.0);
    }
    let a = 1.0 / u.sqrt();
    // 2 φ(s) over [a, a + 40]; the remainder is below e^-800
    let v = adaptive_simpson(|s| 2.0 * normal_pdf(s), a, a + 40.0, 1e-13, 50);
    Ok(v.clamp(0.0, 1.0))
}

/// Closed form of [`hitting_limit_cdf`]: `2 (1 - Φ(1/√u))`.
pub fn hitting_limit_cdf_closed(u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(domain(format!("u must be > 0, got {u}")));
    }
    Ok(2.0 * normal_sf(1.0 / u.sqrt()))
}
