//! Standard normal helpers, adaptive Simpson, and the limiting CDF of the
//! normalized maximal distance among K independent one-dimensional walkers.

use libm::erfc;

use crate::error::{domain, Result};

/// Integration window and tolerance for [`dk_limit_cdf_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// The window is `[-pad, z + pad]`.
    pub pad: f64,
    pub tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            pad: 10.0,
            tol: 1e-10,
            max_depth: 48,
        }
    }
}

impl QuadratureConfig {
    pub fn new(pad: f64, tol: f64, max_depth: u32) -> Result<Self> {
        if !(tol > 0.0) || !(pad > 0.0) {
            return Err(domain(format!("quadrature needs pad > 0 and tol > 0, got {pad}, {tol}")));
        }
        Ok(Self { pad, tol, max_depth })
    }
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// `1 - Φ(x)` without cancellation.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// `Φ(b) - Φ(a)` for `a <= b`, evaluated on whichever tail avoids cancellation.
pub fn normal_interval(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        normal_sf(a) - normal_sf(b)
    } else {
        normal_cdf(b) - normal_cdf(a)
    }
}

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// `lim P(D_K(n)/√n <= z)` for K walkers on the line:
/// `K ∫ (Φ(x) - Φ(x - z))^(K-1) φ(x) dx`.
pub fn dk_limit_cdf(z: f64, k: usize) -> Result<f64> {
    dk_limit_cdf_with(z, k, &QuadratureConfig::default())
}

pub fn dk_limit_cdf_with(z: f64, k: usize, cfg: &QuadratureConfig) -> Result<f64> {
    if k < 2 {
        return Err(domain(format!("need K >= 2 walkers, got {k}")));
    }
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain(format!("z must be finite and >= 0, got {z}")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let kf = k as f64;
    let integrand = |x: f64| kf * normal_interval(x - z, x).powi(k as i32 - 1) * normal_pdf(x);
    // the integrand peaks near z/2; splitting there keeps the first Simpson
    // estimate from missing it for narrow bands
    let mid = 0.5 * z;
    let v = adaptive_simpson(integrand, -cfg.pad, mid, 0.5 * cfg.tol, cfg.max_depth)
        + adaptive_simpson(integrand, mid, z + cfg.pad, 0.5 * cfg.tol, cfg.max_depth);
    Ok(v.clamp(0.0, 1.0))
}
