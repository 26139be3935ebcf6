//! Reversibility, backbone returns and the vertical return profile, measured
//! on DP tables and set against their asymptotic predictions.

use serde::Serialize;
use statrs::function::gamma::gamma;

use super::kernel::{KernelSweep, OriginSweep};
use crate::error::{domain, Result};
use crate::lattice::CombVertex;
use crate::metrics::comb_graph_distance;

/// `|deg(u) p(u,v,n) - deg(v) p(v,u,n)|`; zero when `n + d(u,v)` is odd.
pub fn reversibility_defect(u: CombVertex, v: CombVertex, n: u64) -> Result<f64> {
    if (n + comb_graph_distance(u, v)) % 2 == 1 {
        return Ok(0.0);
    }
    let mut from_u = KernelSweep::new(u, n)?;
    let mut from_v = KernelSweep::new(v, n)?;
    from_u.advance_to(n)?;
    from_v.advance_to(n)?;
    Ok(weighted_gap(u, v, from_u.prob(v), from_v.prob(u)))
}

fn weighted_gap(u: CombVertex, v: CombVertex, p_uv: f64, p_vu: f64) -> f64 {
    (f64::from(u.degree()) * p_uv - f64::from(v.degree()) * p_vu).abs()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReversibilityScan {
    pub max_defect: f64,
    /// `(k, n)` of the largest defect.
    pub worst: (i64, u64),
    pub pairs_checked: u64,
}

/// Reversibility defect for `u = (0,0)`, `v = (0,k)`, all `1 <= k <= k_max`
/// and all `n <= n_max` of matching parity, from `k_max + 1` shared sweeps.
pub fn reversibility_scan(k_max: i64, n_max: u64) -> Result<ReversibilityScan> {
    let origin = CombVertex::ORIGIN;
    let mut from_origin = KernelSweep::new(origin, n_max)?;
    let mut from_tooth = (1..=k_max)
        .map(|k| KernelSweep::new(CombVertex::new(0, k), n_max))
        .collect::<Result<Vec<_>>>()?;
    let mut scan = ReversibilityScan {
        max_defect: 0.0,
        worst: (0, 0),
        pairs_checked: 0,
    };
    for n in 1..=n_max {
        from_origin.step()?;
        for (i, sweep) in from_tooth.iter_mut().enumerate() {
            sweep.step()?;
            let k = i as i64 + 1;
            if (n + k as u64) % 2 == 1 {
                continue;
            }
            let v = CombVertex::new(0, k);
            let d = weighted_gap(origin, v, from_origin.prob(v), sweep.prob(origin));
            scan.pairs_checked += 1;
            if d > scan.max_defect {
                scan.max_defect = d;
                scan.worst = (k, n);
            }
        }
    }
    Ok(scan)
}

/// `P(C2(n) = 0)` for the comb walk from the origin.
pub fn backbone_return_prob(n: u64) -> Result<f64> {
    let mut s = OriginSweep::new(n)?;
    s.advance_to(n)?;
    Ok(s.backbone_mass())
}

/// `P(C2(n) = 0)` for `n = 0..=n_max`, from one sweep.
pub fn backbone_return_series(n_max: u64) -> Result<Vec<f64>> {
    let mut s = OriginSweep::new(n_max)?;
    let mut out = vec![s.backbone_mass()];
    for _ in 0..n_max {
        s.step()?;
        out.push(s.backbone_mass());
    }
    Ok(out)
}

/// Leading asymptotic of [`backbone_return_prob`]: `√2 / √(π n)`.
pub fn backbone_return_asymptote(n: u64) -> f64 {
    (2.0 / (std::f64::consts::PI * n as f64)).sqrt()
}

/// `n^{3/4} p((0,0), (0,k), n)` for `0 <= k <= k_max`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerticalProfile {
    pub n: u64,
    pub k_max: u64,
    pub scaled: Vec<f64>,
    /// Largest entry of `scaled`: the measured constant.
    pub constant: f64,
    pub argmax: u64,
}

impl VerticalProfile {
    /// Entries of the parity class that can be nonzero, in increasing `k`.
    pub fn live_entries(&self) -> Vec<(u64, f64)> {
        (0..=self.k_max)
            .filter(|k| (k + self.n).is_multiple_of(2))
            .map(|k| (k, self.scaled[k as usize]))
            .collect()
    }
}

fn check_profile_range(n: u64, k_max: u64) -> Result<()> {
    if k_max as f64 > (n as f64).powf(0.45) {
        return Err(domain(format!(
            "k_max = {k_max} exceeds n^0.45 = {:.3}",
            (n as f64).powf(0.45)
        )));
    }
    Ok(())
}

pub fn vertical_profile_bound(n: u64, k_max: u64) -> Result<VerticalProfile> {
    check_profile_range(n, k_max)?;
    let mut s = OriginSweep::new(n)?;
    s.advance_to(n)?;
    vertical_profile_from(&s, k_max)
}

/// Profile read off a sweep already advanced to the wanted step.
pub fn vertical_profile_from(sweep: &OriginSweep, k_max: u64) -> Result<VerticalProfile> {
    let n = sweep.steps();
    check_profile_range(n, k_max)?;
    let scale = (n as f64).powf(0.75);
    let scaled: Vec<f64> = (0..=k_max)
        .map(|k| scale * sweep.prob(CombVertex::new(0, k as i64)))
        .collect();
    let (argmax, constant) = scaled
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |best, (k, &v)| if v > best.1 { (k, v) } else { best });
    Ok(VerticalProfile {
        n,
        k_max,
        scaled,
        constant,
        argmax: argmax as u64,
    })
}

/// `φ(κ) = (κ-1) ln(1-κ) - (κ+1) ln(1+κ)` on `0 <= κ < 1`.
pub fn phi(kappa: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&kappa) {
        return Err(domain(format!("κ must lie in [0, 1), got {kappa}")));
    }
    Ok((kappa - 1.0) * (-kappa).ln_1p() - (kappa + 1.0) * kappa.ln_1p())
}

/// Local-limit prediction for `p((0,2k), (0,0), 2n)`:
/// `√2 exp(n φ(k/n)) / (Γ(1/4) n^{3/4})`.
pub fn theorem_i_prediction(n: u64, k: u64) -> Result<f64> {
    if n == 0 {
        return Err(domain("prediction needs n >= 1"));
    }
    let nf = n as f64;
    let f = phi(k as f64 / nf)?;
    Ok(std::f64::consts::SQRT_2 * (nf * f).exp() / (gamma(0.25) * nf.powf(0.75)))
}

/// The prediction in single-step units: `steps` and vertical displacement `k`
/// must both be even, and map to `(steps/2, k/2)`.
pub fn return_prediction(steps: u64, k: u64) -> Result<f64> {
    if steps % 2 == 1 || k % 2 == 1 {
        return Err(domain(format!(
            "prediction is stated for even steps and displacement, got {steps}, {k}"
        )));
    }
    theorem_i_prediction(steps / 2, k / 2)
}

/// `p((0,k), (0,0), n)` obtained from the origin sweep through reversibility.
pub fn into_origin_prob(sweep: &OriginSweep, k: i64) -> f64 {
    let v = CombVertex::new(0, k);
    f64::from(CombVertex::ORIGIN.degree()) / f64::from(v.degree()) * sweep.prob(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_step_reversibility_by_hand() {
        let u = CombVertex::ORIGIN;
        let v = CombVertex::new(0, 2);
        assert_eq!(reversibility_defect(u, v, 2).unwrap(), 0.0);
        assert_eq!(reversibility_defect(u, u, 6).unwrap(), 0.0);
        assert_eq!(reversibility_defect(u, v, 3).unwrap(), 0.0);
        let mut a = KernelSweep::new(u, 2).unwrap();
        a.advance_to(2).unwrap();
        let mut b = KernelSweep::new(v, 2).unwrap();
        b.advance_to(2).unwrap();
        assert_eq!(a.prob(v), 1.0 / 8.0);
        assert_eq!(b.prob(u), 1.0 / 4.0);
    }

    #[test]
    fn small_scan_is_clean() {
        let s = reversibility_scan(6, 80).unwrap();
        assert!(s.max_defect < 1e-14, "{s:?}");
        assert!(s.pairs_checked > 200);
    }

    #[test]
    fn backbone_series_small_values() {
        let s = backbone_return_series(4).unwrap();
        assert_eq!(s[0], 1.0);
        assert_eq!(s[1], 0.5);
        // (0,0)->(0,±1)->(0,0): 1/4; (0,0)->(±1,0)->(0 or ±2,0): 1/2 * 1/2
        assert_eq!(s[2], 0.5);
        assert_eq!(backbone_return_prob(2).unwrap(), s[2]);
    }

    #[test]
    fn profile_range_guard() {
        assert!(vertical_profile_bound(256, 13).is_err());
        let p = vertical_profile_bound(256, 12).unwrap();
        assert_eq!(p.argmax, 0);
        assert_eq!(p.scaled.len(), 13);
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi(0.0).unwrap(), 0.0);
        assert!(phi(1.0).is_err());
        let grid: Vec<f64> = (1..=20).map(|i| phi(i as f64 / 100.0).unwrap()).collect();
        assert!(grid.windows(2).all(|w| w[1] < w[0]));
        assert!(theorem_i_prediction(10, 10).is_err());
        assert!(return_prediction(9, 2).is_err());
        assert!((gamma(0.25) - 3.625_609_908_221_908).abs() < 1e-12);
    }
}
