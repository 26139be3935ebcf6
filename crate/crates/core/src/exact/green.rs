//! Green function of the comb walk and the generating function of backbone returns.

use serde::Serialize;

use crate::error::{domain, Result};

/// `G(z)`, `F1(z)`, `F2(z)` and the backbone-return generating function `H(z)` at one `z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GenFnPoint {
    pub z: f64,
    pub g: f64,
    pub f1: f64,
    pub f2: f64,
    pub h: f64,
}

impl GenFnPoint {
    /// Evaluated in rearranged forms that avoid the `0/0` at `z = 0` and the
    /// cancellation in the numerator of `F1` for small `z`.
    pub fn at(z: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&z) {
            return Err(domain(format!("generating functions need 0 <= z < 1, got {z}")));
        }
        let w = (1.0 - z * z).sqrt();
        let g = std::f64::consts::SQRT_2 / (w * w + w).sqrt();
        let f1 = z / ((1.0 + w).sqrt() * ((1.0 + w).sqrt() + (2.0 * w).sqrt()));
        let f2 = z / (1.0 + w);
        let h = g * (1.0 + f1) / (1.0 - f1);
        Ok(Self { z, g, f1, f2, h })
    }

    /// `H(z) √(1-z)`, which tends to `√2` as `z → 1`.
    pub fn h_scaled(&self) -> f64 {
        self.h * (1.0 - self.z).sqrt()
    }
}

/// `Σ_n p((0,0), (k,l), n) z^n`.
pub fn green_function_eval(k: i64, l: i64, z: f64) -> Result<f64> {
    let p = GenFnPoint::at(z)?;
    let horizontal = p.f1.powi(k.unsigned_abs() as i32);
    Ok(if l == 0 {
        p.g * horizontal
    } else {
        0.5 * p.g * horizontal * p.f2.powi(l.unsigned_abs() as i32)
    })
}

/// `H(z) = Σ_n P(C2(n) = 0) z^n`.
pub fn backbone_generating_fn(z: f64) -> Result<f64> {
    Ok(GenFnPoint::at(z)?.h)
}

#[cfg(test)]
mod tests {
    use super::*;

    // the forms as usually displayed, valid for 0 < z < 1
    fn displayed(z: f64) -> (f64, f64, f64) {
        let w = (1.0 - z * z).sqrt();
        let g = std::f64::consts::SQRT_2 / (w * w + w).sqrt();
        let f1 = (1.0 + w - std::f64::consts::SQRT_2 * (w * w + w).sqrt()) / z;
        let f2 = (1.0 - w) / z;
        (g, f1, f2)
    }

    #[test]
    fn rearranged_forms_agree_with_displayed() {
        for i in 1..100 {
            let z = i as f64 / 100.0;
            let p = GenFnPoint::at(z).unwrap();
            let (g, f1, f2) = displayed(z);
            assert!((p.g - g).abs() < 1e-12 * g);
            assert!((p.f1 - f1).abs() < 1e-9, "z {z}");
            assert!((p.f2 - f2).abs() < 1e-12);
        }
    }

    #[test]
    fn values_and_ranges() {
        let p = GenFnPoint::at(0.0).unwrap();
        assert_eq!((p.g, p.f1, p.f2, p.h), (1.0, 0.0, 0.0, 1.0));
        assert_eq!(green_function_eval(0, 0, 0.0).unwrap(), 1.0);
        assert!((GenFnPoint::at(0.6).unwrap().f2 - 1.0 / 3.0).abs() < 1e-15);
        assert!(GenFnPoint::at(1.0).is_err());
        assert!(GenFnPoint::at(-0.1).is_err());
        for i in 1..1000 {
            let p = GenFnPoint::at(i as f64 / 1000.0).unwrap();
            assert!((0.0..1.0).contains(&p.f1) && (0.0..1.0).contains(&p.f2));
        }
    }

    #[test]
    fn h_scaled_approaches_sqrt_two_monotonically() {
        let vals: Vec<f64> = (1..=12)
            .map(|j| GenFnPoint::at(1.0 - 2f64.powi(-j)).unwrap().h_scaled())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]), "{vals:?}");
        let last = *vals.last().unwrap();
        assert!((last / std::f64::consts::SQRT_2 - 1.0).abs() < 0.05, "{last}");
    }
}
