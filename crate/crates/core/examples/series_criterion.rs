//! Lower-class test for the maximal distance: which test functions pass.

use combwalk::lab::series::partial_sum;
use combwalk::lab::{series_classify, Family, SeriesCriterion};

fn main() {
    let families = [Family::Power { alpha: 0.1 }, Family::LogPower { beta: 0.5 }, Family::LogPower { beta: 2.0 }];
    for family in families {
        for c in [
            SeriesCriterion::zd(family.clone(), 4, 1),
            SeriesCriterion::comb(family.clone(), 3),
            SeriesCriterion::comb(family.clone(), 5),
            SeriesCriterion::comb(family.clone(), 2),
        ] {
            match series_classify(&c) {
                Ok(v) => println!("{family:?} p={}: {v:?} (60 terms: {:.4})", c.exponent, partial_sum(&c, 60).unwrap_or(f64::NAN)),
                Err(e) => println!("{family:?} p={}: {e}", c.exponent),
            }
        }
    }
}
