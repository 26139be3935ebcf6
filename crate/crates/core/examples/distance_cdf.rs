//! Maximal distance of K walkers on the line against its limiting CDF.

use combwalk::exact::dk_limit_cdf;
use combwalk::lab::distance_cdf_experiment;
use combwalk::stats::EmpiricalCdf;

fn main() -> combwalk::Result<()> {
    for k in [2usize, 3, 5] {
        let d = distance_cdf_experiment(1, k, 10_000, 20_000, 11)?;
        let ecdf = EmpiricalCdf::new(d.samples.clone())?;
        print!("K = {k}: KS = {:.4} |", d.ks_distance);
        for z in [1.0, 2.0, 3.0] {
            print!(" z={z}: {:.3} vs {:.3}", ecdf.eval(z), dk_limit_cdf(z, k)?);
        }
        println!();
    }
    Ok(())
}
