//! First-passage law of the simple walk: exact pmf, partial sums and the limit.

use combwalk::exact::{hitting_limit_cdf, hitting_partial_sum, hitting_pmf, hitting_pmf_exact};
use combwalk::lab::hitting_time_gof;

fn main() -> combwalk::Result<()> {
    for n in [3u64, 5, 7, 9] {
        println!("P(β(3) = {n}) = {} ≈ {:.6}", hitting_pmf_exact(3, n)?, hitting_pmf(3, n)?);
    }
    let r = 100u64;
    for u in [0.5, 1.0, 2.0] {
        let bound = (u * (r * r) as f64) as u64;
        println!("u = {u}: P(β({r}) < u r²) = {:.5}, limit {:.5}", hitting_partial_sum(r, bound)?, hitting_limit_cdf(u)?);
    }
    let gof = hitting_time_gof(5, 1024, 100_000, 3, 0.001)?;
    println!("chi-square of simulated β(5): p = {:.4}, censored {}", gof.test.p_value.unwrap_or(0.0), gof.censored);
    Ok(())
}
