//! Monte Carlo checks of walker laws against exact values.

use combwalk::exact::backbone_return_prob;
use combwalk::lab::run_replicates;
use combwalk::lattice::CombVertex;
use combwalk::rng::{experiment_key, RngStream};
use combwalk::walk::{comb_step_direct, line_endpoint, line_step};

#[test]
fn line_endpoint_second_moment() {
    let n = 1_000_000u64;
    let reps = 100_000u64;
    let key = experiment_key("test/second_moment");
    let sq: Vec<f64> = run_replicates(reps, |r| {
        let s = line_endpoint(n, &mut RngStream::for_walker(1, key, 0, r)) as f64;
        s * s
    });
    let m = sq.iter().sum::<f64>() / reps as f64;
    // Var(S²) = 2n² - 2n, so the standard error of the mean is about √2 n / √reps
    let se = (2.0f64).sqrt() * n as f64 / (reps as f64).sqrt();
    assert!((m - n as f64).abs() < 4.0 * se, "E S² = {m}");
}

#[test]
fn backbone_frequency_matches_exact_kernel() {
    let n = 1024u64;
    let reps = 1_000_000u64;
    let key = experiment_key("test/backbone");
    let hits: Vec<bool> = run_replicates(reps, |r| {
        let mut rng = RngStream::for_walker(2, key, 0, r);
        let mut v = CombVertex::ORIGIN;
        for _ in 0..n {
            v = comb_step_direct(v, &mut rng);
        }
        v.y == 0
    });
    let f = hits.iter().filter(|&&h| h).count() as f64 / reps as f64;
    let p = backbone_return_prob(n).unwrap();
    let sigma = (p * (1.0 - p) / reps as f64).sqrt();
    assert!((f - p).abs() <= 3.0 * sigma, "frequency {f} vs {p}");
}

#[test]
fn mean_local_time_at_zero() {
    let n = 10_000u64;
    let reps = 20_000u64;
    let key = experiment_key("test/local_time");
    let visits: Vec<f64> = run_replicates(reps, |r| {
        let mut rng = RngStream::for_walker(3, key, 0, r);
        let (mut s, mut v) = (0i64, 0u64);
        for _ in 0..n {
            s += line_step(&mut rng);
            v += u64::from(s == 0);
        }
        v as f64
    });
    let m = visits.iter().sum::<f64>() / reps as f64;
    let target = (2.0 * n as f64 / std::f64::consts::PI).sqrt();
    assert!((m / target - 1.0).abs() < 0.05, "E ξ = {m}, √(2n/π) = {target}");
}
