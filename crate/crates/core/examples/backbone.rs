//! Backbone returns: DP probabilities, the asymptote and the generating function.

use combwalk::exact::{backbone_return_asymptote, backbone_return_series, GenFnPoint};
use combwalk::lab::{backbone_coincidence_experiment, CombPairRun};

fn main() -> combwalk::Result<()> {
    let series = backbone_return_series(4096)?;
    for n in [64usize, 256, 1024, 4096] {
        println!("P(C2({n}) = 0) = {:.6}, asymptote {:.6}", series[n], backbone_return_asymptote(n as u64));
    }
    for j in [4, 8, 12] {
        let z = 1.0 - 2f64.powi(-j);
        println!("H(z)√(1-z) at z = 1 - 2^-{j}: {:.5}", GenFnPoint::at(z)?.h_scaled());
    }
    let run = backbone_coincidence_experiment(100_000, 200, 9)?;
    println!(
        "two walkers on the backbone together: mean {:.3} times by 10^5, (2/π) ln n = {:.3}",
        run.mean_coincidences(100_000).expect("checkpoint"),
        CombPairRun::coincidence_target(100_000)
    );
    Ok(())
}
