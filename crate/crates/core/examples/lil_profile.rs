//! Running maxima of normalized distances, printed per dyadic checkpoint.

use combwalk::lab::{lil_profiles, Graph, LilSpec, Statistic};

fn main() -> combwalk::Result<()> {
    let spec = LilSpec { graph: Graph::Comb, k: 2, n_max: 1 << 18, replicates: 32, seed: 1, burn_in: 16 };
    let stats = [Statistic::MaxDistance, Statistic::Vertical, Statistic::Horizontal];
    for p in lil_profiles(&spec, &stats)? {
        println!("{} / {} (target {:.4})", p.statistic.label(), p.normalizer, p.target_constant);
        for (c, t) in p.checkpoints.iter().enumerate().filter(|(_, t)| t.trailing_zeros() % 4 == 0) {
            println!("  n = {t:>7}: max {:.3}, median {:.3}", p.ensemble_max[c], p.ensemble_median[c]);
        }
    }
    Ok(())
}
