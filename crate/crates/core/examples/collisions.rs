//! Collisions on Z versus the comb.

use combwalk::lab::{collision_growth_experiment, Graph};

fn main() -> combwalk::Result<()> {
    let n = 200_000;
    for (graph, k) in [(Graph::Zd { d: 1 }, 3), (Graph::Comb, 2), (Graph::Comb, 3)] {
        let g = collision_growth_experiment(graph, k, n, 64, 5, &[])?;
        let last = *g.checkpoints.last().expect("checkpoints");
        println!(
            "{} K={k}: mean pairwise collisions {:.2}, median full collisions {}",
            graph.label(),
            g.mean_pairwise(last).expect("checkpoint"),
            g.median_full(last).expect("checkpoint")
        );
    }
    Ok(())
}
