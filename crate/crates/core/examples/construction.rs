//! The comb walk built from geometric runs and a simple walk, checked against direct simulation.

use combwalk::lab::construction_equivalence;
use combwalk::rng::RngStream;
use combwalk::walk::{simulate_comb_constructed, Checkpoints};

fn main() -> combwalk::Result<()> {
    let path = simulate_comb_constructed(1000, &RngStream::new(4, 0), &Checkpoints::dyadic());
    println!(
        "constructed walk: end {:?}, H = {}, V = {}, first runs {:?}",
        path.trajectory.final_state(),
        path.trajectory.horizontal_steps,
        path.trajectory.vertical_steps,
        &path.clock.run_lengths[..path.clock.run_lengths.len().min(8)]
    );
    let check = construction_equivalence(64, 50_000, 4, 0.001)?;
    println!("C(64) direct vs constructed: p = {:.4}", check.test.p_value.unwrap_or(0.0));
    Ok(())
}
