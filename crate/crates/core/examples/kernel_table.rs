//! Exact n-step transition probabilities of the comb walk.

use combwalk::exact::{comb_kernel_dp, exact_kernel, OriginSweep};
use combwalk::lattice::CombVertex;

fn main() -> combwalk::Result<()> {
    // rational table for a short horizon
    let exact = exact_kernel(CombVertex::ORIGIN, 4)?;
    for (v, num) in &exact.numerators {
        println!("p((0,0), ({}, {}), 4) = {num}/256", v.x, v.y);
    }
    let table = comb_kernel_dp(CombVertex::new(0, 3), 200)?;
    println!("from (0,3) after 200 steps: total mass {:.15}, back at start {:.6e}", table.total(), table.prob(CombVertex::new(0, 3)));

    let mut sweep = OriginSweep::new(4096)?;
    for n in [256, 1024, 4096] {
        sweep.advance_to(n)?;
        println!("n = {n:>4}: P(on backbone) = {:.6}, P(at origin) = {:.6e}", sweep.backbone_mass(), sweep.prob(CombVertex::ORIGIN));
    }
    Ok(())
}
