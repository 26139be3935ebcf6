//! Simulate one walker on Z^2 and one on the comb, printing dyadic checkpoints.

use combwalk::rng::RngStream;
use combwalk::walk::{simulate_comb_direct, simulate_zd, Checkpoints};

fn main() -> combwalk::Result<()> {
    let n = 1 << 16;
    let mut rng = RngStream::new(7, 0);
    let plane = simulate_zd(2, n, &mut rng, &Checkpoints::dyadic())?;
    let comb = simulate_comb_direct(n, &mut RngStream::new(7, 1), &Checkpoints::dyadic());
    println!("{:>8}  {:>14}  {:>14}", "n", "Z^2", "comb");
    for ((t, p), (_, v)) in plane.checkpoints.iter().zip(&comb.checkpoints) {
        println!("{t:>8}  {:>14}  {:>14}", format!("{:?}", p.coords()), format!("({}, {})", v.x, v.y));
    }
    println!(
        "comb: {} horizontal and {} vertical steps, {} backbone returns",
        comb.horizontal_steps, comb.vertical_steps, comb.local_time_zero
    );
    Ok(())
}
