//! Worst-case prediction probability over the noise probability.

use noisy_hedonic::regimes::{grid_minimum_2d, safety_value_1d, DEFAULT_RESOLUTION_1D, DEFAULT_RESOLUTION_2D};
use noisy_hedonic::two_agent::{branches, g};

fn main() -> noisy_hedonic::Result<()> {
    for id in 1..=4 {
        let (name, curve) = branches(id)?[0];
        let s = safety_value_1d(|p| curve.eval(&p), DEFAULT_RESOLUTION_1D);
        println!("game {id} ({name}): min {:.4} at p = {:.4}", s.value, s.p);
    }
    let m = grid_minimum_2d(|a, b| g(&a, &b), DEFAULT_RESOLUTION_2D);
    println!("three-point surface: {m:?}");
    Ok(())
}
