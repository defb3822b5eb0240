//! Under three-point noise the prediction probability of game 1 is no longer
//! convex: its Hessian is indefinite near the origin.

use noisy_hedonic::regimes::{grid_minimum_2d, hessian_2d, superlevel_region_2d};
use noisy_hedonic::scalar::ratio;
use noisy_hedonic::two_agent::{enumerate_cases, g, ThreeSupportSpec, TwoAgentGame};

fn main() -> noisy_hedonic::Result<()> {
    let game = TwoAgentGame::new(ratio(2, 1), ratio(1, 1), ratio(4, 1), ratio(3, 1))?;
    let spec = ThreeSupportSpec::new(ratio(4, 1), ratio(1, 4), ratio(3, 10), ratio(1, 5))?;
    let table = enumerate_cases(&game, &spec.to_noise_spec()?)?;
    println!("agreeing cases {:?}", table.agreeing_cases());
    println!("enumeration {}  g {}", table.agreement(), g(&spec.p1, &spec.p2));

    for (p1, p2) in [(0.01, 0.01), (0.3, 0.5), (0.425, 0.265)] {
        let h = hessian_2d(|a, b| g(&a, &b), p1, p2, 1e-4)?;
        println!("Hessian at ({p1}, {p2}): {h:?} det {:.4} indefinite {}", h.det(), h.is_indefinite());
    }
    let m = grid_minimum_2d(|a, b| g(&a, &b), 400);
    println!("minimum {:.4} at ({:.3}, {:.3})", m.value, m.p1, m.p2);
    let region = superlevel_region_2d(|a, b| g(&a, &b), 0.9, 100);
    println!("g >= 0.9 on {} of {} cells", region.count_inside(), region.simplex_cells());
    Ok(())
}
