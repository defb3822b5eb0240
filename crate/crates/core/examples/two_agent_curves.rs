//! Prediction probability of each two-agent game under `{1, α}` noise, with
//! the eight-case enumeration behind one point.

use noisy_hedonic::scalar::ratio;
use noisy_hedonic::two_agent::{branches, enumerate_cases, TwoAgentGame};
use noisy_hedonic::NoiseSpec;

fn main() -> noisy_hedonic::Result<()> {
    for id in 1..=4 {
        for (name, curve) in branches(id)? {
            let row: Vec<String> = (0..=4).map(|k| format!("{:.4}", curve.eval(&(k as f64 / 4.0)))).collect();
            println!("game {id} {name:<22} p = 0, .25, .5, .75, 1: {}", row.join("  "));
        }
    }

    let game = TwoAgentGame::new(ratio(2, 1), ratio(1, 1), ratio(4, 1), ratio(3, 1))?;
    let table = enumerate_cases(&game, &NoiseSpec::two_point(ratio(4, 1), ratio(1, 2))?)?;
    println!("\ngame 1 with alpha = 4, p = 1/2 (observed core {}):", table.noisy_partition);
    for r in &table.rows {
        println!(
            "  case {}: alphas ({}, {}, {})  prob {}  core {}  agrees {}",
            r.case, r.alpha_1, r.alpha_2, r.alpha_12, r.probability, r.partition, r.agrees
        );
    }
    println!("  agreement {}", table.agreement());
    Ok(())
}
