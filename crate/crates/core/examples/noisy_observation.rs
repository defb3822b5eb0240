//! Drawing one noise factor per coalition, observing the game through it and
//! undoing it again; additive noise goes through the exponential map.

use noisy_hedonic::noise::{additive_to_multiplicative, apply_noise, draw_noise, remove_noise};
use noisy_hedonic::{find_core_partition, fixtures, Coalition, Coverage, NoiseSpec};

fn main() -> noisy_hedonic::Result<()> {
    let free = fixtures::motivating_noise_free();
    let spec = NoiseSpec::new(vec![0.5, 1.0, 2.0], vec![0.25, 0.5, 0.25])?;
    for seed in 0..4 {
        let alphas = draw_noise(&spec, Coalition::all_nonempty(3), seed);
        let observed = apply_noise(&free, &alphas)?;
        assert_eq!(remove_noise(&observed, &alphas)?, free);
        let core = find_core_partition(&observed)?.map_or("empty".to_string(), |p| p.to_string());
        println!("seed {seed}: observed core {core}");
    }

    let additive = additive_to_multiplicative(
        2,
        Coverage::Full,
        [
            (0, Coalition::from_members([0])?, 0.0),
            (1, Coalition::from_members([1])?, 0.0),
            (0, Coalition::from_members([0, 1])?, 0.7),
            (1, Coalition::from_members([0, 1])?, -0.2),
        ],
    )?;
    println!("exp-transformed game core: {:?}", find_core_partition(&additive)?);
    Ok(())
}
