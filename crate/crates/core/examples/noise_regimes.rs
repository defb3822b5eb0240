//! Noise probabilities for which predictions stay reliable at ζ = 0.9, for
//! the two-agent curves and for several coalitions of a larger game.

use noisy_hedonic::agreement::{build_context, f_t_two_support, index_sets};
use noisy_hedonic::regimes::{intersect_regions, superlevel_region_1d, DEFAULT_RESOLUTION_1D};
use noisy_hedonic::two_agent::{branches, regime_1d_two_agent};
use noisy_hedonic::{fixtures, Coalition, NoiseSpec, Partition};

fn main() -> noisy_hedonic::Result<()> {
    let zeta = 0.9;
    for id in 1..=4 {
        for (name, curve) in branches(id)? {
            let r = regime_1d_two_agent(*curve, zeta, DEFAULT_RESOLUTION_1D);
            println!("game {id} {name:<22} {:?}", r.intervals);
        }
    }

    let game = fixtures::paired_top_responsive();
    let pi = Partition::new(4, [Coalition::from_members([0, 1])?, Coalition::from_members([2, 3])?])?;
    let spec = NoiseSpec::two_point(2.0, 0.5)?;
    let mut regions = Vec::new();
    for members in [&[0, 2][..], &[0, 1, 2], &[0, 1, 2, 3]] {
        let t = Coalition::from_members(members.iter().copied())?;
        let ctx = build_context(&game, &pi, t)?;
        let (r, i) = (ctx.r_size(), index_sets(&spec, &ctx)[0].i_size);
        let region = superlevel_region_1d(|p| f_t_two_support(&p, r, i), zeta, DEFAULT_RESOLUTION_1D);
        println!("T = {t}: |R| = {r}, |I| = {i}, regime {:?}", region.intervals);
        regions.push(region);
    }
    println!("all three: {:?}", intersect_regions(&regions)?.intervals);
    Ok(())
}
