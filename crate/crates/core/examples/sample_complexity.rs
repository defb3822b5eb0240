//! How many noisy samples a PAC learner needs, and how that compares with
//! the noise-free requirement.

use noisy_hedonic::agreement::prediction_epsilon;
use noisy_hedonic::pac::{
    epsilon_after_more_samples, sample_bounds, sample_complexity_top_responsive, PacParams,
};

fn main() -> noisy_hedonic::Result<()> {
    let params = PacParams::new(0.1, 0.05, 0.9, 3)?;
    let m_tilde = sample_complexity_top_responsive(params.n, params.eps_tilde, params.delta);
    let m = sample_complexity_top_responsive(params.n, params.eps(), params.delta);
    let (lo, hi) = sample_bounds(m, &params);
    println!("noisy samples for eps~ = 0.1: {m_tilde}");
    println!("noise-free samples for eps = {:.3}: {m}", params.eps());
    println!("bounds: {lo:.1} <= {m_tilde} <= {hi:.1}");

    for n in [3, 5, 8, 12] {
        println!("n = {n:>2}: {} samples", sample_complexity_top_responsive(n, 0.1, 0.05));
    }
    for extra in [0.0, 0.02, 0.05] {
        println!(
            "eps~ lowered by {extra}: eps {:.4} (was {:.4})",
            epsilon_after_more_samples(0.1, extra, 0.9),
            prediction_epsilon(0.1, 0.9)
        );
    }
    Ok(())
}
