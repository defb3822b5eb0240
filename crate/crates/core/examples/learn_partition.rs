//! Learning a partition from sampled coalition values and measuring how often
//! fresh samples block it.

use noisy_hedonic::pac::{empirical_blocking_rate, learn_partition, Backend, Sample};
use noisy_hedonic::{fixtures, Coalition, SamplingSpec};

fn main() -> noisy_hedonic::Result<()> {
    let noisy = fixtures::motivating_noisy();
    let free = fixtures::motivating_noise_free();

    let sample = Sample::draw(&noisy, &SamplingSpec::uniform(3, 1)?, 200)?;
    for backend in [Backend::Exact, Backend::TopCover] {
        println!("{backend:?}: {}", learn_partition(&sample, 3, backend)?);
    }

    let learned = learn_partition(&sample, 3, Backend::Exact)?;
    let c = |m: &[usize]| Coalition::from_members(m.iter().copied());
    let eval = SamplingSpec::list(vec![c(&[0])?, c(&[1])?, c(&[2])?, c(&[0, 1])?], 2)?;
    println!("blocking rate in the observed game:   {:.4}", empirical_blocking_rate(&learned, &eval, &noisy, 10_000)?);
    println!("blocking rate in the noise-free game: {:.4}", empirical_blocking_rate(&learned, &eval, &free, 10_000)?);

    let paired = fixtures::paired_top_responsive();
    let sample = Sample::draw(&paired, &SamplingSpec::uniform(4, 3)?, 400)?;
    println!("paired game, top cover: {}", learn_partition(&sample, 4, Backend::TopCover)?);
    Ok(())
}
