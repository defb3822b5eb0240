//! Three agents whose observed game and true game have different cores.

use noisy_hedonic::agreement::coalition_report;
use noisy_hedonic::game::{core_partitions, first_blocking_coalition};
use noisy_hedonic::{find_core_partition, fixtures, Coalition, NoiseSpec};

fn main() -> noisy_hedonic::Result<()> {
    let noisy = fixtures::motivating_noisy();
    let free = fixtures::motivating_noise_free();

    let predicted = find_core_partition(&noisy)?.expect("observed game has a core");
    println!("core of the observed game:   {predicted}");
    println!("core of the noise-free game: {:?}", core_partitions(&free)?);
    if let Some(t) = first_blocking_coalition(&free, &predicted)? {
        println!("{t} blocks {predicted} once the noise is removed");
    }

    // how likely is each coalition's verdict to survive {1, 2} noise at p = 1/2?
    let spec = NoiseSpec::two_point(2.0, 0.5)?;
    for t in Coalition::all_nonempty(3) {
        let r = coalition_report(&noisy, &predicted, t, &spec, 0.05, 0.9, 0.9)?;
        println!(
            "T = {t:<8} |R| = {}  f_T = {:.4}  h_T = {:.4}  mode = {:?}  verdict = {}",
            r.r_size, r.f_oracle, r.h_oracle, r.mode, r.verdict
        );
    }
    Ok(())
}
