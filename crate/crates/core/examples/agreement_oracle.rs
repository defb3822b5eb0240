//! Closed-form agreement probabilities against exhaustive enumeration, in
//! exact rational arithmetic.

use noisy_hedonic::agreement::{
    build_context, closed_form_provably_exact, f_t_closed, f_t_oracle, index_sets,
};
use noisy_hedonic::scalar::{ratio, Rational};
use noisy_hedonic::{fixtures, Coalition, HedonicGame, NoiseSpec, Partition};

fn main() -> noisy_hedonic::Result<()> {
    let game: HedonicGame<Rational> = fixtures::paired_top_responsive().to_exact();
    let pi = Partition::new(4, [Coalition::from_members([0, 1])?, Coalition::from_members([2, 3])?])?;
    let t = Coalition::from_members([0, 2])?;
    let ctx = build_context(&game, &pi, t)?;

    for spec in [
        NoiseSpec::two_point(ratio(3, 2), ratio(1, 4))?,
        NoiseSpec::new(vec![ratio(1, 1), ratio(3, 2), ratio(2, 1)], vec![ratio(1, 3); 3])?,
        NoiseSpec::new(vec![ratio(1, 1), ratio(3, 1), ratio(4, 1)], vec![ratio(1, 3); 3])?,
    ] {
        let closed = f_t_closed(&spec, &ctx);
        let oracle = f_t_oracle(&game, &pi, t, &spec)?;
        let (exact, _) = closed_form_provably_exact(&spec, &ctx);
        println!("support {:?}", spec.support().iter().map(ToString::to_string).collect::<Vec<_>>());
        for pair in index_sets(&spec, &ctx) {
            println!("  pair ({}, {}): |I| = {}, |J| = {}", pair.r, pair.s, pair.i_size, pair.j_size);
        }
        println!("  closed {closed}  oracle {oracle}  guaranteed equal: {exact}");
    }
    Ok(())
}
