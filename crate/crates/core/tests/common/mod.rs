#![allow(dead_code)]

use noisy_hedonic::scalar::{ratio, Rational};
use noisy_hedonic::{Coalition, Coverage, HedonicGame, NoiseSpec, Partition};
use rand::Rng;

/// A game built around one coalition `T = {0, .., t-1}` whose members are
/// spread over `k` blocks; block `b` also holds the outsider `t + b`, so no
/// block equals `T`. Member `i` values its block at `ratios[i]` and `T` at 1.
pub struct Fixture {
    pub game: HedonicGame<Rational>,
    pub pi: Partition,
    pub t: Coalition,
    pub members_per_block: Vec<Vec<usize>>,
}

pub fn build_fixture(block_ratios: &[Vec<Rational>]) -> Fixture {
    let k = block_ratios.len();
    let t_size: usize = block_ratios.iter().map(Vec::len).sum();
    let n = t_size + k;
    let t = Coalition::grand(t_size);
    let mut entries = Vec::new();
    let mut blocks = Vec::new();
    let mut members_per_block = Vec::new();
    let mut next = 0;
    for (b, ratios) in block_ratios.iter().enumerate() {
        let members: Vec<usize> = (next..next + ratios.len()).collect();
        next += ratios.len();
        let block = Coalition::from_members(members.iter().copied().chain([t_size + b])).unwrap();
        for (&i, r) in members.iter().zip(ratios) {
            entries.push((i, block, r.clone()));
            entries.push((i, t, ratio(1, 1)));
        }
        blocks.push(block);
        members_per_block.push(members);
    }
    let game = HedonicGame::new(n, Coverage::Partial, entries).unwrap();
    Fixture { game, pi: Partition::new(n, blocks).unwrap(), t, members_per_block }
}

/// A rational in `[lo, hi]` on a grid of 1/16.
pub fn rational_in(rng: &mut impl Rng, lo: &Rational, hi: &Rational) -> Rational {
    let steps = 16i64;
    let k = rng.gen_range(0..=steps);
    lo.clone() + (hi.clone() - lo.clone()) * ratio(k, steps)
}

/// Ratios for one block with 1-2 members of `T`. When `inside`, every member
/// meets `ratio ≥ threshold` (stable side) or `ratio ≤ threshold` (blocking
/// side); otherwise at least one member misses it while staying on the same
/// side of 1.
pub fn block_ratios(rng: &mut impl Rng, threshold: &Rational, stable_side: bool, inside: bool) -> Vec<Rational> {
    let members = rng.gen_range(1..=2);
    let one = ratio(1, 1);
    let (in_lo, in_hi, out_lo, out_hi) = if stable_side {
        (threshold.clone(), threshold.clone() * ratio(3, 1), one.clone(), threshold.clone() * ratio(15, 16))
    } else {
        (threshold.clone() * ratio(1, 3), threshold.clone(), threshold.clone() * ratio(17, 16), one.clone())
    };
    let mut out: Vec<Rational> = (0..members).map(|_| rational_in(rng, &in_lo, &in_hi)).collect();
    if !inside {
        let miss = rng.gen_range(0..members);
        out[miss] = rational_in(rng, &out_lo, &out_hi);
    }
    out
}

pub fn two_point(alpha: Rational, p: Rational) -> NoiseSpec<Rational> {
    NoiseSpec::two_point(alpha, p).unwrap()
}

/// `f_T` computed as `Σ_s p_s Π_B P[α(B) ≤ α_s·ρ_B]`, with `ρ_B` the smallest
/// ratio in block `B`.
pub fn f_product_form(spec: &NoiseSpec<Rational>, fixture: &Fixture) -> Rational {
    let (a, p) = (spec.support(), spec.probs());
    let mins = block_extremes(fixture, true);
    let mut total = ratio(0, 1);
    for s in 0..a.len() {
        let mut prod = p[s].clone();
        for rho in &mins {
            let bound = a[s].clone() * rho.clone();
            let mass: Rational = (0..a.len()).filter(|&b| a[b] <= bound).map(|b| p[b].clone()).sum();
            prod = prod * mass;
        }
        total = total + prod;
    }
    total
}

/// `h_T` computed as `Σ_s p_s Π_B P[α(B) ≥ α_s·ρ_B]`, with `ρ_B` the largest
/// ratio in block `B`.
pub fn h_product_form(spec: &NoiseSpec<Rational>, fixture: &Fixture) -> Rational {
    let (a, p) = (spec.support(), spec.probs());
    let maxs = block_extremes(fixture, false);
    let mut total = ratio(0, 1);
    for s in 0..a.len() {
        let mut prod = p[s].clone();
        for rho in &maxs {
            let bound = a[s].clone() * rho.clone();
            let mass: Rational = (0..a.len()).filter(|&b| a[b] >= bound).map(|b| p[b].clone()).sum();
            prod = prod * mass;
        }
        total = total + prod;
    }
    total
}

fn block_extremes(fixture: &Fixture, min: bool) -> Vec<Rational> {
    fixture
        .members_per_block
        .iter()
        .map(|members| {
            let vals = members.iter().map(|&i| {
                fixture.game.value(i, fixture.pi.block_of(i)).unwrap().clone()
                    / fixture.game.value(i, fixture.t).unwrap().clone()
            });
            if min { vals.min().unwrap() } else { vals.max().unwrap() }
        })
        .collect()
}
