//! Small reference games used by the examples, tests and CLI smoke runs.
//!
//! The three-agent games are ordinal; each agent's ranking is cardinalized as
//! 4 > 3 > 2 > 1 from the top down.

use crate::coalition::Coalition;
use crate::game::HedonicGame;

fn ranked(n: usize, rankings: &[&[&[usize]]]) -> HedonicGame {
    let mut entries = Vec::new();
    for (agent, ranking) in rankings.iter().enumerate() {
        let top = ranking.len();
        for (pos, members) in ranking.iter().enumerate() {
            let c = Coalition::from_members(members.iter().copied()).expect("small agent index");
            entries.push((agent, c, (top - pos) as f64));
        }
    }
    HedonicGame::new(n, crate::game::Coverage::Full, entries).expect("fixture is well formed")
}

/// The observed (noisy) three-agent game. Its core is `{{0,1},{2}}`.
pub fn motivating_noisy() -> HedonicGame {
    ranked(
        3,
        &[
            &[&[0, 1], &[0], &[0, 1, 2], &[0, 2]],
            &[&[0, 1], &[1], &[0, 1, 2], &[1, 2]],
            &[&[0, 1, 2], &[1, 2], &[0, 2], &[2]],
        ],
    )
}

/// The underlying noise-free game. Agent 0 now ranks its singleton first,
/// which leaves the all-singletons partition as the unique core partition.
pub fn motivating_noise_free() -> HedonicGame {
    ranked(
        3,
        &[
            &[&[0], &[0, 1], &[0, 1, 2], &[0, 2]],
            &[&[0, 1], &[1], &[0, 1, 2], &[1, 2]],
            &[&[0, 1, 2], &[1, 2], &[0, 2], &[2]],
        ],
    )
}

/// Three agents chasing each other around a cycle of pairs; the core is empty.
pub fn empty_core_cycle() -> HedonicGame {
    ranked(
        3,
        &[
            &[&[0, 1], &[0, 2], &[0], &[0, 1, 2]],
            &[&[1, 2], &[0, 1], &[1], &[0, 1, 2]],
            &[&[0, 2], &[1, 2], &[2], &[0, 1, 2]],
        ],
    )
}

/// Four agents where `{0,1}` and `{2,3}` are mutual favourites. Values depend
/// only on how many of an agent's partner and outsiders are present, which
/// makes the game top-responsive.
pub fn paired_top_responsive() -> HedonicGame {
    HedonicGame::from_fn(4, |agent, s| {
        let partner = agent ^ 1;
        let outsiders = s.len() - 1 - usize::from(s.contains(partner));
        let base = if s.contains(partner) { 10.0 } else { 5.0 };
        base - outsiders as f64
    })
    .expect("fixture is well formed")
}
