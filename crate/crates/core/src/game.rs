//! Hedonic games with cardinal values, preference queries and core stability.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coalition::{Coalition, MAX_AGENTS};
use crate::error::{Error, Result};
use crate::partition::{partitions, Partition};
use crate::scalar::Scalar;

/// Agent cap for operations that scan every coalition of `N`.
pub const MAX_SCAN_AGENTS: usize = 24;
/// Agent cap for operations that enumerate every partition of `N`.
pub const MAX_PARTITION_AGENTS: usize = 12;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coverage {
    /// Every agent has a value for every coalition containing it.
    Full,
    /// Only some (agent, coalition) pairs are known.
    Partial,
}

/// A hedonic game `(N, v)`: agent `i` values coalition `S ∋ i` at `v_i(S) > 0`.
///
/// A noisy game is the same type; the generic value type lets the exact
/// oracles run on rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct HedonicGame<V = f64> {
    n: usize,
    coverage: Coverage,
    values: BTreeMap<(Coalition, usize), V>,
}

impl<V: Scalar> HedonicGame<V> {
    pub fn new(
        n: usize,
        coverage: Coverage,
        entries: impl IntoIterator<Item = (usize, Coalition, V)>,
    ) -> Result<Self> {
        if n == 0 || n >= MAX_AGENTS {
            return Err(Error::InvalidGame(format!("agent count {n} out of range")));
        }
        let mut values = BTreeMap::new();
        for (agent, coalition, value) in entries {
            coalition.validate(n)?;
            if !coalition.contains(agent) {
                return Err(Error::AgentNotMember { agent, coalition });
            }
            if !value.is_finite() || value <= V::zero() {
                return Err(Error::InvalidGame(format!(
                    "value {value:?} for agent {agent} in {coalition} is not a positive finite number"
                )));
            }
            if values.insert((coalition, agent), value).is_some() {
                return Err(Error::InvalidGame(format!(
                    "duplicate value for agent {agent} in {coalition}"
                )));
            }
        }
        if coverage == Coverage::Full {
            if n > MAX_SCAN_AGENTS {
                return Err(Error::InstanceTooLarge { n, max: MAX_SCAN_AGENTS });
            }
            for coalition in Coalition::all_nonempty(n) {
                for agent in coalition.members() {
                    if !values.contains_key(&(coalition, agent)) {
                        return Err(Error::InvalidGame(format!(
                            "full-coverage game lacks a value for agent {agent} in {coalition}"
                        )));
                    }
                }
            }
        }
        Ok(HedonicGame { n, coverage, values })
    }

    /// Full-coverage game whose values come from `value(agent, coalition)`.
    pub fn from_fn(n: usize, mut value: impl FnMut(usize, Coalition) -> V) -> Result<Self> {
        if n == 0 || n > MAX_SCAN_AGENTS {
            return Err(Error::InstanceTooLarge { n, max: MAX_SCAN_AGENTS });
        }
        let mut entries = Vec::new();
        for coalition in Coalition::all_nonempty(n) {
            for agent in coalition.members() {
                entries.push((agent, coalition, value(agent, coalition)));
            }
        }
        HedonicGame::new(n, Coverage::Full, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coverage(&self) -> Coverage {
        self.coverage
    }

    pub fn agents(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    /// `v_i(S)`, or an error naming what is missing.
    pub fn value(&self, agent: usize, coalition: Coalition) -> Result<&V> {
        if !coalition.contains(agent) {
            return Err(Error::AgentNotMember { agent, coalition });
        }
        self.values
            .get(&(coalition, agent))
            .ok_or(Error::MissingValue { agent, coalition })
    }

    pub fn has_value(&self, agent: usize, coalition: Coalition) -> bool {
        self.values.contains_key(&(coalition, agent))
    }

    /// Stored `(agent, coalition, value)` triples, ordered by coalition then agent.
    pub fn entries(&self) -> impl Iterator<Item = (usize, Coalition, &V)> + '_ {
        self.values.iter().map(|(&(c, a), v)| (a, c, v))
    }

    /// Coalitions that carry at least one stored value.
    pub fn coalitions(&self) -> Vec<Coalition> {
        let mut out: Vec<Coalition> = self.values.keys().map(|&(c, _)| c).collect();
        out.dedup();
        out
    }

    pub fn try_map_values<W: Scalar>(
        &self,
        mut f: impl FnMut(usize, Coalition, &V) -> Result<W>,
    ) -> Result<HedonicGame<W>> {
        let entries = self
            .values
            .iter()
            .map(|(&(c, a), v)| f(a, c, v).map(|w| (a, c, w)))
            .collect::<Result<Vec<_>>>()?;
        HedonicGame::new(self.n, self.coverage, entries)
    }
}

impl HedonicGame<f64> {
    /// Exact rational copy of this game; every finite `f64` converts losslessly.
    pub fn to_exact(&self) -> HedonicGame<crate::scalar::Rational> {
        self.try_map_values(|_, _, v| {
            <crate::scalar::Rational as Scalar>::from_f64(*v)
                .ok_or_else(|| Error::InvalidGame(format!("value {v} has no rational form")))
        })
        .expect("validated values are finite")
    }
}

#[derive(Serialize, Deserialize)]
struct ValueEntry {
    agent: usize,
    coalition: Coalition,
    value: f64,
}

#[derive(Serialize, Deserialize)]
struct GameJson {
    n: usize,
    values: Vec<ValueEntry>,
    coverage: Coverage,
}

impl Serialize for HedonicGame<f64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GameJson {
            n: self.n,
            values: self
                .entries()
                .map(|(agent, coalition, v)| ValueEntry { agent, coalition, value: *v })
                .collect(),
            coverage: self.coverage,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HedonicGame<f64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = GameJson::deserialize(d)?;
        HedonicGame::new(
            raw.n,
            raw.coverage,
            raw.values.into_iter().map(|e| (e.agent, e.coalition, e.value)),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// Agent `i`'s preference between `S` and `T`: `Greater` means `S ≻_i T`,
/// `Less` means `T ≻_i S`, `Equal` means indifference.
pub fn prefers<V: Scalar>(
    game: &HedonicGame<V>,
    agent: usize,
    s: Coalition,
    t: Coalition,
) -> Result<Ordering> {
    let vs = game.value(agent, s)?;
    let vt = game.value(agent, t)?;
    Ok(vs.partial_cmp(vt).expect("values are finite"))
}

/// Whether `T` core-blocks `π`: every member of `T` strictly prefers `T` to
/// its own block.
pub fn core_blocks<V: Scalar>(game: &HedonicGame<V>, pi: &Partition, t: Coalition) -> Result<bool> {
    check_partition(game, pi)?;
    t.validate(game.n())?;
    let mut blocks = true;
    for agent in t.members() {
        let in_t = game.value(agent, t)?;
        let in_block = game.value(agent, pi.block_of(agent))?;
        blocks &= in_t > in_block;
    }
    Ok(blocks)
}

/// Exhaustive core-stability check over all `2^n - 1` coalitions.
pub fn is_core_stable<V: Scalar>(game: &HedonicGame<V>, pi: &Partition) -> Result<bool> {
    Ok(first_blocking_coalition(game, pi)?.is_none())
}

/// The lowest-bitmask coalition that core-blocks `π`, if any.
pub fn first_blocking_coalition<V: Scalar>(
    game: &HedonicGame<V>,
    pi: &Partition,
) -> Result<Option<Coalition>> {
    require_full(game, MAX_SCAN_AGENTS)?;
    check_partition(game, pi)?;
    let current: Vec<&V> = (0..game.n())
        .map(|i| game.value(i, pi.block_of(i)))
        .collect::<Result<_>>()?;
    for t in Coalition::all_nonempty(game.n()) {
        let mut blocked = true;
        for agent in t.members() {
            if *game.value(agent, t)? <= *current[agent] {
                blocked = false;
                break;
            }
        }
        if blocked {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Some core-stable partition, or `None` when the core is empty.
///
/// Partitions are tried in lexicographic order of their restricted growth
/// strings, so the answer is the smallest stable partition in that order.
pub fn find_core_partition<V: Scalar>(game: &HedonicGame<V>) -> Result<Option<Partition>> {
    require_full(game, MAX_PARTITION_AGENTS)?;
    for pi in partitions(game.n()) {
        if first_blocking_coalition(game, &pi)?.is_none() {
            return Ok(Some(pi));
        }
    }
    Ok(None)
}

/// Every core-stable partition, in the same order as [`find_core_partition`].
pub fn core_partitions<V: Scalar>(game: &HedonicGame<V>) -> Result<Vec<Partition>> {
    require_full(game, MAX_PARTITION_AGENTS)?;
    let mut out = Vec::new();
    for pi in partitions(game.n()) {
        if first_blocking_coalition(game, &pi)?.is_none() {
            out.push(pi);
        }
    }
    Ok(out)
}

fn require_full<V>(game: &HedonicGame<V>, max: usize) -> Result<()> {
    if game.coverage != Coverage::Full {
        return Err(Error::CoverageInsufficient);
    }
    if game.n > max {
        return Err(Error::InstanceTooLarge { n: game.n, max });
    }
    Ok(())
}

fn check_partition<V>(game: &HedonicGame<V>, pi: &Partition) -> Result<()> {
    if pi.n() != game.n {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} agents, game has {}",
            pi.n(),
            game.n
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn c(m: &[usize]) -> Coalition {
        Coalition::from_members(m.iter().copied()).unwrap()
    }

    #[test]
    fn prefers_reads_the_noise_free_motivating_game() {
        let g = fixtures::motivating_noise_free();
        // agent 0 ranks its singleton above {0,1}
        assert_eq!(prefers(&g, 0, c(&[0]), c(&[0, 1])).unwrap(), Ordering::Greater);
        assert_eq!(prefers(&g, 0, c(&[0, 1]), c(&[0, 1])).unwrap(), Ordering::Equal);
    }

    #[test]
    fn prefers_errors() {
        let g = fixtures::motivating_noise_free();
        assert!(matches!(
            prefers(&g, 2, c(&[0]), c(&[2])),
            Err(Error::AgentNotMember { agent: 2, .. })
        ));
        let partial =
            HedonicGame::new(2, Coverage::Partial, [(0, c(&[0]), 1.0), (0, c(&[0, 1]), 2.0)]).unwrap();
        assert!(matches!(
            prefers(&partial, 1, c(&[1]), c(&[0, 1])),
            Err(Error::MissingValue { agent: 1, .. })
        ));
    }

    #[test]
    fn construction_validates_entries() {
        assert!(HedonicGame::new(2, Coverage::Partial, [(0, c(&[1]), 1.0)]).is_err());
        assert!(HedonicGame::new(2, Coverage::Partial, [(0, c(&[0]), 0.0)]).is_err());
        assert!(HedonicGame::new(2, Coverage::Partial, [(0, c(&[0]), f64::NAN)]).is_err());
        assert!(HedonicGame::new(2, Coverage::Full, [(0, c(&[0]), 1.0)]).is_err());
        assert!(HedonicGame::new(
            2,
            Coverage::Partial,
            [(0, c(&[0]), 1.0), (0, c(&[0]), 2.0)]
        )
        .is_err());
    }

    #[test]
    fn motivating_example_core() {
        let noisy = fixtures::motivating_noisy();
        let free = fixtures::motivating_noise_free();
        let predicted = Partition::new(3, [c(&[0, 1]), c(&[2])]).unwrap();
        let singletons = Partition::singletons(3);

        assert!(is_core_stable(&noisy, &predicted).unwrap());
        assert!(core_blocks(&free, &predicted, c(&[0])).unwrap());
        assert!(!is_core_stable(&free, &predicted).unwrap());
        assert!(is_core_stable(&free, &singletons).unwrap());

        assert_eq!(find_core_partition(&noisy).unwrap(), Some(predicted));
        assert_eq!(find_core_partition(&free).unwrap(), Some(singletons.clone()));
        assert_eq!(core_partitions(&free).unwrap(), vec![singletons]);
    }

    #[test]
    fn own_block_never_blocks() {
        let g = fixtures::motivating_noisy();
        for pi in partitions(3) {
            for &b in pi.blocks() {
                assert!(!core_blocks(&g, &pi, b).unwrap());
            }
        }
    }

    #[test]
    fn singleton_favouring_game_keeps_singletons() {
        let g = HedonicGame::from_fn(4, |_, s| if s.len() == 1 { 10.0 } else { 1.0 }).unwrap();
        assert!(is_core_stable(&g, &Partition::singletons(4)).unwrap());
    }

    #[test]
    fn one_agent_game() {
        let g = HedonicGame::from_fn(1, |_, _| 1.0).unwrap();
        assert_eq!(find_core_partition(&g).unwrap(), Some(Partition::singletons(1)));
    }

    #[test]
    fn partial_games_cannot_be_scanned() {
        let partial = HedonicGame::new(2, Coverage::Partial, [(0, c(&[0]), 1.0)]).unwrap();
        assert_eq!(
            is_core_stable(&partial, &Partition::singletons(2)),
            Err(Error::CoverageInsufficient)
        );
        assert_eq!(find_core_partition(&partial), Err(Error::CoverageInsufficient));
    }

    #[test]
    fn json_round_trip() {
        let g = fixtures::motivating_noisy();
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.starts_with(r#"{"n":3,"values":[{"agent":0,"coalition":[0],"value":3.0}"#));
        assert!(text.ends_with(r#""coverage":"full"}"#));
        assert_eq!(serde_json::from_str::<HedonicGame>(&text).unwrap(), g);
        let bad = r#"{"n":2,"values":[{"agent":1,"coalition":[0],"value":1.0}],"coverage":"partial"}"#;
        assert!(serde_json::from_str::<HedonicGame>(bad).is_err());
    }

    #[test]
    fn empty_core_is_reported() {
        // Three agents, each wants the pair with its successor most.
        let g = fixtures::empty_core_cycle();
        assert_eq!(find_core_partition(&g).unwrap(), None);
    }
}
