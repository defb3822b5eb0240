//! PAC machinery: samples of observed coalitions, empirical blocking rates,
//! partition learners and sample-complexity bounds.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{core_blocks, find_core_partition, Coverage, HedonicGame, MAX_PARTITION_AGENTS};
use crate::partition::Partition;
use crate::sampling::{sample_coalitions, SamplingSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacParams {
    /// Target error for the noise-free game; derived from `eps_tilde` and
    /// `zeta` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    pub eps_tilde: f64,
    pub delta: f64,
    pub zeta: f64,
    pub n: usize,
}

impl PacParams {
    pub fn new(eps_tilde: f64, delta: f64, zeta: f64, n: usize) -> Result<Self> {
        let params = PacParams { eps: None, eps_tilde, delta, zeta, n };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let open = |x: f64| x > 0.0 && x < 1.0;
        if !open(self.eps_tilde) {
            return Err(Error::InvalidParams(format!("eps_tilde {} outside (0, 1)", self.eps_tilde)));
        }
        if !open(self.delta) {
            return Err(Error::InvalidParams(format!("delta {} outside (0, 1)", self.delta)));
        }
        if !(self.zeta > 0.0 && self.zeta <= 1.0) {
            return Err(Error::InvalidParams(format!("zeta {} outside (0, 1]", self.zeta)));
        }
        if let Some(eps) = self.eps {
            if !open(eps) {
                return Err(Error::InvalidParams(format!("eps {eps} outside (0, 1)")));
            }
        }
        if self.n == 0 {
            return Err(Error::InvalidParams("n must be positive".into()));
        }
        Ok(())
    }

    /// `ε`, either as given or `1 − (1 − ε̃)ζ`.
    pub fn eps(&self) -> f64 {
        self.eps
            .unwrap_or_else(|| crate::agreement::prediction_epsilon(self.eps_tilde, self.zeta))
    }
}

/// One observed coalition with the observed value of each member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub coalition: Coalition,
    pub values: BTreeMap<usize, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub observations: Vec<Observation>,
    pub seed: u64,
}

impl Sample {
    /// Draws `m` coalitions from `spec` and records their values in `game`.
    pub fn draw(game: &HedonicGame, spec: &SamplingSpec, m: usize) -> Result<Self> {
        let coalitions = sample_coalitions(spec, m)?;
        let observations = coalitions
            .into_iter()
            .map(|c| observe(game, c))
            .collect::<Result<_>>()?;
        Ok(Sample { observations, seed: spec.seed })
    }

    /// One observation of every coalition the game has values for.
    pub fn exhaustive(game: &HedonicGame) -> Result<Self> {
        let observations = game
            .coalitions()
            .into_iter()
            .map(|c| observe(game, c))
            .collect::<Result<_>>()?;
        Ok(Sample { observations, seed: 0 })
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// The partial game made of every observed value; repeat observations of
    /// a coalition keep the first.
    pub fn induced_game(&self, n: usize, coverage: Coverage) -> Result<HedonicGame> {
        let mut seen = BTreeMap::new();
        for obs in &self.observations {
            for (&agent, &value) in &obs.values {
                seen.entry((obs.coalition, agent)).or_insert(value);
            }
        }
        HedonicGame::new(n, coverage, seen.into_iter().map(|((c, a), v)| (a, c, v)))
    }
}

fn observe(game: &HedonicGame, coalition: Coalition) -> Result<Observation> {
    let values = coalition
        .members()
        .map(|i| game.value(i, coalition).map(|v| (i, *v)))
        .collect::<Result<_>>()?;
    Ok(Observation { coalition, values })
}

/// Fraction of `m_eval` draws from `spec` that core-block `pi` in `game`.
pub fn empirical_blocking_rate(
    pi: &Partition,
    spec: &SamplingSpec,
    game: &HedonicGame,
    m_eval: usize,
) -> Result<f64> {
    if m_eval == 0 {
        return Err(Error::EmptySample);
    }
    let mut blocked = 0usize;
    for t in sample_coalitions(spec, m_eval)? {
        if core_blocks(game, pi, t)? {
            blocked += 1;
        }
    }
    Ok(blocked as f64 / m_eval as f64)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    /// Exhaustive core search on the game induced by a complete sample.
    Exact,
    /// Repeatedly split off the smallest group closed under each agent's
    /// favourite observed coalition.
    TopCover,
}

pub fn learn_partition(sample: &Sample, n: usize, backend: Backend) -> Result<Partition> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    match backend {
        Backend::Exact => learn_exact(sample, n),
        Backend::TopCover => learn_top_cover(sample, n),
    }
}

fn learn_exact(sample: &Sample, n: usize) -> Result<Partition> {
    if n > MAX_PARTITION_AGENTS {
        return Err(Error::InstanceTooLarge { n, max: MAX_PARTITION_AGENTS });
    }
    let game = match sample.induced_game(n, Coverage::Full) {
        Ok(g) => g,
        Err(Error::InvalidGame(_)) => return Err(Error::CoverageInsufficient),
        Err(e) => return Err(e),
    };
    find_core_partition(&game)?.ok_or(Error::EmptyCore)
}

fn learn_top_cover(sample: &Sample, n: usize) -> Result<Partition> {
    let grand = Coalition::grand(n);
    for obs in &sample.observations {
        obs.coalition.validate(n)?;
    }
    let mut remaining = grand;
    let mut blocks = Vec::new();
    while !remaining.is_empty() {
        let choice: BTreeMap<usize, Coalition> = remaining
            .members()
            .map(|i| (i, favourite(sample, remaining, i)))
            .collect();
        let mut best: Option<Coalition> = None;
        for i in remaining.members() {
            let mut closure = Coalition::singleton(i);
            loop {
                let next = closure
                    .members()
                    .fold(closure, |acc, j| acc.union(choice[&j]));
                if next == closure {
                    break;
                }
                closure = next;
            }
            if best.is_none_or(|b| closure.len() < b.len()) {
                best = Some(closure);
            }
        }
        let block = best.expect("remaining is non-empty");
        blocks.push(block);
        remaining = remaining.difference(block);
    }
    Partition::new(n, blocks)
}

// The highest-valued observed coalition for `agent` inside `remaining`; ties
// go to the smaller coalition, then the lower bitmask. `{agent}` if none.
fn favourite(sample: &Sample, remaining: Coalition, agent: usize) -> Coalition {
    let mut best: Option<(f64, Coalition)> = None;
    for obs in &sample.observations {
        if !obs.coalition.is_subset_of(remaining) {
            continue;
        }
        let Some(&v) = obs.values.get(&agent) else { continue };
        let better = match best {
            None => true,
            Some((bv, bc)) => {
                v > bv
                    || (v == bv
                        && (obs.coalition.len(), obs.coalition) < (bc.len(), bc))
            }
        };
        if better {
            best = Some((v, obs.coalition));
        }
    }
    best.map_or(Coalition::singleton(agent), |(_, c)| c)
}

fn size_factor(n: usize) -> f64 {
    let n = n as f64;
    2.0 * n.powi(3) + 2.0 * n.powi(4)
}

fn log_term(n: usize, delta: f64) -> f64 {
    (2.0 * (n as f64).powi(3) / delta).ln()
}

/// `⌈(2n³ + 2n⁴)·(1/ε)·ln(2n³/δ)⌉` samples for top-responsive games.
pub fn sample_complexity_top_responsive(n: usize, eps: f64, delta: f64) -> u64 {
    sample_complexity_raw(n, eps, delta).ceil() as u64
}

/// [`sample_complexity_top_responsive`] before rounding up.
pub fn sample_complexity_raw(n: usize, eps: f64, delta: f64) -> f64 {
    size_factor(n) / eps * log_term(n, delta)
}

/// Bounds `(m·ζ, m + (2n³+2n⁴)·((1−ε̃)+ε̃ζ)/(ε̃(1+ε̃ζ))·ln(2n³/δ))` on the
/// number of noisy samples.
pub fn sample_bounds(m: u64, params: &PacParams) -> (f64, f64) {
    let (et, z) = (params.eps_tilde, params.zeta);
    let m = m as f64;
    let extra = size_factor(params.n) * ((1.0 - et) + et * z) / (et * (1.0 + et * z))
        * log_term(params.n, params.delta);
    (m * z, m + extra)
}

/// `1 − (1 − (ε̃ − ε̃'))·agreement`: the error after extra samples lower the
/// noisy error by `ε̃'`.
pub fn epsilon_after_more_samples(eps_tilde: f64, eps_tilde_prime: f64, agreement: f64) -> f64 {
    crate::agreement::prediction_epsilon(eps_tilde - eps_tilde_prime, agreement)
}
