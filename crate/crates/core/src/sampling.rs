//! Seeded i.i.d. coalition sampling.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coalition::{Coalition, MAX_AGENTS};
use crate::error::{Error, Result};
use crate::scalar::F64_SUM_TOLERANCE;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CoalitionDistribution {
    /// Uniform over the `2^n - 1` non-empty subsets of `{0, .., n-1}`.
    Uniform { n: usize },
    /// Uniform over a fixed list (repeats count with multiplicity).
    List { coalitions: Vec<Coalition> },
    /// Explicit probabilities, one per coalition.
    Weighted {
        coalitions: Vec<Coalition>,
        weights: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingSpec {
    #[serde(flatten)]
    pub distribution: CoalitionDistribution,
    #[serde(default)]
    pub seed: u64,
}

impl SamplingSpec {
    pub fn new(distribution: CoalitionDistribution, seed: u64) -> Result<Self> {
        let spec = SamplingSpec { distribution, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn uniform(n: usize, seed: u64) -> Result<Self> {
        SamplingSpec::new(CoalitionDistribution::Uniform { n }, seed)
    }

    pub fn list(coalitions: Vec<Coalition>, seed: u64) -> Result<Self> {
        SamplingSpec::new(CoalitionDistribution::List { coalitions }, seed)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SamplingSpec {
            distribution: self.distribution.clone(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSamplingSpec(msg));
        match &self.distribution {
            CoalitionDistribution::Uniform { n } => {
                if *n == 0 || *n >= MAX_AGENTS {
                    return bad(format!("agent count {n} out of range"));
                }
            }
            CoalitionDistribution::List { coalitions } => {
                if coalitions.is_empty() {
                    return bad("coalition list is empty".into());
                }
                if coalitions.iter().any(|c| c.is_empty()) {
                    return bad("coalition list contains the empty set".into());
                }
            }
            CoalitionDistribution::Weighted { coalitions, weights } => {
                if coalitions.is_empty() || coalitions.len() != weights.len() {
                    return bad(format!(
                        "{} coalitions but {} weights",
                        coalitions.len(),
                        weights.len()
                    ));
                }
                if coalitions.iter().any(|c| c.is_empty()) {
                    return bad("coalition list contains the empty set".into());
                }
                if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
                    return bad("weights must be finite and non-negative".into());
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > F64_SUM_TOLERANCE {
                    return bad(format!("weights sum to {total}, not 1"));
                }
            }
        }
        Ok(())
    }

    /// Coalitions with positive probability, without repeats, in bitmask order.
    /// `None` for the uniform distribution over all subsets.
    pub fn support(&self) -> Option<Vec<Coalition>> {
        let mut out = match &self.distribution {
            CoalitionDistribution::Uniform { .. } => return None,
            CoalitionDistribution::List { coalitions } => coalitions.clone(),
            CoalitionDistribution::Weighted { coalitions, weights } => coalitions
                .iter()
                .zip(weights)
                .filter(|(_, w)| **w > 0.0)
                .map(|(c, _)| *c)
                .collect(),
        };
        out.sort();
        out.dedup();
        Some(out)
    }
}

/// `m` i.i.d. draws from `spec`; the same spec and seed give the same sequence.
pub fn sample_coalitions(spec: &SamplingSpec, m: usize) -> Result<Vec<Coalition>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let out = match &spec.distribution {
        CoalitionDistribution::Uniform { n } => {
            let top = (1u32 << n) - 1;
            (0..m)
                .map(|_| Coalition::from_bits(rng.gen_range(1..=top)))
                .collect()
        }
        CoalitionDistribution::List { coalitions } => (0..m)
            .map(|_| coalitions[rng.gen_range(0..coalitions.len())])
            .collect(),
        CoalitionDistribution::Weighted { coalitions, weights } => {
            let index = WeightedIndex::new(weights)
                .map_err(|e| Error::InvalidSamplingSpec(e.to_string()))?;
            (0..m).map(|_| coalitions[index.sample(&mut rng)]).collect()
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(m: &[usize]) -> Coalition {
        Coalition::from_members(m.iter().copied()).unwrap()
    }

    #[test]
    fn zero_draws() {
        let spec = SamplingSpec::uniform(3, 1).unwrap();
        assert!(sample_coalitions(&spec, 0).unwrap().is_empty());
    }

    #[test]
    fn list_frequencies_are_near_uniform() {
        let list = vec![c(&[0]), c(&[1]), c(&[0, 1])];
        let spec = SamplingSpec::list(list.clone(), 7).unwrap();
        let m = 10_000;
        let draws = sample_coalitions(&spec, m).unwrap();
        let sigma = (m as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        for target in list {
            let k = draws.iter().filter(|&&d| d == target).count() as f64;
            assert!((k - m as f64 / 3.0).abs() <= 3.0 * sigma, "{target}: {k}");
        }
    }

    #[test]
    fn same_seed_same_sequence() {
        let spec = SamplingSpec::uniform(5, 42).unwrap();
        assert_eq!(
            sample_coalitions(&spec, 100).unwrap(),
            sample_coalitions(&spec, 100).unwrap()
        );
        assert_ne!(
            sample_coalitions(&spec, 100).unwrap(),
            sample_coalitions(&spec.with_seed(43), 100).unwrap()
        );
    }

    #[test]
    fn uniform_never_draws_empty_or_outside() {
        let spec = SamplingSpec::uniform(4, 3).unwrap();
        for d in sample_coalitions(&spec, 1000).unwrap() {
            assert!(d.validate(4).is_ok());
        }
    }

    #[test]
    fn weights_are_validated() {
        let cs = vec![c(&[0]), c(&[1])];
        assert!(SamplingSpec::new(
            CoalitionDistribution::Weighted { coalitions: cs.clone(), weights: vec![0.5, 0.6] },
            0
        )
        .is_err());
        assert!(SamplingSpec::new(
            CoalitionDistribution::Weighted { coalitions: cs.clone(), weights: vec![-0.5, 1.5] },
            0
        )
        .is_err());
        let spec = SamplingSpec::new(
            CoalitionDistribution::Weighted { coalitions: cs, weights: vec![1.0, 0.0] },
            0,
        )
        .unwrap();
        assert!(sample_coalitions(&spec, 50).unwrap().iter().all(|&d| d == c(&[0])));
        assert_eq!(spec.support().unwrap(), vec![c(&[0])]);
    }

    #[test]
    fn json_shape() {
        let spec: SamplingSpec =
            serde_json::from_str(r#"{"kind":"list","coalitions":[[0],[1,2]],"seed":9}"#).unwrap();
        assert_eq!(spec.seed, 9);
        assert_eq!(spec.support().unwrap(), vec![c(&[0]), c(&[1, 2])]);
    }
}
