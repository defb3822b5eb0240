//! The multiplicative noise model: one factor `α(S)` per coalition, drawn
//! i.i.d. from a finite-support distribution and shared by every member.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{Coverage, HedonicGame};
use crate::scalar::{Rational, Scalar};

/// An `l`-support distribution `P[α = support[j]] = probs[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseSpec<T = f64> {
    support: Vec<T>,
    probs: Vec<T>,
}

impl<T: Scalar> NoiseSpec<T> {
    pub fn new(support: Vec<T>, probs: Vec<T>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidNoiseSpec(msg));
        if support.is_empty() {
            return bad("support is empty".into());
        }
        if support.len() != probs.len() {
            return bad(format!(
                "{} support values but {} probabilities",
                support.len(),
                probs.len()
            ));
        }
        if support.iter().any(|a| !a.is_finite() || *a <= T::zero()) {
            return bad("support values must be positive and finite".into());
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return bad("support must be strictly increasing".into());
        }
        if probs.iter().any(|p| !p.is_finite() || *p < T::zero()) {
            return bad("probabilities must be non-negative".into());
        }
        let total = crate::scalar::sum(probs.iter().cloned());
        if !total.is_unit_mass() {
            return bad(format!("probabilities sum to {:?}, not 1", total));
        }
        Ok(NoiseSpec { support, probs })
    }

    /// `{1, α}` with `P[α] = p`, `α > 1`.
    pub fn two_point(alpha: T, p: T) -> Result<Self> {
        if alpha <= T::one() {
            return Err(Error::InvalidAlpha(alpha.as_f64()));
        }
        check_probability(&p)?;
        NoiseSpec::new(vec![T::one(), alpha], vec![T::one() - p.clone(), p])
    }

    /// `{α_2, 1, α_1}` with `α_2 < 1 < α_1`, `P[α_1] = p1`, `P[α_2] = p2`.
    pub fn three_point(alpha1: T, alpha2: T, p1: T, p2: T) -> Result<Self> {
        if alpha1 <= T::one() {
            return Err(Error::InvalidAlpha(alpha1.as_f64()));
        }
        if alpha2 >= T::one() || alpha2 <= T::zero() {
            return Err(Error::InvalidNoiseSpec(format!(
                "lower support value {:?} must lie in (0, 1)",
                alpha2
            )));
        }
        check_probability(&p1)?;
        check_probability(&p2)?;
        let rest = T::one() - p1.clone() - p2.clone();
        if rest < T::zero() {
            return Err(Error::InvalidNoiseSpec("p1 + p2 exceeds 1".into()));
        }
        NoiseSpec::new(vec![alpha2, T::one(), alpha1], vec![p2, rest, p1])
    }

    /// The noise-free distribution `α ≡ 1`.
    pub fn trivial() -> Self {
        NoiseSpec {
            support: vec![T::one()],
            probs: vec![T::one()],
        }
    }

    pub fn support(&self) -> &[T] {
        &self.support
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    /// Support size `l`.
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn contains_one(&self) -> bool {
        self.support.iter().any(|a| a.is_one())
    }

    pub fn index_of(&self, alpha: &T) -> Option<usize> {
        self.support.iter().position(|a| a == alpha)
    }

    pub fn to_f64(&self) -> NoiseSpec<f64> {
        NoiseSpec {
            support: self.support.iter().map(Scalar::as_f64).collect(),
            probs: self.probs.iter().map(Scalar::as_f64).collect(),
        }
    }
}

impl NoiseSpec<f64> {
    /// Exact rational copy. Support values convert losslessly; the last
    /// probability absorbs the binary rounding of the others so the mass is
    /// exactly one.
    pub fn to_exact(&self) -> NoiseSpec<Rational> {
        let support = self
            .support
            .iter()
            .map(|a| Rational::from_f64(*a).expect("finite"))
            .collect();
        let mut probs: Vec<Rational> = self
            .probs
            .iter()
            .map(|p| Rational::from_f64(*p).expect("finite"))
            .collect();
        let last = probs.len() - 1;
        let head = crate::scalar::sum(probs[..last].iter().cloned());
        probs[last] = Rational::from_integer(1.into()) - head;
        NoiseSpec { support, probs }
    }
}

fn check_probability<T: Scalar>(p: &T) -> Result<()> {
    if *p < T::zero() || *p > T::one() {
        return Err(Error::InvalidNoiseSpec(format!("probability {:?} outside [0, 1]", p)));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct NoiseSpecJson {
    support: Vec<f64>,
    probs: Vec<f64>,
}

impl Serialize for NoiseSpec<f64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NoiseSpecJson {
            support: self.support.clone(),
            probs: self.probs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NoiseSpec<f64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = NoiseSpecJson::deserialize(d)?;
        NoiseSpec::new(raw.support, raw.probs).map_err(serde::de::Error::custom)
    }
}

/// The realized factor `α(S)` for each coalition.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct NoiseAssignment<T = f64> {
    alphas: BTreeMap<Coalition, T>,
}

impl<T: Scalar> NoiseAssignment<T> {
    pub fn new() -> Self {
        NoiseAssignment {
            alphas: BTreeMap::new(),
        }
    }

    /// The same factor on every listed coalition.
    pub fn constant(coalitions: impl IntoIterator<Item = Coalition>, alpha: T) -> Self {
        NoiseAssignment {
            alphas: coalitions.into_iter().map(|c| (c, alpha.clone())).collect(),
        }
    }

    pub fn insert(&mut self, coalition: Coalition, alpha: T) {
        self.alphas.insert(coalition, alpha);
    }

    pub fn get(&self, coalition: Coalition) -> Result<&T> {
        self.alphas
            .get(&coalition)
            .ok_or(Error::MissingAssignment(coalition))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coalition, &T)> + '_ {
        self.alphas.iter().map(|(c, a)| (*c, a))
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Checks every assigned factor lies in the support of `spec`.
    pub fn check_support(&self, spec: &NoiseSpec<T>) -> Result<()> {
        for (c, a) in &self.alphas {
            if spec.index_of(a).is_none() {
                return Err(Error::InvalidNoiseSpec(format!(
                    "factor {:?} on {c} is not in the support",
                    a
                )));
            }
        }
        Ok(())
    }
}

impl<T: Scalar> FromIterator<(Coalition, T)> for NoiseAssignment<T> {
    fn from_iter<I: IntoIterator<Item = (Coalition, T)>>(iter: I) -> Self {
        NoiseAssignment {
            alphas: iter.into_iter().collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct AssignmentEntry {
    coalition: Coalition,
    alpha: f64,
}

impl Serialize for NoiseAssignment<f64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.alphas.iter().map(|(c, a)| AssignmentEntry {
            coalition: *c,
            alpha: *a,
        }))
    }
}

impl<'de> Deserialize<'de> for NoiseAssignment<f64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<AssignmentEntry>::deserialize(d)?;
        let mut out = NoiseAssignment::new();
        for e in entries {
            if !(e.alpha.is_finite() && e.alpha > 0.0) {
                return Err(serde::de::Error::custom(format!(
                    "factor {} on {} is not positive",
                    e.alpha, e.coalition
                )));
            }
            out.insert(e.coalition, e.alpha);
        }
        Ok(out)
    }
}

/// `ṽ_i(S) = α(S)·v_i(S)` for every stored entry.
pub fn apply_noise<T: Scalar>(
    game: &HedonicGame<T>,
    assignment: &NoiseAssignment<T>,
) -> Result<HedonicGame<T>> {
    game.try_map_values(|_, c, v| Ok(assignment.get(c)?.clone() * v.clone()))
}

/// Inverse of [`apply_noise`]: `v_i(S) = ṽ_i(S) / α(S)`.
pub fn remove_noise<T: Scalar>(
    noisy: &HedonicGame<T>,
    assignment: &NoiseAssignment<T>,
) -> Result<HedonicGame<T>> {
    noisy.try_map_values(|_, c, v| Ok(v.clone() / assignment.get(c)?.clone()))
}

/// Independent draws of `α(S)` for each coalition.
///
/// Each coalition gets its own generator seeded from `(seed, coalition)`, so
/// the factor on a coalition does not depend on which other coalitions are
/// drawn or in what order.
pub fn draw_noise<T: Scalar>(
    spec: &NoiseSpec<T>,
    coalitions: impl IntoIterator<Item = Coalition>,
    seed: u64,
) -> NoiseAssignment<T> {
    let cumulative: Vec<f64> = spec
        .probs()
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p.as_f64();
            Some(*acc)
        })
        .collect();
    coalitions
        .into_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, c.bits()));
            let u: f64 = rng.gen();
            let j = draw_index(&cumulative, spec.probs(), u);
            (c, spec.support()[j].clone())
        })
        .collect()
}

fn draw_index<T: Scalar>(cumulative: &[f64], probs: &[T], u: f64) -> usize {
    let last_positive = probs
        .iter()
        .rposition(|p| *p > T::zero())
        .expect("probabilities sum to one");
    cumulative
        .iter()
        .zip(probs)
        .position(|(c, p)| u < *c && *p > T::zero())
        .unwrap_or(last_positive)
}

// splitmix64 finalizer over the seed and the coalition bits
fn mix(seed: u64, bits: u32) -> u64 {
    let mut z = seed ^ (u64::from(bits)).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Turns an additive-noise value table into a multiplicative one by
/// exponentiating: `V_i(S) = exp(v_i(S))`. Additive noise `c` on `v` becomes
/// the factor `exp(c)` on `V`.
pub fn additive_to_multiplicative(
    n: usize,
    coverage: Coverage,
    entries: impl IntoIterator<Item = (usize, Coalition, f64)>,
) -> Result<HedonicGame> {
    let mut out = Vec::new();
    for (agent, coalition, value) in entries {
        if !value.is_finite() {
            return Err(Error::InvalidGame(format!(
                "value {value} for agent {agent} in {coalition} is not finite"
            )));
        }
        let e = value.exp();
        if !e.is_finite() || e == 0.0 {
            return Err(Error::Overflow {
                agent,
                coalition,
                value,
            });
        }
        out.push((agent, coalition, e));
    }
    HedonicGame::new(n, coverage, out)
}
