//! Two agents with complete information: closed-form prediction probabilities
//! and exhaustive case enumeration over the three coalitions `{1}`, `{2}`,
//! `{1,2}`.
//!
//! Agents are indexed 0 and 1 internally; "agent 1" and "agent 2" in names
//! and docs refer to them in that order.

use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{find_core_partition, Coverage, HedonicGame};
use crate::noise::NoiseSpec;
use crate::partition::Partition;
use crate::regimes::{superlevel_region_1d, Region1D};
use crate::scalar::Scalar;

/// Largest number of joint assignments [`enumerate_cases`] will visit.
pub const MAX_CASES: usize = 1_000_000;

/// Observed values of a two-agent game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoAgentGame<T = f64> {
    /// `ṽ_1({1})`
    pub v1_single: T,
    /// `ṽ_2({2})`
    pub v2_single: T,
    /// `ṽ_1({1,2})`
    pub v1_pair: T,
    /// `ṽ_2({1,2})`
    pub v2_pair: T,
}

fn pair() -> Coalition {
    Coalition::grand(2)
}

impl<T: Scalar> TwoAgentGame<T> {
    pub fn new(v1_single: T, v2_single: T, v1_pair: T, v2_pair: T) -> Result<Self> {
        let g = TwoAgentGame { v1_single, v2_single, v1_pair, v2_pair };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        for v in [&self.v1_single, &self.v2_single, &self.v1_pair, &self.v2_pair] {
            if !v.is_finite() || *v <= T::zero() {
                return Err(Error::InvalidGame(format!("value {:?} is not positive", v)));
            }
        }
        if self.v1_single == self.v1_pair {
            return Err(Error::TieEncountered { agent: 0, first: Coalition::singleton(0), second: pair() });
        }
        if self.v2_single == self.v2_pair {
            return Err(Error::TieEncountered { agent: 1, first: Coalition::singleton(1), second: pair() });
        }
        Ok(())
    }

    /// `ṽ_1(12)/ṽ_1(1)`.
    pub fn r1(&self) -> T {
        self.v1_pair.clone() / self.v1_single.clone()
    }

    /// `ṽ_2(12)/ṽ_2(2)`.
    pub fn r2(&self) -> T {
        self.v2_pair.clone() / self.v2_single.clone()
    }

    /// `r̄ = max(r1, r2)`.
    pub fn r_bar(&self) -> T {
        let (a, b) = (self.r1(), self.r2());
        if a >= b { a } else { b }
    }

    /// `r_ = min(r1, r2)`.
    pub fn r_under(&self) -> T {
        let (a, b) = (self.r1(), self.r2());
        if a <= b { a } else { b }
    }

    /// 1: both prefer `{1,2}`; 2: both prefer their singleton; 3: agent 1
    /// prefers its singleton and agent 2 the pair; 4: the reverse.
    pub fn game_id(&self) -> u8 {
        let one = self.v1_pair > self.v1_single;
        let two = self.v2_pair > self.v2_single;
        match (one, two) {
            (true, true) => 1,
            (false, false) => 2,
            (false, true) => 3,
            (true, false) => 4,
        }
    }

    pub fn to_hedonic(&self) -> HedonicGame<T> {
        HedonicGame::new(
            2,
            Coverage::Full,
            [
                (0, Coalition::singleton(0), self.v1_single.clone()),
                (1, Coalition::singleton(1), self.v2_single.clone()),
                (0, pair(), self.v1_pair.clone()),
                (1, pair(), self.v2_pair.clone()),
            ],
        )
        .expect("validated values")
    }

    /// The core partition of the observed game (unique when there are no ties).
    pub fn noisy_core(&self) -> Partition {
        find_core_partition(&self.to_hedonic())
            .expect("two agents fit the exact solver")
            .expect("two-agent games without ties have a core")
    }
}

/// The piecewise prediction-probability curves under `{1, α}` noise.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredictionCurve {
    /// `1 − p(1 − p²)`
    GrandCubic,
    /// `1 − p(1 − p)`
    Quadratic,
    /// `1 − p²(1 − p)`
    SingletonCubic,
    One,
}

impl PredictionCurve {
    pub fn eval<T: Scalar>(self, p: &T) -> T {
        let one = T::one();
        let p = p.clone();
        match self {
            PredictionCurve::GrandCubic => one.clone() - p.clone() * (one - p.clone() * p),
            PredictionCurve::Quadratic => one.clone() - p.clone() * (one - p),
            PredictionCurve::SingletonCubic => one.clone() - p.clone() * p.clone() * (one - p),
            PredictionCurve::One => one,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PredictionCurve::GrandCubic => "grand-cubic",
            PredictionCurve::Quadratic => "quadratic",
            PredictionCurve::SingletonCubic => "singleton-cubic",
            PredictionCurve::One => "one",
        }
    }
}

/// The named branches of each game, in the order they are usually listed.
pub fn branches(game_id: u8) -> Result<&'static [(&'static str, PredictionCurve)]> {
    use PredictionCurve::*;
    Ok(match game_id {
        1 => &[
            ("alpha_ge_rbar", GrandCubic),
            ("rlow_le_alpha_lt_rbar", Quadratic),
            ("alpha_lt_rlow", One),
        ],
        2 => &[("inv_alpha_lt_rlow", SingletonCubic), ("inv_alpha_ge_rlow", One)],
        3 => &[("inv_alpha_lt_r1", Quadratic), ("inv_alpha_ge_r1", One)],
        4 => &[("inv_alpha_lt_r2", Quadratic), ("inv_alpha_ge_r2", One)],
        other => return Err(Error::UnsupportedGame(other)),
    })
}

/// The branch that applies to `game` under `{1, α}` noise.
pub fn curve_2support<T: Scalar>(game: &TwoAgentGame<T>, alpha: &T) -> Result<PredictionCurve> {
    if *alpha <= T::one() {
        return Err(Error::InvalidAlpha(alpha.as_f64()));
    }
    let inv = T::one() / alpha.clone();
    Ok(match game.game_id() {
        1 if *alpha >= game.r_bar() => PredictionCurve::GrandCubic,
        1 if *alpha >= game.r_under() => PredictionCurve::Quadratic,
        1 => PredictionCurve::One,
        2 if inv < game.r_under() => PredictionCurve::SingletonCubic,
        3 if inv < game.r1() => PredictionCurve::Quadratic,
        4 if inv < game.r2() => PredictionCurve::Quadratic,
        _ => PredictionCurve::One,
    })
}

/// `P[π = π̃]` under `{1, α}` noise with `P[α] = p`.
pub fn predict_prob_2support<T: Scalar>(game: &TwoAgentGame<T>, p: &T, alpha: &T) -> Result<T> {
    if *p < T::zero() || *p > T::one() {
        return Err(Error::InvalidNoiseSpec(format!("probability {:?} outside [0, 1]", p)));
    }
    Ok(curve_2support(game, alpha)?.eval(p))
}

/// `{α_2, 1, α_1}` noise with `α_2 < 1 < α_1`, `P[α_1] = p1`, `P[α_2] = p2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeSupportSpec<T = f64> {
    pub alpha1: T,
    pub alpha2: T,
    pub p1: T,
    pub p2: T,
}

impl<T: Scalar> ThreeSupportSpec<T> {
    pub fn new(alpha1: T, alpha2: T, p1: T, p2: T) -> Result<Self> {
        let spec = ThreeSupportSpec { alpha1, alpha2, p1, p2 };
        spec.to_noise_spec()?;
        Ok(spec)
    }

    pub fn to_noise_spec(&self) -> Result<NoiseSpec<T>> {
        NoiseSpec::three_point(self.alpha1.clone(), self.alpha2.clone(), self.p1.clone(), self.p2.clone())
    }
}

/// `g(p1, p2) = p2 + (1 − p1 − p2)(1 − p2)² + p1³`.
pub fn g<T: Scalar>(p1: &T, p2: &T) -> T {
    let one = T::one();
    let rest = one.clone() - p1.clone() - p2.clone();
    p2.clone() + rest * (one - p2.clone()).pow_n(2) + p1.pow_n(3)
}

/// `P[π = π̃]` for game 1 under three-point noise: `g(p1, p2)` when every
/// support ratio reaches `r̄`, 1 when none reaches `r_`, and the enumerated
/// value otherwise.
pub fn predict_prob_3support<T: Scalar>(game: &TwoAgentGame<T>, spec: &ThreeSupportSpec<T>) -> Result<T> {
    let id = game.game_id();
    if id != 1 {
        return Err(Error::UnsupportedGame(id));
    }
    let ratios = [
        spec.alpha1.clone(),
        T::one() / spec.alpha2.clone(),
        spec.alpha1.clone() / spec.alpha2.clone(),
    ];
    let (hi, lo) = (game.r_bar(), game.r_under());
    if ratios.iter().all(|r| *r >= hi) {
        return Ok(g(&spec.p1, &spec.p2));
    }
    if ratios.iter().all(|r| *r < lo) {
        return Ok(T::one());
    }
    Ok(enumerate_cases(game, &spec.to_noise_spec()?)?.agreement())
}

/// One joint assignment to `({1}, {2}, {1,2})`.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseRow<T> {
    /// Case number, 1-based.
    pub case: usize,
    pub alpha_1: T,
    pub alpha_2: T,
    pub alpha_12: T,
    pub probability: T,
    /// Core partition of the de-noised game.
    pub partition: Partition,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseTable<T> {
    pub noisy_partition: Partition,
    pub rows: Vec<CaseRow<T>>,
}

impl<T: Scalar> CaseTable<T> {
    /// `P[π = π̃]`.
    pub fn agreement(&self) -> T {
        crate::scalar::sum(self.rows.iter().filter(|r| r.agrees).map(|r| r.probability.clone()))
    }

    pub fn total_probability(&self) -> T {
        crate::scalar::sum(self.rows.iter().map(|r| r.probability.clone()))
    }

    pub fn agreeing_cases(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| r.agrees).map(|r| r.case).collect()
    }
}

impl CaseTable<f64> {
    /// CSV with columns `alpha_1_coal, alpha_2_coal, alpha_12_coal,
    /// probability, partition, agrees`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidParams(e.to_string());
        w.write_record(["alpha_1_coal", "alpha_2_coal", "alpha_12_coal", "probability", "partition", "agrees"])
            .map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.alpha_1.to_string(),
                r.alpha_2.to_string(),
                r.alpha_12.to_string(),
                r.probability.to_string(),
                r.partition.to_string(),
                r.agrees.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidParams(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

// Support indices (α({1}), α({2}), α({1,2})) in the order of the standard
// case list, for supports written as {1, α_1, α_2}: 0 is the factor 1,
// 1 is α_1 and 2 is α_2. The two-point list is the first eight entries.
const CASE_ORDER: [(u8, u8, u8); 27] = [
    (0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1),
    (0, 0, 2), (0, 2, 0), (2, 0, 0), (0, 2, 2), (2, 0, 2), (2, 2, 0),
    (0, 1, 2), (0, 2, 1), (1, 0, 2), (2, 0, 1), (1, 2, 0), (2, 1, 0),
    (1, 1, 2), (1, 2, 1), (1, 2, 2), (2, 1, 1), (2, 1, 2), (2, 2, 1), (2, 2, 2),
];

// Maps symbolic labels {1, α_1, α_2} to positions in an increasing support,
// when the support has one of the two standard shapes.
fn standard_labels<T: Scalar>(spec: &NoiseSpec<T>) -> Option<Vec<usize>> {
    let s = spec.support();
    match s.len() {
        2 if s[0].is_one() => Some(vec![0, 1]),
        3 if s[1].is_one() => Some(vec![1, 2, 0]),
        _ => None,
    }
}

/// Every joint assignment of support values to `{1}`, `{2}`, `{1,2}` with its
/// probability and the core partition of the de-noised game.
///
/// Supports shaped `{1, α}` or `{α_2, 1, α_1}` are listed in the standard
/// case order; any other support is listed in mixed-radix order.
pub fn enumerate_cases<T: Scalar>(game: &TwoAgentGame<T>, spec: &NoiseSpec<T>) -> Result<CaseTable<T>> {
    game.validate()?;
    let l = spec.len();
    if l.pow(3) > MAX_CASES {
        return Err(Error::EnumerationTooLarge { size: (l as u128).pow(3), max: MAX_CASES as u128 });
    }
    let order: Vec<(usize, usize, usize)> = match standard_labels(spec) {
        Some(label) => CASE_ORDER[..l.pow(3)]
            .iter()
            .map(|&(a, b, c)| (label[a as usize], label[b as usize], label[c as usize]))
            .collect(),
        None => (0..l.pow(3)).map(|k| (k % l, (k / l) % l, k / (l * l))).collect(),
    };
    let noisy_partition = game.noisy_core();
    let (a, p) = (spec.support(), spec.probs());
    let mut rows = Vec::with_capacity(order.len());
    for (k, &(i1, i2, i12)) in order.iter().enumerate() {
        let free = TwoAgentGame {
            v1_single: game.v1_single.clone() / a[i1].clone(),
            v2_single: game.v2_single.clone() / a[i2].clone(),
            v1_pair: game.v1_pair.clone() / a[i12].clone(),
            v2_pair: game.v2_pair.clone() / a[i12].clone(),
        };
        free.validate()?;
        let partition = free.noisy_core();
        rows.push(CaseRow {
            case: k + 1,
            alpha_1: a[i1].clone(),
            alpha_2: a[i2].clone(),
            alpha_12: a[i12].clone(),
            probability: p[i1].clone() * p[i2].clone() * p[i12].clone(),
            agrees: partition == noisy_partition,
            partition,
        });
    }
    Ok(CaseTable { noisy_partition, rows })
}

/// Superlevel set `{p : curve(p) ≥ ζ}` of one branch.
pub fn regime_1d_two_agent(curve: PredictionCurve, zeta: f64, resolution: usize) -> Region1D {
    superlevel_region_1d(|p| curve.eval(&p), zeta, resolution)
}
