//! Agreement probabilities between noisy and noise-free preferences.
//!
//! For a coalition `T` and a partition `π̃` stable in the observed game, the
//! event `M` asks that every `i ∈ T` still weakly prefers `π̃(i)` to `T` once
//! noise is removed; `f_T = P[M]`. For a blocking `T` the mirrored event `F`
//! asks that every `i ∈ T` still weakly prefers `T`; `h_T = P[F]`.
//!
//! Each quantity comes two ways: a closed form in the sizes of the index sets
//! `𝓘`/`𝓙`, and an oracle that enumerates every joint noise assignment on
//! `ℛ(T) ∪ {T}` and tests the event literally.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::game::{core_blocks, HedonicGame};
use crate::noise::NoiseSpec;
use crate::partition::Partition;
use crate::scalar::{sum, Scalar};

/// Largest number of joint assignments an oracle will enumerate.
pub const MAX_ORACLE_ASSIGNMENTS: u128 = 10_000_000;

/// One block of `ℛ(T)` with the extreme ratios `ṽ_i(π̃(i)) / ṽ_i(T)` over
/// the members of `T` that sit in it.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockRatios<T> {
    pub block: Coalition,
    pub min_ratio: T,
    pub max_ratio: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AgreementContext<T = f64> {
    pub t: Coalition,
    /// `ℛ(T)`, ordered by lowest member.
    pub blocks: Vec<BlockRatios<T>>,
    /// `T` is itself a block of `π̃`.
    pub degenerate: bool,
}

impl<T: Scalar> AgreementContext<T> {
    /// `|ℛ(T)|`.
    pub fn r_size(&self) -> usize {
        self.blocks.len()
    }

    /// Every member of `T` weakly prefers its block in the observed game.
    pub fn noisy_prefers_blocks(&self) -> bool {
        self.blocks.iter().all(|b| b.min_ratio >= T::one())
    }

    /// Every member of `T` weakly prefers `T` in the observed game.
    pub fn noisy_prefers_t(&self) -> bool {
        self.blocks.iter().all(|b| b.max_ratio <= T::one())
    }
}

pub fn build_context<T: Scalar>(
    noisy: &HedonicGame<T>,
    pi_tilde: &Partition,
    t: Coalition,
) -> Result<AgreementContext<T>> {
    t.validate(noisy.n())?;
    if pi_tilde.n() != noisy.n() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} agents, game has {}",
            pi_tilde.n(),
            noisy.n()
        )));
    }
    let mut by_block: BTreeMap<usize, BlockRatios<T>> = BTreeMap::new();
    for i in t.members() {
        let block = pi_tilde.block_of(i);
        let ratio = noisy.value(i, block)?.clone() / noisy.value(i, t)?.clone();
        by_block
            .entry(pi_tilde.block_index(i))
            .and_modify(|b| {
                if ratio < b.min_ratio {
                    b.min_ratio = ratio.clone();
                }
                if ratio > b.max_ratio {
                    b.max_ratio = ratio.clone();
                }
            })
            .or_insert_with(|| BlockRatios {
                block,
                min_ratio: ratio.clone(),
                max_ratio: ratio,
            });
    }
    let blocks: Vec<_> = by_block.into_values().collect();
    let degenerate = blocks.len() == 1 && blocks[0].block == t;
    Ok(AgreementContext { t, blocks, degenerate })
}

/// Sizes of `𝓘(α_r, α_s, T)` and `𝓙(α_r, α_s, T)` for one support pair with
/// `α_r > α_s` (indices into the support, zero-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexPair {
    pub r: usize,
    pub s: usize,
    pub i_size: usize,
    pub j_size: usize,
}

/// `𝓘` holds blocks whose every member satisfies `ṽ_i(π̃(i))/ṽ_i(T) ≥ α_r/α_s`;
/// `𝓙` holds blocks whose every member satisfies `ṽ_i(π̃(i))/ṽ_i(T) ≤ α_s/α_r`.
pub fn index_sets<T: Scalar>(spec: &NoiseSpec<T>, ctx: &AgreementContext<T>) -> Vec<IndexPair> {
    let a = spec.support();
    let mut out = Vec::new();
    for r in 0..a.len() {
        for s in 0..r {
            let up = a[r].clone() / a[s].clone();
            let down = a[s].clone() / a[r].clone();
            let i_size = ctx.blocks.iter().filter(|b| b.min_ratio >= up).count();
            let j_size = ctx.blocks.iter().filter(|b| b.max_ratio <= down).count();
            out.push(IndexPair { r, s, i_size, j_size });
        }
    }
    out
}

/// Closed form for `f_T`.
///
/// `Σ_{α_r>α_s} p_s^{|ℛ|−|𝓘|+1}((p_r+p_s)^{|𝓘|} − p_s^{|𝓘|}) + Σ_a p_a (Σ_{b≤a} p_b)^{|ℛ|}`,
/// or 1 when `T` is a block of `π̃`.
pub fn f_t_closed<T: Scalar>(spec: &NoiseSpec<T>, ctx: &AgreementContext<T>) -> T {
    if ctx.degenerate {
        return T::one();
    }
    let p = spec.probs();
    let k = ctx.r_size();
    let mut total = T::zero();
    for pair in index_sets(spec, ctx) {
        let (pr, ps) = (&p[pair.r], &p[pair.s]);
        let i = pair.i_size;
        total = total
            + ps.pow_n(k - i + 1) * ((pr.clone() + ps.clone()).pow_n(i) - ps.pow_n(i));
    }
    let mut prefix = T::zero();
    for pa in p {
        prefix = prefix + pa.clone();
        total = total + pa.clone() * prefix.pow_n(k);
    }
    total
}

/// Closed form for `h_T`, the mirror of [`f_t_closed`] with `𝓙`, `p_r`-leading
/// factors and suffix sums.
pub fn h_t_closed<T: Scalar>(spec: &NoiseSpec<T>, ctx: &AgreementContext<T>) -> T {
    if ctx.degenerate {
        return T::one();
    }
    let p = spec.probs();
    let k = ctx.r_size();
    let mut total = T::zero();
    for pair in index_sets(spec, ctx) {
        let (pr, ps) = (&p[pair.r], &p[pair.s]);
        let j = pair.j_size;
        total = total
            + pr.pow_n(k - j + 1) * ((pr.clone() + ps.clone()).pow_n(j) - pr.pow_n(j));
    }
    let mut suffix = T::zero();
    for pa in p.iter().rev() {
        suffix = suffix + pa.clone();
        total = total + pa.clone() * suffix.pow_n(k);
    }
    total
}

/// `f_T` under `{1, α}` noise with `P[α] = p`: `p + (1−p)^{|ℛ|+1−|𝓘|}`.
pub fn f_t_two_support<T: Scalar>(p: &T, r_size: usize, i_size: usize) -> T {
    p.clone() + (T::one() - p.clone()).pow_n(r_size + 1 - i_size)
}

/// `h_T` under `{1, α}` noise with `P[α] = p`: `(1−p) + p^{|ℛ|+1−|𝓙|}`.
pub fn h_t_two_support<T: Scalar>(p: &T, r_size: usize, j_size: usize) -> T {
    T::one() - p.clone() + p.pow_n(r_size + 1 - j_size)
}

/// Whether the closed forms are guaranteed to equal the event probabilities
/// for this context, as `(f, h)`.
///
/// The pairwise sums count an assignment once per support pair it touches, so
/// they are exact only when at most one pair contributes: for `f`, only pairs
/// against the smallest support value may have a non-empty `𝓘`, and for at
/// most one `r`; for `h`, only pairs against the largest support value may
/// have a non-empty `𝓙`, and for at most one `s`.
pub fn closed_form_provably_exact<T: Scalar>(
    spec: &NoiseSpec<T>,
    ctx: &AgreementContext<T>,
) -> (bool, bool) {
    if ctx.degenerate || ctx.r_size() <= 1 {
        return (true, true);
    }
    let top = spec.len() - 1;
    let pairs = index_sets(spec, ctx);
    let f_active: Vec<_> = pairs.iter().filter(|p| p.i_size > 0).collect();
    let h_active: Vec<_> = pairs.iter().filter(|p| p.j_size > 0).collect();
    let f_ok = f_active.len() <= 1 && f_active.iter().all(|p| p.s == 0);
    let h_ok = h_active.len() <= 1 && h_active.iter().all(|p| p.r == top);
    (f_ok, h_ok)
}

/// The event a noise assignment is tested against.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgreementEvent {
    /// Blocks stay weakly preferred to `T`.
    M,
    /// `T` stays weakly preferred to the blocks.
    F,
}

struct OracleRow<T> {
    block: usize,
    noisy_block: T,
    noisy_t: T,
}

/// `P[M]` by enumerating every assignment of support values to `ℛ(T) ∪ {T}`.
pub fn f_t_oracle<T: Scalar>(
    noisy: &HedonicGame<T>,
    pi_tilde: &Partition,
    t: Coalition,
    spec: &NoiseSpec<T>,
) -> Result<T> {
    event_oracle(noisy, pi_tilde, t, spec, AgreementEvent::M)
}

/// `P[F]` by enumerating every assignment of support values to `ℛ(T) ∪ {T}`.
pub fn h_t_oracle<T: Scalar>(
    noisy: &HedonicGame<T>,
    pi_tilde: &Partition,
    t: Coalition,
    spec: &NoiseSpec<T>,
) -> Result<T> {
    event_oracle(noisy, pi_tilde, t, spec, AgreementEvent::F)
}

pub fn event_oracle<T: Scalar>(
    noisy: &HedonicGame<T>,
    pi_tilde: &Partition,
    t: Coalition,
    spec: &NoiseSpec<T>,
    event: AgreementEvent,
) -> Result<T> {
    t.validate(noisy.n())?;
    // slot 0 is T, then one slot per distinct block that is not T itself
    let mut slots: Vec<Coalition> = vec![t];
    let mut rows = Vec::new();
    for i in t.members() {
        let block = pi_tilde.block_of(i);
        let slot = match slots.iter().position(|&c| c == block) {
            Some(k) => k,
            None => {
                slots.push(block);
                slots.len() - 1
            }
        };
        rows.push(OracleRow {
            block: slot,
            noisy_block: noisy.value(i, block)?.clone(),
            noisy_t: noisy.value(i, t)?.clone(),
        });
    }
    let support = spec.support();
    enumerate_assignments(spec, slots.len(), |idx| {
        let at = &support[idx[0]];
        rows.iter().all(|row| {
            let ab = &support[idx[row.block]];
            let free_block = row.noisy_block.clone() / ab.clone();
            let free_t = row.noisy_t.clone() / at.clone();
            match event {
                AgreementEvent::M => free_block >= free_t && row.noisy_block >= row.noisy_t,
                AgreementEvent::F => free_t >= free_block && row.noisy_t >= row.noisy_block,
            }
        })
    })
}

/// Sums the probability of every joint assignment of support indices to
/// `slots` coalitions for which `accept` holds.
///
/// Work is split into fixed chunks whose partial sums are added in order, so
/// floating-point results do not depend on thread scheduling.
pub fn enumerate_assignments<T: Scalar>(
    spec: &NoiseSpec<T>,
    slots: usize,
    accept: impl Fn(&[usize]) -> bool + Sync,
) -> Result<T> {
    let l = spec.len() as u128;
    let total = l
        .checked_pow(slots as u32)
        .filter(|&s| s <= MAX_ORACLE_ASSIGNMENTS)
        .ok_or(Error::EnumerationTooLarge {
            size: l.saturating_pow(slots as u32),
            max: MAX_ORACLE_ASSIGNMENTS,
        })? as usize;
    let probs = spec.probs();
    let l = l as usize;
    const CHUNK: usize = 4096;
    let chunks = total.div_ceil(CHUNK);
    let partial: Vec<T> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut idx = vec![0usize; slots];
            let mut acc = T::zero();
            for code in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let mut rest = code;
                for x in idx.iter_mut() {
                    *x = rest % l;
                    rest /= l;
                }
                if accept(&idx) {
                    let w = idx
                        .iter()
                        .fold(T::one(), |w, &j| w * probs[j].clone());
                    acc = acc + w;
                }
            }
            acc
        })
        .collect();
    Ok(sum(partial))
}

/// `ε = 1 − (1 − ε̃)·agreement`.
pub fn prediction_epsilon<T: Scalar>(eps_tilde: T, agreement: T) -> T {
    T::one() - (T::one() - eps_tilde) * agreement
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// `π̃` is stable against `T`; threshold is ζ and agreement is `f_T`.
    Stable,
    /// `T` blocks `π̃`; threshold is η and agreement is `h_T`.
    NonStable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub mode: Mode,
    pub eps_tilde: f64,
    pub agreement: f64,
    pub threshold: f64,
    /// Whether `agreement ≥ threshold`.
    pub verdict: bool,
    /// `1 − (1 − ε̃)·threshold`.
    pub epsilon: f64,
}

pub fn robustness_verdict(eps_tilde: f64, agreement: f64, threshold: f64, mode: Mode) -> PredictionReport {
    PredictionReport {
        mode,
        eps_tilde,
        agreement,
        threshold,
        verdict: agreement >= threshold,
        epsilon: prediction_epsilon(eps_tilde, threshold),
    }
}

/// Everything known about one coalition: index-set sizes, closed forms,
/// oracles and the resulting verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoalitionReport {
    pub coalition: Coalition,
    #[serde(rename = "R_size")]
    pub r_size: usize,
    #[serde(rename = "I_sizes")]
    pub i_sizes: BTreeMap<String, usize>,
    #[serde(rename = "J_sizes")]
    pub j_sizes: BTreeMap<String, usize>,
    pub f_closed: f64,
    pub f_oracle: f64,
    pub h_closed: f64,
    pub h_oracle: f64,
    pub mode: Mode,
    pub epsilon: f64,
    pub verdict: bool,
}

/// Builds the report for `T`. The mode follows the observed game: if `T`
/// core-blocks `π̃` the verdict uses `h_T` against `eta`, otherwise `f_T`
/// against `zeta`. Verdicts use the oracle values.
pub fn coalition_report(
    noisy: &HedonicGame,
    pi_tilde: &Partition,
    t: Coalition,
    spec: &NoiseSpec,
    eps_tilde: f64,
    zeta: f64,
    eta: f64,
) -> Result<CoalitionReport> {
    let ctx = build_context(noisy, pi_tilde, t)?;
    let pairs = index_sets(spec, &ctx);
    let key = |p: &IndexPair| format!("{},{}", p.r + 1, p.s + 1);
    let f_oracle = f_t_oracle(noisy, pi_tilde, t, spec)?;
    let h_oracle = h_t_oracle(noisy, pi_tilde, t, spec)?;
    let blocking = !ctx.degenerate && core_blocks(noisy, pi_tilde, t)?;
    let verdict = if blocking {
        robustness_verdict(eps_tilde, h_oracle, eta, Mode::NonStable)
    } else {
        robustness_verdict(eps_tilde, f_oracle, zeta, Mode::Stable)
    };
    Ok(CoalitionReport {
        coalition: t,
        r_size: ctx.r_size(),
        i_sizes: pairs.iter().map(|p| (key(p), p.i_size)).collect(),
        j_sizes: pairs.iter().map(|p| (key(p), p.j_size)).collect(),
        f_closed: f_t_closed(spec, &ctx),
        f_oracle,
        h_closed: h_t_closed(spec, &ctx),
        h_oracle,
        mode: verdict.mode,
        epsilon: verdict.epsilon,
        verdict: verdict.verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::game::Coverage;
    use crate::scalar::{ratio, Rational};

    fn c(m: &[usize]) -> Coalition {
        Coalition::from_members(m.iter().copied()).unwrap()
    }

    /// `k` blocks `{i, k+i}` and `T = {0, .., k-1}`, so `ℛ(T)` has one block
    /// per member of `T` and agent `i`'s ratio `ṽ_i(π̃(i)) / ṽ_i(T)` is `ratios[i]`.
    fn singleton_fixture(ratios: &[Rational]) -> (HedonicGame<Rational>, Partition, Coalition) {
        let k = ratios.len();
        let t = Coalition::grand(k);
        let mut entries = Vec::new();
        let mut blocks = Vec::new();
        for (i, r) in ratios.iter().enumerate() {
            let block = c(&[i, k + i]);
            blocks.push(block);
            entries.push((i, block, r.clone()));
            entries.push((i, t, ratio(1, 1)));
        }
        let g = HedonicGame::new(2 * k, Coverage::Partial, entries).unwrap();
        (g, Partition::new(2 * k, blocks).unwrap(), t)
    }

    #[test]
    fn context_on_motivating_game() {
        let g = fixtures::motivating_noisy();
        let pi = Partition::new(3, [c(&[0, 1]), c(&[2])]).unwrap();
        let ctx = build_context(&g, &pi, c(&[0, 1])).unwrap();
        assert!(ctx.degenerate);
        assert_eq!(ctx.r_size(), 1);
        let ctx = build_context(&g, &pi, c(&[0, 2])).unwrap();
        assert!(!ctx.degenerate);
        assert_eq!(
            ctx.blocks.iter().map(|b| b.block).collect::<Vec<_>>(),
            vec![c(&[0, 1]), c(&[2])]
        );
        let ctx = build_context(&g, &Partition::singletons(3), Coalition::grand(3)).unwrap();
        assert_eq!(ctx.r_size(), 3);
    }

    #[test]
    fn context_takes_min_and_max_over_block_members() {
        let g = fixtures::motivating_noisy();
        let pi = Partition::new(3, [c(&[0, 1]), c(&[2])]).unwrap();
        let ctx = build_context(&g, &pi, Coalition::grand(3)).unwrap();
        // agents 0 and 1 both rank {0,1} at 4 and N at 2
        assert_eq!(ctx.blocks[0].min_ratio, 2.0);
        assert_eq!(ctx.blocks[1].min_ratio, 0.25);
    }

    #[test]
    fn two_support_examples() {
        let spec = NoiseSpec::two_point(ratio(2, 1), ratio(1, 2)).unwrap();
        let ctx = AgreementContext {
            t: c(&[0]),
            blocks: vec![BlockRatios { block: c(&[1]), min_ratio: ratio(3, 2), max_ratio: ratio(3, 2) }],
            degenerate: false,
        };
        assert_eq!(f_t_closed(&spec, &ctx), ratio(3, 4));
        let degenerate = AgreementContext { degenerate: true, ..ctx.clone() };
        assert_eq!(f_t_closed(&spec, &degenerate), ratio(1, 1));
        assert_eq!(h_t_closed(&spec, &degenerate), ratio(1, 1));
        assert_eq!(f_t_two_support(&ratio(1, 2), 2, 1), ratio(3, 4));
        assert_eq!(h_t_two_support(&ratio(1, 2), 1, 0), ratio(3, 4));
        for p in [ratio(0, 1), ratio(1, 1)] {
            for k in 1..4 {
                for i in 0..=k {
                    assert_eq!(f_t_two_support(&p, k, i), ratio(1, 1));
                    assert_eq!(h_t_two_support(&p, k, i), ratio(1, 1));
                }
            }
        }
    }

    #[test]
    fn closed_forms_reduce_to_two_support_formulas() {
        for num in 1..10 {
            let p = ratio(num, 10);
            let spec = NoiseSpec::two_point(ratio(3, 1), p.clone()).unwrap();
            for k in 1..=4usize {
                for i in 0..=k {
                    let mut rs = vec![ratio(4, 1); i];
                    rs.resize(k, ratio(3, 2));
                    let (g, pi, t) = singleton_fixture(&rs);
                    let ctx = build_context(&g, &pi, t).unwrap();
                    assert_eq!(f_t_closed(&spec, &ctx), f_t_two_support(&p, k, i));
                    assert_eq!(f_t_oracle(&g, &pi, t, &spec).unwrap(), f_t_two_support(&p, k, i));
                }
            }
        }
    }

    #[test]
    fn h_uses_the_mirrored_index_set() {
        let p = ratio(3, 10);
        let spec = NoiseSpec::two_point(ratio(3, 1), p.clone()).unwrap();
        // two blocks: ratio 1/4 ≤ 1/3 lands in 𝓙, ratio 1/2 does not
        let (g, pi, t) = singleton_fixture(&[ratio(1, 4), ratio(1, 2)]);
        let ctx = build_context(&g, &pi, t).unwrap();
        assert_eq!(index_sets(&spec, &ctx)[0].j_size, 1);
        let oracle = h_t_oracle(&g, &pi, t, &spec).unwrap();
        assert_eq!(oracle, h_t_two_support(&p, 2, 1));
        assert_eq!(h_t_closed(&spec, &ctx), oracle);
    }

    #[test]
    fn oracle_is_zero_when_noisy_condition_fails() {
        let spec = NoiseSpec::two_point(ratio(2, 1), ratio(1, 2)).unwrap();
        let (g, pi, t) = singleton_fixture(&[ratio(1, 2), ratio(3, 1)]);
        assert_eq!(f_t_oracle(&g, &pi, t, &spec).unwrap(), ratio(0, 1));
    }

    #[test]
    fn degenerate_oracle_is_one() {
        let g = fixtures::motivating_noisy().to_exact();
        let pi = Partition::new(3, [c(&[0, 1]), c(&[2])]).unwrap();
        let spec = NoiseSpec::two_point(ratio(2, 1), ratio(1, 3)).unwrap();
        assert_eq!(f_t_oracle(&g, &pi, c(&[0, 1]), &spec).unwrap(), ratio(1, 1));
        assert_eq!(h_t_oracle(&g, &pi, c(&[0, 1]), &spec).unwrap(), ratio(1, 1));
    }

    #[test]
    fn assignment_mass_is_one() {
        let spec = NoiseSpec::new(
            vec![ratio(1, 2), ratio(1, 1), ratio(2, 1)],
            vec![ratio(1, 6), ratio(1, 3), ratio(1, 2)],
        )
        .unwrap();
        assert_eq!(enumerate_assignments(&spec, 4, |_| true).unwrap(), ratio(1, 1));
    }

    #[test]
    fn oracle_refuses_huge_enumerations() {
        let spec = NoiseSpec::two_point(2.0, 0.5).unwrap();
        assert!(matches!(
            enumerate_assignments(&spec, 30, |_| true),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn three_support_undercounts_mixed_assignments() {
        let third = ratio(1, 3);
        let spec = NoiseSpec::new(
            vec![ratio(1, 2), ratio(1, 1), ratio(2, 1)],
            vec![third.clone(), third.clone(), third],
        )
        .unwrap();
        // ratios of 8 clear every α_r/α_s, so every 𝓘 is all of ℛ and M is sure
        let (g, pi, t) = singleton_fixture(&[ratio(8, 1), ratio(8, 1)]);
        let ctx = build_context(&g, &pi, t).unwrap();
        assert_eq!(f_t_oracle(&g, &pi, t, &spec).unwrap(), ratio(1, 1));
        assert_eq!(f_t_closed(&spec, &ctx), ratio(23, 27));
        assert_eq!(closed_form_provably_exact(&spec, &ctx).0, false);
    }

    #[test]
    fn three_support_exact_class_matches_oracle() {
        let spec = NoiseSpec::new(
            vec![ratio(1, 2), ratio(1, 1), ratio(2, 1)],
            vec![ratio(1, 5), ratio(1, 2), ratio(3, 10)],
        )
        .unwrap();
        // a ratio of 3/2 clears no α_r/α_s, so every 𝓘 is empty
        let (g, pi, t) = singleton_fixture(&[ratio(3, 2), ratio(3, 2), ratio(3, 2)]);
        let ctx = build_context(&g, &pi, t).unwrap();
        assert!(closed_form_provably_exact(&spec, &ctx).0);
        assert_eq!(f_t_closed(&spec, &ctx), f_t_oracle(&g, &pi, t, &spec).unwrap());
    }

    #[test]
    fn epsilon_and_verdicts() {
        assert!((prediction_epsilon(0.3, 1.0) - 0.3_f64).abs() < 1e-15);
        assert_eq!(prediction_epsilon(ratio(0, 1), ratio(9, 10)), ratio(1, 10));
        assert_eq!(prediction_epsilon(ratio(1, 10), ratio(9, 10)), ratio(19, 100));
        let r = robustness_verdict(0.2, 1.0, 1.0, Mode::Stable);
        assert!(r.verdict);
        assert!((r.epsilon - 0.2).abs() < 1e-15);
        assert!(!robustness_verdict(0.1, 0.75, 0.9, Mode::Stable).verdict);
        let r = robustness_verdict(0.05, 0.95, 0.9, Mode::NonStable);
        assert!((r.epsilon - 0.145).abs() < 1e-12);
    }

    #[test]
    fn report_fields() {
        let g = fixtures::paired_top_responsive();
        let pi = Partition::new(4, [c(&[0, 1]), c(&[2, 3])]).unwrap();
        let spec = NoiseSpec::two_point(3.0, 0.5).unwrap();
        let r = coalition_report(&g, &pi, c(&[0, 2]), &spec, 0.1, 0.9, 0.9).unwrap();
        assert_eq!(r.r_size, 2);
        assert_eq!(r.mode, Mode::Stable);
        assert_eq!(r.i_sizes["2,1"], 0);
        assert!((r.f_closed - 0.625).abs() < 1e-12);
        assert!((r.f_closed - r.f_oracle).abs() < 1e-12);
        assert!(!r.verdict);
        let json = serde_json::to_value(&r).unwrap();
        for key in [
            "coalition", "R_size", "I_sizes", "J_sizes", "f_closed", "f_oracle", "h_closed",
            "h_oracle", "epsilon", "verdict",
        ] {
            assert!(json.get(key).is_some(), "{key}");
        }
        let r = coalition_report(&g, &pi, c(&[0, 1]), &spec, 0.1, 0.9, 0.9).unwrap();
        assert_eq!((r.f_closed, r.h_closed, r.f_oracle, r.h_oracle), (1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn motivating_report_exposes_noisy_preference_for_t() {
        // agent 2 ranks its own block last, so it prefers {0,2} in the noisy
        // game and the stable-side event is impossible
        let g = fixtures::motivating_noisy();
        let pi = Partition::new(3, [c(&[0, 1]), c(&[2])]).unwrap();
        let spec = NoiseSpec::two_point(2.0, 0.5).unwrap();
        let r = coalition_report(&g, &pi, c(&[0, 2]), &spec, 0.1, 0.9, 0.9).unwrap();
        assert_eq!(r.r_size, 2);
        assert_eq!(r.mode, Mode::Stable);
        assert_eq!(r.f_oracle, 0.0);
        assert!(r.f_closed > 0.0);
    }
}
