//! Noise robustness of core-stable partitions in hedonic games.
//!
//! Observed values are `ṽ_i(S) = α(S)·v_i(S)` with one random factor per
//! coalition. Given a partition that is stable in the observed game, this
//! crate computes how likely the stability verdict carries over to the
//! unknown noise-free game, both through closed forms and through exhaustive
//! enumeration of noise assignments.

pub mod agreement;
pub mod cli;
pub mod coalition;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod noise;
pub mod pac;
pub mod partition;
pub mod regimes;
pub mod sampling;
pub mod scalar;
pub mod two_agent;

pub use coalition::Coalition;
pub use error::{Error, Result};
pub use game::{core_blocks, find_core_partition, is_core_stable, prefers, Coverage, HedonicGame};
pub use noise::{NoiseAssignment, NoiseSpec};
pub use partition::Partition;
pub use sampling::{sample_coalitions, SamplingSpec};
pub use scalar::{Rational, Scalar};
