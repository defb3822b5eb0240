use thiserror::Error;

use crate::coalition::Coalition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no value stored for agent {agent} in coalition {coalition}")]
    MissingValue { agent: usize, coalition: Coalition },

    #[error("agent {agent} is not a member of coalition {coalition}")]
    AgentNotMember { agent: usize, coalition: Coalition },

    #[error("operation requires a full-coverage game")]
    CoverageInsufficient,

    #[error("instance has {n} agents, limit for this operation is {max}")]
    InstanceTooLarge { n: usize, max: usize },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid coalition: {0}")]
    InvalidCoalition(String),

    #[error("invalid noise specification: {0}")]
    InvalidNoiseSpec(String),

    #[error("invalid sampling specification: {0}")]
    InvalidSamplingSpec(String),

    #[error("no noise value assigned to coalition {0}")]
    MissingAssignment(Coalition),

    #[error("exp({value}) overflows for agent {agent} in coalition {coalition}")]
    Overflow {
        agent: usize,
        coalition: Coalition,
        value: f64,
    },

    #[error("enumeration needs {size} assignments, limit is {max}")]
    EnumerationTooLarge { size: u128, max: u128 },

    #[error("sample contains no observations")]
    EmptySample,

    #[error("the core is empty")]
    EmptyCore,

    #[error("closed form is only stated for game 1, got game {0}")]
    UnsupportedGame(u8),

    #[error("de-noised values tie for agent {agent} between {first} and {second}")]
    TieEncountered {
        agent: usize,
        first: Coalition,
        second: Coalition,
    },

    #[error("finite-difference stencil at ({p1}, {p2}) with step {step} leaves the domain")]
    BoundaryPoint { p1: f64, p2: f64, step: f64 },

    #[error("noise value must exceed one, got {0}")]
    InvalidAlpha(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}
