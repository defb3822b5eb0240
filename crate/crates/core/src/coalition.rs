use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest agent count representable by a [`Coalition`].
pub const MAX_AGENTS: usize = 32;

/// A set of agents stored as a bitmask; bit `i` is agent `i`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Coalition(u32);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    pub fn from_bits(bits: u32) -> Self {
        Coalition(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(agent: usize) -> Self {
        assert!(agent < MAX_AGENTS, "agent index {agent} out of range");
        Coalition(1 << agent)
    }

    /// The grand coalition `{0, .., n-1}`.
    pub fn grand(n: usize) -> Self {
        assert!(n <= MAX_AGENTS);
        if n == MAX_AGENTS {
            Coalition(u32::MAX)
        } else {
            Coalition((1u32 << n) - 1)
        }
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(members: I) -> Result<Self> {
        let mut bits = 0u32;
        for agent in members {
            if agent >= MAX_AGENTS {
                return Err(Error::InvalidCoalition(format!(
                    "agent index {agent} exceeds {}",
                    MAX_AGENTS - 1
                )));
            }
            bits |= 1 << agent;
        }
        Ok(Coalition(bits))
    }

    pub fn contains(self, agent: usize) -> bool {
        agent < MAX_AGENTS && self.0 & (1 << agent) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset_of(self, other: Coalition) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Coalition) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: Coalition) -> Coalition {
        Coalition(self.0 | other.0)
    }

    pub fn difference(self, other: Coalition) -> Coalition {
        Coalition(self.0 & !other.0)
    }

    pub fn insert(&mut self, agent: usize) {
        *self = self.union(Coalition::singleton(agent));
    }

    /// Lowest-indexed member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn members(self) -> Members {
        Members(self.0)
    }

    /// Checks the coalition is non-empty and lies within `{0, .., n-1}`.
    pub fn validate(self, n: usize) -> Result<()> {
        if self.is_empty() {
            return Err(Error::InvalidCoalition("empty coalition".into()));
        }
        if !self.is_subset_of(Coalition::grand(n)) {
            return Err(Error::InvalidCoalition(format!(
                "{self} has members outside 0..{n}"
            )));
        }
        Ok(())
    }

    /// All non-empty subsets of `{0, .., n-1}` in increasing bitmask order.
    pub fn all_nonempty(n: usize) -> impl Iterator<Item = Coalition> {
        assert!(n < MAX_AGENTS, "cannot enumerate subsets of {n} agents");
        (1u32..(1u32 << n)).map(Coalition)
    }
}

pub struct Members(u32);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i as usize)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, m) in self.members().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Serialized as a sorted list of member indices.
impl Serialize for Coalition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.members())
    }
}

impl<'de> Deserialize<'de> for Coalition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(deserializer)?;
        Coalition::from_members(members).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_are_sorted_and_display_is_canonical() {
        let c = Coalition::from_members([4, 0, 2, 2]).unwrap();
        assert_eq!(c.members().collect::<Vec<_>>(), vec![0, 2, 4]);
        assert_eq!(c.to_string(), "{0,2,4}");
        assert_eq!(c.len(), 3);
        assert_eq!(c.first(), Some(0));
    }

    #[test]
    fn validate_rejects_empty_and_out_of_range() {
        assert!(Coalition::EMPTY.validate(3).is_err());
        assert!(Coalition::singleton(3).validate(3).is_err());
        assert!(Coalition::grand(3).validate(3).is_ok());
    }

    #[test]
    fn json_is_a_member_list() {
        let c = Coalition::from_members([1, 2]).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), "[1,2]");
        let back: Coalition = serde_json::from_str("[2,1]").unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<Coalition>("[40]").is_err());
    }

    #[test]
    fn nonempty_enumeration_counts() {
        assert_eq!(Coalition::all_nonempty(4).count(), 15);
    }
}
