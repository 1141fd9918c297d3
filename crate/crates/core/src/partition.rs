//! Partitions and the constraint bundle used throughout the crate.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("part {index} is zero; partitions have positive parts")]
    ZeroPart { index: usize },
    #[error("parts not weakly decreasing at index {index}: {left} < {right}")]
    NotDecreasing { index: usize, left: u64, right: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("minimum part must be at least 1, got {0}")]
    MinPartZero(u64),
}

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Partition(Vec<u64>);

impl Partition {
    pub fn new(parts: Vec<u64>) -> Result<Self, PartitionError> {
        for (index, pair) in parts.windows(2).enumerate() {
            if pair[0] < pair[1] {
                return Err(PartitionError::NotDecreasing {
                    index,
                    left: pair[0],
                    right: pair[1],
                });
            }
        }
        if let Some(index) = parts.iter().position(|&p| p == 0) {
            return Err(PartitionError::ZeroPart { index });
        }
        Ok(Partition(parts))
    }

    /// The partition of zero.
    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<u64>) -> Self {
        debug_assert!(
            Partition::new(parts.clone()).is_ok(),
            "invalid parts {parts:?}"
        );
        Partition(parts)
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn into_parts(self) -> Vec<u64> {
        self.0
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn smallest_part(&self) -> Option<u64> {
        self.0.last().copied()
    }

    /// Adjacent differences `parts[i] - parts[i+1]`.
    pub fn gaps(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.windows(2).map(|w| w[0] - w[1])
    }
}

impl TryFrom<Vec<u64>> for Partition {
    type Error = PartitionError;

    fn try_from(parts: Vec<u64>) -> Result<Self, Self::Error> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u64> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

/// Comma-separated parts; the empty partition renders as the empty string.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{part}")?;
        }
        Ok(())
    }
}

/// Number-of-parts restriction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LengthMode {
    Exactly(u64),
    AtMost(u64),
    Any,
}

impl LengthMode {
    pub fn admits(self, length: u64) -> bool {
        match self {
            LengthMode::Exactly(k) => length == k,
            LengthMode::AtMost(k) => length <= k,
            LengthMode::Any => true,
        }
    }

    /// Largest admissible length, if bounded.
    pub fn bound(self) -> Option<u64> {
        match self {
            LengthMode::Exactly(k) | LengthMode::AtMost(k) => Some(k),
            LengthMode::Any => None,
        }
    }
}

impl fmt::Display for LengthMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LengthMode::Exactly(k) => write!(f, "{k}"),
            LengthMode::AtMost(k) => write!(f, "<={k}"),
            LengthMode::Any => f.write_str("any"),
        }
    }
}

/// Length mode, minimum part `r >= 1` and minimum adjacent gap `d >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ConstraintSpec {
    length: LengthMode,
    min_part: u64,
    min_gap: u64,
}

impl ConstraintSpec {
    pub fn new(length: LengthMode, min_part: u64, min_gap: u64) -> Result<Self, SpecError> {
        if min_part == 0 {
            return Err(SpecError::MinPartZero(min_part));
        }
        Ok(ConstraintSpec {
            length,
            min_part,
            min_gap,
        })
    }

    /// Exactly `k` parts, no other restriction.
    pub fn exactly(k: u64) -> Self {
        ConstraintSpec {
            length: LengthMode::Exactly(k),
            min_part: 1,
            min_gap: 0,
        }
    }

    pub fn at_most(k: u64) -> Self {
        ConstraintSpec {
            length: LengthMode::AtMost(k),
            min_part: 1,
            min_gap: 0,
        }
    }

    pub fn any() -> Self {
        ConstraintSpec {
            length: LengthMode::Any,
            min_part: 1,
            min_gap: 0,
        }
    }

    pub fn with_gap(self, min_gap: u64) -> Self {
        ConstraintSpec { min_gap, ..self }
    }

    pub fn with_min_part(self, min_part: u64) -> Result<Self, SpecError> {
        ConstraintSpec::new(self.length, min_part, self.min_gap)
    }

    pub fn length(&self) -> LengthMode {
        self.length
    }

    pub fn min_part(&self) -> u64 {
        self.min_part
    }

    pub fn min_gap(&self) -> u64 {
        self.min_gap
    }

    pub fn is_satisfied_by(&self, partition: &Partition) -> bool {
        self.length.admits(partition.len() as u64)
            && partition.parts().iter().all(|&p| p >= self.min_part)
            && partition.gaps().all(|g| g >= self.min_gap)
    }

    /// Smallest weight of a partition with exactly `k` parts under these
    /// part and gap bounds: `r*k + d*k(k-1)/2`.
    pub fn minimal_weight(&self, k: u64) -> u64 {
        minimal_weight(k, self.min_part, self.min_gap)
    }
}

impl Default for ConstraintSpec {
    fn default() -> Self {
        ConstraintSpec::any()
    }
}

/// Saturates at `u64::MAX`.
pub(crate) fn minimal_weight(k: u64, min_part: u64, min_gap: u64) -> u64 {
    let k = u128::from(k);
    let w = u128::from(min_part) * k + u128::from(min_gap) * (k * k.saturating_sub(1) / 2);
    u64::try_from(w).unwrap_or(u64::MAX)
}

/// `k choose 2`.
pub fn binomial2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_and_zero_parts() {
        assert_eq!(
            Partition::new(vec![2, 3]),
            Err(PartitionError::NotDecreasing {
                index: 0,
                left: 2,
                right: 3
            })
        );
        assert_eq!(
            Partition::new(vec![2, 0]),
            Err(PartitionError::ZeroPart { index: 1 })
        );
        assert!(Partition::new(vec![]).is_ok());
    }

    #[test]
    fn display_is_comma_separated() {
        assert_eq!(Partition::new(vec![7, 4, 1]).unwrap().to_string(), "7,4,1");
        assert_eq!(Partition::empty().to_string(), "");
    }

    #[test]
    fn predicate_checks_every_constraint() {
        let spec = ConstraintSpec::exactly(3).with_gap(2);
        assert!(spec.is_satisfied_by(&Partition::new(vec![7, 4, 1]).unwrap()));
        assert!(!spec.is_satisfied_by(&Partition::new(vec![7, 5, 4]).unwrap()));
        assert!(!spec.is_satisfied_by(&Partition::new(vec![7, 4]).unwrap()));
        let spec = spec.with_min_part(2).unwrap();
        assert!(!spec.is_satisfied_by(&Partition::new(vec![7, 4, 1]).unwrap()));
    }

    #[test]
    fn min_part_zero_is_invalid() {
        assert_eq!(
            ConstraintSpec::new(LengthMode::Any, 0, 0),
            Err(SpecError::MinPartZero(0))
        );
    }

    #[test]
    fn minimal_weight_is_staircase() {
        assert_eq!(ConstraintSpec::exactly(4).with_gap(1).minimal_weight(4), 10);
        assert_eq!(minimal_weight(3, 1, 2), 9);
        assert_eq!(minimal_weight(0, 5, 5), 0);
    }

    #[test]
    fn serde_validates_parts() {
        let p: Partition = serde_json::from_str("[3,2,1]").unwrap();
        assert_eq!(p.weight(), 6);
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
    }
}
