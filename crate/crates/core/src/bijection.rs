//! The staircase bijection between partitions of `n` with at most `L` parts
//! and partitions of `n + L + d*L(L-1)/2` into exactly `L` parts with gaps at
//! least `d`.
//!
//! Pad `λ` with zeros to length `L`, add one to every part, then add the
//! staircase `(L-1)d, ..., d, 0` from the largest part down.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::enumerate::{enumerate, EnumerationBudget, EnumerationError};
use crate::partition::{binomial2, ConstraintSpec, Partition};

/// A partition padded with trailing zeros to a declared length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedPartition {
    parts: Vec<u64>,
}

impl PaddedPartition {
    pub fn new(partition: &Partition, length: usize) -> Result<Self, BijectionError> {
        if partition.len() > length {
            return Err(BijectionError::LengthTooSmall {
                length,
                parts: partition.len(),
            });
        }
        let mut parts = partition.parts().to_vec();
        parts.resize(length, 0);
        Ok(PaddedPartition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn strip(&self) -> Partition {
        Partition::from_parts_unchecked(self.parts.iter().copied().take_while(|&p| p > 0).collect())
    }
}

/// Why a partition is not in the image of [`forward`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    LengthMismatch {
        expected: usize,
        actual: usize,
    },
    /// 1-indexed from the largest part.
    PartTooSmall {
        index: usize,
        part: u64,
        minimum: u64,
    },
    /// Gap between parts `index` and `index + 1`.
    GapTooSmall {
        index: usize,
        gap: u64,
        minimum: u64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LengthMismatch { expected, actual } => {
                write!(f, "expected {expected} parts, found {actual}")
            }
            Violation::PartTooSmall {
                index,
                part,
                minimum,
            } => {
                write!(f, "part {index} is {part}, below {minimum}")
            }
            Violation::GapTooSmall {
                index,
                gap,
                minimum,
            } => {
                write!(f, "gap after part {index} is {gap}, below {minimum}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error("padded length {length} is shorter than the partition's {parts} parts")]
    LengthTooSmall { length: usize, parts: usize },
    #[error("not a staircase image: {}", render(.0))]
    NotInImage(Vec<Violation>),
}

fn render(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(Violation::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Weight of every image of a partition of `n` at padded length `length`.
pub fn image_weight(n: u64, length: usize, gap: u64) -> u64 {
    n + length as u64 + gap * binomial2(length as u64)
}

/// `μ_i = λ_i + 1 + (L - i)d` for `i = 1..=L`, with `λ` zero-padded to `L`.
pub fn forward(lambda: &Partition, length: usize, gap: u64) -> Result<Partition, BijectionError> {
    let padded = PaddedPartition::new(lambda, length)?;
    let image = padded
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &part)| part + 1 + (length - 1 - i) as u64 * gap)
        .collect();
    Ok(Partition::from_parts_unchecked(image))
}

/// `λ_i = μ_i - 1 - (L - i)d`, trailing zeros removed.
pub fn inverse(mu: &Partition, length: usize, gap: u64) -> Result<Partition, BijectionError> {
    let mut violations = Vec::new();
    if mu.len() != length {
        violations.push(Violation::LengthMismatch {
            expected: length,
            actual: mu.len(),
        });
        return Err(BijectionError::NotInImage(violations));
    }
    for (i, g) in mu.gaps().enumerate() {
        if g < gap {
            violations.push(Violation::GapTooSmall {
                index: i + 1,
                gap: g,
                minimum: gap,
            });
        }
    }
    for (i, &part) in mu.parts().iter().enumerate() {
        let minimum = 1 + (length - 1 - i) as u64 * gap;
        if part < minimum {
            violations.push(Violation::PartTooSmall {
                index: i + 1,
                part,
                minimum,
            });
        }
    }
    if !violations.is_empty() {
        return Err(BijectionError::NotInImage(violations));
    }
    let padded = PaddedPartition {
        parts: mu
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &part)| part - 1 - (length - 1 - i) as u64 * gap)
            .collect(),
    };
    Ok(padded.strip())
}

/// One source partition together with its image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectionRecord {
    pub source: Partition,
    pub padded_length: usize,
    pub gap: u64,
    pub image: Partition,
}

impl BijectionRecord {
    pub fn new(source: Partition, padded_length: usize, gap: u64) -> Result<Self, BijectionError> {
        let image = forward(&source, padded_length, gap)?;
        Ok(BijectionRecord {
            source,
            padded_length,
            gap,
            image,
        })
    }

    /// Image has `L` parts, gaps at least `d`, parts at least 1 and the
    /// expected weight.
    pub fn is_valid(&self) -> bool {
        let spec = ConstraintSpec::exactly(self.padded_length as u64).with_gap(self.gap);
        spec.is_satisfied_by(&self.image)
            && self.image.weight()
                == image_weight(self.source.weight(), self.padded_length, self.gap)
    }

    /// Image gaps equal the padded source gaps plus `d`.
    pub fn preserves_gaps(&self) -> bool {
        let padded = PaddedPartition::new(&self.source, self.padded_length)
            .expect("records are built with a sufficient length");
        padded
            .parts()
            .windows(2)
            .map(|w| w[0] - w[1] + self.gap)
            .eq(self.image.gaps())
    }
}

impl fmt::Display for BijectionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source, self.image)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BijectivityReport {
    pub n: u64,
    pub length: usize,
    pub gap: u64,
    pub target_weight: u64,
    pub records: Vec<BijectionRecord>,
    /// Size of the independently enumerated target set.
    pub target_count: usize,
    pub images_distinct: bool,
    pub images_valid: bool,
    pub gaps_preserved: bool,
    pub images_exhaust_target: bool,
    pub round_trip: bool,
}

impl BijectivityReport {
    pub fn passed(&self) -> bool {
        self.images_distinct
            && self.images_valid
            && self.gaps_preserved
            && self.images_exhaust_target
            && self.round_trip
    }
}

/// Maps every partition of `n` with at most `length` parts and compares the
/// images with an enumeration of the target set.
pub fn verify_bijectivity(
    n: u64,
    length: usize,
    gap: u64,
    budget: &EnumerationBudget,
) -> Result<BijectivityReport, EnumerationError> {
    let sources = enumerate(n, &ConstraintSpec::at_most(length as u64), budget)
        .collect::<Result<Vec<_>, _>>()?;
    let target_weight = image_weight(n, length, gap);
    let target: BTreeSet<Partition> = enumerate(
        target_weight,
        &ConstraintSpec::exactly(length as u64).with_gap(gap),
        budget,
    )
    .collect::<Result<_, _>>()?;

    let records: Vec<BijectionRecord> = sources
        .into_iter()
        .map(|s| BijectionRecord::new(s, length, gap).expect("sources have at most `length` parts"))
        .collect();
    let images: BTreeSet<Partition> = records.iter().map(|r| r.image.clone()).collect();
    let round_trip = records
        .iter()
        .all(|r| inverse(&r.image, length, gap).as_ref() == Ok(&r.source));
    Ok(BijectivityReport {
        n,
        length,
        gap,
        target_weight,
        target_count: target.len(),
        images_distinct: images.len() == records.len(),
        images_valid: records.iter().all(BijectionRecord::is_valid),
        gaps_preserved: records.iter().all(BijectionRecord::preserves_gaps),
        images_exhaust_target: images == target,
        round_trip,
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn forward_examples() {
        let image = forward(&p(&[2, 1]), 3, 2).unwrap();
        assert_eq!(image, p(&[7, 4, 1]));
        assert_eq!(image.weight(), 12);
        assert_eq!(
            forward(&Partition::empty(), 0, 5).unwrap(),
            Partition::empty()
        );
        let image = forward(&p(&[1, 1]), 4, 1).unwrap();
        assert_eq!(image, p(&[5, 4, 2, 1]));
        assert_eq!(image.weight(), 12);
    }

    #[test]
    fn forward_rejects_short_length() {
        assert_eq!(
            forward(&p(&[1, 1, 1]), 2, 1),
            Err(BijectionError::LengthTooSmall {
                length: 2,
                parts: 3
            })
        );
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inverse(&p(&[7, 4, 1]), 3, 2).unwrap(), p(&[2, 1]));
        assert_eq!(
            inverse(&Partition::empty(), 0, 3).unwrap(),
            Partition::empty()
        );
        assert_eq!(inverse(&p(&[3, 2, 1]), 3, 1).unwrap(), Partition::empty());
    }

    #[test]
    fn inverse_reports_every_violation() {
        assert_eq!(
            inverse(&p(&[5, 4, 4]), 3, 2).unwrap_err(),
            BijectionError::NotInImage(vec![
                Violation::GapTooSmall {
                    index: 1,
                    gap: 1,
                    minimum: 2
                },
                Violation::GapTooSmall {
                    index: 2,
                    gap: 0,
                    minimum: 2
                },
            ])
        );
        assert_eq!(
            inverse(&p(&[4, 2, 1]), 3, 2).unwrap_err(),
            BijectionError::NotInImage(vec![
                Violation::GapTooSmall {
                    index: 2,
                    gap: 1,
                    minimum: 2
                },
                Violation::PartTooSmall {
                    index: 1,
                    part: 4,
                    minimum: 5
                },
                Violation::PartTooSmall {
                    index: 2,
                    part: 2,
                    minimum: 3
                },
            ])
        );
        assert_eq!(
            inverse(&p(&[3, 2]), 3, 1).unwrap_err(),
            BijectionError::NotInImage(vec![Violation::LengthMismatch {
                expected: 3,
                actual: 2
            }])
        );
    }

    #[test]
    fn verify_examples() {
        let budget = EnumerationBudget::default();
        let report = verify_bijectivity(5, 5, 1, &budget).unwrap();
        assert_eq!(report.records.len(), 7);
        assert_eq!(report.target_weight, 20);
        assert!(report.passed());

        let report = verify_bijectivity(0, 0, 1, &budget).unwrap();
        assert_eq!(report.records.len(), 1);
        assert_eq!(report.records[0].to_string(), " -> ");
        assert!(report.passed());

        let report = verify_bijectivity(4, 8, 1, &budget).unwrap();
        assert_eq!(report.target_weight, 40);
        assert_eq!(report.target_count, 5);
        assert!(report.passed());
    }

    #[test]
    fn short_length_maps_partitions_with_few_parts() {
        let report = verify_bijectivity(6, 2, 3, &EnumerationBudget::default()).unwrap();
        // 6, 5+1, 4+2, 3+3
        assert_eq!(report.records.len(), 4);
        assert!(report.passed());
    }
}
