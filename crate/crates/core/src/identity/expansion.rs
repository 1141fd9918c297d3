//! Repeated length-lowering expansion of fixed-length `d`-distant counts.
//!
//! One step rewrites a count with `l` parts as
//! `p_l^(d)(a) = sum_{i >= d} p_{l-1}^(d)(a - l*i + d - 1)`. Terms are kept
//! while their argument is nonnegative, so a term can carry a count of zero.

use std::fmt;

use thiserror::Error;

use crate::engine::{CountingEngine, Method};
use crate::partition::ConstraintSpec;
use crate::BigCount;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("cannot expand {length} parts down to {target} parts")]
pub struct ExpansionError {
    pub length: u64,
    pub target: u64,
}

/// A single count `p_length^(gap)(argument)` of an expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Term {
    pub length: u64,
    pub argument: i64,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p_{}({})", self.length, self.argument)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub n: i64,
    pub length: u64,
    pub gap: u64,
    pub target: u64,
    /// Depth-first, in increasing summation index at every level.
    pub terms: Vec<Term>,
}

impl Expansion {
    /// Term values by the staircase-reduction route.
    pub fn values(&self, engine: &CountingEngine<BigCount>) -> Vec<BigCount> {
        self.terms
            .iter()
            .map(|t| {
                let spec = ConstraintSpec::exactly(t.length).with_gap(self.gap);
                engine.count_with(t.argument, &spec, Method::Reduction)
            })
            .collect()
    }

    pub fn sum(&self, engine: &CountingEngine<BigCount>) -> BigCount {
        self.values(engine).into_iter().sum()
    }

    pub fn zero_terms(&self, engine: &CountingEngine<BigCount>) -> usize {
        self.values(engine)
            .iter()
            .filter(|v| **v == BigCount::ZERO)
            .count()
    }

    /// Arguments of the terms, in order.
    pub fn arguments(&self) -> Vec<i64> {
        self.terms.iter().map(|t| t.argument).collect()
    }
}

/// Expands `p_length^(gap)(n)` down to terms with `target` parts.
pub fn expand(n: i64, length: u64, gap: u64, target: u64) -> Result<Expansion, ExpansionError> {
    if target > length {
        return Err(ExpansionError { length, target });
    }
    let mut terms = Vec::new();
    // Explicit stack of (term, next summation index) in depth-first order.
    let mut stack: Vec<(Term, u64)> = vec![(
        Term {
            length,
            argument: n,
        },
        gap,
    )];
    while let Some((term, index)) = stack.pop() {
        if term.length == target {
            if term.argument >= 0 {
                terms.push(term);
            }
            continue;
        }
        let child = step_argument(term.argument, term.length, gap, index);
        if child < 0 {
            continue;
        }
        stack.push((term, index + 1));
        stack.push((
            Term {
                length: term.length - 1,
                argument: child,
            },
            gap,
        ));
    }
    Ok(Expansion {
        n,
        length,
        gap,
        target,
        terms,
    })
}

/// `a - l*i + d - 1`.
pub(crate) fn step_argument(argument: i64, length: u64, gap: u64, index: u64) -> i64 {
    let value = i128::from(argument) - i128::from(length) * i128::from(index) + i128::from(gap) - 1;
    value.clamp(i128::from(i64::MIN), i128::from(i64::MAX)) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_expansion_is_a_single_term() {
        let e = expand(22, 4, 1, 4).unwrap();
        assert_eq!(
            e.terms,
            vec![Term {
                length: 4,
                argument: 22
            }]
        );
        assert!(expand(22, 4, 1, 5).is_err());
        assert!(expand(-1, 2, 1, 2).unwrap().terms.is_empty());
    }

    #[test]
    fn one_step_for_four_distinct_parts_of_22() {
        let e = expand(22, 4, 1, 3).unwrap();
        assert_eq!(e.arguments(), vec![18, 14, 10, 6, 2]);
        let engine = CountingEngine::new();
        assert_eq!(e.sum(&engine), BigCount::from(34u32));
    }

    #[test]
    fn super_distant_example_terms() {
        let engine = CountingEngine::new();
        let e = expand(18, 3, 2, 2).unwrap();
        assert_eq!(e.arguments(), vec![13, 10, 7, 4, 1]);
        let values: Vec<u32> = e
            .values(&engine)
            .iter()
            .map(|v| u32::try_from(v).unwrap())
            .collect();
        assert_eq!(values, vec![5, 4, 2, 1, 0]);
    }

    #[test]
    fn expansion_to_single_parts() {
        let engine = CountingEngine::new();
        let e = expand(22, 4, 1, 1).unwrap();
        assert_eq!(e.terms.len(), 39);
        assert_eq!(e.zero_terms(&engine), 5);
        assert_eq!(e.sum(&engine), BigCount::from(34u32));
    }
}
