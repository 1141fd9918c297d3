//! Brute-force generation of constrained partitions.
//!
//! The generator walks parts largest-first, trying candidate values in
//! decreasing order, so partitions come out in lexicographically decreasing
//! order. Branches that cannot be completed are cut using the exact range of
//! weights reachable by the remaining parts; every yielded partition is still
//! built one part at a time and checked against the spec.

use num_bigint::BigUint;
use thiserror::Error;

use crate::partition::{minimal_weight, ConstraintSpec, LengthMode, Partition};

/// Name of the environment variable overriding [`EnumerationBudget::max_weight`].
pub const BUDGET_ENV: &str = "PARTITION_KIT_BUDGET";

pub const DEFAULT_MAX_WEIGHT: u64 = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("weight {n} exceeds the enumeration budget of {max_weight}")]
    WeightOverBudget { n: u64, max_weight: u64 },
    #[error("more than {max_count} partitions would be generated")]
    CountOverBudget { max_count: u64 },
    #[error("invalid budget setting {BUDGET_ENV}={value:?}")]
    InvalidBudget { value: String },
}

/// Limits on a single enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_weight: u64,
    pub max_count: Option<u64>,
    /// When the count cap is hit: `true` yields a
    /// [`EnumerationError::CountOverBudget`] error, `false` ends the stream quietly.
    pub fail_fast: bool,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_weight: DEFAULT_MAX_WEIGHT,
            max_count: None,
            fail_fast: true,
        }
    }
}

impl EnumerationBudget {
    pub fn unbounded() -> Self {
        EnumerationBudget {
            max_weight: u64::MAX,
            max_count: None,
            fail_fast: true,
        }
    }

    pub fn with_max_weight(self, max_weight: u64) -> Self {
        EnumerationBudget { max_weight, ..self }
    }

    /// Default budget, with `max_weight` taken from `PARTITION_KIT_BUDGET` when set.
    pub fn from_env() -> Result<Self, EnumerationError> {
        match std::env::var(BUDGET_ENV) {
            Ok(value) => value
                .trim()
                .parse()
                .map(|w| EnumerationBudget::default().with_max_weight(w))
                .map_err(|_| EnumerationError::InvalidBudget { value }),
            Err(_) => Ok(EnumerationBudget::default()),
        }
    }
}

/// Every partition of `n` satisfying `spec`, in lexicographically decreasing order.
pub fn enumerate(n: u64, spec: &ConstraintSpec, budget: &EnumerationBudget) -> Enumeration {
    Enumeration::new(n, *spec, *budget)
}

/// Length of the [`enumerate`] stream.
pub fn count_by_enumeration(
    n: u64,
    spec: &ConstraintSpec,
    budget: &EnumerationBudget,
) -> Result<BigUint, EnumerationError> {
    let mut total = 0u64;
    for item in enumerate(n, spec, budget) {
        item?;
        total += 1;
    }
    Ok(BigUint::from(total))
}

/// Streaming depth-first generator; see [`enumerate`].
#[derive(Debug)]
pub struct Enumeration {
    spec: ConstraintSpec,
    budget: EnumerationBudget,
    state: State,
    parts: Vec<u64>,
    /// Next candidate and smallest allowed value for each open position.
    frames: Vec<(u64, u64)>,
    remaining: u64,
    yielded: u64,
}

#[derive(Debug, PartialEq, Eq)]
enum State {
    Fresh,
    Running,
    Done,
}

impl Enumeration {
    fn new(n: u64, spec: ConstraintSpec, budget: EnumerationBudget) -> Self {
        Enumeration {
            spec,
            budget,
            state: State::Fresh,
            parts: Vec::new(),
            frames: Vec::new(),
            remaining: n,
            yielded: 0,
        }
    }

    /// Whether `remaining` can be written as `slots` more parts, each at most
    /// `cap`, at least the minimum part, with gaps at least the minimum gap.
    fn completable(&self, remaining: u64, cap: Option<u64>, placed: u64) -> bool {
        let (r, d) = (self.spec.min_part(), self.spec.min_gap());
        let (lo, hi) = match self.spec.length() {
            LengthMode::Exactly(k) => match k.checked_sub(placed) {
                Some(s) => (s, s),
                None => return false,
            },
            LengthMode::AtMost(k) => match k.checked_sub(placed) {
                Some(s) => (0, s),
                None => return false,
            },
            LengthMode::Any => (0, remaining),
        };
        for slots in lo..=hi {
            let least = minimal_weight(slots, r, d);
            if least > remaining {
                break;
            }
            if slots == 0 {
                if remaining == 0 {
                    return true;
                }
                continue;
            }
            let Some(cap) = cap else { return true };
            // Largest part must fit above the staircase below it.
            let top_floor = r + d * (slots - 1);
            if cap < top_floor {
                continue;
            }
            let most = u128::from(slots) * u128::from(cap)
                - u128::from(d) * u128::from(slots * (slots - 1) / 2);
            if u128::from(remaining) <= most {
                return true;
            }
        }
        false
    }

    fn start(&mut self) -> Option<Result<Partition, EnumerationError>> {
        self.state = State::Running;
        let n = self.remaining;
        if n > self.budget.max_weight {
            self.state = State::Done;
            return Some(Err(EnumerationError::WeightOverBudget {
                n,
                max_weight: self.budget.max_weight,
            }));
        }
        if n == 0 {
            self.state = State::Done;
            return self
                .spec
                .length()
                .admits(0)
                .then(|| self.emit(Partition::empty()))
                .flatten();
        }
        if self.completable(n, None, 0) {
            self.frames.push((n, self.spec.min_part()));
        }
        None
    }

    fn emit(&mut self, partition: Partition) -> Option<Result<Partition, EnumerationError>> {
        if let Some(max_count) = self.budget.max_count {
            if self.yielded >= max_count {
                self.state = State::Done;
                return self
                    .budget
                    .fail_fast
                    .then_some(Err(EnumerationError::CountOverBudget { max_count }));
            }
        }
        self.yielded += 1;
        debug_assert!(self.spec.is_satisfied_by(&partition));
        Some(Ok(partition))
    }
}

impl Iterator for Enumeration {
    type Item = Result<Partition, EnumerationError>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.state {
            State::Done => return None,
            State::Fresh => {
                if let Some(item) = self.start() {
                    return Some(item);
                }
                if self.state == State::Done {
                    return None;
                }
            }
            State::Running => {}
        }
        let d = self.spec.min_gap();
        loop {
            let Some(frame) = self.frames.last_mut() else {
                self.state = State::Done;
                return None;
            };
            let (candidate, floor) = *frame;
            if candidate < floor {
                self.frames.pop();
                if let Some(part) = self.parts.pop() {
                    self.remaining += part;
                }
                continue;
            }
            frame.0 = candidate - 1;
            let after = self.remaining - candidate;
            let placed = self.parts.len() as u64 + 1;
            let next_cap = candidate.checked_sub(d);
            let viable = match next_cap {
                Some(cap) => self.completable(after, Some(cap), placed),
                None => self.completable(after, Some(0), placed) && after == 0,
            };
            if !viable {
                continue;
            }
            if after == 0 {
                let mut parts = self.parts.clone();
                parts.push(candidate);
                let item = self.emit(Partition::from_parts_unchecked(parts));
                if item.is_some() || self.state == State::Done {
                    return item;
                }
                continue;
            }
            let cap = next_cap.expect("viable continuation has a cap").min(after);
            self.parts.push(candidate);
            self.remaining = after;
            self.frames.push((cap, self.spec.min_part()));
        }
    }
}
