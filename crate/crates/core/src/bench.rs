//! Timing and cross-checking of the counting routes.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::engine::{CountingEngine, Method};
use crate::enumerate::{count_by_enumeration, EnumerationBudget, EnumerationError};
use crate::partition::{ConstraintSpec, LengthMode};
use crate::table::CountKey;
use crate::BigCount;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchMethod {
    /// Euler's pentagonal recurrence; unconstrained `p(n)` only.
    Pentagonal,
    /// `sum_k p_k(n)`; unconstrained `p(n)` only.
    ColumnSum,
    Recurrence,
    Reduction,
    Enumeration,
}

impl BenchMethod {
    pub fn name(self) -> &'static str {
        match self {
            BenchMethod::Pentagonal => "pentagonal",
            BenchMethod::ColumnSum => "column-sum",
            BenchMethod::Recurrence => "recurrence",
            BenchMethod::Reduction => "reduction",
            BenchMethod::Enumeration => "enumeration",
        }
    }

    pub fn supports(self, key: &CountKey) -> bool {
        match self {
            BenchMethod::Pentagonal | BenchMethod::ColumnSum => {
                key.length == LengthMode::Any && key.gap == 0 && key.min_part == 1
            }
            _ => true,
        }
    }
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchCase {
    pub method: BenchMethod,
    pub key: CountKey,
    pub repetitions: usize,
    pub warmup: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub method: BenchMethod,
    pub key: CountKey,
    /// Median over repetitions; `None` when the case was skipped.
    pub nanos: Option<u128>,
    pub count: Option<BigCount>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("unknown bench suite {0:?}")]
    UnknownSuite(String),
    #[error("{method} does not support key {key:?}")]
    Unsupported { method: BenchMethod, key: CountKey },
    #[error("repetitions must be at least 1")]
    NoRepetitions,
    #[error(
        "count mismatch at {key:?}: {first_method} gives {first}, {second_method} gives {second}"
    )]
    Consistency {
        key: CountKey,
        first_method: BenchMethod,
        first: BigCount,
        second_method: BenchMethod,
        second: BigCount,
    },
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

/// Named case lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// The worked examples, every route.
    Paper,
    /// `p(n)` for `n = 100, 200, ..., 1000`.
    Scaling,
    /// Small constrained grid including enumeration.
    Grid,
    /// Larger fixed-length counts with gaps.
    Distant,
}

impl Suite {
    pub const NAMES: [&'static str; 4] = ["paper", "scaling", "grid", "distant"];

    pub fn cases(self) -> Vec<BenchCase> {
        use BenchMethod::*;
        let counting = [Recurrence, Reduction, Enumeration];
        match self {
            Suite::Paper => {
                let keys = [
                    (22, ConstraintSpec::exactly(4).with_gap(1)),
                    (18, ConstraintSpec::exactly(3).with_gap(2)),
                    (13, ConstraintSpec::exactly(2).with_gap(2)),
                    (0, ConstraintSpec::exactly(0)),
                    (20, ConstraintSpec::exactly(5).with_gap(1)),
                    (9, ConstraintSpec::any().with_gap(2)),
                ];
                cases_for(&keys, &counting, 5, 1)
            }
            Suite::Scaling => {
                let keys: Vec<_> = (1..=10).map(|i| (i * 100, ConstraintSpec::any())).collect();
                cases_for(
                    &keys,
                    &[Pentagonal, ColumnSum, Recurrence, Reduction, Enumeration],
                    3,
                    1,
                )
            }
            Suite::Grid => {
                let mut keys = Vec::new();
                for n in [10, 20, 30, 40] {
                    for k in [2, 4, 6] {
                        for d in 0..=2 {
                            for r in 1..=2 {
                                let spec = ConstraintSpec::exactly(k)
                                    .with_gap(d)
                                    .with_min_part(r)
                                    .expect("positive minimum part");
                                keys.push((n, spec));
                            }
                        }
                    }
                    keys.push((n, ConstraintSpec::at_most(4).with_gap(1)));
                    keys.push((n, ConstraintSpec::any()));
                }
                cases_for(&keys, &counting, 3, 1)
            }
            Suite::Distant => {
                let mut keys = Vec::new();
                for n in [200, 500, 1000] {
                    for k in [5, 10, 20] {
                        for d in 1..=3 {
                            keys.push((n, ConstraintSpec::exactly(k).with_gap(d)));
                        }
                    }
                }
                cases_for(&keys, &[Recurrence, Reduction], 3, 1)
            }
        }
    }
}

impl FromStr for Suite {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Suite::Paper),
            "scaling" => Ok(Suite::Scaling),
            "grid" => Ok(Suite::Grid),
            "distant" => Ok(Suite::Distant),
            _ => Err(BenchError::UnknownSuite(s.to_string())),
        }
    }
}

fn cases_for(
    keys: &[(i64, ConstraintSpec)],
    methods: &[BenchMethod],
    repetitions: usize,
    warmup: usize,
) -> Vec<BenchCase> {
    keys.iter()
        .flat_map(|(n, spec)| {
            let key = CountKey::new(*n, spec);
            methods
                .iter()
                .filter(move |m| m.supports(&key))
                .map(move |&method| BenchCase {
                    method,
                    key,
                    repetitions,
                    warmup,
                })
        })
        .collect()
}

/// Computes one count through `method` with a fresh, unmemoized engine.
/// `Ok(None)` means the enumeration budget excludes the key.
pub fn evaluate(
    method: BenchMethod,
    key: &CountKey,
    budget: &EnumerationBudget,
) -> Result<Option<BigCount>, BenchError> {
    if !method.supports(key) {
        return Err(BenchError::Unsupported { method, key: *key });
    }
    let engine = CountingEngine::<BigCount>::without_memo();
    let spec = key.spec();
    let value = match method {
        BenchMethod::Pentagonal => engine.p_total(key.n),
        BenchMethod::ColumnSum => {
            if key.n < 0 {
                BigCount::ZERO
            } else {
                engine
                    .totals_by_column_sum(key.n as usize)
                    .swap_remove(key.n as usize)
            }
        }
        BenchMethod::Recurrence => engine.count_with(key.n, &spec, Method::Recurrence),
        BenchMethod::Reduction => engine.count_with(key.n, &spec, Method::Reduction),
        BenchMethod::Enumeration => {
            if key.n < 0 {
                BigCount::ZERO
            } else if key.n as u64 > budget.max_weight {
                return Ok(None);
            } else {
                count_by_enumeration(key.n as u64, &spec, budget)?
            }
        }
    };
    Ok(Some(value))
}

/// Counts seen so far per key, for the cross-method agreement check.
#[derive(Default)]
struct Agreement {
    seen: BTreeMap<CountKey, (BenchMethod, BigCount)>,
}

impl Agreement {
    fn record(
        &mut self,
        method: BenchMethod,
        key: CountKey,
        count: &BigCount,
    ) -> Result<(), BenchError> {
        match self.seen.get(&key) {
            Some((first_method, first)) if first != count => Err(BenchError::Consistency {
                key,
                first_method: *first_method,
                first: first.clone(),
                second_method: method,
                second: count.clone(),
            }),
            Some(_) => Ok(()),
            None => {
                self.seen.insert(key, (method, count.clone()));
                Ok(())
            }
        }
    }
}

/// Runs every case sequentially, reporting the median time of its
/// repetitions. Aborts on the first cross-method disagreement.
pub fn run_suite(
    cases: &[BenchCase],
    budget: &EnumerationBudget,
) -> Result<Vec<BenchRow>, BenchError> {
    let mut agreement = Agreement::default();
    let mut rows = Vec::with_capacity(cases.len());
    for case in cases {
        if case.repetitions == 0 {
            return Err(BenchError::NoRepetitions);
        }
        for _ in 0..case.warmup {
            evaluate(case.method, &case.key, budget)?;
        }
        let mut timings = Vec::with_capacity(case.repetitions);
        let mut count = None;
        for _ in 0..case.repetitions {
            let started = Instant::now();
            let value = evaluate(case.method, &case.key, budget)?;
            timings.push(started.elapsed().as_nanos());
            match (&count, value) {
                (_, None) => break,
                (None, Some(v)) => count = Some(v),
                (Some(prev), Some(v)) => {
                    if *prev != v {
                        return Err(BenchError::Consistency {
                            key: case.key,
                            first_method: case.method,
                            first: prev.clone(),
                            second_method: case.method,
                            second: v,
                        });
                    }
                }
            }
        }
        let nanos = count.as_ref().map(|_| median(&mut timings));
        if let Some(c) = &count {
            agreement.record(case.method, case.key, c)?;
        }
        rows.push(BenchRow {
            method: case.method,
            key: case.key,
            nanos,
            count,
        });
    }
    Ok(rows)
}

/// Evaluates every case once, in parallel, and checks cross-method
/// agreement without timing anything.
pub fn check_agreement(
    cases: &[BenchCase],
    budget: &EnumerationBudget,
) -> Result<usize, BenchError> {
    let results: Vec<(BenchMethod, CountKey, Option<BigCount>)> = cases
        .par_iter()
        .map(|c| evaluate(c.method, &c.key, budget).map(|v| (c.method, c.key, v)))
        .collect::<Result<_, _>>()?;
    let mut agreement = Agreement::default();
    let mut executed = 0;
    for (method, key, count) in results {
        if let Some(count) = count {
            agreement.record(method, key, &count)?;
            executed += 1;
        }
    }
    Ok(executed)
}

fn median(values: &mut [u128]) -> u128 {
    values.sort_unstable();
    values[values.len() / 2]
}

pub const CSV_HEADER: &str = "method,n,k,d,r,nanos,count";

/// `method,n,k,d,r,nanos,count`; skipped rows have an empty `nanos` and a
/// `count` of `skipped`.
pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let nanos = row.nanos.map(|n| n.to_string()).unwrap_or_default();
        let count = row
            .count
            .as_ref()
            .map_or_else(|| "skipped".to_string(), ToString::to_string);
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.method, row.key.n, row.key.length, row.key.gap, row.key.min_part, nanos, count
        )
        .expect("writing to a String");
    }
    out
}
