//! Exact partition counts.
//!
//! Two independent routes compute constrained counts:
//!
//! - **recurrence**: the split "smallest part is 1 / every part is at least 2"
//!   applied to `d`-distant partitions of fixed length `j`,
//!   `F(j, m) = F(j-1, m - 1 - d(j-1)) + F(j, m - j)`, where the first term
//!   removes the part 1 and shifts the remaining `j-1` parts down by `d` so
//!   their minimum drops back to 1. A minimum part `r` is threaded through as
//!   the shift `m = n - (r-1)j`. With `d = 0` this is `p_k(n) = p_{k-1}(n-1) + p_k(n-k)`.
//! - **reduction**: subtract the staircase `r + (j-i)d` from the `i`-th part,
//!   leaving an unconstrained partition with at most `j` parts, counted by
//!   `Q(j, m) = Q(j-1, m) + Q(j, m-j)`.
//!
//! `p(n)` has its own route through Euler's pentagonal recurrence.
//!
//! Every table is filled iteratively, one row at a time, so no route recurses.

use std::sync::RwLock;

use thiserror::Error;

use crate::count::{indicator, Count};
use crate::partition::{minimal_weight, ConstraintSpec, LengthMode, SpecError};
use crate::table::{CountKey, CountTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("pentagonal index must be nonzero")]
    ZeroPentagonalIndex,
}

/// Counting route for constrained counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Method {
    Recurrence,
    Reduction,
    /// Reduction for `Exactly(k)` specs, recurrence otherwise.
    #[default]
    Auto,
}

impl Method {
    fn resolve(self, spec: &ConstraintSpec) -> Method {
        match (self, spec.length()) {
            (Method::Auto, LengthMode::Exactly(_)) => Method::Reduction,
            (Method::Auto, _) => Method::Recurrence,
            (m, _) => m,
        }
    }
}

/// Generalized pentagonal number `j(3j-1)/2`. Negative `j` gives the
/// companion `|j|(3|j|+1)/2`.
pub fn pentagonal_number(j: i64) -> Result<i64, EngineError> {
    if j == 0 {
        return Err(EngineError::ZeroPentagonalIndex);
    }
    Ok(j * (3 * j - 1) / 2)
}

/// Staircase normalization: a partition with exactly `k` parts, parts at least
/// `r` and gaps at least `d` corresponds to a partition of
/// `n - r*k - d*k(k-1)/2` with at most `k` parts.
pub fn reduce_staircase(n: i64, k: u64, d: u64, r: u64) -> (i64, u64) {
    let shift = i128::from(minimal_weight(k, r, d));
    let reduced = i128::from(n) - shift;
    (
        reduced.clamp(i128::from(i64::MIN), i128::from(i64::MAX)) as i64,
        k,
    )
}

/// Two parts with gap at least `d`: `max(0, floor((n-d)/2))`.
pub fn p2_closed_form<C: Count>(n: i64, d: u64) -> C {
    let excess = i128::from(n) - i128::from(d);
    if excess < 2 {
        return C::zero();
    }
    C::from_u64((excess / 2) as u64)
}

/// Rows `F(j, 0..=columns)` for `j = 0, 1, 2, ...` of the fixed-length
/// `d`-distant recurrence with minimum part 1.
pub(crate) struct DistantRows<C> {
    gap: u64,
    columns: usize,
    next_length: u64,
    previous: Option<Vec<C>>,
}

impl<C: Count> DistantRows<C> {
    pub(crate) fn new(gap: u64, columns: usize) -> Self {
        DistantRows {
            gap,
            columns,
            next_length: 0,
            previous: None,
        }
    }
}

impl<C: Count> Iterator for DistantRows<C> {
    type Item = Vec<C>;

    fn next(&mut self) -> Option<Vec<C>> {
        let j = self.next_length;
        let row = match &self.previous {
            None => (0..=self.columns).map(|m| indicator(m == 0)).collect(),
            Some(prev) => {
                // F(j, m) = F(j-1, m - 1 - d(j-1)) + F(j, m - j)
                let drop = 1 + u128::from(self.gap) * u128::from(j - 1);
                let step = j as usize;
                let mut row: Vec<C> = Vec::with_capacity(self.columns + 1);
                for m in 0..=self.columns {
                    let mut value = match (m as u128).checked_sub(drop) {
                        Some(src) => prev[src as usize].clone(),
                        None => C::zero(),
                    };
                    if m >= step {
                        value.accumulate(&row[m - step]);
                    }
                    row.push(value);
                }
                row
            }
        };
        self.next_length += 1;
        self.previous = Some(row.clone());
        Some(row)
    }
}

/// Rows `Q(j, 0..=columns)`: partitions of `m` with at most `j` parts.
pub(crate) struct AtMostRows<C> {
    columns: usize,
    next_length: u64,
    previous: Option<Vec<C>>,
}

impl<C: Count> AtMostRows<C> {
    pub(crate) fn new(columns: usize) -> Self {
        AtMostRows {
            columns,
            next_length: 0,
            previous: None,
        }
    }
}

impl<C: Count> Iterator for AtMostRows<C> {
    type Item = Vec<C>;

    fn next(&mut self) -> Option<Vec<C>> {
        let j = self.next_length as usize;
        let row = match self.previous.take() {
            None => (0..=self.columns).map(|m| indicator(m == 0)).collect(),
            Some(mut row) => {
                // Q(j, m) = Q(j-1, m) + Q(j, m - j), updated in place left to right.
                for m in j..=self.columns {
                    let (head, tail) = row.split_at_mut(m);
                    tail[0].accumulate(&head[m - j]);
                }
                row
            }
        };
        self.next_length += 1;
        self.previous = Some(row.clone());
        Some(row)
    }
}

/// Lengths `j` the spec admits with `minimal_weight(j) <= n`, ascending.
fn feasible_lengths(n: u64, spec: &ConstraintSpec) -> impl Iterator<Item = u64> {
    let (lo, hi) = match spec.length() {
        LengthMode::Exactly(k) => (k, k),
        LengthMode::AtMost(k) => (0, k),
        LengthMode::Any => (0, u64::MAX),
    };
    let (r, d) = (spec.min_part(), spec.min_gap());
    (lo..=hi).take_while(move |&j| minimal_weight(j, r, d) <= n)
}

/// Counting engine over the scalar type `C`, with optional memoization.
///
/// The engine is `Sync` and may be shared across threads; memo tables take
/// short read/write locks and never hold them across a computation.
#[derive(Debug)]
pub struct CountingEngine<C> {
    memo: Option<Memo<C>>,
}

#[derive(Debug)]
struct Memo<C> {
    recurrence: CountTable<C>,
    reduction: CountTable<C>,
    at_most: CountTable<C>,
    totals: RwLock<Vec<C>>,
}

impl<C: Count> Default for CountingEngine<C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<C: Count> CountingEngine<C> {
    pub fn new() -> Self {
        CountingEngine {
            memo: Some(Memo {
                recurrence: CountTable::new(),
                reduction: CountTable::new(),
                at_most: CountTable::new(),
                totals: RwLock::new(Vec::new()),
            }),
        }
    }

    /// An engine that recomputes every value from scratch.
    pub fn without_memo() -> Self {
        CountingEngine { memo: None }
    }

    pub fn is_memoized(&self) -> bool {
        self.memo.is_some()
    }

    /// Number of memoized constrained counts across all routes.
    pub fn memo_len(&self) -> usize {
        self.memo.as_ref().map_or(0, |m| {
            m.recurrence.len() + m.reduction.len() + m.at_most.len()
        })
    }

    /// `p(n)` via the pentagonal recurrence
    /// `p(n) = p(n-1) + p(n-2) - p(n-5) - p(n-7) + p(n-12) + ...`.
    pub fn p_total(&self, n: i64) -> C {
        if n < 0 {
            return C::zero();
        }
        let n = n as usize;
        match &self.memo {
            None => pentagonal_totals::<C>(Vec::new(), n)[n].clone(),
            Some(memo) => {
                if let Some(v) = memo.totals.read().expect("totals lock poisoned").get(n) {
                    return v.clone();
                }
                let mut totals = memo.totals.write().expect("totals lock poisoned");
                if totals.len() <= n {
                    let prefix = std::mem::take(&mut *totals);
                    *totals = pentagonal_totals(prefix, n);
                }
                totals[n].clone()
            }
        }
    }

    /// `p_k(n)`, partitions of `n` with exactly `k` parts.
    pub fn p_exact_k(&self, n: i64, k: i64) -> C {
        if n < 0 || k < 0 {
            return C::zero();
        }
        self.count_with(n, &ConstraintSpec::exactly(k as u64), Method::Recurrence)
    }

    /// `p_{<=k}(n)`, partitions of `n` with at most `k` parts.
    pub fn p_at_most_k(&self, n: i64, k: i64) -> C {
        if n < 0 || k < 0 {
            return C::zero();
        }
        let rows = k.min(n) as u64;
        let key = CountKey::new(n, &ConstraintSpec::at_most(rows));
        self.memoized(
            |m| &m.at_most,
            key,
            || {
                AtMostRows::<C>::new(n as usize)
                    .nth(rows as usize)
                    .expect("row iterator is unbounded")[n as usize]
                    .clone()
            },
        )
    }

    /// `p(n, r)`, partitions of `n` with every part at least `r`.
    pub fn min_part_count(&self, n: i64, r: u64) -> Result<C, SpecError> {
        let spec = ConstraintSpec::any().with_min_part(r)?;
        Ok(self.count_with(n, &spec, Method::Recurrence))
    }

    /// Number of partitions of `n` satisfying `spec`, by the recurrence route.
    pub fn count(&self, n: i64, spec: &ConstraintSpec) -> C {
        self.count_with(n, spec, Method::Recurrence)
    }

    pub fn count_with(&self, n: i64, spec: &ConstraintSpec, method: Method) -> C {
        if n < 0 {
            return C::zero();
        }
        let key = CountKey::new(n, spec);
        match method.resolve(spec) {
            Method::Reduction => {
                self.memoized(|m| &m.reduction, key, || count_by_reduction(n as u64, spec))
            }
            _ => self.memoized(
                |m| &m.recurrence,
                key,
                || count_by_recurrence(n as u64, spec),
            ),
        }
    }

    /// `p(n)` for every `n <= n_max` as column sums `sum_k p_k(n)` of the
    /// exact-length table, independent of the pentagonal route.
    pub fn totals_by_column_sum(&self, n_max: usize) -> Vec<C> {
        let mut totals = vec![C::zero(); n_max + 1];
        for (k, row) in DistantRows::<C>::new(0, n_max).take(n_max + 1).enumerate() {
            for (n, value) in row.iter().enumerate().skip(k) {
                totals[n].accumulate(value);
            }
        }
        totals
    }

    fn memoized(
        &self,
        table: impl Fn(&Memo<C>) -> &CountTable<C>,
        key: CountKey,
        compute: impl FnOnce() -> C,
    ) -> C {
        match &self.memo {
            None => compute(),
            Some(memo) => {
                let table = table(memo);
                if let Some(v) = table.get(&key) {
                    return v;
                }
                table.insert(key, compute())
            }
        }
    }
}

/// Extends `totals` (a correct prefix of `p`) through index `n`.
fn pentagonal_totals<C: Count>(mut totals: Vec<C>, n: usize) -> Vec<C> {
    if totals.is_empty() {
        totals.push(C::one());
    }
    for m in totals.len()..=n {
        let mut plus = C::zero();
        let mut minus = C::zero();
        // j = 1, -1, 2, -2, ...: signs + + - - + + ...
        'terms: for j in 1i64.. {
            for signed in [j, -j] {
                let offset = pentagonal_number(signed).expect("nonzero index") as usize;
                if offset > m {
                    break 'terms;
                }
                let term = &totals[m - offset];
                if j % 2 == 1 {
                    plus.accumulate(term);
                } else {
                    minus.accumulate(term);
                }
            }
        }
        totals.push(plus.difference(&minus));
    }
    totals
}

fn count_by_recurrence<C: Count>(n: u64, spec: &ConstraintSpec) -> C {
    let shift_per_part = spec.min_part() - 1;
    let lengths: Vec<u64> = feasible_lengths(n, spec).collect();
    let Some(&longest) = lengths.last() else {
        return C::zero();
    };
    let mut total = C::zero();
    let mut wanted = lengths.iter().peekable();
    for (j, row) in DistantRows::<C>::new(spec.min_gap(), n as usize)
        .take(longest as usize + 1)
        .enumerate()
    {
        if wanted.next_if_eq(&&(j as u64)).is_some() {
            let column = n - shift_per_part * j as u64;
            total.accumulate(&row[column as usize]);
        }
    }
    total
}

fn count_by_reduction<C: Count>(n: u64, spec: &ConstraintSpec) -> C {
    let lengths: Vec<u64> = feasible_lengths(n, spec).collect();
    let Some(&longest) = lengths.last() else {
        return C::zero();
    };
    let (r, d) = (spec.min_part(), spec.min_gap());
    let mut total = C::zero();
    let mut wanted = lengths.iter().peekable();
    for (j, row) in AtMostRows::<C>::new(n as usize)
        .take(longest as usize + 1)
        .enumerate()
    {
        if wanted.next_if_eq(&&(j as u64)).is_some() {
            let (reduced, _) = reduce_staircase(n as i64, j as u64, d, r);
            total.accumulate(&row[reduced as usize]);
        }
    }
    total
}
