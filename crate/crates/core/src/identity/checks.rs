//! One cell of each identity family.
//!
//! Left-hand sides go through the engine's recurrence route (or the
//! pentagonal route for `p(n)`); right-hand sides are built from terms
//! evaluated by the staircase-reduction route or the at-most-`k` table, so
//! no identity compares a function with itself.

use num_bigint::BigInt;

use super::expansion::{expand, step_argument, ExpansionError};
use super::{Cell, Formula};
use crate::engine::{CountingEngine, Method};
use crate::partition::{binomial2, minimal_weight, ConstraintSpec};
use crate::BigCount;

type Engine = CountingEngine<BigCount>;

fn fixed_length(engine: &Engine, n: i64, k: i64, r: u64, d: u64, method: Method) -> BigInt {
    if k < 0 {
        return BigInt::ZERO;
    }
    let spec = ConstraintSpec::exactly(k as u64)
        .with_gap(d)
        .with_min_part(r)
        .expect("identity minimum parts are positive");
    engine.count_with(n, &spec, method).into()
}

fn lhs(engine: &Engine, n: i64, k: i64, r: u64, d: u64) -> BigInt {
    fixed_length(engine, n, k, r, d, Method::Recurrence)
}

fn term(engine: &Engine, n: i64, k: i64, r: u64, d: u64) -> BigInt {
    fixed_length(engine, n, k, r, d, Method::Reduction)
}

/// `p_k^(1)(n, 2) = sum_{i=0}^{k} (-1)^i p_{k-i}^(1)(n - i)`.
pub fn check_prop1(engine: &Engine, n: i64, k: i64) -> Cell {
    let rhs = (0..=k.max(-1))
        .map(|i| {
            let t = term(engine, n - i, k - i, 1, 1);
            if i % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum();
    Cell::new([("n", n), ("k", k)], lhs(engine, n, k, 2, 1), rhs)
}

/// `p_k^(1)(n) = p_{k-1}^(1)(n-1, 2) + p_k^(1)(n-k)`.
pub fn check_prop2(engine: &Engine, n: i64, k: i64) -> Cell {
    let rhs = term(engine, n - 1, k - 1, 2, 1) + term(engine, n - k, k, 1, 1);
    Cell::new([("n", n), ("k", k)], lhs(engine, n, k, 1, 1), rhs)
}

/// Sum of `p_{k-1}^(d)` over the arguments produced by `argument(i)` for
/// `i = first, first+1, ...`, stopping once the argument drops below the
/// smallest weight `k-1` such parts can have.
fn truncated_sum(
    engine: &Engine,
    k: i64,
    d: u64,
    first: u64,
    argument: impl Fn(u64) -> i64,
) -> BigInt {
    let floor = minimal_weight((k - 1) as u64, 1, d) as i128;
    let mut total = BigInt::ZERO;
    for i in first.. {
        let a = argument(i);
        if i128::from(a) < floor {
            break;
        }
        total += term(engine, a, k - 1, 1, d);
    }
    total
}

/// `p_k^(1)(n) = sum_{i>=1} p_{k-1}^(1)(n - k*i)`, for `k >= 1`.
pub fn check_cor3(engine: &Engine, n: i64, k: i64) -> Cell {
    assert!(k >= 1, "the length-lowering sum needs k >= 1");
    let rhs = truncated_sum(engine, k, 1, 1, |i| n - k * i as i64);
    Cell::new([("n", n), ("k", k)], lhs(engine, n, k, 1, 1), rhs)
}

/// `p_k^(d)(n) = p_k^(d)(n + d*k, d + 1)`.
pub fn check_prop4(engine: &Engine, n: i64, k: i64, d: u64) -> Cell {
    let rhs = term(engine, n + d as i64 * k, k, d + 1, d);
    Cell::new(
        [("n", n), ("k", k), ("d", d as i64)],
        lhs(engine, n, k, 1, d),
        rhs,
    )
}

/// `p_k^(d)(n) = p_{k-1}^(d)(n-1, d+1) + p_k^(d)(n-k)`.
pub fn check_prop5(engine: &Engine, n: i64, k: i64, d: u64) -> Cell {
    let rhs = term(engine, n - 1, k - 1, d + 1, d) + term(engine, n - k, k, 1, d);
    Cell::new(
        [("n", n), ("k", k), ("d", d as i64)],
        lhs(engine, n, k, 1, d),
        rhs,
    )
}

/// `p_k^(d)(n) = sum_{i>=d} p_{k-1}^(d)(n - k*i + d - 1)`, for `k >= 1`.
pub fn check_cor6(engine: &Engine, n: i64, k: i64, d: u64) -> Cell {
    assert!(k >= 1, "the length-lowering sum needs k >= 1");
    let rhs = truncated_sum(engine, k, d, d, |i| step_argument(n, k as u64, d, i));
    Cell::new(
        [("n", n), ("k", k), ("d", d as i64)],
        lhs(engine, n, k, 1, d),
        rhs,
    )
}

/// Repeated length-lowering down to `target` parts.
pub fn check_iterated_expansion(
    engine: &Engine,
    n: i64,
    k: u64,
    d: u64,
    target: u64,
) -> Result<Cell, ExpansionError> {
    let expansion = expand(n, k, d, target)?;
    let rhs: BigInt = expansion.sum(engine).into();
    Ok(Cell::new(
        [
            ("n", n),
            ("k", k as i64),
            ("d", d as i64),
            ("target", target as i64),
        ],
        lhs(engine, n, k as i64, 1, d),
        rhs,
    ))
}

/// `p_k^(d-1)(n) = p_k^(d)(n + C(k,2))`, for `d >= 1`.
pub fn check_shift_d(engine: &Engine, n: i64, k: i64, d: u64) -> Cell {
    assert!(d >= 1, "the gap shift needs d >= 1");
    let rhs = term(engine, n + binomial2(k.max(0) as u64) as i64, k, 1, d);
    Cell::new(
        [("n", n), ("k", k), ("d", d as i64)],
        lhs(engine, n, k, 1, d - 1),
        rhs,
    )
}

/// Durfee-square sums for 2-distant partitions:
/// variant 1 `p^(2)(n) = sum_i p_{<=i}(n - i^2)`,
/// variant 2 `p^(2)(n, 2) = sum_i p_{<=i}(n - i(i+1))`.
/// The sum starts at `i = 0`, which only contributes the empty partition.
pub fn check_durfee(engine: &Engine, n: i64, variant: u8) -> Cell {
    assert!(variant == 1 || variant == 2, "Durfee variant is 1 or 2");
    let min_part = u64::from(variant);
    let spec = ConstraintSpec::any()
        .with_gap(2)
        .with_min_part(min_part)
        .expect("positive minimum part");
    let left: BigInt = engine.count_with(n, &spec, Method::Recurrence).into();
    let offset = |i: i64| if variant == 1 { i * i } else { i * (i + 1) };
    let right = (0i64..)
        .take_while(|&i| offset(i) <= n)
        .map(|i| BigInt::from(engine.p_at_most_k(n - offset(i), i)))
        .sum();
    Cell::new([("n", n)], left, right)
}

/// `p(n) = p_{mn}(mn + n)`.
pub fn check_rel39(engine: &Engine, n: i64, m: i64) -> Cell {
    let rhs = engine.p_exact_k(m * n + n, m * n).into();
    Cell::new([("n", n), ("m", m)], engine.p_total(n).into(), rhs)
}

/// `p(n) = p_n^(d)(2n + d*C(n,2))`.
pub fn check_theorem_main(engine: &Engine, n: i64, d: u64) -> Cell {
    let weight = 2 * n + (d * binomial2(n.max(0) as u64)) as i64;
    Cell::new(
        [("n", n), ("d", d as i64)],
        engine.p_total(n).into(),
        lhs(engine, weight, n, 1, d),
    )
}

/// Target weight of the multiple-length generalization.
pub fn generalized_weight(n: i64, m: i64, d: u64, formula: Formula) -> i64 {
    let staircase = match formula {
        Formula::Paper => binomial2(n.max(0) as u64),
        Formula::Corrected => binomial2((m * n).max(0) as u64),
    };
    m * n + n + (d * staircase) as i64
}

/// `p(n) = p_{mn}^(d)(weight)` with the weight given by `formula`.
pub fn check_generalized_m(engine: &Engine, n: i64, m: i64, d: u64, formula: Formula) -> Cell {
    let weight = generalized_weight(n, m, d, formula);
    Cell::new(
        [("n", n), ("m", m), ("d", d as i64)],
        engine.p_total(n).into(),
        lhs(engine, weight, m * n, 1, d),
    )
}

/// First differences between the left argument and the first right
/// argument of the length-lowering sum, for `k = 3, 4, 5` and `d = 0..=3`.
pub const REFERENCE_DELTA_TABLE: [(u64, [u64; 4]); 3] =
    [(3, [1, 3, 5, 7]), (4, [1, 4, 7, 10]), (5, [1, 5, 9, 13])];

/// `n` minus the first argument of the expansion of `p_k^(d)(n)`.
pub fn first_difference(k: u64, d: u64) -> i64 {
    let n = (k * (d + 1) + 1) as i64;
    let expansion = expand(n, k, d, k - 1).expect("k >= 1");
    n - expansion.terms[0].argument
}

fn reference_delta(k: u64, d: u64) -> Option<u64> {
    REFERENCE_DELTA_TABLE
        .iter()
        .find(|(row, _)| *row == k)
        .and_then(|(_, cols)| cols.get(d as usize).copied())
}

/// The first difference for `(k, d)` against the reference table where it
/// has an entry and against `d(k-1) + 1` elsewhere.
pub fn check_delta_table(k: u64, d: u64) -> Cell {
    assert!(k >= 1, "first differences need k >= 1");
    let expected = reference_delta(k, d).unwrap_or(d * (k - 1) + 1);
    Cell::new(
        [("k", k as i64), ("d", d as i64), ("increment", 0)],
        first_difference(k, d).into(),
        expected.into(),
    )
}

/// The first difference grows by `d` from `k - 1` to `k`, for `k >= 2`.
pub fn check_delta_increment(k: u64, d: u64) -> Cell {
    assert!(k >= 2, "increments need k >= 2");
    Cell::new(
        [("k", k as i64), ("d", d as i64), ("increment", 1)],
        (first_difference(k, d) - first_difference(k - 1, d)).into(),
        d.into(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(cell: &Cell) -> (i64, i64) {
        (
            i64::try_from(&cell.lhs).unwrap(),
            i64::try_from(&cell.rhs).unwrap(),
        )
    }

    #[test]
    fn prop1_examples() {
        let e = Engine::new();
        assert_eq!(pair(&check_prop1(&e, 7, 2)), (2, 2));
        assert_eq!(pair(&check_prop1(&e, 0, 0)), (1, 1));
        assert_eq!(pair(&check_prop1(&e, 5, 1)), (1, 1));
    }

    #[test]
    fn prop2_examples() {
        let e = Engine::new();
        assert_eq!(pair(&check_prop2(&e, 22, 4)), (34, 34));
        assert_eq!(pair(&check_prop2(&e, 0, 0)), (1, 1));
        assert_eq!(pair(&check_prop2(&e, 6, 3)), (1, 1));
    }

    #[test]
    fn cor3_examples() {
        let e = Engine::new();
        assert_eq!(pair(&check_cor3(&e, 22, 4)), (34, 34));
        for n in 1..20 {
            assert_eq!(pair(&check_cor3(&e, n, 1)), (1, 1));
        }
        assert_eq!(pair(&check_cor3(&e, 12, 3)), (7, 7));
    }

    #[test]
    fn prop4_and_prop5_examples() {
        let e = Engine::new();
        assert_eq!(pair(&check_prop4(&e, 6, 3, 1)), (1, 1));
        assert_eq!(pair(&check_prop4(&e, 0, 0, 2)), (1, 1));
        assert_eq!(pair(&check_prop4(&e, 18, 3, 2)), (12, 12));
        assert_eq!(pair(&check_prop5(&e, 18, 3, 2)), (12, 12));
        assert_eq!(pair(&check_prop5(&e, 0, 0, 3)), (1, 1));
        assert!(check_prop5(&e, 27, 4, 1).passed());
    }

    #[test]
    fn cor6_examples() {
        let e = Engine::new();
        assert_eq!(pair(&check_cor6(&e, 18, 3, 2)), (12, 12));
        for n in 1..10 {
            assert_eq!(pair(&check_cor6(&e, n, 1, 0)), (1, 1));
        }
        assert_eq!(pair(&check_cor6(&e, 0, 1, 0)), (0, 0));
        assert_eq!(pair(&check_cor6(&e, 22, 4, 1)), (34, 34));
    }

    #[test]
    fn shift_examples() {
        let e = Engine::new();
        assert_eq!(pair(&check_shift_d(&e, 9, 3, 1)), (7, 7));
        assert_eq!(pair(&check_shift_d(&e, 18, 3, 3)), (12, 12));
        let reflexive = check_shift_d(&e, 5, 1, 2);
        assert_eq!(pair(&reflexive), (1, 1));
    }

    #[test]
    fn durfee_examples() {
        let e = Engine::new();
        assert_eq!(pair(&check_durfee(&e, 9, 1)), (5, 5));
        assert_eq!(pair(&check_durfee(&e, 0, 1)), (1, 1));
        assert_eq!(pair(&check_durfee(&e, 0, 2)), (1, 1));
        assert_eq!(pair(&check_durfee(&e, 11, 2)), (4, 4));
    }

    #[test]
    fn rel39_and_theorem_examples() {
        let e = Engine::new();
        assert_eq!(pair(&check_rel39(&e, 3, 1)), (3, 3));
        for m in 1..5 {
            assert_eq!(pair(&check_rel39(&e, 1, m)), (1, 1));
        }
        assert_eq!(pair(&check_rel39(&e, 4, 2)), (5, 5));
        assert_eq!(pair(&check_theorem_main(&e, 3, 2)), (3, 3));
        assert_eq!(pair(&check_theorem_main(&e, 5, 1)), (7, 7));
        for n in 0..8 {
            assert_eq!(check_theorem_main(&e, n, 0).lhs, check_rel39(&e, n, 1).rhs);
        }
    }

    #[test]
    fn generalized_formulas() {
        let e = Engine::new();
        assert_eq!(
            pair(&check_generalized_m(&e, 2, 2, 1, Formula::Paper)),
            (2, 0)
        );
        assert_eq!(
            pair(&check_generalized_m(&e, 2, 2, 1, Formula::Corrected)),
            (2, 2)
        );
        for n in 0..6 {
            for d in 0..3 {
                let paper = check_generalized_m(&e, n, 1, d, Formula::Paper);
                let corrected = check_generalized_m(&e, n, 1, d, Formula::Corrected);
                assert_eq!(paper, corrected);
                assert_eq!(paper.rhs, check_theorem_main(&e, n, d).rhs);
            }
        }
    }

    #[test]
    fn delta_table_values() {
        assert_eq!(first_difference(3, 2), 5);
        assert_eq!(first_difference(4, 3), 10);
        for k in 1..8 {
            assert_eq!(first_difference(k, 0), 1);
        }
        assert!(check_delta_table(5, 3).passed());
        assert!(check_delta_increment(4, 2).passed());
    }
}
