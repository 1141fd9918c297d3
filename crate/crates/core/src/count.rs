//! Count scalar abstraction.
//!
//! The counting engine is written against [`Count`] so the same recurrences
//! run over arbitrary-precision integers ([`BigCount`](crate::BigCount)) or
//! fixed-width unsigned integers. Fixed-width counts panic on overflow rather
//! than wrapping.

use std::fmt::{Debug, Display};

use num_bigint::BigUint;
use num_traits::{CheckedAdd, CheckedSub, FromPrimitive, One, Unsigned, Zero};

/// A nonnegative exact count.
pub trait Count: Clone + Eq + Ord + Debug + Display + Send + Sync + Zero + One + 'static {
    /// `self += other`, panicking if the scalar type cannot hold the result.
    fn accumulate(&mut self, other: &Self);

    /// `self - other`. The caller guarantees `self >= other`.
    fn difference(&self, other: &Self) -> Self;

    fn from_u64(value: u64) -> Self;

    fn to_biguint(&self) -> BigUint;
}

impl<T> Count for T
where
    T: Unsigned
        + CheckedAdd
        + CheckedSub
        + FromPrimitive
        + Clone
        + Ord
        + Debug
        + Display
        + Send
        + Sync
        + Into<BigUint>
        + 'static,
{
    fn accumulate(&mut self, other: &Self) {
        *self = self
            .checked_add(other)
            .unwrap_or_else(|| panic!("count overflow: {self} + {other} exceeds the scalar type"));
    }

    fn difference(&self, other: &Self) -> Self {
        self.checked_sub(other)
            .unwrap_or_else(|| panic!("negative count: {self} - {other}"))
    }

    fn from_u64(value: u64) -> Self {
        <T as FromPrimitive>::from_u64(value).expect("u64 fits every supported count type")
    }

    fn to_biguint(&self) -> BigUint {
        self.clone().into()
    }
}

/// `[condition]` as a count.
pub(crate) fn indicator<C: Count>(condition: bool) -> C {
    if condition {
        C::one()
    } else {
        C::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_width_and_big_agree() {
        let mut a = 7u64;
        a.accumulate(&5);
        let mut b = BigUint::from(7u32);
        b.accumulate(&BigUint::from(5u32));
        assert_eq!(a.to_biguint(), b);
        assert_eq!(b.difference(&BigUint::from(2u32)), BigUint::from(10u32));
    }

    #[test]
    #[should_panic(expected = "count overflow")]
    fn fixed_width_overflow_panics() {
        let mut a = u64::MAX;
        a.accumulate(&1);
    }
}
