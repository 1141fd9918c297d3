//! Exact counting of integer partitions under simultaneous constraints:
//! number of parts (exactly or at most `k`), minimum part `r` and minimum
//! difference `d` between adjacent parts.
//!
//! The crate provides
//!
//! - a counting engine ([`CountingEngine`]) with two independent routes for
//!   constrained counts plus Euler's pentagonal recurrence for `p(n)`,
//!   generic over the count scalar ([`Count`]);
//! - a brute-force generator ([`enumerate`]) used as ground truth;
//! - executable checks of partition identities over parameter grids ([`identity`]);
//! - the staircase bijection between partitions of `n` and `d`-distant
//!   partitions with a fixed number of parts ([`bijection`]);
//! - a benchmark harness comparing the routes ([`bench`]) and a CLI ([`cli`]).
//!
//! ```
//! use partition_kit::{ConstraintSpec, Engine};
//!
//! let engine = Engine::new();
//! // Four distinct parts summing to 22.
//! let spec = ConstraintSpec::exactly(4).with_gap(1);
//! assert_eq!(engine.count(22, &spec), 34u32.into());
//! ```

pub mod bench;
pub mod bijection;
pub mod cli;
mod count;
mod engine;
pub mod enumerate;
pub mod identity;
mod partition;
mod table;

pub use count::Count;
pub use engine::{
    p2_closed_form, pentagonal_number, reduce_staircase, CountingEngine, EngineError, Method,
};
pub use enumerate::{count_by_enumeration, enumerate, EnumerationBudget, EnumerationError};
pub use partition::{binomial2, ConstraintSpec, LengthMode, Partition, PartitionError, SpecError};
pub use table::{CountKey, CountTable};

/// Arbitrary-precision count.
pub type BigCount = num_bigint::BigUint;

/// The default engine, over [`BigCount`].
pub type Engine = CountingEngine<BigCount>;

/// A fixed-width engine; panics if a count exceeds `u128`.
pub type WideEngine = CountingEngine<u128>;
