//! Write-once memo table shared across threads.

use std::collections::HashMap;
use std::sync::RwLock;

use crate::count::Count;
use crate::partition::{ConstraintSpec, LengthMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountKey {
    pub n: i64,
    pub length: LengthMode,
    pub gap: u64,
    pub min_part: u64,
}

impl CountKey {
    pub fn new(n: i64, spec: &ConstraintSpec) -> Self {
        CountKey {
            n,
            length: spec.length(),
            gap: spec.min_gap(),
            min_part: spec.min_part(),
        }
    }

    pub fn spec(&self) -> ConstraintSpec {
        ConstraintSpec::new(self.length, self.min_part, self.gap)
            .expect("keys are built from valid specs")
    }
}

/// Concurrent readers, idempotent writers. Once a key holds a value it never
/// changes; a second insert of the same key is checked against the first.
#[derive(Debug, Default)]
pub struct CountTable<C> {
    entries: RwLock<HashMap<CountKey, C>>,
}

impl<C: Count> CountTable<C> {
    pub fn new() -> Self {
        CountTable {
            entries: RwLock::new(HashMap::new()),
        }
    }

    pub fn get(&self, key: &CountKey) -> Option<C> {
        self.entries
            .read()
            .expect("count table lock poisoned")
            .get(key)
            .cloned()
    }

    /// Stores `value` unless the key is already present, and returns the
    /// stored value.
    pub fn insert(&self, key: CountKey, value: C) -> C {
        let mut entries = self.entries.write().expect("count table lock poisoned");
        let stored = entries.entry(key).or_insert_with(|| value.clone());
        assert_eq!(
            *stored, value,
            "write-once violation for {key:?}: {stored} already stored, got {value}"
        );
        stored.clone()
    }

    pub fn len(&self) -> usize {
        self.entries
            .read()
            .expect("count table lock poisoned")
            .len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn insert_is_write_once() {
        let table = CountTable::<BigUint>::new();
        let key = CountKey::new(22, &ConstraintSpec::exactly(4).with_gap(1));
        assert_eq!(table.get(&key), None);
        assert_eq!(
            table.insert(key, BigUint::from(34u32)),
            BigUint::from(34u32)
        );
        assert_eq!(
            table.insert(key, BigUint::from(34u32)),
            BigUint::from(34u32)
        );
        assert_eq!(table.len(), 1);
    }

    #[test]
    #[should_panic(expected = "write-once violation")]
    fn conflicting_write_panics() {
        let table = CountTable::<u64>::new();
        let key = CountKey::new(1, &ConstraintSpec::any());
        table.insert(key, 1);
        table.insert(key, 2);
    }
}
