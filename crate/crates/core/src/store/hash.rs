use rustc_hash::{FxHashMap, FxHashSet};

use super::{Counters, CoverageStore, Layout, StoreCounters, StoreMechanism};
use crate::ca_model::{Combination, CoveringArraySpec, InteractionElement, TestCase};
use crate::error::Result;

/// Hash table keyed by parameter combination; each bucket holds the codes of
/// the value tuples of that combination not yet covered. A query touches only
/// the bucket of each of the row's `C(k,t)` combinations.
#[derive(Debug, Clone)]
pub struct HashStore {
    pub(super) layout: Layout,
    buckets: FxHashMap<Combination, FxHashSet<u64>>,
    remaining: u64,
    counters: Counters,
}

impl HashStore {
    pub(super) fn build(layout: Layout) -> Self {
        let buckets = layout
            .combos
            .iter()
            .zip(&layout.tuple_counts)
            .map(|(combo, &n)| (combo.clone(), (0..n).collect()))
            .collect();
        Self {
            remaining: layout.total,
            layout,
            buckets,
            counters: Counters::default(),
        }
    }
}

impl CoverageStore for HashStore {
    fn spec(&self) -> &CoveringArraySpec {
        &self.layout.spec
    }

    fn mechanism(&self) -> StoreMechanism {
        StoreMechanism::Hash
    }

    fn coverage_count(&self, row: &TestCase) -> Result<u64> {
        self.layout.check(row)?;
        let values = row.values();
        let mut covered = 0;
        for combo in &self.layout.combos {
            let code = self.layout.encode(combo, values);
            if self.buckets.get(combo).is_some_and(|b| b.contains(&code)) {
                covered += 1;
            }
        }
        self.counters.record(self.layout.combos.len() as u64, 0);
        Ok(covered)
    }

    fn mark_covered(&mut self, row: &TestCase) -> Result<u64> {
        self.layout.check(row)?;
        let values = row.values();
        let mut removed = 0;
        for combo in &self.layout.combos {
            let code = self.layout.encode(combo, values);
            if self.buckets.get_mut(combo).is_some_and(|b| b.remove(&code)) {
                removed += 1;
            }
        }
        self.remaining -= removed;
        Ok(removed)
    }

    fn remaining(&self) -> u64 {
        self.remaining
    }

    fn first_uncovered(&self) -> Option<InteractionElement> {
        self.layout
            .combos
            .iter()
            .enumerate()
            .find_map(|(rank, combo)| {
                let code = self.buckets.get(combo)?.iter().min()?;
                Some(self.layout.element(rank, *code))
            })
    }

    fn counters(&self) -> StoreCounters {
        self.counters.snapshot()
    }
}
