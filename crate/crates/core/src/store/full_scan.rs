use super::tombstones::Tombstones;
use super::{Counters, CoverageStore, Layout, StoreCounters, StoreMechanism};
use crate::ca_model::{CoveringArraySpec, InteractionElement, TestCase};
use crate::error::Result;

#[derive(Debug, Clone, Copy)]
struct Entry {
    rank: usize,
    code: u64,
}

/// Every interaction element in one flat array with no index. Each query
/// compares the row against every stored slot; covered elements are
/// tombstoned rather than removed, so the scan never shrinks.
#[derive(Debug, Clone)]
pub struct FullScanStore {
    pub(super) layout: Layout,
    entries: Vec<Entry>,
    dead: Tombstones,
    remaining: u64,
    counters: Counters,
}

impl FullScanStore {
    pub(super) fn build(layout: Layout) -> Self {
        let mut entries = Vec::with_capacity(layout.total as usize);
        for (rank, &n) in layout.tuple_counts.iter().enumerate() {
            entries.extend((0..n).map(|code| Entry { rank, code }));
        }
        Self {
            dead: Tombstones::new(entries.len()),
            remaining: layout.total,
            layout,
            entries,
            counters: Counters::default(),
        }
    }

    /// Code of the row's value tuple for every combination, by rank.
    fn row_codes(&self, row: &TestCase) -> Vec<u64> {
        self.layout
            .combos
            .iter()
            .map(|combo| self.layout.encode(combo, row.values()))
            .collect()
    }
}

impl CoverageStore for FullScanStore {
    fn spec(&self) -> &CoveringArraySpec {
        &self.layout.spec
    }

    fn mechanism(&self) -> StoreMechanism {
        StoreMechanism::FullScan
    }

    fn coverage_count(&self, row: &TestCase) -> Result<u64> {
        self.layout.check(row)?;
        let codes = self.row_codes(row);
        let covered = self
            .entries
            .iter()
            .enumerate()
            .filter(|(pos, e)| codes[e.rank] == e.code && !self.dead.get(*pos))
            .count() as u64;
        self.counters.record(0, self.entries.len() as u64);
        Ok(covered)
    }

    fn mark_covered(&mut self, row: &TestCase) -> Result<u64> {
        self.layout.check(row)?;
        let codes = self.row_codes(row);
        let mut removed = 0;
        for (pos, e) in self.entries.iter().enumerate() {
            if codes[e.rank] == e.code && self.dead.set(pos) {
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
        // entries are laid out in (rank, code) order
        let e = self.entries[self.dead.first_clear()?];
        Some(self.layout.element(e.rank, e.code))
    }

    fn counters(&self) -> StoreCounters {
        self.counters.snapshot()
    }
}
