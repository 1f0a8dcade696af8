use super::tombstones::Tombstones;
use super::{Counters, CoverageStore, Layout, StoreCounters, StoreMechanism};
use crate::ca_model::{CoveringArraySpec, InteractionElement, TestCase};
use crate::combgen::CombinationRanker;
use crate::error::Result;

/// One array of element codes sorted by (combination rank, code), with an
/// offset table giving each combination's slice. A lookup ranks the
/// combination and scans its slice linearly, so its cost grows with the
/// number of value tuples per combination. Covered elements are tombstoned
/// so offsets never move.
#[derive(Debug, Clone)]
pub struct IndexedStore {
    pub(super) layout: Layout,
    ranker: CombinationRanker,
    codes: Vec<u64>,
    offsets: Vec<usize>,
    dead: Tombstones,
    remaining: u64,
    counters: Counters,
}

impl IndexedStore {
    pub(super) fn build(layout: Layout) -> Result<Self> {
        let ranker = CombinationRanker::new(layout.spec.k(), layout.spec.strength())?;
        let mut codes = Vec::with_capacity(layout.total as usize);
        let mut offsets = Vec::with_capacity(layout.combos.len() + 1);
        offsets.push(0);
        for &n in &layout.tuple_counts {
            codes.extend(0..n);
            offsets.push(codes.len());
        }
        Ok(Self {
            dead: Tombstones::new(codes.len()),
            remaining: layout.total,
            layout,
            ranker,
            codes,
            offsets,
            counters: Counters::default(),
        })
    }

    /// Position of `code` in the slice of combination `rank`, plus the
    /// number of entries inspected to find it.
    fn find(&self, rank: usize, code: u64) -> (Option<usize>, u64) {
        let (start, end) = (self.offsets[rank], self.offsets[rank + 1]);
        match self.codes[start..end].iter().position(|&c| c == code) {
            Some(p) => (Some(start + p), p as u64 + 1),
            None => (None, (end - start) as u64),
        }
    }
}

impl CoverageStore for IndexedStore {
    fn spec(&self) -> &CoveringArraySpec {
        &self.layout.spec
    }

    fn mechanism(&self) -> StoreMechanism {
        StoreMechanism::Indexed
    }

    fn coverage_count(&self, row: &TestCase) -> Result<u64> {
        self.layout.check(row)?;
        let values = row.values();
        let (mut covered, mut scanned) = (0, 0);
        for combo in &self.layout.combos {
            let rank = self.ranker.rank(combo.indices()) as usize;
            let (pos, inspected) = self.find(rank, self.layout.encode(combo, values));
            scanned += inspected;
            if pos.is_some_and(|p| !self.dead.get(p)) {
                covered += 1;
            }
        }
        self.counters.record(self.layout.combos.len() as u64, scanned);
        Ok(covered)
    }

    fn mark_covered(&mut self, row: &TestCase) -> Result<u64> {
        self.layout.check(row)?;
        let values = row.values();
        let mut removed = 0;
        for combo in &self.layout.combos {
            let rank = self.ranker.rank(combo.indices()) as usize;
            if let (Some(p), _) = self.find(rank, self.layout.encode(combo, values)) {
                if self.dead.set(p) {
                    removed += 1;
                }
            }
        }
        self.remaining -= removed;
        Ok(removed)
    }

    fn remaining(&self) -> u64 {
        self.remaining
    }

    fn first_uncovered(&self) -> Option<InteractionElement> {
        let pos = self.dead.first_clear()?;
        let rank = self.offsets.partition_point(|&o| o <= pos) - 1;
        Some(self.layout.element(rank, self.codes[pos]))
    }

    fn counters(&self) -> StoreCounters {
        self.counters.snapshot()
    }
}
