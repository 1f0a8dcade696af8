//! The set of still-uncovered interaction elements and coverage queries
//! against candidate rows.
//!
//! Three mechanisms answer the same questions with different layouts:
//!
//! | mechanism  | layout                                                    | per-query work                |
//! |------------|-----------------------------------------------------------|-------------------------------|
//! | `Hash`     | hash map keyed by combination, value = set of value codes | `C(k,t)` bucket lookups       |
//! | `Indexed`  | one sorted array, offset table by combination rank        | linear scan of `C(k,t)` slices |
//! | `FullScan` | flat array of every element, no index                     | scan of the whole array       |
//!
//! Covered elements are deleted from hash buckets; the two array layouts
//! tombstone them instead so positions and offsets stay fixed.
//!
//! Within a combination a value tuple is packed into a single integer code by
//! mixed-radix encoding over that combination's domains, last position
//! fastest, so codes `0..prod(v)` run in odometer order.

mod full_scan;
mod hash;
mod indexed;
mod tombstones;

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::ca_model::{Combination, CoveringArraySpec, InteractionElement, TestCase, Value};
use crate::combgen::StackCombinations;
use crate::error::{Error, Result};

pub use full_scan::FullScanStore;
pub use hash::HashStore;
pub use indexed::IndexedStore;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StoreMechanism {
    Hash,
    Indexed,
    FullScan,
}

impl StoreMechanism {
    pub const ALL: [StoreMechanism; 3] = [Self::Hash, Self::Indexed, Self::FullScan];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Hash => "hash",
            Self::Indexed => "indexed",
            Self::FullScan => "full",
        }
    }
}

impl fmt::Display for StoreMechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StoreMechanism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hash" => Ok(Self::Hash),
            "indexed" | "index" => Ok(Self::Indexed),
            "full" | "full_scan" | "full-scan" | "fullscan" => Ok(Self::FullScan),
            other => Err(Error::InvalidArguments(format!(
                "unknown store mechanism {other:?} (expected hash, indexed or full)"
            ))),
        }
    }
}

/// Default element budget for [`build_store`].
pub const DEFAULT_MAX_ELEMENTS: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Largest number of interaction elements a store may hold.
    pub max_elements: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            max_elements: DEFAULT_MAX_ELEMENTS,
        }
    }
}

/// Read-only snapshot of a store's query instrumentation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoreCounters {
    /// `coverage_count` calls answered.
    pub queries: u64,
    /// Keyed lookups (hash buckets or offset-table slices) performed by queries.
    pub lookups: u64,
    /// Stored elements inspected by queries.
    pub scanned: u64,
}

#[derive(Debug, Default)]
struct Counters {
    queries: AtomicU64,
    lookups: AtomicU64,
    scanned: AtomicU64,
}

impl Counters {
    fn record(&self, lookups: u64, scanned: u64) {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.lookups.fetch_add(lookups, Ordering::Relaxed);
        self.scanned.fetch_add(scanned, Ordering::Relaxed);
    }

    fn snapshot(&self) -> StoreCounters {
        StoreCounters {
            queries: self.queries.load(Ordering::Relaxed),
            lookups: self.lookups.load(Ordering::Relaxed),
            scanned: self.scanned.load(Ordering::Relaxed),
        }
    }
}

impl Clone for Counters {
    fn clone(&self) -> Self {
        let s = self.snapshot();
        Self {
            queries: AtomicU64::new(s.queries),
            lookups: AtomicU64::new(s.lookups),
            scanned: AtomicU64::new(s.scanned),
        }
    }
}

/// Combinations of the spec in lexicographic order and the value-tuple
/// encoding shared by all mechanisms.
#[derive(Debug, Clone)]
struct Layout {
    spec: CoveringArraySpec,
    combos: Vec<Combination>,
    /// Number of value tuples per combination, parallel to `combos`.
    tuple_counts: Vec<u64>,
    total: u64,
}

impl Layout {
    fn new(spec: &CoveringArraySpec, options: &BuildOptions) -> Result<Self> {
        let total = spec.interaction_count()?;
        if total > u128::from(options.max_elements) {
            return Err(Error::Capacity {
                requested: total,
                budget: options.max_elements,
            });
        }
        let combos: Vec<Combination> =
            StackCombinations::new(spec.k(), spec.strength())?.collect();
        // each product is bounded by total, which fits the budget
        let tuple_counts = combos.iter().map(|c| spec.tuple_count(c) as u64).collect();
        Ok(Self {
            spec: spec.clone(),
            combos,
            tuple_counts,
            total: total as u64,
        })
    }

    #[inline]
    fn encode(&self, combo: &Combination, row: &[Value]) -> u64 {
        let domains = self.spec.domains();
        combo.indices().iter().fold(0u64, |code, &i| {
            code * u64::from(domains[i]) + u64::from(row[i])
        })
    }

    fn decode(&self, combo: &Combination, mut code: u64) -> Vec<Value> {
        let mut values = vec![0; combo.len()];
        for (slot, &i) in values.iter_mut().zip(combo.indices()).rev() {
            let v = u64::from(self.spec.domain(i));
            *slot = (code % v) as Value;
            code /= v;
        }
        values
    }

    fn element(&self, rank: usize, code: u64) -> InteractionElement {
        let combo = self.combos[rank].clone();
        let values = self.decode(&combo, code);
        InteractionElement { combo, values }
    }

    fn check(&self, row: &TestCase) -> Result<()> {
        self.spec.check_row(row)
    }
}

/// Operations every mechanism supports. The three implementations are
/// observationally equivalent; they differ only in cost.
pub trait CoverageStore {
    fn spec(&self) -> &CoveringArraySpec;

    fn mechanism(&self) -> StoreMechanism;

    /// Number of still-uncovered elements that `row` covers. Read-only.
    fn coverage_count(&self, row: &TestCase) -> Result<u64>;

    /// Removes every uncovered element `row` covers and returns how many
    /// were removed. Repeating a row removes nothing.
    fn mark_covered(&mut self, row: &TestCase) -> Result<u64>;

    /// Exact number of uncovered elements.
    fn remaining(&self) -> u64;

    /// Smallest uncovered element, ordered by combination rank and then by
    /// value tuple in odometer order.
    fn first_uncovered(&self) -> Option<InteractionElement>;

    fn counters(&self) -> StoreCounters;
}

/// A store built with one of the three mechanisms.
#[derive(Debug, Clone)]
pub enum InteractionStore {
    Hash(HashStore),
    Indexed(IndexedStore),
    FullScan(FullScanStore),
}

impl InteractionStore {
    fn inner(&self) -> &dyn CoverageStore {
        match self {
            Self::Hash(s) => s,
            Self::Indexed(s) => s,
            Self::FullScan(s) => s,
        }
    }

    fn inner_mut(&mut self) -> &mut dyn CoverageStore {
        match self {
            Self::Hash(s) => s,
            Self::Indexed(s) => s,
            Self::FullScan(s) => s,
        }
    }

    /// Number of elements the store held right after building.
    pub fn total(&self) -> u64 {
        match self {
            Self::Hash(s) => s.layout.total,
            Self::Indexed(s) => s.layout.total,
            Self::FullScan(s) => s.layout.total,
        }
    }
}

impl CoverageStore for InteractionStore {
    fn spec(&self) -> &CoveringArraySpec {
        self.inner().spec()
    }

    fn mechanism(&self) -> StoreMechanism {
        self.inner().mechanism()
    }

    fn coverage_count(&self, row: &TestCase) -> Result<u64> {
        self.inner().coverage_count(row)
    }

    fn mark_covered(&mut self, row: &TestCase) -> Result<u64> {
        self.inner_mut().mark_covered(row)
    }

    fn remaining(&self) -> u64 {
        self.inner().remaining()
    }

    fn first_uncovered(&self) -> Option<InteractionElement> {
        self.inner().first_uncovered()
    }

    fn counters(&self) -> StoreCounters {
        self.inner().counters()
    }
}

/// Builds a store holding every interaction element of `spec` with the
/// default element budget.
pub fn build_store(spec: &CoveringArraySpec, mechanism: StoreMechanism) -> Result<InteractionStore> {
    build_store_with(spec, mechanism, &BuildOptions::default())
}

pub fn build_store_with(
    spec: &CoveringArraySpec,
    mechanism: StoreMechanism,
    options: &BuildOptions,
) -> Result<InteractionStore> {
    let layout = Layout::new(spec, options)?;
    Ok(match mechanism {
        StoreMechanism::Hash => InteractionStore::Hash(HashStore::build(layout)),
        StoreMechanism::Indexed => InteractionStore::Indexed(IndexedStore::build(layout)?),
        StoreMechanism::FullScan => InteractionStore::FullScan(FullScanStore::build(layout)),
    })
}
