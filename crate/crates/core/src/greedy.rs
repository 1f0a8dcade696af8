//! One-test-at-a-time greedy covering-array generation.
//!
//! Each iteration samples `candidates_per_row` uniformly random rows, asks
//! the store how many uncovered elements each would cover, and appends the
//! best one (the first sampled wins ties). When no candidate covers anything
//! new, the row is instead built around the smallest uncovered element so the
//! loop always makes progress. Generation stops when the store is empty.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ca_model::{CoveringArraySpec, TestCase, TestSuite, Value};
use crate::error::{Error, Result};
use crate::store::{build_store_with, BuildOptions, CoverageStore, StoreMechanism};

/// Name of the random generator behind [`GreedyConfig::rng_seed`].
pub const RNG_ALGORITHM: &str = "ChaCha8Rng";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyConfig {
    pub candidates_per_row: usize,
    pub rng_seed: u64,
    /// Give up with [`Error::IncompleteCoverage`] after this many rows.
    pub max_rows: usize,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        Self {
            candidates_per_row: 50,
            rng_seed: 0,
            max_rows: 100_000,
        }
    }
}

impl GreedyConfig {
    pub fn with_seed(rng_seed: u64) -> Self {
        Self {
            rng_seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.candidates_per_row == 0 {
            return Err(Error::InvalidArguments("candidates_per_row must be >= 1".into()));
        }
        if self.max_rows == 0 {
            return Err(Error::InvalidArguments("max_rows must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct GreedyStats {
    /// Time spent building the store, when the run built it.
    pub build_time: Duration,
    /// Wall time of the generation loop.
    pub loop_time: Duration,
    /// Wall time of every `coverage_count` call, in order.
    pub query_nanos: Vec<u64>,
    /// Rows seeded from an uncovered element because no candidate helped.
    pub fallback_rows: u64,
}

impl GreedyStats {
    pub fn queries(&self) -> usize {
        self.query_nanos.len()
    }

    pub fn max_query_nanos(&self) -> Option<u64> {
        self.query_nanos.iter().copied().max()
    }
}

#[derive(Debug, Clone)]
pub struct GreedyRun {
    pub suite: TestSuite,
    pub stats: GreedyStats,
}

/// Builds a store for `spec` with `mechanism` and greedily covers it.
pub fn generate_ca(
    spec: &CoveringArraySpec,
    mechanism: StoreMechanism,
    config: &GreedyConfig,
) -> Result<TestSuite> {
    generate_ca_run(spec, mechanism, config, &BuildOptions::default()).map(|run| run.suite)
}

/// As [`generate_ca`], also returning timing statistics.
pub fn generate_ca_run(
    spec: &CoveringArraySpec,
    mechanism: StoreMechanism,
    config: &GreedyConfig,
    options: &BuildOptions,
) -> Result<GreedyRun> {
    config.validate()?;
    let started = Instant::now();
    let mut store = build_store_with(spec, mechanism, options)?;
    let build_time = started.elapsed();
    let mut run = run_greedy(&mut store, config)?;
    run.stats.build_time = build_time;
    Ok(run)
}

/// Greedily covers whatever `store` still holds.
pub fn run_greedy<S: CoverageStore + ?Sized>(store: &mut S, config: &GreedyConfig) -> Result<GreedyRun> {
    config.validate()?;
    let spec = store.spec().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut suite = TestSuite::empty(spec.clone());
    let mut stats = GreedyStats::default();
    let started = Instant::now();

    while store.remaining() > 0 {
        if suite.len() >= config.max_rows {
            return Err(Error::IncompleteCoverage {
                remaining: store.remaining(),
                suite: Box::new(suite),
            });
        }

        let mut best: Option<(u64, TestCase)> = None;
        for _ in 0..config.candidates_per_row {
            let candidate = random_row(&spec, &mut rng);
            let query = Instant::now();
            let gain = store.coverage_count(&candidate)?;
            stats.query_nanos.push(query.elapsed().as_nanos() as u64);
            if best.as_ref().is_none_or(|(g, _)| gain > *g) {
                best = Some((gain, candidate));
            }
        }

        let row = match best {
            Some((gain, row)) if gain > 0 => row,
            _ => {
                let target = store
                    .first_uncovered()
                    .expect("remaining > 0 implies an uncovered element");
                let mut values = random_row(&spec, &mut rng).into_values();
                for (&i, &v) in target.combo.indices().iter().zip(&target.values) {
                    values[i] = v;
                }
                stats.fallback_rows += 1;
                TestCase::new(values)
            }
        };
        store.mark_covered(&row)?;
        suite.push(row)?;
    }

    stats.loop_time = started.elapsed();
    Ok(GreedyRun { suite, stats })
}

fn random_row(spec: &CoveringArraySpec, rng: &mut ChaCha8Rng) -> TestCase {
    TestCase::new(
        spec.domains()
            .iter()
            .map(|&v| rng.gen_range(0..v) as Value)
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ca_model::verify_coverage;

    fn spec(s: &str) -> CoveringArraySpec {
        s.parse().unwrap()
    }

    #[test]
    fn two_parameters_need_every_pair() {
        let suite = generate_ca(&spec("t=2;k=2;v=2,2"), StoreMechanism::Hash, &GreedyConfig::default())
            .unwrap();
        assert_eq!(suite.len(), 4);
        assert!(verify_coverage(&suite).is_complete());
    }

    #[test]
    fn four_ternary_parameters() {
        let s = spec("t=2;k=4;v=3^4");
        let suite = generate_ca(&s, StoreMechanism::Indexed, &GreedyConfig::with_seed(7)).unwrap();
        assert!(verify_coverage(&suite).is_complete());
        assert!(suite.len() >= 9);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let s = spec("t=3;k=6;v=2,3,2,3,2,3");
        let cfg = GreedyConfig::with_seed(42);
        let a = generate_ca(&s, StoreMechanism::Hash, &cfg).unwrap();
        let b = generate_ca(&s, StoreMechanism::Hash, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_candidate_still_terminates() {
        let s = spec("t=3;k=5;v=4^5");
        let cfg = GreedyConfig {
            candidates_per_row: 1,
            ..GreedyConfig::with_seed(3)
        };
        let run = generate_ca_run(&s, StoreMechanism::FullScan, &cfg, &BuildOptions::default()).unwrap();
        assert!(verify_coverage(&run.suite).is_complete());
        assert_eq!(run.stats.queries(), run.suite.len());
    }

    #[test]
    fn row_cap_reports_partial_suite() {
        let s = spec("t=2;k=4;v=3^4");
        let cfg = GreedyConfig {
            max_rows: 5,
            ..GreedyConfig::default()
        };
        match generate_ca(&s, StoreMechanism::Hash, &cfg) {
            Err(Error::IncompleteCoverage { remaining, suite }) => {
                assert_eq!(suite.len(), 5);
                assert!(remaining > 0);
                assert_eq!(verify_coverage(&suite).missing.len() as u64, remaining);
            }
            other => panic!("expected incomplete coverage, got {other:?}"),
        }
    }

    #[test]
    fn rejects_degenerate_config() {
        let s = spec("t=2;k=2;v=2,2");
        for cfg in [
            GreedyConfig { candidates_per_row: 0, ..GreedyConfig::default() },
            GreedyConfig { max_rows: 0, ..GreedyConfig::default() },
        ] {
            assert!(matches!(
                generate_ca(&s, StoreMechanism::Hash, &cfg),
                Err(Error::InvalidArguments(_))
            ));
        }
    }
}
