//! Benchmark harness for combination generation and coverage search.
//!
//! Two families of cases:
//!
//! * **generation**: wall time of one full streaming pass of the stack
//!   generator for each `(k, t)`, and of the n-bit enumerator where it is
//!   feasible. Cases predicted to run past the time budget are recorded as
//!   skipped.
//! * **search**: for each store mechanism, build the store and run the greedy
//!   generator with a fixed seed, timing every `coverage_count` call. The
//!   maximum is the figure of merit; min and median are reported alongside.
//!   `search_fresh` records time queries of random rows against a freshly
//!   built (full) store.
//!
//! Cases and mechanisms run strictly one after another. Reports serialise to
//! JSON (`{"environment": {...}, "records": [...]}`) or CSV (one record per
//! line with a header); field names are listed in [`RECORD_FIELDS`].

use std::hint::black_box;
use std::io::Write;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ca_model::{verify_coverage, CoveringArraySpec, TestCase, Value};
use crate::combgen::{count_combinations, generate_nbit, generate_stack, StackCombinations, NBIT_MAX_K};
use crate::error::Result;
use crate::greedy::{run_greedy, GreedyConfig};
use crate::store::{build_store_with, BuildOptions, CoverageStore, StoreMechanism};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchKind {
    Generation,
    Search,
    SearchFresh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseStatus {
    Ok,
    Skipped,
    Failed,
}

/// Field names of [`BenchRecord`], in serialisation order.
pub const RECORD_FIELDS: &[&str] = &[
    "kind", "algorithm", "k", "t", "v", "status", "note", "reps", "warmup", "samples", "min_ns",
    "median_ns", "max_ns", "items", "rows", "lookups", "scanned", "build_ns", "verified",
];

/// One (case, algorithm or mechanism) measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub kind: BenchKind,
    /// `stack` / `nbit` for generation, a store mechanism for search.
    pub algorithm: String,
    pub k: usize,
    pub t: usize,
    /// Domain sizes in spec notation (`10^10`); empty for generation.
    pub v: String,
    pub status: CaseStatus,
    pub note: String,
    pub reps: usize,
    pub warmup: usize,
    /// Number of timed samples behind min/median/max.
    pub samples: usize,
    pub min_ns: Option<u64>,
    pub median_ns: Option<u64>,
    pub max_ns: Option<u64>,
    /// Combinations produced per pass, or elements in the built store.
    pub items: Option<u64>,
    /// Rows of the generated suite (search only).
    pub rows: Option<u64>,
    pub lookups: Option<u64>,
    pub scanned: Option<u64>,
    /// Median store build time (search only).
    pub build_ns: Option<u64>,
    /// Output cross-check: stack vs n-bit equality, pass-count vs binomial,
    /// or suite verification.
    pub verified: Option<bool>,
}

impl BenchRecord {
    fn new(kind: BenchKind, algorithm: &str, k: usize, t: usize, v: String) -> Self {
        Self {
            kind,
            algorithm: algorithm.to_owned(),
            k,
            t,
            v,
            status: CaseStatus::Ok,
            note: String::new(),
            reps: 0,
            warmup: 0,
            samples: 0,
            min_ns: None,
            median_ns: None,
            max_ns: None,
            items: None,
            rows: None,
            lookups: None,
            scanned: None,
            build_ns: None,
            verified: None,
        }
    }

    fn skipped(mut self, note: impl Into<String>) -> Self {
        self.status = CaseStatus::Skipped;
        self.note = note.into();
        self
    }

    fn failed(mut self, note: impl Into<String>) -> Self {
        self.status = CaseStatus::Failed;
        self.note = note.into();
        self
    }

    fn with_times(mut self, mut nanos: Vec<u64>) -> Self {
        nanos.sort_unstable();
        self.samples = nanos.len();
        self.min_ns = nanos.first().copied();
        self.median_ns = median_sorted(&nanos);
        self.max_ns = nanos.last().copied();
        self
    }
}

fn median_sorted(sorted: &[u64]) -> Option<u64> {
    match sorted.len() {
        0 => None,
        n if n % 2 == 1 => Some(sorted[n / 2]),
        n => Some((sorted[n / 2 - 1] + sorted[n / 2]) / 2),
    }
}

/// Median of unsorted samples.
pub fn median(samples: &[u64]) -> Option<u64> {
    let mut sorted = samples.to_vec();
    sorted.sort_unstable();
    median_sorted(&sorted)
}

/// Nanoseconds, never zero, so every recorded time is strictly positive.
fn nanos(d: Duration) -> u64 {
    (d.as_nanos() as u64).max(1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvironmentStamp {
    pub os: String,
    pub arch: String,
    pub cpu: String,
    pub logical_cpus: usize,
    /// `release` or `debug`.
    pub build_profile: String,
    pub timestamp_unix: u64,
    pub crate_version: String,
}

impl EnvironmentStamp {
    pub fn capture() -> Self {
        let cpu = std::fs::read_to_string("/proc/cpuinfo")
            .ok()
            .and_then(|info| {
                info.lines()
                    .find(|l| l.starts_with("model name"))
                    .and_then(|l| l.split_once(':'))
                    .map(|(_, name)| name.trim().to_owned())
            })
            .unwrap_or_else(|| "unknown".to_owned());
        Self {
            os: std::env::consts::OS.to_owned(),
            arch: std::env::consts::ARCH.to_owned(),
            cpu,
            logical_cpus: std::thread::available_parallelism().map_or(1, |n| n.get()),
            build_profile: if cfg!(debug_assertions) { "debug" } else { "release" }.to_owned(),
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            crate_version: env!("CARGO_PKG_VERSION").to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub environment: EnvironmentStamp,
    pub records: Vec<BenchRecord>,
}

impl BenchReport {
    pub fn new(records: Vec<BenchRecord>) -> Self {
        Self {
            environment: EnvironmentStamp::capture(),
            records,
        }
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        if self.records.is_empty() {
            writer.write_record(RECORD_FIELDS)?;
        }
        for record in &self.records {
            writer.serialize(record)?;
        }
        writer.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationBench {
    pub k_list: Vec<usize>,
    pub t_list: Vec<usize>,
    pub reps: usize,
    pub warmup: usize,
    /// Cases predicted to need longer than this for one pass are skipped.
    pub budget: Duration,
    /// Largest `k` the n-bit baseline is attempted for.
    pub nbit_max_k: usize,
    /// Largest case whose stack and n-bit outputs are compared element-wise.
    pub verify_limit: u64,
}

impl Default for GenerationBench {
    fn default() -> Self {
        Self {
            k_list: vec![20, 50, 100, 200, 300, 400],
            t_list: vec![2, 3, 4, 5, 6],
            reps: 3,
            warmup: 3,
            budget: Duration::from_secs(120),
            nbit_max_k: 30,
            verify_limit: 1_000_000,
        }
    }
}

/// Nanoseconds per combination of a streaming stack pass, measured on a
/// mid-sized case. Used only to predict whether a case fits the budget.
fn calibrate_stack_rate() -> f64 {
    let (k, t) = (60, 4);
    let started = Instant::now();
    let n = black_box(StackCombinations::new(k, t).expect("valid").count_remaining());
    nanos(started.elapsed()) as f64 / n as f64
}

fn time_reps<T>(reps: usize, warmup: usize, mut pass: impl FnMut() -> T) -> (Vec<u64>, Option<T>) {
    for _ in 0..warmup {
        black_box(pass());
    }
    let mut times = Vec::with_capacity(reps);
    let mut last = None;
    for _ in 0..reps {
        let started = Instant::now();
        let out = black_box(pass());
        times.push(nanos(started.elapsed()));
        last = Some(out);
    }
    (times, last)
}

pub fn run_generation_bench(config: &GenerationBench) -> BenchReport {
    let reps = config.reps.max(1);
    let rate = calibrate_stack_rate();
    let mut records = Vec::new();

    for &k in &config.k_list {
        for &t in &config.t_list {
            records.push(stack_case(config, k, t, reps, rate));
            records.push(nbit_case(config, k, t, reps));
        }
    }
    BenchReport::new(records)
}

fn stack_case(config: &GenerationBench, k: usize, t: usize, reps: usize, rate: f64) -> BenchRecord {
    let mut record = BenchRecord::new(BenchKind::Generation, "stack", k, t, String::new());
    record.reps = reps;
    record.warmup = config.warmup;
    let expected = match count_combinations(k, t) {
        Ok(n) => n,
        Err(e) => return record.failed(e.to_string()),
    };
    let predicted = Duration::from_secs_f64(expected as f64 * rate / 1e9);
    if predicted > config.budget {
        return record.skipped(format!(
            "C({k},{t}) = {expected}: predicted {:.1}s per pass exceeds the {}s budget",
            predicted.as_secs_f64(),
            config.budget.as_secs()
        ));
    }
    let (times, produced) = time_reps(reps, config.warmup, || {
        StackCombinations::new(k, t).expect("validated").count_remaining()
    });
    record.items = produced;
    record.verified = produced.map(|n| n == expected);
    record.with_times(times)
}

fn nbit_case(config: &GenerationBench, k: usize, t: usize, reps: usize) -> BenchRecord {
    let mut record = BenchRecord::new(BenchKind::Generation, "nbit", k, t, String::new());
    record.reps = reps;
    record.warmup = config.warmup;
    if k > NBIT_MAX_K {
        let err = generate_nbit(k, t).expect_err("k beyond the word width");
        return record.failed(err.to_string());
    }
    if k > config.nbit_max_k {
        return record.skipped(format!(
            "2^{k} masks exceeds the n-bit budget of k <= {}",
            config.nbit_max_k
        ));
    }
    let (times, list) = time_reps(reps, config.warmup, || generate_nbit(k, t));
    match list {
        Some(Ok(list)) => {
            record.items = Some(list.len() as u64);
            let small = count_combinations(k, t).is_ok_and(|n| n <= config.verify_limit);
            if small {
                record.verified = generate_stack(k, t).ok().map(|stack| stack == list);
            }
            record.with_times(times)
        }
        Some(Err(e)) => record.failed(e.to_string()),
        None => record.failed("no repetitions ran"),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchBench {
    pub mechanisms: Vec<StoreMechanism>,
    /// Greedy runs per mechanism.
    pub reps: usize,
    /// Untimed queries issued against each fresh store before timing.
    pub warmup: usize,
    /// Timed random-row queries against a fresh store; 0 disables the
    /// `search_fresh` records.
    pub fresh_queries: usize,
    pub greedy: GreedyConfig,
    pub build: BuildOptions,
}

impl Default for SearchBench {
    fn default() -> Self {
        Self {
            mechanisms: StoreMechanism::ALL.to_vec(),
            reps: 1,
            warmup: 3,
            fresh_queries: 30,
            greedy: GreedyConfig::with_seed(1),
            build: BuildOptions::default(),
        }
    }
}

fn random_rows(spec: &CoveringArraySpec, n: usize, seed: u64) -> Vec<TestCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            TestCase::new(
                spec.domains()
                    .iter()
                    .map(|&v| rng.gen_range(0..v) as Value)
                    .collect(),
            )
        })
        .collect()
}

/// Times `queries` coverage queries of random rows (drawn from `seed`)
/// against a freshly built store, after `warmup` untimed ones.
pub fn sample_query_times(
    spec: &CoveringArraySpec,
    mechanism: StoreMechanism,
    queries: usize,
    warmup: usize,
    seed: u64,
    options: &BuildOptions,
) -> Result<Vec<u64>> {
    let store = build_store_with(spec, mechanism, options)?;
    let rows = random_rows(spec, warmup + queries, seed);
    let mut times = Vec::with_capacity(queries);
    for (n, row) in rows.iter().enumerate() {
        let started = Instant::now();
        black_box(store.coverage_count(row)?);
        if n >= warmup {
            times.push(nanos(started.elapsed()));
        }
    }
    Ok(times)
}

pub fn run_search_bench(spec: &CoveringArraySpec, config: &SearchBench) -> BenchReport {
    let mut records = Vec::new();
    let v = spec.to_string();
    let v = v.split_once("v=").map_or(String::new(), |(_, v)| v.to_owned());
    for &mechanism in &config.mechanisms {
        if config.fresh_queries > 0 {
            records.push(fresh_case(spec, &v, mechanism, config));
        }
        records.push(greedy_case(spec, &v, mechanism, config));
    }
    BenchReport::new(records)
}

fn fresh_case(spec: &CoveringArraySpec, v: &str, mechanism: StoreMechanism, config: &SearchBench) -> BenchRecord {
    let mut record = BenchRecord::new(
        BenchKind::SearchFresh,
        mechanism.as_str(),
        spec.k(),
        spec.strength(),
        v.to_owned(),
    );
    record.reps = 1;
    record.warmup = config.warmup;
    match sample_query_times(
        spec,
        mechanism,
        config.fresh_queries,
        config.warmup,
        config.greedy.rng_seed,
        &config.build,
    ) {
        Ok(times) => {
            record.items = spec.interaction_count().ok().map(|n| n as u64);
            record.with_times(times)
        }
        Err(e) => record.failed(e.to_string()),
    }
}

fn greedy_case(spec: &CoveringArraySpec, v: &str, mechanism: StoreMechanism, config: &SearchBench) -> BenchRecord {
    let mut record = BenchRecord::new(
        BenchKind::Search,
        mechanism.as_str(),
        spec.k(),
        spec.strength(),
        v.to_owned(),
    );
    let reps = config.reps.max(1);
    record.reps = reps;
    record.warmup = config.warmup;

    let warm_rows = random_rows(spec, config.warmup, config.greedy.rng_seed ^ 0x5eed);
    let mut times = Vec::new();
    let mut builds = Vec::with_capacity(reps);
    for _ in 0..reps {
        let started = Instant::now();
        let mut store = match build_store_with(spec, mechanism, &config.build) {
            Ok(store) => store,
            Err(e) => return record.failed(e.to_string()),
        };
        builds.push(nanos(started.elapsed()));
        for row in &warm_rows {
            if let Err(e) = store.coverage_count(row) {
                return record.failed(e.to_string());
            }
        }
        let before = store.counters();
        let run = match run_greedy(&mut store, &config.greedy) {
            Ok(run) => run,
            Err(e) => return record.failed(e.to_string()),
        };
        let after = store.counters();
        times.extend(run.stats.query_nanos.iter().map(|&n| n.max(1)));
        record.items = Some(store.total());
        record.rows = Some(run.suite.len() as u64);
        record.lookups = Some(after.lookups - before.lookups);
        record.scanned = Some(after.scanned - before.scanned);
        record.verified = Some(verify_coverage(&run.suite).is_complete());
    }
    record.build_ns = median(&builds);
    record.with_times(times)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[]), None);
        assert_eq!(median(&[5, 1, 3]), Some(3));
        assert_eq!(median(&[4, 1, 3, 2]), Some(2));
    }

    #[test]
    fn record_fields_match_serialisation() {
        let record = BenchRecord::new(BenchKind::Search, "hash", 2, 2, "2^2".into());
        let value = serde_json::to_value(&record).unwrap();
        let keys: Vec<&str> = value.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = RECORD_FIELDS.to_vec();
        let mut got = keys;
        expected.sort_unstable();
        got.sort_unstable();
        assert_eq!(got, expected);
    }

    #[test]
    fn smoke_generation() {
        let config = GenerationBench {
            k_list: vec![3],
            t_list: vec![2],
            reps: 2,
            warmup: 1,
            ..GenerationBench::default()
        };
        let report = run_generation_bench(&config);
        assert_eq!(report.records.len(), 2);
        for r in &report.records {
            assert_eq!(r.status, CaseStatus::Ok);
            assert_eq!(r.items, Some(3));
            assert_eq!(r.verified, Some(true));
            assert!(r.min_ns.unwrap() > 0);
        }
    }

    #[test]
    fn generation_skips_and_fails_out_of_budget_cases() {
        let config = GenerationBench {
            k_list: vec![400],
            t_list: vec![6],
            reps: 1,
            warmup: 0,
            ..GenerationBench::default()
        };
        let report = run_generation_bench(&config);
        assert_eq!(report.records[0].status, CaseStatus::Skipped);
        assert_eq!(report.records[1].status, CaseStatus::Failed);
        assert!(report.records[1].note.contains("unsupported size"));
    }

    #[test]
    fn smoke_search() {
        let spec: CoveringArraySpec = "t=2;k=2;v=2,2".parse().unwrap();
        let report = run_search_bench(&spec, &SearchBench::default());
        assert_eq!(report.records.len(), 6);
        for r in report.records.iter().filter(|r| r.kind == BenchKind::Search) {
            assert_eq!(r.status, CaseStatus::Ok, "{}", r.note);
            assert_eq!(r.rows, Some(4));
            assert_eq!(r.verified, Some(true));
            assert_eq!(r.v, "2^2");
        }
    }
}
