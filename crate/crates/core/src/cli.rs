//! The `tway` command-line driver.
//!
//! Exit codes: 0 success, 1 verification or coverage failure, 2 usage or
//! input error, 3 capacity or size limit.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{self, BenchReport, GenerationBench, SearchBench};
use crate::ca_model::{verify_coverage, CoveringArraySpec, TestSuite};
use crate::combgen::{generate_nbit, StackCombinations};
use crate::error::{Error, Result};
use crate::greedy::{generate_ca_run, GreedyConfig, GreedyRun, RNG_ALGORITHM};
use crate::store::{BuildOptions, StoreMechanism, DEFAULT_MAX_ELEMENTS};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_LIMIT: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "tway", version, about = "t-way combination generation and interaction coverage search")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate all t-combinations of k parameter indices
    GenCombos(GenCombosArgs),
    /// Time combination generation over a (k, t) grid
    BenchGen(BenchGenArgs),
    /// Time coverage queries of each store mechanism on one spec
    BenchSearch(BenchSearchArgs),
    /// Generate a covering array greedily
    GenerateCa(GenerateCaArgs),
    /// Check that a suite covers every t-tuple of a spec
    VerifyCa(VerifyCaArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Stack,
    Nbit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mech {
    Hash,
    Indexed,
    Full,
}

impl From<Mech> for StoreMechanism {
    fn from(m: Mech) -> Self {
        match m {
            Mech::Hash => StoreMechanism::Hash,
            Mech::Indexed => StoreMechanism::Indexed,
            Mech::Full => StoreMechanism::FullScan,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct GenCombosArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub t: usize,
    #[arg(long, value_enum, default_value_t = Algo::Stack)]
    pub algo: Algo,
    /// Write combinations here instead of stdout
    #[arg(long, conflicts_with = "count_only")]
    pub out: Option<PathBuf>,
    /// Print only the number of combinations
    #[arg(long)]
    pub count_only: bool,
}

#[derive(Debug, clap::Args)]
pub struct BenchGenArgs {
    #[arg(long, value_delimiter = ',', default_values_t = GenerationBench::default().k_list)]
    pub k: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = GenerationBench::default().t_list)]
    pub t: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, default_value_t = 3)]
    pub warmup: usize,
    /// Skip cases predicted to take longer than this per pass
    #[arg(long, default_value_t = 120)]
    pub budget_secs: u64,
    /// Largest k for which the n-bit enumerator is attempted
    #[arg(long, default_value_t = 30)]
    pub nbit_max_k: usize,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct BenchSearchArgs {
    /// Spec string, e.g. "t=2;k=10;v=10^10"
    #[arg(long)]
    pub spec: String,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Mech::Hash, Mech::Indexed, Mech::Full])]
    pub mech: Vec<Mech>,
    /// Greedy runs per mechanism
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    #[arg(long, default_value_t = 3)]
    pub warmup: usize,
    /// Timed random-row queries on a fresh store (0 to disable)
    #[arg(long, default_value_t = 30)]
    pub fresh_queries: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub candidates: usize,
    #[arg(long, default_value_t = 100_000)]
    pub max_rows: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_ELEMENTS)]
    pub max_elements: u64,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct GenerateCaArgs {
    /// Spec string, e.g. "t=2;k=10;v=10^10"
    #[arg(long)]
    pub spec: String,
    #[arg(long, value_enum, default_value_t = Mech::Hash)]
    pub mech: Mech,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub candidates: usize,
    #[arg(long, default_value_t = 100_000)]
    pub max_rows: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_ELEMENTS)]
    pub max_elements: u64,
    /// Suite CSV output
    #[arg(long)]
    pub out: PathBuf,
    /// Metadata JSON output [default: <out> with extension .meta.json]
    #[arg(long)]
    pub meta: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct VerifyCaArgs {
    #[arg(long)]
    pub spec: String,
    /// Suite CSV (one row per line, no header)
    #[arg(long)]
    pub suite: PathBuf,
}

/// Metadata written next to a generated suite.
#[derive(Debug, Serialize)]
pub struct SuiteMetadata {
    pub spec: String,
    pub mechanism: StoreMechanism,
    pub seed: u64,
    pub rng: &'static str,
    pub candidates_per_row: usize,
    pub rows: usize,
    pub complete: bool,
    pub remaining: u64,
    pub timings: Option<SuiteTimings>,
}

#[derive(Debug, Serialize)]
pub struct SuiteTimings {
    pub build_ms: f64,
    pub generation_ms: f64,
    pub queries: usize,
    pub max_query_ns: Option<u64>,
    pub median_query_ns: Option<u64>,
    pub fallback_rows: u64,
}

impl SuiteTimings {
    fn from_run(run: &GreedyRun) -> Self {
        let ms = |d: Duration| d.as_secs_f64() * 1e3;
        Self {
            build_ms: ms(run.stats.build_time),
            generation_ms: ms(run.stats.loop_time),
            queries: run.stats.queries(),
            max_query_ns: run.stats.max_query_nanos(),
            median_query_ns: bench::median(&run.stats.query_nanos),
            fallback_rows: run.stats.fallback_rows,
        }
    }
}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::IncompleteCoverage { .. } => EXIT_FAILURE,
        Error::UnsupportedSize { .. } | Error::Overflow(_) | Error::Capacity { .. } => EXIT_LIMIT,
        Error::InvalidArguments(_)
        | Error::InvalidCombination(_)
        | Error::InvalidTestCase(_)
        | Error::SpecParse { .. }
        | Error::Io(_)
        | Error::Csv(_)
        | Error::Json(_) => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

pub fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::GenCombos(args) => gen_combos(&args),
        Command::BenchGen(args) => bench_gen(&args),
        Command::BenchSearch(args) => bench_search(&args),
        Command::GenerateCa(args) => generate(&args),
        Command::VerifyCa(args) => verify(&args),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn gen_combos(args: &GenCombosArgs) -> Result<u8> {
    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match args.algo {
        Algo::Stack => {
            let mut gen = StackCombinations::new(args.k, args.t)?;
            if args.count_only {
                writeln!(out, "{}", gen.count_remaining())?;
            } else {
                while let Some(combo) = gen.next_slice() {
                    write_indices(&mut out, combo)?;
                }
            }
        }
        Algo::Nbit => {
            let list = generate_nbit(args.k, args.t)?;
            if args.count_only {
                writeln!(out, "{}", list.len())?;
            } else {
                for combo in &list {
                    write_indices(&mut out, combo.indices())?;
                }
            }
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn write_indices(out: &mut dyn Write, indices: &[usize]) -> io::Result<()> {
    for (n, i) in indices.iter().enumerate() {
        if n > 0 {
            out.write_all(b",")?;
        }
        write!(out, "{i}")?;
    }
    out.write_all(b"\n")
}

fn emit_report(report: &BenchReport, json: Option<&Path>, csv: Option<&Path>) -> Result<()> {
    if let Some(path) = json {
        report.write_json(create(path)?)?;
    }
    if let Some(path) = csv {
        report.write_csv(create(path)?)?;
    }
    if json.is_none() && csv.is_none() {
        report.write_json(io::stdout().lock())?;
    }
    Ok(())
}

fn bench_gen(args: &BenchGenArgs) -> Result<u8> {
    for &k in &args.k {
        for &t in &args.t {
            if k == 0 || t == 0 || t > k {
                return Err(Error::InvalidArguments(format!(
                    "case k = {k}, t = {t} needs 1 <= t <= k"
                )));
            }
        }
    }
    let config = GenerationBench {
        k_list: args.k.clone(),
        t_list: args.t.clone(),
        reps: args.reps.max(1),
        warmup: args.warmup,
        budget: Duration::from_secs(args.budget_secs),
        nbit_max_k: args.nbit_max_k,
        ..GenerationBench::default()
    };
    let report = bench::run_generation_bench(&config);
    emit_report(&report, args.json.as_deref(), args.csv.as_deref())?;
    Ok(EXIT_OK)
}

fn bench_search(args: &BenchSearchArgs) -> Result<u8> {
    let spec: CoveringArraySpec = args.spec.parse()?;
    let config = SearchBench {
        mechanisms: args.mech.iter().map(|&m| m.into()).collect(),
        reps: args.reps.max(1),
        warmup: args.warmup,
        fresh_queries: args.fresh_queries,
        greedy: GreedyConfig {
            candidates_per_row: args.candidates,
            rng_seed: args.seed,
            max_rows: args.max_rows,
        },
        build: BuildOptions {
            max_elements: args.max_elements,
        },
    };
    let report = bench::run_search_bench(&spec, &config);
    emit_report(&report, args.json.as_deref(), args.csv.as_deref())?;
    Ok(EXIT_OK)
}

fn generate(args: &GenerateCaArgs) -> Result<u8> {
    let spec: CoveringArraySpec = args.spec.parse()?;
    let mechanism = StoreMechanism::from(args.mech);
    let config = GreedyConfig {
        candidates_per_row: args.candidates,
        rng_seed: args.seed,
        max_rows: args.max_rows,
    };
    let options = BuildOptions {
        max_elements: args.max_elements,
    };
    let meta_path = args
        .meta
        .clone()
        .unwrap_or_else(|| args.out.with_extension("meta.json"));

    let (suite, remaining, timings) = match generate_ca_run(&spec, mechanism, &config, &options) {
        Ok(run) => {
            let timings = SuiteTimings::from_run(&run);
            (run.suite, 0, Some(timings))
        }
        Err(Error::IncompleteCoverage { remaining, suite }) => (*suite, remaining, None),
        Err(e) => return Err(e),
    };

    suite.write_csv(create(&args.out)?)?;
    let meta = SuiteMetadata {
        spec: spec.to_string(),
        mechanism,
        seed: args.seed,
        rng: RNG_ALGORITHM,
        candidates_per_row: args.candidates,
        rows: suite.len(),
        complete: remaining == 0,
        remaining,
        timings,
    };
    let mut meta_out = create(&meta_path)?;
    serde_json::to_writer_pretty(&mut meta_out, &meta)?;
    meta_out.write_all(b"\n")?;
    meta_out.flush()?;

    if remaining > 0 {
        eprintln!(
            "incomplete coverage: {remaining} interaction elements uncovered after {} rows",
            suite.len()
        );
        return Ok(EXIT_FAILURE);
    }
    println!("rows={} spec={} mechanism={} seed={}", suite.len(), spec, mechanism, args.seed);
    Ok(EXIT_OK)
}

fn verify(args: &VerifyCaArgs) -> Result<u8> {
    let spec: CoveringArraySpec = args.spec.parse()?;
    let suite = TestSuite::read_csv(spec, File::open(&args.suite)?)?;
    let report = verify_coverage(&suite);
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "rows={} covered={} missing={}",
        suite.len(),
        report.covered,
        report.missing.len()
    )?;
    for element in report.missing.iter().take(10) {
        writeln!(out, "missing {element}")?;
    }
    if report.missing.len() > 10 {
        writeln!(out, "... {} more", report.missing.len() - 10)?;
    }
    Ok(if report.is_complete() { EXIT_OK } else { EXIT_FAILURE })
}
