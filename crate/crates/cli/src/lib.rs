//! Driver for the `ktour` command line tool.
//!
//! Commands render their output into a string so that the binary, the
//! manifest checksum and the tests all see the same bytes.

pub mod args;
pub mod manifest;
pub mod output;

use std::time::Instant;

use clap::Parser;
use ktour_core::exact::ExactEnumerator;
use ktour_core::stats::{self, ViolationHistogramEstimate};
use ktour_core::{
    run_replications_timed, Alpha, BatchResult, Board, Error as CoreError, Estimate,
    SamplerConfig, StartSpec, TourKind,
};
use thiserror::Error;

use crate::args::{Cli, Command, EstimateArgs, ExactArgs, ExactTarget, Format, SampleArgs, SweepArgs, Target};
use crate::manifest::Manifest;
use crate::output::{json, render_histogram, render_rows, ResultRow};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Refused(String),
    #[error("replay mismatch: manifest checksum {expected}, re-run produced {actual}")]
    ReplayMismatch { expected: String, actual: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad manifest: {0}")]
    Manifest(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Refused(_) => 3,
            _ => 1,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ExactInfeasible { .. } => CliError::Refused(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// What a command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub stdout: String,
    pub warnings: Vec<String>,
    pub manifest: Option<Manifest>,
}

impl Outcome {
    fn plain(stdout: String) -> Self {
        Outcome {
            stdout,
            warnings: Vec::new(),
            manifest: None,
        }
    }
}

/// Parses `argv` (without the program name) and runs the command.
pub fn run_args<I, S>(argv: I) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(std::iter::once("ktour".to_string()).chain(argv.iter().cloned()))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    run(&cli, &argv)
}

pub fn run(cli: &Cli, argv: &[String]) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Exact(a) => cmd_exact(a),
        Command::Estimate(a) => with_pool(a.sample.threads, || cmd_estimate(a, argv)),
        Command::Sweep(a) => with_pool(a.sample.threads, || cmd_sweep(a, argv)),
        Command::Histogram(a) => with_pool(a.sample.threads, || cmd_histogram(a, argv)),
        Command::Replay(a) => manifest::replay(&a.manifest, a.threads),
    }
}

fn with_pool<T>(threads: usize, f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool construction");
    pool.install(f)
}

pub fn cmd_exact(a: &ExactArgs) -> Result<Outcome, CliError> {
    let board = Board::new(a.side)?;
    let kind = match a.target {
        ExactTarget::OpenNumberings => TourKind::OpenNumbering,
        ExactTarget::ClosedNumberings => TourKind::ClosedNumbering,
        ExactTarget::ClosedDiagrams => TourKind::ClosedDiagram,
    };
    if a.start.is_some() && kind == TourKind::ClosedDiagram {
        return Err(CliError::Usage(
            "--start does not apply to closed-diagrams; use closed-numberings".into(),
        ));
    }
    let count = ExactEnumerator::new(&board)
        .with_limit(a.exact_limit)
        .count(kind, a.start)?;
    Ok(Outcome::plain(match a.format {
        Format::Csv => format!("{}\n", count.value),
        Format::Json => json(&count),
    }))
}

fn sampler_config(s: &SampleArgs, alpha: Alpha) -> SamplerConfig {
    SamplerConfig {
        board_side: s.side,
        alpha,
        samples_per_replication: s.samples,
        replications: s.reps,
        base_seed: s.seed,
        start: s.start.map_or(StartSpec::AllClasses, StartSpec::Square),
        violation_min: s.violation_min_over.into(),
        allocation: s.allocation.into(),
    }
}

struct Sampled {
    config: SamplerConfig,
    batches: Vec<BatchResult>,
    cpu_seconds: f64,
}

fn sample(s: &SampleArgs, alpha: Alpha) -> Result<Sampled, CliError> {
    let config = sampler_config(s, alpha);
    let started = Instant::now();
    let timed = run_replications_timed(&config)?;
    let busy: f64 = timed.iter().map(|(_, d)| d.as_secs_f64()).sum();
    eprintln!(
        "sampled side={} alpha={} in {:.1}s",
        config.board_side,
        alpha,
        started.elapsed().as_secs_f64()
    );
    Ok(Sampled {
        cpu_seconds: busy / config.replications as f64,
        batches: timed.into_iter().map(|(b, _)| b).collect(),
        config,
    })
}

/// Estimate of `target` from sampled batches, plus a warning when no
/// sampled run contributed to it.
pub fn estimate_target(
    batches: &[BatchResult],
    target: Target,
    assume_trivial_stabilizer: bool,
) -> Result<(Estimate, Option<String>), CliError> {
    let (estimate, hits) = match target {
        Target::OpenNumberings => (
            stats::estimate_numberings(batches)?,
            batches.iter().map(|b| b.successes).sum::<u64>(),
        ),
        Target::OpenGeometric => {
            let n = stats::estimate_numberings(batches)?;
            (
                stats::to_geometric(&n, assume_trivial_stabilizer)?,
                batches.iter().map(|b| b.successes).sum(),
            )
        }
        Target::ClosedDiagrams => (
            stats::estimate_closed_diagrams(batches)?,
            batches.iter().map(|b| b.closed_successes).sum(),
        ),
    };
    let warning = (hits == 0).then(|| {
        format!(
            "warning: no sampled run contributed to {} at alpha={}; the estimate is 0",
            target.name(),
            estimate.alpha
        )
    });
    Ok((estimate, warning))
}

/// Rejects target combinations that would only fail after sampling.
fn check_targets(targets: &[Target], s: &SampleArgs) -> Result<(), CliError> {
    if targets.contains(&Target::OpenGeometric) {
        if s.start.is_some() {
            return Err(CliError::Usage(
                "open-geometric needs every start class; drop --start".into(),
            ));
        }
        if s.side != 8 && !s.assume_trivial_stabilizer {
            return Err(CoreError::StabilizerAssumption(s.side).into());
        }
    }
    Ok(())
}

fn rows_for(
    sampled: &Sampled,
    targets: &[Target],
    s: &SampleArgs,
    warnings: &mut Vec<String>,
) -> Result<Vec<ResultRow>, CliError> {
    let mut rows = Vec::new();
    for &t in targets {
        let (e, warning) = estimate_target(&sampled.batches, t, s.assume_trivial_stabilizer)?;
        if let Some(w) = warning {
            eprintln!("{w}");
            warnings.push(w);
        }
        rows.push(ResultRow::new(t.name(), &e, s.timing.then_some(sampled.cpu_seconds)));
    }
    Ok(rows)
}

pub fn cmd_estimate(a: &EstimateArgs, argv: &[String]) -> Result<Outcome, CliError> {
    check_targets(&a.target, &a.sample)?;
    let started = Instant::now();
    let sampled = sample(&a.sample, a.alpha)?;
    let mut warnings = Vec::new();
    let rows = rows_for(&sampled, &a.target, &a.sample, &mut warnings)?;
    let stdout = render_rows(&rows, a.sample.format);
    let manifest = Manifest::new("estimate", argv, vec![sampled.config], &stdout, started);
    Ok(Outcome {
        stdout,
        warnings,
        manifest: Some(manifest),
    })
}

pub fn cmd_sweep(a: &SweepArgs, argv: &[String]) -> Result<Outcome, CliError> {
    check_targets(&a.target, &a.sample)?;
    let started = Instant::now();
    let mut warnings = Vec::new();
    let mut rows = Vec::new();
    let mut configs = Vec::new();
    for alpha in a.alphas() {
        let sampled = sample(&a.sample, alpha)?;
        rows.extend(rows_for(&sampled, &a.target, &a.sample, &mut warnings)?);
        configs.push(sampled.config);
    }
    let stdout = render_rows(&rows, a.sample.format);
    let manifest = Manifest::new("sweep", argv, configs, &stdout, started);
    Ok(Outcome {
        stdout,
        warnings,
        manifest: Some(manifest),
    })
}

/// The histogram estimate behind `histogram`, exposed for callers that want
/// the numbers rather than rendered text.
pub fn histogram_estimate(a: &EstimateArgs) -> Result<ViolationHistogramEstimate, CliError> {
    let sampled = sample(&a.sample, a.alpha)?;
    Ok(stats::estimate_violation_histogram(
        &sampled.batches,
        a.sample.assume_trivial_stabilizer,
    )?)
}

pub fn cmd_histogram(a: &EstimateArgs, argv: &[String]) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let sampled = sample(&a.sample, a.alpha)?;
    let h = stats::estimate_violation_histogram(&sampled.batches, a.sample.assume_trivial_stabilizer)?;
    let mut warnings = Vec::new();
    if sampled.batches.iter().all(|b| b.successes == 0) {
        let w = format!("warning: no sampled run completed at alpha={}", a.alpha);
        eprintln!("{w}");
        warnings.push(w);
    }
    eprintln!("histogram total {}", output::sci(h.total()));
    let stdout = render_histogram(&h, a.sample.format);
    let manifest = Manifest::new("histogram", argv, vec![sampled.config], &stdout, started);
    Ok(Outcome {
        stdout,
        warnings,
        manifest: Some(manifest),
    })
}
