use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ktour_core::{Alpha, Allocation, Square, ViolationMin};
use serde::{Deserialize, Serialize};

/// The tuning set of exponents used by `sweep` when `--alphas` is absent.
pub const DEFAULT_ALPHAS: [f64; 12] = [-1.0, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 8.0, 10.0];

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
#[command(name = "ktour", version, about = "Count knight's tours exactly or by importance sampling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
pub enum Command {
    /// Count tours exactly by backtracking (small boards only).
    Exact(ExactArgs),
    /// Estimate tour counts with the randomized Warnsdorff sampler.
    Estimate(EstimateArgs),
    /// Repeat `estimate` over a list of exponents.
    Sweep(SweepArgs),
    /// Estimate the tour count split by number of Warnsdorff violations.
    Histogram(EstimateArgs),
    /// Re-run the command recorded in a manifest and compare checksums.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactTarget {
    OpenNumberings,
    ClosedNumberings,
    ClosedDiagrams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    OpenNumberings,
    OpenGeometric,
    ClosedDiagrams,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::OpenNumberings => "open-numberings",
            Target::OpenGeometric => "open-geometric",
            Target::ClosedDiagrams => "closed-diagrams",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinOver {
    #[default]
    All,
    Viable,
}

impl From<MinOver> for ViolationMin {
    fn from(m: MinOver) -> Self {
        match m {
            MinOver::All => ViolationMin::All,
            MinOver::Viable => ViolationMin::Viable,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AllocationArg {
    #[default]
    PerClass,
    PerSquare,
}

impl From<AllocationArg> for Allocation {
    fn from(a: AllocationArg) -> Self {
        match a {
            AllocationArg::PerClass => Allocation::PerClass,
            AllocationArg::PerSquare => Allocation::PerSquare,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ExactArgs {
    #[arg(long)]
    pub side: usize,
    #[arg(long, value_enum, default_value = "open-numberings")]
    pub target: ExactTarget,
    /// Restrict to tours starting at `file,rank`.
    #[arg(long, value_parser = parse_square)]
    pub start: Option<Square>,
    #[arg(long, default_value_t = ktour_core::DEFAULT_EXACT_LIMIT)]
    pub exact_limit: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Flags shared by every sampling command.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub side: usize,
    /// Runs per start class and replication (per square with
    /// `--allocation per-square`); scientific notation accepted.
    #[arg(long, default_value = "1e5", value_parser = parse_count)]
    pub samples: u64,
    #[arg(long, value_enum, default_value = "per-class")]
    pub allocation: AllocationArg,
    #[arg(long, default_value_t = 21)]
    pub reps: u32,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Sample from `file,rank` only instead of every start class.
    #[arg(long, value_parser = parse_square)]
    pub start: Option<Square>,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    #[serde(skip)]
    pub threads: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Where to write the run manifest; defaults to `<out>.manifest.json`.
    #[arg(long)]
    #[serde(skip)]
    pub manifest: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "all")]
    pub violation_min_over: MinOver,
    /// Allow `G = N / 16` on boards other than 8x8.
    #[arg(long)]
    pub assume_trivial_stabilizer: bool,
    /// Fill the cpu_seconds column (otherwise `NA`, keeping output
    /// byte-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EstimateArgs {
    #[arg(long, value_parser = parse_alpha, allow_hyphen_values = true)]
    pub alpha: Alpha,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "open-numberings")]
    pub target: Vec<Target>,
    #[command(flatten)]
    pub sample: SampleArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    /// Comma-separated exponents; `inf` selects pure Warnsdorff.
    #[arg(long, value_parser = parse_alpha, value_delimiter = ',', allow_hyphen_values = true)]
    pub alphas: Vec<Alpha>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "open-numberings")]
    pub target: Vec<Target>,
    #[command(flatten)]
    pub sample: SampleArgs,
}

impl SweepArgs {
    pub fn alphas(&self) -> Vec<Alpha> {
        if self.alphas.is_empty() {
            DEFAULT_ALPHAS.iter().map(|&a| Alpha::Finite(a)).collect()
        } else {
            self.alphas.clone()
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

pub fn parse_square(s: &str) -> Result<Square, String> {
    s.parse().map_err(|e: ktour_core::Error| e.to_string())
}

pub fn parse_alpha(s: &str) -> Result<Alpha, String> {
    s.parse().map_err(|e: ktour_core::Error| e.to_string())
}

/// A positive integer count, written plainly or as `5e5`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return if n == 0 {
            Err("count must be at least 1".into())
        } else {
            Ok(n)
        };
    }
    let x: f64 = s.parse().map_err(|_| format!("not a count: {s:?}"))?;
    if !(1.0..=9.007_199_254_740_992e15).contains(&x) || x.fract() != 0.0 {
        return Err(format!("not a positive integer count: {s:?}"));
    }
    Ok(x as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_accept_scientific_notation() {
        assert_eq!(parse_count("5e5").unwrap(), 500_000);
        assert_eq!(parse_count("1E6").unwrap(), 1_000_000);
        assert_eq!(parse_count("21").unwrap(), 21);
        assert!(parse_count("0").is_err());
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
        assert!(parse_count("lots").is_err());
    }

    #[test]
    fn parses_negative_alpha_and_lists() {
        let cli = Cli::try_parse_from([
            "ktour", "sweep", "--side", "5", "--alphas", "-1,0,inf", "--samples", "10",
        ])
        .unwrap();
        let Command::Sweep(s) = cli.command else { panic!() };
        assert_eq!(
            s.alphas(),
            vec![Alpha::Finite(-1.0), Alpha::Finite(0.0), Alpha::Infinite]
        );
        let cli = Cli::try_parse_from(["ktour", "sweep", "--side", "5"]).unwrap();
        let Command::Sweep(s) = cli.command else { panic!() };
        assert_eq!(s.alphas().len(), 12);
    }

    #[test]
    fn rejects_unknown_target() {
        assert!(Cli::try_parse_from([
            "ktour", "estimate", "--side", "5", "--alpha", "1", "--target", "everything"
        ])
        .is_err());
    }
}
