//! Command-line surface: one binary, five subcommands. Defaults are
//! chosen so `rank --metric srcr` works with no tuning at all.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use citerank::cocitation::AccumulationMode;
use citerank::graph::MIN_VALID_YEAR;
use citerank::metrics::MetricKind;

#[derive(Debug, Parser)]
#[command(
    name = "citerank",
    version,
    about = "Static ranking over citation graphs: scores, submissions, evaluation, synthetic data"
)]
pub struct Cli {
    /// Worker threads for parallel stages; 0 uses every core. Results
    /// are byte-identical for any value.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Log more (-v info, -vv debug); RUST_LOG overrides.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every paper and write a ranked submission file
    Rank(RankArgs),
    /// Measure a submission's agreement with preference judgments
    Eval(EvalArgs),
    /// Summarize co-citation neighborhood sizes as CSV
    Stats(StatsArgs),
    /// Generate a seeded synthetic dataset with planted ground truth
    Gen(GenArgs),
    /// Parse the input files and print the ingest summary
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Citations,
    Acr,
    Srcr,
    Pagerank,
}

impl From<MetricArg> for MetricKind {
    fn from(arg: MetricArg) -> Self {
        match arg {
            MetricArg::Citations => MetricKind::Citations,
            MetricArg::Acr => MetricKind::Acr,
            MetricArg::Srcr => MetricKind::Srcr,
            MetricArg::Pagerank => MetricKind::Pagerank,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Materialized neighborhoods, set semantics
    Exact,
    /// One-pass accumulation, multiset semantics, constant extra memory
    Streaming,
}

impl From<ModeArg> for AccumulationMode {
    fn from(arg: ModeArg) -> Self {
        match arg {
            ModeArg::Exact => AccumulationMode::Exact,
            ModeArg::Streaming => AccumulationMode::Streaming,
        }
    }
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Papers file: paper_id<TAB>year rows
    #[arg(long)]
    pub papers: PathBuf,

    /// References file: citing_id<TAB>cited_id rows
    #[arg(long)]
    pub references: PathBuf,

    #[arg(long, value_enum)]
    pub metric: MetricArg,

    /// Submission output path; the run manifest lands next to it
    #[arg(long)]
    pub out: PathBuf,

    /// Also dump raw metric scores as TSV
    #[arg(long)]
    pub scores_out: Option<PathBuf>,

    /// Reference year for citation ages; also caps accepted publication
    /// years. Defaults to the newest year in the papers file.
    #[arg(long)]
    pub as_of_year: Option<i32>,

    /// Additive smoothing constant of the relative citation ratio
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,

    #[arg(long, default_value_t = 0.85)]
    pub damping: f64,

    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,

    #[arg(long, default_value_t = 200)]
    pub max_iterations: u32,

    /// Co-citation accumulation strategy for the ratio metric
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,

    /// Cap on materialized co-citation storage
    #[arg(long, default_value_t = 4096)]
    pub memory_budget_mb: u64,

    /// Oldest publication year accepted at ingest
    #[arg(long, default_value_t = MIN_VALID_YEAR)]
    pub min_year: i32,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Submission file: paper_id<TAB>probability rows
    #[arg(long)]
    pub submission: PathBuf,

    /// Judgments file: better_id<TAB>worse_id rows
    #[arg(long)]
    pub judgments: PathBuf,

    /// Manifest path; defaults to <submission>.eval.manifest
    #[arg(long)]
    pub manifest_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub papers: PathBuf,

    #[arg(long)]
    pub references: PathBuf,

    /// Histogram CSV output path
    #[arg(long)]
    pub out: PathBuf,

    /// Restrict statistics to papers with at least one citation edge
    #[arg(long)]
    pub with_info_only: bool,

    #[arg(long, default_value_t = 4096)]
    pub memory_budget_mb: u64,

    #[arg(long, default_value_t = MIN_VALID_YEAR)]
    pub min_year: i32,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Directory for papers.tsv, references.tsv, planted_rank.tsv,
    /// judgments.tsv; created if missing
    #[arg(long)]
    pub out_dir: PathBuf,

    #[arg(long)]
    pub papers: u64,

    /// Fraction of papers kept out of the citation process
    #[arg(long, default_value_t = 0.59)]
    pub zero_info_fraction: f64,

    #[arg(long, default_value_t = 1.0)]
    pub attachment_exponent: f64,

    /// Mean reference-list size of citing papers
    #[arg(long, default_value_t = 8.0)]
    pub mean_out_degree: f64,

    #[arg(long, default_value_t = 2010)]
    pub first_year: i32,

    #[arg(long, default_value_t = 2014)]
    pub last_year: i32,

    /// Preference judgments to sample from the planted ranking
    #[arg(long, default_value_t = 2000)]
    pub judgments: u64,

    /// Minimum planted-rank distance within a judgment pair; defaults
    /// to papers/10
    #[arg(long)]
    pub min_rank_gap: Option<u64>,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub papers: PathBuf,

    #[arg(long)]
    pub references: PathBuf,

    #[arg(long, default_value_t = MIN_VALID_YEAR)]
    pub min_year: i32,

    /// Cap accepted publication years
    #[arg(long)]
    pub as_of_year: Option<i32>,
}
