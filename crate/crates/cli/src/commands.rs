//! Subcommand implementations. Each takes its parsed arguments, runs
//! the pipeline, writes outputs plus a run manifest, and prints one
//! summary line to stdout. All fatal paths map to a distinct exit code
//! per pipeline stage.

use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use thiserror::Error;

use citerank::cocitation::{
    accumulate_exact, accumulate_streaming, build_neighborhoods, neighborhood_stats,
    AccumulationMode, CocitationError,
};
use citerank::eval::{agreement, read_judgments, EvalError};
use citerank::graph::{ingest, IngestError, IngestSummary, ParseOptions};
use citerank::metrics::{
    citation_rates, compute_metric, relative_citation_ratio, write_scores, MetricKind,
    MetricOutput, MetricParams, MetricsError,
};
use citerank::ranking::{normalize, read_submission, write_submission, RankingError};
use citerank::synth::{generate, SynthConfig, SynthError};

use crate::args::{Cli, Command, EvalArgs, GenArgs, RankArgs, StatsArgs, ValidateArgs};
use crate::manifest::{manifest_path_for, RunManifest};

/// Top-level command error. Every variant exits with its own code so
/// scripts can tell the failing stage apart: 2 ingest, 3 co-citation,
/// 4 metrics, 5 ranking, 6 evaluation, 7 generation, 8 output I/O
/// (usage errors exit 1 before any command runs).
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Cocitation(#[from] CocitationError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Ranking(#[from] RankingError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Ingest(_) => 2,
            CliError::Cocitation(_) | CliError::Metrics(MetricsError::Cocitation(_)) => 3,
            CliError::Metrics(_) => 4,
            CliError::Ranking(_) => 5,
            CliError::Eval(_) => 6,
            CliError::Synth(_) => 7,
            CliError::Output { .. } => 8,
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Rank(args) => cmd_rank(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Validate(args) => cmd_validate(args),
    }
}

fn output_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Output {
        path: path.to_path_buf(),
        source,
    }
}

fn record_ingest(manifest: &mut RunManifest, summary: &IngestSummary) {
    manifest.set("ingest.papers", summary.papers);
    manifest.set("ingest.edges", summary.edges);
    manifest.set("ingest.duplicate_papers", summary.duplicate_papers);
    manifest.set("ingest.malformed_paper_rows", summary.malformed_paper_rows);
    manifest.set("ingest.out_of_range_years", summary.out_of_range_years);
    manifest.set("ingest.duplicate_edges", summary.duplicate_edges);
    manifest.set("ingest.self_loops", summary.self_loops);
    manifest.set("ingest.unknown_edges", summary.unknown_edges);
    manifest.set(
        "ingest.malformed_reference_rows",
        summary.malformed_reference_rows,
    );
}

/// Full ranking pipeline: ingest, score, normalize, write the ranked
/// submission and its manifest.
pub fn cmd_rank(args: &RankArgs) -> Result<(), CliError> {
    let kind: MetricKind = args.metric.into();
    let mode: AccumulationMode = args.mode.into();
    let budget = args.memory_budget_mb.saturating_mul(1024 * 1024);
    let params = MetricParams {
        as_of_year: args.as_of_year,
        alpha: args.alpha,
        damping: args.damping,
        tolerance: args.tolerance,
        max_iterations: args.max_iterations,
    };
    params.validate()?;

    let mut manifest = RunManifest::new("rank");
    manifest.set_path("papers", &args.papers);
    manifest.set_path("references", &args.references);
    manifest.set("metric", kind);
    manifest.set("mode", mode);
    manifest.set_path("out", &args.out);
    if let Some(path) = &args.scores_out {
        manifest.set_path("scores_out", path);
    }
    manifest.set("alpha", args.alpha);
    manifest.set("damping", args.damping);
    manifest.set("tolerance", args.tolerance);
    manifest.set("max_iterations", args.max_iterations);
    manifest.set("memory_budget_mb", args.memory_budget_mb);
    manifest.set("min_year", args.min_year);

    let opts = ParseOptions {
        min_year: args.min_year,
        max_year: args.as_of_year,
    };
    let t = Instant::now();
    let (table, graph, summary) = ingest(&args.papers, &args.references, &opts)?;
    manifest.stage("ingest", t.elapsed());
    record_ingest(&mut manifest, &summary);

    let as_of_year = params.as_of_year.or_else(|| table.max_year());
    if let Some(year) = as_of_year {
        manifest.set("as_of_year", year);
    }

    let output = match kind {
        MetricKind::Srcr => {
            // split out so the manifest can report the co-citation
            // stage separately from the score arithmetic
            let year = as_of_year.expect("a non-empty table has a max year");
            let t = Instant::now();
            let rates = citation_rates(&graph, &table, year);
            let rates_elapsed = t.elapsed();
            let t = Instant::now();
            let acc = match mode {
                AccumulationMode::Exact => {
                    accumulate_exact(&build_neighborhoods(&graph, budget)?, &rates)?
                }
                AccumulationMode::Streaming => accumulate_streaming(&graph, &rates)?,
            };
            manifest.stage("cocitation", t.elapsed());
            let t = Instant::now();
            let scores = relative_citation_ratio(&rates, &acc, params.alpha)?;
            manifest.stage("metric", rates_elapsed + t.elapsed());
            MetricOutput {
                kind,
                scores,
                iterations: 0,
                converged: true,
            }
        }
        _ => {
            let t = Instant::now();
            let output = compute_metric(kind, &graph, &table, &params, mode, budget)?;
            manifest.stage("metric", t.elapsed());
            output
        }
    };
    manifest.set("iterations", output.iterations);
    manifest.set("converged", output.converged);

    let t = Instant::now();
    let probs = normalize(&output.scores)?;
    let file = File::create(&args.out).map_err(output_err(&args.out))?;
    let mut writer = BufWriter::new(file);
    write_submission(&mut writer, table.ids(), &probs)?;
    writer.flush().map_err(output_err(&args.out))?;
    manifest.stage("rank", t.elapsed());

    if let Some(path) = &args.scores_out {
        let params_line = format!(
            "as_of_year={},alpha={},damping={},tolerance={},max_iterations={},mode={}",
            as_of_year.map(|y| y.to_string()).unwrap_or_default(),
            args.alpha,
            args.damping,
            args.tolerance,
            args.max_iterations,
            mode,
        );
        let file = File::create(path).map_err(output_err(path))?;
        let mut writer = BufWriter::new(file);
        write_scores(&mut writer, table.ids(), &output, &params_line)
            .and_then(|()| writer.flush())
            .map_err(output_err(path))?;
    }

    let manifest_path = manifest_path_for(&args.out);
    manifest
        .write(&manifest_path)
        .map_err(output_err(&manifest_path))?;
    println!(
        "metric={} papers={} out={}",
        kind,
        table.len(),
        args.out.display()
    );
    Ok(())
}

fn eval_manifest_path(args: &EvalArgs) -> PathBuf {
    args.manifest_out.clone().unwrap_or_else(|| {
        let mut os = args.submission.as_os_str().to_os_string();
        os.push(".eval.manifest");
        PathBuf::from(os)
    })
}

/// Scores a submission against judgments and prints the agreement line.
pub fn cmd_eval(args: &EvalArgs) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("eval");
    manifest.set_path("submission", &args.submission);
    manifest.set_path("judgments", &args.judgments);

    let t = Instant::now();
    let rows = read_submission(&args.submission)?;
    let probs: HashMap<String, f64> = rows.into_iter().collect();
    let judgments = read_judgments(&args.judgments)?;
    manifest.stage("read", t.elapsed());
    manifest.set("submission_rows", probs.len());
    manifest.set("judgment_pairs", judgments.pairs.len());
    manifest.set("skipped_judgment_rows", judgments.skipped);

    let t = Instant::now();
    let report = agreement(&probs, &judgments)?;
    manifest.stage("eval", t.elapsed());
    manifest.set("agreement", report.agreement);
    manifest.set("agree", report.agree);
    manifest.set("disagree", report.disagree);
    manifest.set("tie", report.tie);
    manifest.set("missing", report.missing);

    let path = eval_manifest_path(args);
    manifest.write(&path).map_err(output_err(&path))?;
    println!("{report}");
    Ok(())
}

/// Neighborhood-size statistics: summary line to stdout, histogram CSV
/// to the output path.
pub fn cmd_stats(args: &StatsArgs) -> Result<(), CliError> {
    let budget = args.memory_budget_mb.saturating_mul(1024 * 1024);
    let mut manifest = RunManifest::new("stats");
    manifest.set_path("papers", &args.papers);
    manifest.set_path("references", &args.references);
    manifest.set_path("out", &args.out);
    manifest.set("with_info_only", args.with_info_only);
    manifest.set("memory_budget_mb", args.memory_budget_mb);
    manifest.set("min_year", args.min_year);

    let opts = ParseOptions {
        min_year: args.min_year,
        max_year: None,
    };
    let t = Instant::now();
    let (_, graph, summary) = ingest(&args.papers, &args.references, &opts)?;
    manifest.stage("ingest", t.elapsed());
    record_ingest(&mut manifest, &summary);

    let t = Instant::now();
    let index = build_neighborhoods(&graph, budget)?;
    manifest.stage("cocitation", t.elapsed());

    let t = Instant::now();
    let stats = neighborhood_stats(&index, &graph, args.with_info_only);
    fs::write(&args.out, stats.to_csv()).map_err(output_err(&args.out))?;
    manifest.stage("stats", t.elapsed());
    manifest.set("stats.papers", stats.papers);
    manifest.set("stats.with_info", stats.with_info);
    manifest.set("stats.considered", stats.considered);
    manifest.set("stats.mean", stats.mean);
    manifest.set("stats.max", stats.max);
    manifest.set("stats.zero_count", stats.zero_count);

    let manifest_path = manifest_path_for(&args.out);
    manifest
        .write(&manifest_path)
        .map_err(output_err(&manifest_path))?;
    println!(
        "papers={} with_citation_info={} without_citation_info={} considered={} \
         mean_neighborhood_size={} max_neighborhood_size={} zero_neighborhoods={}",
        stats.papers,
        stats.with_info,
        stats.papers - stats.with_info,
        stats.considered,
        stats.mean,
        stats.max,
        stats.zero_count
    );
    Ok(())
}

/// Generates a synthetic dataset into the output directory.
pub fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    let min_rank_gap = args
        .min_rank_gap
        .unwrap_or_else(|| (args.papers / 10).max(1));
    let config = SynthConfig {
        papers: args.papers,
        zero_info_fraction: args.zero_info_fraction,
        attachment_exponent: args.attachment_exponent,
        mean_out_degree: args.mean_out_degree,
        year_range: (args.first_year, args.last_year),
        judgment_count: args.judgments,
        min_rank_gap,
        seed: args.seed,
    };

    let mut manifest = RunManifest::new("gen");
    manifest.set_path("out_dir", &args.out_dir);
    manifest.set("papers", config.papers);
    manifest.set("zero_info_fraction", config.zero_info_fraction);
    manifest.set("attachment_exponent", config.attachment_exponent);
    manifest.set("mean_out_degree", config.mean_out_degree);
    manifest.set("first_year", config.year_range.0);
    manifest.set("last_year", config.year_range.1);
    manifest.set("judgments", config.judgment_count);
    manifest.set("min_rank_gap", config.min_rank_gap);
    manifest.set("seed", config.seed);

    let t = Instant::now();
    let data = generate(&config)?;
    manifest.stage("generate", t.elapsed());
    manifest.set("edges", data.edges.len());

    fs::create_dir_all(&args.out_dir).map_err(output_err(&args.out_dir))?;
    let t = Instant::now();
    let paths = data
        .write_files(&args.out_dir)
        .map_err(output_err(&args.out_dir))?;
    manifest.stage("write", t.elapsed());
    manifest.set_path("papers_file", &paths.papers);
    manifest.set_path("references_file", &paths.references);
    manifest.set_path("planted_rank_file", &paths.planted_rank);
    manifest.set_path("judgments_file", &paths.judgments);

    let manifest_path = args.out_dir.join("gen.manifest");
    manifest
        .write(&manifest_path)
        .map_err(output_err(&manifest_path))?;
    println!(
        "papers={} edges={} judgments={} out_dir={}",
        config.papers,
        data.edges.len(),
        data.judgments.len(),
        args.out_dir.display()
    );
    Ok(())
}

/// Parses both input files and prints the one-line ingest summary.
pub fn cmd_validate(args: &ValidateArgs) -> Result<(), CliError> {
    let opts = ParseOptions {
        min_year: args.min_year,
        max_year: args.as_of_year,
    };
    let (_, _, summary) = ingest(&args.papers, &args.references, &opts)?;
    println!("{summary}");
    Ok(())
}
