//! Static ranking metrics over a citation graph.
//!
//! Four scorers share one interface: raw citation counts, age-rescaled
//! citation rate (citations per year since publication), the smoothed
//! relative citation ratio (citation rate against the mean rate of
//! co-cited papers), and PageRank. All return one f64 per paper in dense
//! id order and are deterministic for a given graph and parameter set.

use std::io::{self, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::cocitation::{
    accumulate_exact, accumulate_streaming, build_neighborhoods, AccumulationMode,
    CocitationError, NeighborAccumulator,
};
use crate::graph::{CitationGraph, IdMap, PaperId, PaperTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Citations,
    Acr,
    Srcr,
    Pagerank,
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Citations => "citations",
            MetricKind::Acr => "acr",
            MetricKind::Srcr => "srcr",
            MetricKind::Pagerank => "pagerank",
        }
    }

    pub const ALL: [MetricKind; 4] = [
        MetricKind::Citations,
        MetricKind::Acr,
        MetricKind::Srcr,
        MetricKind::Pagerank,
    ];
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Shared metric parameters with the documented defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricParams {
    /// Reference year for citation-rate ages; defaults to the newest
    /// publication year in the dataset.
    pub as_of_year: Option<i32>,
    /// Additive smoothing constant for the relative citation ratio.
    pub alpha: f64,
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: u32,
}

impl Default for MetricParams {
    fn default() -> Self {
        MetricParams {
            as_of_year: None,
            alpha: 1.0,
            damping: 0.85,
            tolerance: 1e-10,
            max_iterations: 200,
        }
    }
}

impl MetricParams {
    pub fn validate(&self) -> Result<(), MetricsError> {
        if !self.alpha.is_finite() || self.alpha < 0.0 {
            return Err(MetricsError::InvalidAlpha(self.alpha));
        }
        if !self.damping.is_finite() || !(0.0..1.0).contains(&self.damping) {
            return Err(MetricsError::InvalidDamping(self.damping));
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(MetricsError::InvalidTolerance(self.tolerance));
        }
        if self.max_iterations == 0 {
            return Err(MetricsError::InvalidMaxIterations);
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("alpha must be finite and >= 0, got {0}")]
    InvalidAlpha(f64),
    #[error("damping must lie in [0, 1), got {0}")]
    InvalidDamping(f64),
    #[error("tolerance must be finite and > 0, got {0}")]
    InvalidTolerance(f64),
    #[error("max iterations must be at least 1")]
    InvalidMaxIterations,
    #[error(
        "alpha=0 and {papers} papers have a zero neighborhood mean; \
         the ratio needs a positive alpha to stay defined"
    )]
    ZeroAlphaZeroMean { papers: u64 },
    #[error("score vector covers {got} papers but the graph has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Cocitation(#[from] CocitationError),
}

/// Scores plus convergence record for one metric run.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricOutput {
    pub kind: MetricKind,
    pub scores: Vec<f64>,
    /// Power iterations used; zero for the closed-form metrics.
    pub iterations: u32,
    pub converged: bool,
}

/// Citation count of every paper (distinct citing papers).
pub fn citation_counts(graph: &CitationGraph) -> Vec<f64> {
    graph.papers().map(|p| graph.in_degree(p) as f64).collect()
}

/// Age-rescaled citation rate: citations divided by years since
/// publication plus one, so a current-year paper divides by one. Papers
/// dated after `as_of_year` are clamped to age zero with a warning.
pub fn citation_rates(graph: &CitationGraph, papers: &PaperTable, as_of_year: i32) -> Vec<f64> {
    let future = papers.records().filter(|r| r.year > as_of_year).count();
    if future > 0 {
        log::warn!(
            "{future} papers are dated after {as_of_year}; clamping their age to 0"
        );
    }
    papers
        .records()
        .map(|r| {
            let age = (as_of_year - r.year).max(0) as f64;
            graph.in_degree(r.id) as f64 / (age + 1.0)
        })
        .collect()
}

/// Smoothed relative citation ratio: `(rate + alpha) / (mean + alpha)`
/// where `mean` is the average citation rate over the paper's co-citation
/// neighborhood, taken as zero for papers with no neighbors. A paper
/// whose rate equals its neighborhood mean scores exactly 1.
pub fn relative_citation_ratio(
    rates: &[f64],
    acc: &NeighborAccumulator,
    alpha: f64,
) -> Result<Vec<f64>, MetricsError> {
    if rates.len() != acc.counts.len() {
        return Err(MetricsError::LengthMismatch {
            expected: acc.counts.len(),
            got: rates.len(),
        });
    }
    if alpha == 0.0 {
        let hazards = (0..rates.len())
            .filter(|&i| acc.mean(PaperId::new(i as u64)) == 0.0)
            .count() as u64;
        if hazards > 0 {
            return Err(MetricsError::ZeroAlphaZeroMean { papers: hazards });
        }
    }
    Ok((0..rates.len())
        .map(|i| {
            let mean = acc.mean(PaperId::new(i as u64));
            (rates[i] + alpha) / (mean + alpha)
        })
        .collect())
}

/// PageRank by power iteration with uniform teleport and dangling mass
/// redistributed uniformly. Convergence is an L1 step delta at or below
/// the tolerance; hitting the iteration cap leaves `converged` false.
///
/// Scores are pulled per paper from its citers in fixed order, and the
/// global reductions run sequentially, so results are bit-identical for
/// any thread count.
pub fn pagerank(
    graph: &CitationGraph,
    damping: f64,
    tolerance: f64,
    max_iterations: u32,
) -> MetricOutput {
    let n = graph.paper_count();
    if n == 0 {
        return MetricOutput {
            kind: MetricKind::Pagerank,
            scores: Vec::new(),
            iterations: 0,
            converged: true,
        };
    }

    let inv_n = 1.0 / n as f64;
    let mut x = vec![inv_n; n];
    let mut next = vec![0.0f64; n];
    let mut contrib = vec![0.0f64; n];
    let mut iterations = 0u32;
    let mut converged = false;

    while iterations < max_iterations {
        iterations += 1;
        contrib
            .par_iter_mut()
            .enumerate()
            .for_each(|(j, slot)| {
                let deg = graph.out_degree(PaperId::new(j as u64));
                *slot = if deg == 0 { 0.0 } else { x[j] / deg as f64 };
            });
        let dangling: f64 = (0..n)
            .filter(|&j| graph.out_degree(PaperId::new(j as u64)) == 0)
            .map(|j| x[j])
            .sum();
        let base = (1.0 - damping) * inv_n + damping * dangling * inv_n;
        next.par_iter_mut().enumerate().for_each(|(i, slot)| {
            let pulled: f64 = graph
                .citers(PaperId::new(i as u64))
                .iter()
                .map(|&j| contrib[j.index()])
                .sum();
            *slot = base + damping * pulled;
        });
        let delta: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if delta <= tolerance {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("pagerank stopped at the {max_iterations}-iteration cap without converging");
    }
    MetricOutput {
        kind: MetricKind::Pagerank,
        scores: x,
        iterations,
        converged,
    }
}

/// Computes any metric end to end, building the co-citation aggregates
/// the ratio metric needs in the requested mode.
pub fn compute_metric(
    kind: MetricKind,
    graph: &CitationGraph,
    papers: &PaperTable,
    params: &MetricParams,
    mode: AccumulationMode,
    budget_bytes: u64,
) -> Result<MetricOutput, MetricsError> {
    params.validate()?;
    let closed_form = |scores| MetricOutput {
        kind,
        scores,
        iterations: 0,
        converged: true,
    };
    match kind {
        MetricKind::Citations => Ok(closed_form(citation_counts(graph))),
        MetricKind::Acr => {
            let as_of = match params.as_of_year.or_else(|| papers.max_year()) {
                Some(year) => year,
                None => return Ok(closed_form(Vec::new())),
            };
            Ok(closed_form(citation_rates(graph, papers, as_of)))
        }
        MetricKind::Srcr => {
            let as_of = match params.as_of_year.or_else(|| papers.max_year()) {
                Some(year) => year,
                None => return Ok(closed_form(Vec::new())),
            };
            let rates = citation_rates(graph, papers, as_of);
            let acc = match mode {
                AccumulationMode::Exact => {
                    let index = build_neighborhoods(graph, budget_bytes)?;
                    accumulate_exact(&index, &rates)?
                }
                AccumulationMode::Streaming => accumulate_streaming(graph, &rates)?,
            };
            Ok(closed_form(relative_citation_ratio(&rates, &acc, params.alpha)?))
        }
        MetricKind::Pagerank => Ok(pagerank(
            graph,
            params.damping,
            params.tolerance,
            params.max_iterations,
        )),
    }
}

/// Writes raw scores as TSV with a comment header recording the metric
/// and its parameters, one `token<TAB>score` row per paper in dense order.
pub fn write_scores(
    out: &mut impl Write,
    ids: &IdMap,
    output: &MetricOutput,
    params_line: &str,
) -> io::Result<()> {
    writeln!(out, "# metric={} params={}", output.kind, params_line)?;
    for (i, score) in output.scores.iter().enumerate() {
        writeln!(out, "{}\t{}", ids.token(PaperId::new(i as u64)), score)?;
    }
    Ok(())
}
