//! Co-citation neighborhoods.
//!
//! Two papers are co-cited when at least one citing paper lists both in
//! its references. The neighborhood of `p` is the set of papers co-cited
//! with `p`; it is the comparison group for the smoothed relative
//! citation ratio. Neighborhoods can be materialized into a CSR index
//! (exact set semantics, memory proportional to total neighborhood size)
//! or folded on the fly per citing paper (streaming, multiset semantics,
//! constant extra memory).

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{CitationGraph, PaperId};

/// Default materialization budget: 4 GiB of neighbor entries.
pub const DEFAULT_MEMORY_BUDGET_BYTES: u64 = 4 * 1024 * 1024 * 1024;

const ENTRY_BYTES: u64 = std::mem::size_of::<PaperId>() as u64;

#[derive(Debug, Error)]
pub enum CocitationError {
    #[error(
        "co-citation index needs at least {entries} neighbor entries (~{bytes} bytes), \
         over the {budget} byte budget; raise the memory budget or use streaming accumulation"
    )]
    BudgetExceeded {
        entries: u64,
        bytes: u64,
        budget: u64,
    },
    #[error("score vector covers {got} papers but the graph has {expected}")]
    ScoreLengthMismatch { expected: usize, got: usize },
}

/// How neighborhood aggregates are computed: from a materialized index
/// with set semantics, or in one streaming pass with multiset semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AccumulationMode {
    #[default]
    Exact,
    Streaming,
}

impl std::fmt::Display for AccumulationMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AccumulationMode::Exact => "exact",
            AccumulationMode::Streaming => "streaming",
        })
    }
}

/// Materialized co-citation neighborhoods in CSR form. Each paper's
/// neighbor list is sorted and duplicate-free, and never contains the
/// paper itself.
#[derive(Debug, Clone)]
pub struct NeighborhoodIndex {
    offsets: Vec<usize>,
    neighbors: Vec<PaperId>,
}

impl NeighborhoodIndex {
    pub fn paper_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Total neighbor entries across all papers.
    pub fn total_size(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, p: PaperId) -> &[PaperId] {
        &self.neighbors[self.offsets[p.index()]..self.offsets[p.index() + 1]]
    }

    pub fn size(&self, p: PaperId) -> usize {
        self.neighbors(p).len()
    }
}

/// Builds the full neighborhood index, aborting once the estimated entry
/// storage would exceed `budget_bytes`.
///
/// Each paper's list is the union of its citers' reference lists minus
/// the paper itself, computed independently per paper, so the result does
/// not depend on how the work is split across threads.
pub fn build_neighborhoods(
    graph: &CitationGraph,
    budget_bytes: u64,
) -> Result<NeighborhoodIndex, CocitationError> {
    let n = graph.paper_count();
    let used = AtomicUsize::new(0);

    let lists: Vec<Vec<PaperId>> = (0..n as u64)
        .into_par_iter()
        .map(|raw| {
            let p = PaperId::new(raw);
            let citers = graph.citers(p);
            let candidates: usize = citers.iter().map(|&c| graph.out_degree(c)).sum();
            if candidates as u64 * ENTRY_BYTES > budget_bytes {
                return Err(CocitationError::BudgetExceeded {
                    entries: candidates as u64,
                    bytes: candidates as u64 * ENTRY_BYTES,
                    budget: budget_bytes,
                });
            }
            let mut list: Vec<PaperId> = Vec::with_capacity(candidates);
            for &c in citers {
                list.extend(graph.references(c).iter().copied().filter(|&q| q != p));
            }
            list.sort_unstable();
            list.dedup();
            list.shrink_to_fit();
            let total = used.fetch_add(list.len(), Ordering::Relaxed) + list.len();
            if total as u64 * ENTRY_BYTES > budget_bytes {
                return Err(CocitationError::BudgetExceeded {
                    entries: total as u64,
                    bytes: total as u64 * ENTRY_BYTES,
                    budget: budget_bytes,
                });
            }
            Ok(list)
        })
        .collect::<Result<_, _>>()?;

    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0usize);
    let total: usize = lists.iter().map(Vec::len).sum();
    let mut neighbors = Vec::with_capacity(total);
    for list in lists {
        neighbors.extend(list);
        offsets.push(neighbors.len());
    }
    log::debug!(
        "co-citation index: {} papers, {} neighbor entries",
        n,
        neighbors.len()
    );
    Ok(NeighborhoodIndex { offsets, neighbors })
}

/// Per-paper neighborhood aggregates of a score vector: how many
/// neighbors each paper has and the sum of their scores.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborAccumulator {
    pub counts: Vec<u64>,
    pub sums: Vec<f64>,
}

impl NeighborAccumulator {
    /// Mean neighbor score of `p`; zero when `p` has no neighbors.
    pub fn mean(&self, p: PaperId) -> f64 {
        let count = self.counts[p.index()];
        if count == 0 {
            0.0
        } else {
            self.sums[p.index()] / count as f64
        }
    }
}

fn check_scores(scores: &[f64], paper_count: usize) -> Result<(), CocitationError> {
    if scores.len() != paper_count {
        return Err(CocitationError::ScoreLengthMismatch {
            expected: paper_count,
            got: scores.len(),
        });
    }
    Ok(())
}

/// Aggregates neighbor scores from a materialized index: exact set
/// semantics, each distinct neighbor counted once.
pub fn accumulate_exact(
    index: &NeighborhoodIndex,
    scores: &[f64],
) -> Result<NeighborAccumulator, CocitationError> {
    check_scores(scores, index.paper_count())?;
    let mut counts = vec![0u64; index.paper_count()];
    let mut sums = vec![0.0f64; index.paper_count()];
    counts
        .par_iter_mut()
        .zip(sums.par_iter_mut())
        .enumerate()
        .for_each(|(raw, (count, sum))| {
            let list = index.neighbors(PaperId::new(raw as u64));
            *count = list.len() as u64;
            *sum = list.iter().map(|&q| scores[q.index()]).sum();
        });
    Ok(NeighborAccumulator { counts, sums })
}

/// Aggregates neighbor scores in one pass over reference lists without
/// materializing neighborhoods. A paper co-cited with `p` by several
/// citing papers is counted once per co-occurrence (multiset semantics),
/// so counts here are >= the exact counts, with equality exactly when no
/// neighbor pair is repeated across citing papers.
pub fn accumulate_streaming(
    graph: &CitationGraph,
    scores: &[f64],
) -> Result<NeighborAccumulator, CocitationError> {
    check_scores(scores, graph.paper_count())?;
    let mut counts = vec![0u64; graph.paper_count()];
    let mut sums = vec![0.0f64; graph.paper_count()];
    for c in graph.papers() {
        let list = graph.references(c);
        if list.len() < 2 {
            continue;
        }
        let list_sum: f64 = list.iter().map(|&q| scores[q.index()]).sum();
        for &q in list {
            counts[q.index()] += (list.len() - 1) as u64;
            sums[q.index()] += list_sum - scores[q.index()];
        }
    }
    Ok(NeighborAccumulator { counts, sums })
}

/// Histogram bucket over neighborhood sizes: `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bucket {
    pub lo: u64,
    pub hi: u64,
    pub count: u64,
}

/// Summary statistics over neighborhood sizes, with a power-of-two
/// bucketed histogram (0; 1; 2-3; 4-7; ...).
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodStats {
    /// Papers in the graph.
    pub papers: u64,
    /// Papers with at least one incoming or outgoing citation.
    pub with_info: u64,
    /// Papers the statistics below cover: all papers, or only those
    /// with citation information when restricted.
    pub considered: u64,
    pub mean: f64,
    pub max: u64,
    pub zero_count: u64,
    pub buckets: Vec<Bucket>,
}

/// Computes neighborhood-size statistics. With `with_info_only`, papers
/// that have neither incoming nor outgoing citations are excluded; they
/// always have empty neighborhoods and would otherwise dominate sparse
/// snapshots.
pub fn neighborhood_stats(
    index: &NeighborhoodIndex,
    graph: &CitationGraph,
    with_info_only: bool,
) -> NeighborhoodStats {
    let papers = graph.paper_count() as u64;
    let with_info = graph.papers().filter(|&p| !graph.is_zero_degree(p)).count() as u64;

    let mut considered = 0u64;
    let mut total = 0u64;
    let mut max = 0u64;
    let mut zero_count = 0u64;
    let mut by_bucket: Vec<u64> = Vec::new();
    for p in graph.papers() {
        if with_info_only && graph.is_zero_degree(p) {
            continue;
        }
        considered += 1;
        let size = index.size(p) as u64;
        total += size;
        max = max.max(size);
        if size == 0 {
            zero_count += 1;
        }
        let slot = bucket_slot(size);
        if by_bucket.len() <= slot {
            by_bucket.resize(slot + 1, 0);
        }
        by_bucket[slot] += 1;
    }

    let buckets = by_bucket
        .iter()
        .enumerate()
        .map(|(slot, &count)| {
            let (lo, hi) = bucket_range(slot);
            Bucket { lo, hi, count }
        })
        .collect();
    NeighborhoodStats {
        papers,
        with_info,
        considered,
        mean: if considered == 0 {
            0.0
        } else {
            total as f64 / considered as f64
        },
        max,
        zero_count,
        buckets,
    }
}

fn bucket_slot(size: u64) -> usize {
    if size == 0 {
        0
    } else {
        size.ilog2() as usize + 1
    }
}

fn bucket_range(slot: usize) -> (u64, u64) {
    if slot == 0 {
        (0, 0)
    } else {
        (1 << (slot - 1), (1 << slot) - 1)
    }
}

impl NeighborhoodStats {
    /// Renders the histogram as CSV: a header, one row per bucket from
    /// zero up to the bucket holding the largest neighborhood, and a
    /// summary trailer comment.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bucket_lo,bucket_hi,count\n");
        for b in &self.buckets {
            writeln!(out, "{},{},{}", b.lo, b.hi, b.count).unwrap();
        }
        writeln!(
            out,
            "# mean={} max={} zero_count={}",
            self.mean, self.max, self.zero_count
        )
        .unwrap();
        out
    }
}
