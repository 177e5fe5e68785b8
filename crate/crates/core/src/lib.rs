//! Static ranking of academic papers over citation graphs.
//!
//! The pipeline is: ingest TSV citation snapshots into a CSR graph
//! ([`graph`]), derive co-citation neighborhoods ([`cocitation`]), score
//! papers with citation counts, age-rescaled citation rates, smoothed
//! relative citation ratios, or PageRank ([`metrics`]), normalize scores
//! into a submission file ([`ranking`]), and measure pairwise agreement
//! against preference judgments ([`eval`]). A seeded preferential
//! attachment generator ([`synth`]) produces test datasets with known
//! ground-truth orderings.
//!
//! All stages are deterministic: the same inputs and parameters produce
//! byte-identical outputs regardless of thread count.

pub mod cocitation;
pub mod eval;
pub mod graph;
pub mod metrics;
pub mod ranking;
pub mod synth;
