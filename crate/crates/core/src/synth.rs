//! Seeded synthetic citation datasets with known ground truth.
//!
//! Papers get uniform years in a configured range. A configured fraction
//! stays out of the citation process entirely (no references, never
//! cited), mimicking the large zero-information share of real snapshots.
//! The rest cite earlier papers by preferential attachment: reference
//! lists have shifted-geometric sizes and pick targets in proportion to
//! `(citations + 1) ^ exponent`, drawn without replacement, so the
//! output graph has no duplicate edges, no self-loops, and no citation
//! pointing at a later year. It therefore round-trips through ingest
//! with zero warnings.
//!
//! Alongside the graph the generator emits a planted ranking (citation
//! count descending, id ascending) and preference judgments sampled from
//! well-separated pairs of papers whose citation records are reliable
//! enough to genuinely distinguish them.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::MIN_VALID_YEAR;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("paper count must be at least 2, got {0}")]
    TooFewPapers(u64),
    #[error("zero-info fraction must lie in [0, 1), got {0}")]
    InvalidZeroInfoFraction(f64),
    #[error("attachment exponent must be finite and > 0, got {0}")]
    InvalidExponent(f64),
    #[error("zero-info fraction {fraction} leaves only {participants} citing papers; need at least 2")]
    TooFewParticipants { fraction: f64, participants: u64 },
    #[error(
        "mean reference-list size {mean} is infeasible for {participants} citing papers; \
         it must lie in [1, {max}]"
    )]
    InfeasibleMeanOutDegree {
        mean: f64,
        participants: u64,
        max: f64,
    },
    #[error("year range {lo}..={hi} is invalid (must be ordered and not before {MIN_VALID_YEAR})")]
    InvalidYearRange { lo: i32, hi: i32 },
    #[error("judgment count must be at least 1")]
    NoJudgmentsRequested,
    #[error(
        "only {eligible} papers have at least {MIN_JUDGED_CITATIONS} citations, which cannot \
         admit a rank gap of {gap}; generate a denser graph or shrink the gap"
    )]
    JudgmentsInfeasible { eligible: u64, gap: u64 },
    #[error(
        "only sampled {produced} of {requested} judgments after {attempts} attempts; \
         loosen the rank gap or grow the dataset"
    )]
    JudgmentSamplingStalled {
        requested: u64,
        produced: u64,
        attempts: u64,
    },
}

/// Citation floor for judgment endpoints. A single incoming citation is
/// one observation; rate-based scores built on it are dominated by
/// sampling noise, so judgments only compare papers whose citation
/// record is informative.
pub const MIN_JUDGED_CITATIONS: u64 = 2;

/// Generator configuration. `seed` fixes every random choice; two runs
/// with equal configs produce identical datasets.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub papers: u64,
    /// Fraction of papers kept out of the citation process.
    pub zero_info_fraction: f64,
    /// Preferential attachment strength; 1 is linear, larger is steeper.
    pub attachment_exponent: f64,
    /// Mean of the shifted-geometric reference-list size.
    pub mean_out_degree: f64,
    /// Inclusive publication-year range.
    pub year_range: (i32, i32),
    pub judgment_count: u64,
    /// Minimum distance in planted-rank positions between the two
    /// papers of a judgment.
    pub min_rank_gap: u64,
    pub seed: u64,
}

impl SynthConfig {
    fn participants(&self) -> u64 {
        ((1.0 - self.zero_info_fraction) * self.papers as f64).round() as u64
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if self.papers < 2 {
            return Err(SynthError::TooFewPapers(self.papers));
        }
        if !self.zero_info_fraction.is_finite()
            || !(0.0..1.0).contains(&self.zero_info_fraction)
        {
            return Err(SynthError::InvalidZeroInfoFraction(self.zero_info_fraction));
        }
        if !self.attachment_exponent.is_finite() || self.attachment_exponent <= 0.0 {
            return Err(SynthError::InvalidExponent(self.attachment_exponent));
        }
        let participants = self.participants();
        if participants < 2 {
            return Err(SynthError::TooFewParticipants {
                fraction: self.zero_info_fraction,
                participants,
            });
        }
        let max_mean = ((participants - 1) as f64 / 2.0).max(1.0);
        if !self.mean_out_degree.is_finite()
            || self.mean_out_degree < 1.0
            || self.mean_out_degree > max_mean
        {
            return Err(SynthError::InfeasibleMeanOutDegree {
                mean: self.mean_out_degree,
                participants,
                max: max_mean,
            });
        }
        let (lo, hi) = self.year_range;
        if lo > hi || lo < MIN_VALID_YEAR {
            return Err(SynthError::InvalidYearRange { lo, hi });
        }
        if self.judgment_count == 0 {
            return Err(SynthError::NoJudgmentsRequested);
        }
        Ok(())
    }
}

/// A generated dataset, in memory. Paper index in `papers` is the dense
/// id; edges, ranking, and judgments refer to those indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthDataset {
    /// `(token, year)` rows in file order.
    pub papers: Vec<(String, i32)>,
    /// `(citing, cited)` index pairs.
    pub edges: Vec<(u64, u64)>,
    /// Paper indices, best first: citation count descending, id
    /// ascending on ties.
    pub planted_rank: Vec<u64>,
    /// `(better, worse)` index pairs drawn from the planted ranking.
    pub judgments: Vec<(u64, u64)>,
}

/// Paths written by [`SynthDataset::write_files`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthPaths {
    pub papers: PathBuf,
    pub references: PathBuf,
    pub planted_rank: PathBuf,
    pub judgments: PathBuf,
}

fn token(index: u64) -> String {
    // zero-padded so lexicographic token order equals index order
    format!("P{index:08}")
}

/// Fenwick tree over f64 weights, for sampling proportional to weight
/// with O(log n) updates and draws.
struct Fenwick {
    tree: Vec<f64>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick {
            tree: vec![0.0; n + 1],
        }
    }

    fn add(&mut self, mut i: usize, delta: f64) {
        i += 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    fn total(&self) -> f64 {
        self.prefix(self.tree.len() - 1)
    }

    fn prefix(&self, mut i: usize) -> f64 {
        let mut sum = 0.0;
        while i > 0 {
            sum += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        sum
    }

    /// Index of the first slot whose cumulative weight exceeds `target`.
    fn search(&self, mut target: f64) -> usize {
        let n = self.tree.len() - 1;
        let mut idx = 0usize;
        let mut mask = n.next_power_of_two();
        while mask > 0 {
            let next = idx + mask;
            if next <= n && self.tree[next] <= target {
                target -= self.tree[next];
                idx = next;
            }
            mask >>= 1;
        }
        idx.min(n.saturating_sub(1))
    }
}

/// Shifted-geometric sample on {1, 2, ...} with the given mean.
fn geometric_size(rng: &mut ChaCha8Rng, mean: f64) -> u64 {
    if mean <= 1.0 {
        return 1;
    }
    let p = 1.0 / mean;
    let u: f64 = 1.0 - rng.random::<f64>();
    1 + (u.ln() / (1.0 - p).ln()).floor() as u64
}

/// Generates a dataset from a validated config. Pure function of the
/// config, including the seed.
pub fn generate(config: &SynthConfig) -> Result<SynthDataset, SynthError> {
    config.validate()?;
    let n = config.papers as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let (lo, hi) = config.year_range;
    let years: Vec<i32> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();

    let participant_count = config.participants() as usize;
    let mut participants: Vec<u64> =
        rand::seq::index::sample(&mut rng, n, participant_count)
            .into_iter()
            .map(|i| i as u64)
            .collect();
    // process in publication order so references only point backwards
    participants.sort_unstable_by_key(|&i| (years[i as usize], i));

    let mut in_degree = vec![0u64; n];
    let mut weights = vec![0.0f64; participant_count];
    let mut fenwick = Fenwick::new(participant_count);
    let mut edges: Vec<(u64, u64)> = Vec::new();
    let mut drawn: Vec<usize> = Vec::new();

    for (slot, &citing) in participants.iter().enumerate() {
        if slot > 0 {
            let size = geometric_size(&mut rng, config.mean_out_degree).min(slot as u64);
            drawn.clear();
            for _ in 0..size {
                let total = fenwick.total();
                if total <= 0.0 {
                    break;
                }
                let mut idx = fenwick.search(rng.random_range(0.0..total));
                // guard against landing on an emptied slot through
                // floating-point edge effects
                while weights[idx] == 0.0 && idx > 0 {
                    idx -= 1;
                }
                while weights[idx] == 0.0 && idx + 1 < slot {
                    idx += 1;
                }
                if weights[idx] == 0.0 {
                    break;
                }
                fenwick.add(idx, -weights[idx]);
                weights[idx] = 0.0;
                drawn.push(idx);
            }
            for &idx in &drawn {
                let cited = participants[idx];
                edges.push((citing, cited));
                in_degree[cited as usize] += 1;
                let w = ((in_degree[cited as usize] + 1) as f64)
                    .powf(config.attachment_exponent);
                fenwick.add(idx, w);
                weights[idx] = w;
            }
        }
        let w = ((in_degree[citing as usize] + 1) as f64).powf(config.attachment_exponent);
        fenwick.add(slot, w);
        weights[slot] = w;
    }

    let mut planted_rank: Vec<u64> = (0..n as u64).collect();
    planted_rank.sort_unstable_by_key(|&i| (std::cmp::Reverse(in_degree[i as usize]), i));

    let judgments = sample_judgments(config, &planted_rank, &in_degree)?;

    let papers = (0..n as u64).map(|i| (token(i), years[i as usize])).collect();
    Ok(SynthDataset {
        papers,
        edges,
        planted_rank,
        judgments,
    })
}

/// Samples judgment pairs from the planted ranking. A pair qualifies
/// when the papers sit at least `min_rank_gap` positions apart, both
/// have at least [`MIN_JUDGED_CITATIONS`] citations, and the better one
/// strictly more, so every judgment reflects a real difference any
/// citation-based metric could in principle recover.
///
/// Eligible papers form a prefix of the planted ranking (it is sorted
/// by citation count), so the worse position is drawn uniformly from
/// the part of that prefix deep enough to admit the gap, and the better
/// position uniformly from at least `gap` positions above it.
fn sample_judgments(
    config: &SynthConfig,
    planted_rank: &[u64],
    in_degree: &[u64],
) -> Result<Vec<(u64, u64)>, SynthError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1));
    let gap = config.min_rank_gap.max(1) as usize;
    let eligible =
        planted_rank.partition_point(|&p| in_degree[p as usize] >= MIN_JUDGED_CITATIONS);
    if eligible <= gap {
        return Err(SynthError::JudgmentsInfeasible {
            eligible: eligible as u64,
            gap: gap as u64,
        });
    }
    let budget = config.judgment_count.saturating_mul(1000).max(100_000);
    let mut pairs = Vec::with_capacity(config.judgment_count as usize);
    let mut attempts = 0u64;
    while (pairs.len() as u64) < config.judgment_count && attempts < budget {
        attempts += 1;
        let lo = rng.random_range(gap..eligible);
        let hi = rng.random_range(0..=lo - gap);
        let better = planted_rank[hi];
        let worse = planted_rank[lo];
        // a run of equal citation counts can straddle the gap; equal
        // counts are no real difference, so reject and redraw
        if in_degree[better as usize] <= in_degree[worse as usize] {
            continue;
        }
        pairs.push((better, worse));
    }
    if (pairs.len() as u64) < config.judgment_count {
        return Err(SynthError::JudgmentSamplingStalled {
            requested: config.judgment_count,
            produced: pairs.len() as u64,
            attempts,
        });
    }
    Ok(pairs)
}

impl SynthDataset {
    /// Writes the dataset under `dir` as `papers.tsv`, `references.tsv`,
    /// `planted_rank.tsv`, and `judgments.tsv`.
    pub fn write_files(&self, dir: impl AsRef<Path>) -> io::Result<SynthPaths> {
        let dir = dir.as_ref();
        let paths = SynthPaths {
            papers: dir.join("papers.tsv"),
            references: dir.join("references.tsv"),
            planted_rank: dir.join("planted_rank.tsv"),
            judgments: dir.join("judgments.tsv"),
        };

        let mut out = BufWriter::new(File::create(&paths.papers)?);
        for (token, year) in &self.papers {
            writeln!(out, "{token}\t{year}")?;
        }
        out.flush()?;

        let mut out = BufWriter::new(File::create(&paths.references)?);
        for &(citing, cited) in &self.edges {
            writeln!(out, "{}\t{}", self.papers[citing as usize].0, self.papers[cited as usize].0)?;
        }
        out.flush()?;

        let mut out = BufWriter::new(File::create(&paths.planted_rank)?);
        for &i in &self.planted_rank {
            writeln!(out, "{}", self.papers[i as usize].0)?;
        }
        out.flush()?;

        let mut out = BufWriter::new(File::create(&paths.judgments)?);
        for &(better, worse) in &self.judgments {
            writeln!(out, "{}\t{}", self.papers[better as usize].0, self.papers[worse as usize].0)?;
        }
        out.flush()?;
        Ok(paths)
    }
}
