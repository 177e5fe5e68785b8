//! Citation graph ingestion: TSV parsing, validation, and the immutable
//! CSR-backed graph every metric runs on.
//!
//! Input files are plain UTF-8 TSV with no header:
//! papers as `paper_id<TAB>year`, references as `citing_id<TAB>cited_id`.
//! Original paper ids are opaque tokens; they are re-indexed to dense
//! integers at parse time so adjacency can live in flat arrays.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use thiserror::Error;

/// Oldest publication year accepted by default.
pub const MIN_VALID_YEAR: i32 = 1500;

/// Longest original id token accepted, in bytes.
pub const MAX_TOKEN_BYTES: usize = 64;

/// Dense internal paper index. The original token is kept in the
/// [`IdMap`] side table; everything else works on this index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PaperId(u64);

impl PaperId {
    pub const fn new(raw: u64) -> Self {
        PaperId(raw)
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PaperId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Bijection between original id tokens and dense [`PaperId`]s,
/// assigned in first-occurrence order.
#[derive(Debug, Default, Clone)]
pub struct IdMap {
    tokens: Vec<String>,
    index: HashMap<String, PaperId>,
}

impl IdMap {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Dense id for a token, or `None` if it was never interned.
    pub fn get(&self, token: &str) -> Option<PaperId> {
        self.index.get(token).copied()
    }

    /// Original token for a dense id.
    pub fn token(&self, id: PaperId) -> &str {
        &self.tokens[id.index()]
    }

    fn intern(&mut self, token: &str) -> Option<PaperId> {
        if self.index.contains_key(token) {
            return None;
        }
        let id = PaperId(self.tokens.len() as u64);
        self.tokens.push(token.to_string());
        self.index.insert(token.to_string(), id);
        Some(id)
    }
}

/// One parsed paper row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PaperRecord {
    pub id: PaperId,
    pub year: i32,
}

/// All papers of one dataset: dense id map plus publication years.
#[derive(Debug, Default, Clone)]
pub struct PaperTable {
    ids: IdMap,
    years: Vec<i32>,
}

impl PaperTable {
    pub fn len(&self) -> usize {
        self.years.len()
    }

    pub fn is_empty(&self) -> bool {
        self.years.is_empty()
    }

    pub fn ids(&self) -> &IdMap {
        &self.ids
    }

    pub fn year(&self, id: PaperId) -> i32 {
        self.years[id.index()]
    }

    /// Largest publication year present, `None` on an empty table.
    pub fn max_year(&self) -> Option<i32> {
        self.years.iter().copied().max()
    }

    pub fn records(&self) -> impl Iterator<Item = PaperRecord> + '_ {
        self.years
            .iter()
            .enumerate()
            .map(|(i, &year)| PaperRecord {
                id: PaperId(i as u64),
                year,
            })
    }

    /// Adds a paper; returns `None` when the token is already present
    /// (the existing record wins).
    pub fn insert(&mut self, token: &str, year: i32) -> Option<PaperId> {
        let id = self.ids.intern(token)?;
        self.years.push(year);
        Some(id)
    }
}

/// Year-validity window applied while parsing the papers file.
#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    pub min_year: i32,
    /// Upper bound on accepted years; `None` accepts anything >= `min_year`.
    pub max_year: Option<i32>,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            min_year: MIN_VALID_YEAR,
            max_year: None,
        }
    }
}

/// Raw reference row: original tokens, unresolved. Resolution against the
/// paper table (and all cleaning) happens in [`build_graph`].
pub type RawEdge = (String, String);

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no valid paper records in {path}")]
    EmptyDataset { path: PathBuf },
}

/// Warning counters from the papers file.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct PaperFileCounts {
    pub duplicate_ids: u64,
    pub malformed_rows: u64,
    pub out_of_range_years: u64,
}

/// Warning counters from the references file.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceFileCounts {
    pub malformed_rows: u64,
}

/// Warning counters from graph construction.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct BuildCounts {
    pub duplicate_edges: u64,
    pub self_loops: u64,
    pub unknown_edges: u64,
}

/// One-line machine-readable ingest record, printed by `validate` and
/// echoed into run manifests.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct IngestSummary {
    pub papers: u64,
    pub edges: u64,
    pub duplicate_papers: u64,
    pub malformed_paper_rows: u64,
    pub out_of_range_years: u64,
    pub duplicate_edges: u64,
    pub self_loops: u64,
    pub unknown_edges: u64,
    pub malformed_reference_rows: u64,
}

impl IngestSummary {
    pub fn new(
        papers: u64,
        edges: u64,
        paper_counts: PaperFileCounts,
        ref_counts: ReferenceFileCounts,
        build_counts: BuildCounts,
    ) -> Self {
        IngestSummary {
            papers,
            edges,
            duplicate_papers: paper_counts.duplicate_ids,
            malformed_paper_rows: paper_counts.malformed_rows,
            out_of_range_years: paper_counts.out_of_range_years,
            duplicate_edges: build_counts.duplicate_edges,
            self_loops: build_counts.self_loops,
            unknown_edges: build_counts.unknown_edges,
            malformed_reference_rows: ref_counts.malformed_rows,
        }
    }
}

impl fmt::Display for IngestSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "papers={} edges={} duplicate_papers={} malformed_paper_rows={} \
             out_of_range_years={} duplicate_edges={} self_loops={} \
             unknown_edges={} malformed_reference_rows={}",
            self.papers,
            self.edges,
            self.duplicate_papers,
            self.malformed_paper_rows,
            self.out_of_range_years,
            self.duplicate_edges,
            self.self_loops,
            self.unknown_edges,
            self.malformed_reference_rows,
        )
    }
}

/// Immutable directed citation graph in CSR form, edges citing -> cited.
///
/// Both directions are materialized: out-adjacency drives co-citation and
/// PageRank contributions, in-adjacency drives per-paper pulls. Adjacency
/// lists are sorted, so rebuilding from the same files is byte-identical.
#[derive(Debug, Clone)]
pub struct CitationGraph {
    out_offsets: Vec<usize>,
    out_targets: Vec<PaperId>,
    in_offsets: Vec<usize>,
    in_sources: Vec<PaperId>,
}

impl CitationGraph {
    pub fn paper_count(&self) -> usize {
        self.out_offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    /// Papers cited by `p` (its reference list), ascending.
    pub fn references(&self, p: PaperId) -> &[PaperId] {
        &self.out_targets[self.out_offsets[p.index()]..self.out_offsets[p.index() + 1]]
    }

    /// Papers citing `p`, ascending.
    pub fn citers(&self, p: PaperId) -> &[PaperId] {
        &self.in_sources[self.in_offsets[p.index()]..self.in_offsets[p.index() + 1]]
    }

    pub fn out_degree(&self, p: PaperId) -> usize {
        self.references(p).len()
    }

    /// Citation count of `p`: the number of distinct papers citing it.
    pub fn in_degree(&self, p: PaperId) -> usize {
        self.citers(p).len()
    }

    /// True when `p` has neither incoming nor outgoing edges.
    pub fn is_zero_degree(&self, p: PaperId) -> bool {
        self.in_degree(p) == 0 && self.out_degree(p) == 0
    }

    pub fn papers(&self) -> impl Iterator<Item = PaperId> {
        (0..self.paper_count() as u64).map(PaperId)
    }

    fn from_clean_sorted_edges(paper_count: usize, edges: &[(PaperId, PaperId)]) -> Self {
        let mut out_offsets = vec![0usize; paper_count + 1];
        for &(src, _) in edges {
            out_offsets[src.index() + 1] += 1;
        }
        for i in 0..paper_count {
            out_offsets[i + 1] += out_offsets[i];
        }
        let out_targets = edges.iter().map(|&(_, dst)| dst).collect();

        let mut by_target: Vec<(PaperId, PaperId)> = edges.to_vec();
        by_target.sort_unstable_by_key(|&(src, dst)| (dst, src));
        let mut in_offsets = vec![0usize; paper_count + 1];
        for &(_, dst) in &by_target {
            in_offsets[dst.index() + 1] += 1;
        }
        for i in 0..paper_count {
            in_offsets[i + 1] += in_offsets[i];
        }
        let in_sources = by_target.into_iter().map(|(src, _)| src).collect();

        CitationGraph {
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
        }
    }
}

fn open_lines(path: &Path) -> Result<BufReader<File>, IngestError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })
}

pub(crate) fn valid_token(token: &str) -> bool {
    !token.is_empty() && token.len() <= MAX_TOKEN_BYTES
}

/// Parses the papers file. Duplicate ids keep their first occurrence;
/// malformed rows and out-of-range years are skipped and counted.
pub fn parse_papers(
    path: impl AsRef<Path>,
    opts: &ParseOptions,
) -> Result<(PaperTable, PaperFileCounts), IngestError> {
    let path = path.as_ref();
    let reader = open_lines(path)?;
    let mut table = PaperTable::default();
    let mut counts = PaperFileCounts::default();
    let max_year = opts.max_year.unwrap_or(i32::MAX);

    for line in reader.lines() {
        let line = line.map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut fields = line.split('\t');
        let (token, year_str) = match (fields.next(), fields.next(), fields.next()) {
            (Some(token), Some(year), None) => (token, year),
            _ => {
                counts.malformed_rows += 1;
                continue;
            }
        };
        if !valid_token(token) {
            counts.malformed_rows += 1;
            continue;
        }
        let year: i32 = match year_str.parse() {
            Ok(year) => year,
            Err(_) => {
                counts.malformed_rows += 1;
                continue;
            }
        };
        if year < opts.min_year || year > max_year {
            counts.out_of_range_years += 1;
            continue;
        }
        if table.insert(token, year).is_none() {
            counts.duplicate_ids += 1;
        }
    }

    if table.is_empty() {
        return Err(IngestError::EmptyDataset {
            path: path.to_path_buf(),
        });
    }
    Ok((table, counts))
}

/// Parses the references file into a raw edge list in file order.
/// Malformed rows are skipped and counted; everything else (duplicates,
/// self-loops, unknown ids) survives until [`build_graph`].
pub fn parse_references(
    path: impl AsRef<Path>,
) -> Result<(Vec<RawEdge>, ReferenceFileCounts), IngestError> {
    let path = path.as_ref();
    let reader = open_lines(path)?;
    let mut edges = Vec::new();
    let mut counts = ReferenceFileCounts::default();

    for line in reader.lines() {
        let line = line.map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut fields = line.split('\t');
        match (fields.next(), fields.next(), fields.next()) {
            (Some(citing), Some(cited), None) if valid_token(citing) && valid_token(cited) => {
                edges.push((citing.to_string(), cited.to_string()));
            }
            _ => counts.malformed_rows += 1,
        }
    }
    Ok((edges, counts))
}

/// Builds the cleaned graph: edges with endpoints missing from the table
/// are dropped, then self-loops, then duplicates; each removal is counted.
pub fn build_graph(papers: &PaperTable, edges: &[RawEdge]) -> (CitationGraph, BuildCounts) {
    let mut counts = BuildCounts::default();
    let mut resolved: Vec<(PaperId, PaperId)> = Vec::with_capacity(edges.len());

    for (citing, cited) in edges {
        let (src, dst) = match (papers.ids().get(citing), papers.ids().get(cited)) {
            (Some(src), Some(dst)) => (src, dst),
            _ => {
                counts.unknown_edges += 1;
                continue;
            }
        };
        if src == dst {
            counts.self_loops += 1;
            continue;
        }
        resolved.push((src, dst));
    }

    resolved.sort_unstable();
    let before = resolved.len();
    resolved.dedup();
    counts.duplicate_edges = (before - resolved.len()) as u64;

    (
        CitationGraph::from_clean_sorted_edges(papers.len(), &resolved),
        counts,
    )
}

/// Full ingest convenience: both files parsed, graph built, summary assembled.
pub fn ingest(
    papers_path: impl AsRef<Path>,
    refs_path: impl AsRef<Path>,
    opts: &ParseOptions,
) -> Result<(PaperTable, CitationGraph, IngestSummary), IngestError> {
    let (table, paper_counts) = parse_papers(papers_path, opts)?;
    let (edges, ref_counts) = parse_references(refs_path)?;
    let (graph, build_counts) = build_graph(&table, &edges);
    let summary = IngestSummary::new(
        table.len() as u64,
        graph.edge_count() as u64,
        paper_counts,
        ref_counts,
        build_counts,
    );
    Ok((table, graph, summary))
}
