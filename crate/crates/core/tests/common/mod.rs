#![allow(dead_code)] // each test target compiles its own copy and uses a subset

//! Shared fixtures and independent oracles for integration tests.
//!
//! The oracles deliberately avoid the library's own data structures and
//! algorithms: neighborhoods by quadratic scan over an edge list,
//! PageRank by dense matrix iteration. Tests compare the real
//! implementations against these.

use std::collections::{BTreeMap, BTreeSet};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use citerank::graph::{build_graph, CitationGraph, PaperTable, RawEdge};

/// Builds a table and cleaned graph from token rows and token edges.
pub fn graph_of(papers: &[(&str, i32)], edges: &[(&str, &str)]) -> (PaperTable, CitationGraph) {
    let mut table = PaperTable::default();
    for &(token, year) in papers {
        table.insert(token, year);
    }
    let raw: Vec<RawEdge> = edges
        .iter()
        .map(|&(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let (graph, _) = build_graph(&table, &raw);
    (table, graph)
}

/// The five-paper example graph used across golden tests: papers A..E,
/// years 2010..2014, D cites {A, B}, E cites {A, C}.
pub fn five_paper_graph() -> (PaperTable, CitationGraph) {
    graph_of(
        &[("A", 2010), ("B", 2011), ("C", 2012), ("D", 2013), ("E", 2014)],
        &[("D", "A"), ("D", "B"), ("E", "A"), ("E", "C")],
    )
}

/// Random graph in token form: paper years and a reference list that may
/// contain duplicates and self-loops, exactly like dirty input files.
#[derive(Debug)]
pub struct RandomGraphSpec {
    pub papers: Vec<(String, i32)>,
    pub edges: Vec<(String, String)>,
}

/// Draws a random graph with up to `max_papers` papers and
/// `max_edges` reference rows.
pub fn random_graph_spec(rng: &mut ChaCha8Rng, max_papers: usize, max_edges: usize) -> RandomGraphSpec {
    let n = rng.random_range(2..=max_papers);
    let papers: Vec<(String, i32)> = (0..n)
        .map(|i| (format!("N{i:05}"), rng.random_range(1990..=2020)))
        .collect();
    let edge_count = rng.random_range(0..=max_edges);
    let edges = (0..edge_count)
        .map(|_| {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            (papers[a].0.clone(), papers[b].0.clone())
        })
        .collect();
    RandomGraphSpec { papers, edges }
}

pub fn build_spec(spec: &RandomGraphSpec) -> (PaperTable, CitationGraph) {
    let rows: Vec<(&str, i32)> = spec.papers.iter().map(|(t, y)| (t.as_str(), *y)).collect();
    let refs: Vec<(&str, &str)> = spec
        .edges
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    graph_of(&rows, &refs)
}

/// Brute-force co-citation oracle over the cleaned graph: `q` neighbors
/// `p` iff some citing paper links to both. Quadratic per citing list
/// on purpose; shares no code with the library's builder.
pub fn cocitation_oracle(graph: &CitationGraph) -> BTreeMap<usize, BTreeSet<usize>> {
    let mut neighborhoods: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for p in graph.papers() {
        neighborhoods.insert(p.index(), BTreeSet::new());
    }
    for c in graph.papers() {
        let list = graph.references(c);
        for &p in list {
            for &q in list {
                if p != q {
                    neighborhoods.get_mut(&p.index()).unwrap().insert(q.index());
                }
            }
        }
    }
    neighborhoods
}

/// Dense PageRank oracle: builds the full transition matrix with
/// teleport and uniform dangling redistribution, then iterates until the
/// L1 step change drops below `tolerance`.
pub fn dense_pagerank_oracle(
    graph: &CitationGraph,
    damping: f64,
    tolerance: f64,
    max_iterations: u32,
) -> Vec<f64> {
    let n = graph.paper_count();
    if n == 0 {
        return Vec::new();
    }
    // column-stochastic matrix m[i][j] = probability of moving j -> i
    let mut m = vec![vec![0.0f64; n]; n];
    for j in graph.papers() {
        let refs = graph.references(j);
        if refs.is_empty() {
            for row in m.iter_mut() {
                row[j.index()] = 1.0 / n as f64;
            }
        } else {
            for &i in refs {
                m[i.index()][j.index()] = 1.0 / refs.len() as f64;
            }
        }
    }
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..max_iterations {
        let mut next = vec![0.0f64; n];
        for i in 0..n {
            let mut pulled = 0.0;
            for j in 0..n {
                pulled += m[i][j] * x[j];
            }
            next[i] = (1.0 - damping) / n as f64 + damping * pulled;
        }
        let delta: f64 = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if delta <= tolerance {
            break;
        }
    }
    x
}
