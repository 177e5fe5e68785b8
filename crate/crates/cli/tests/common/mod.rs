#![allow(dead_code)]

//! Independent oracles and graph builders for the acceptance suite.
//! Deliberately naive implementations that share no code with the
//! library: neighborhoods by quadratic scan, PageRank by dense matrix.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use citerank::graph::{build_graph, CitationGraph, PaperTable, RawEdge};

/// A graph in raw token form, as it would appear in input files.
#[derive(Debug)]
pub struct TokenGraph {
    pub papers: Vec<(String, i32)>,
    pub edges: Vec<(String, String)>,
}

impl TokenGraph {
    pub fn build(&self) -> (PaperTable, CitationGraph) {
        let mut table = PaperTable::default();
        for (token, year) in &self.papers {
            table.insert(token, *year);
        }
        let raw: Vec<RawEdge> = self.edges.clone();
        let (graph, _) = build_graph(&table, &raw);
        (table, graph)
    }
}

/// Draws a random graph with `papers` papers and `edges` reference rows;
/// rows may repeat and may be self-loops, like dirty input.
pub fn random_token_graph(rng: &mut ChaCha8Rng, papers: usize, edges: usize) -> TokenGraph {
    let rows: Vec<(String, i32)> = (0..papers)
        .map(|i| (format!("N{i:05}"), rng.random_range(1990..=2020)))
        .collect();
    let refs = (0..edges)
        .map(|_| {
            let a = rng.random_range(0..papers);
            let b = rng.random_range(0..papers);
            (rows[a].0.clone(), rows[b].0.clone())
        })
        .collect();
    TokenGraph { papers: rows, edges: refs }
}

/// Brute-force co-citation sets: `q` neighbors `p` iff some citing
/// paper links to both.
pub fn cocitation_oracle(graph: &CitationGraph) -> Vec<Vec<usize>> {
    let n = graph.paper_count();
    let mut sets: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
    for c in graph.papers() {
        let list = graph.references(c);
        for &p in list {
            for &q in list {
                if p != q {
                    sets[p.index()].insert(q.index());
                }
            }
        }
    }
    sets.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Dense-matrix PageRank with teleport and uniform dangling
/// redistribution, iterated to `tolerance` in L1.
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
