//! Acceptance gate: one test per release criterion, each printing a
//! `[PASS]` line with the measured values when it holds. Tolerances are
//! pinned in the assertions; run with `--nocapture` to see the lines.

mod common;

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use citerank::cocitation::{
    accumulate_exact, build_neighborhoods, neighborhood_stats, NeighborAccumulator,
    DEFAULT_MEMORY_BUDGET_BYTES,
};
use citerank::eval::{agreement, read_judgments, JudgmentSet};
use citerank::graph::MIN_VALID_YEAR;
use citerank::metrics::{citation_rates, pagerank, relative_citation_ratio};
use citerank::ranking::{normalize, rank_order, read_submission};
use citerank::synth::{generate, SynthConfig};
use citerank_cli::args::{GenArgs, MetricArg, ModeArg, RankArgs};
use citerank_cli::commands::{cmd_gen, cmd_rank};

use common::{cocitation_oracle, dense_pagerank_oracle, random_token_graph, TokenGraph};

#[test]
fn cocitation_matches_oracle_on_500_graphs() {
    let start = Instant::now();
    let mut graphs = 0usize;
    for shape in 0..25 {
        let papers = [8, 16, 32, 64, 200][shape % 5];
        let edges = (papers * [1, 2, 4, 7, 10][shape / 5]).min(2_000);
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64((shape * 100 + seed) as u64);
            let spec = random_token_graph(&mut rng, papers, edges);
            let (_, graph) = spec.build();
            let index = build_neighborhoods(&graph, DEFAULT_MEMORY_BUDGET_BYTES).unwrap();
            let oracle = cocitation_oracle(&graph);
            for p in graph.papers() {
                let got: Vec<usize> = index.neighbors(p).iter().map(|q| q.index()).collect();
                assert_eq!(got, oracle[p.index()], "graph {graphs}, paper {}", p.index());
            }
            graphs += 1;
        }
    }
    let elapsed = start.elapsed();
    assert_eq!(graphs, 500);
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("[PASS] co-citation oracle equivalence: 500 graphs set-equal in {elapsed:.2?}");
}

#[test]
fn srcr_identity_and_ordering_on_10k_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for trial in 0..10_000 {
        let alpha = rng.random_range(0.01f64..10.0);
        let m = rng.random_range(0.0f64..100.0);
        let acr = rng.random_range(0.0f64..100.0);

        // identity: a rate equal to its neighborhood mean scores 1
        let acc = NeighborAccumulator { counts: vec![1], sums: vec![m] };
        let identity = relative_citation_ratio(&[m], &acc, alpha).unwrap()[0];
        assert!((identity - 1.0).abs() <= 1e-15, "trial {trial}: {identity}");

        // sign: above the mean scores above 1, below scores below
        let score = relative_citation_ratio(&[acr], &acc, alpha).unwrap()[0];
        assert_eq!(score > 1.0, acr > m, "trial {trial}");
        assert_eq!(score < 1.0, acr < m, "trial {trial}");

        // monotonicity in citations at fixed age and neighborhood
        let age = rng.random_range(0i32..50);
        let low = rng.random_range(0u32..1000);
        let high = low + rng.random_range(1u32..1000);
        let rates = [
            f64::from(low) / f64::from(age + 1),
            f64::from(high) / f64::from(age + 1),
        ];
        let acc = NeighborAccumulator { counts: vec![1, 1], sums: vec![m, m] };
        let pair = relative_citation_ratio(&rates, &acc, alpha).unwrap();
        assert!(pair[0] < pair[1], "trial {trial}");
    }
    println!("[PASS] ratio identity and ordering: 10000 triples within 1e-15");
}

#[test]
fn acr_equals_direct_reevaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..30 {
        let papers = rng.random_range(2..=1000);
        let edges = rng.random_range(0..=5 * papers);
        let spec = random_token_graph(&mut rng, papers, edges);
        let (table, graph) = spec.build();
        let as_of = table.max_year().unwrap();
        let rates = citation_rates(&graph, &table, as_of);

        // independent recount straight from the raw rows
        let mut counts: HashMap<&str, u32> = HashMap::new();
        let mut seen: HashSet<(&str, &str)> = HashSet::new();
        for (citing, cited) in &spec.edges {
            if citing != cited && seen.insert((citing, cited)) {
                *counts.entry(cited).or_default() += 1;
            }
        }
        for (token, year) in &spec.papers {
            let id = table.ids().get(token).unwrap();
            let count = counts.get(token.as_str()).copied().unwrap_or(0);
            let age = (as_of - year).max(0);
            let expected = f64::from(count) / (f64::from(age) + 1.0);
            assert_eq!(rates[id.index()], expected, "trial {trial}, paper {token}");
        }
    }
    println!("[PASS] rate formula equivalence: 30 graphs up to 1000 papers, bitwise equal");
}

#[test]
fn pagerank_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let papers = rng.random_range(2..=50);
        let edges = rng.random_range(0..=4 * papers);
        let spec = random_token_graph(&mut rng, papers, edges);
        let (_, graph) = spec.build();
        let output = pagerank(&graph, 0.85, 1e-12, 1000);
        let oracle = dense_pagerank_oracle(&graph, 0.85, 1e-12, 1000);
        for p in graph.papers() {
            let delta = (output.scores[p.index()] - oracle[p.index()]).abs();
            worst = worst.max(delta);
            assert!(delta <= 1e-9, "trial {trial}, paper {}: delta {delta}", p.index());
        }
        let total: f64 = output.scores.iter().sum();
        assert!((total - 1.0).abs() <= 1e-9, "trial {trial}: sum {total}");
    }

    let two_node = TokenGraph {
        papers: vec![("X".into(), 2000), ("Y".into(), 2001)],
        edges: vec![("X".into(), "Y".into()), ("Y".into(), "X".into())],
    };
    let (_, graph) = two_node.build();
    let output = pagerank(&graph, 0.85, 1e-12, 1000);
    assert!((output.scores[0] - 0.5).abs() <= 1e-12);
    assert!((output.scores[1] - 0.5).abs() <= 1e-12);
    println!("[PASS] pagerank dense oracle: 100 graphs within 1e-9 (worst {worst:.2e}), two-node cycle at 0.5 within 1e-12");
}

#[test]
fn golden_five_paper_pipeline() {
    let example = TokenGraph {
        papers: vec![
            ("A".into(), 2010),
            ("B".into(), 2011),
            ("C".into(), 2012),
            ("D".into(), 2013),
            ("E".into(), 2014),
        ],
        edges: vec![
            ("D".into(), "A".into()),
            ("D".into(), "B".into()),
            ("E".into(), "A".into()),
            ("E".into(), "C".into()),
        ],
    };
    let (table, graph) = example.build();
    let a = table.ids().get("A").unwrap();

    let index = build_neighborhoods(&graph, DEFAULT_MEMORY_BUDGET_BYTES).unwrap();
    let neighbors: Vec<&str> = index.neighbors(a).iter().map(|&q| table.ids().token(q)).collect();
    assert_eq!(neighbors, ["B", "C"]);

    let rates = citation_rates(&graph, &table, 2014);
    assert_eq!(rates[a.index()], 0.4);

    let acc = accumulate_exact(&index, &rates).unwrap();
    let scores = relative_citation_ratio(&rates, &acc, 1.0).unwrap();
    assert!((scores[a.index()] - 1.083871).abs() <= 1e-6);

    let probs = normalize(&scores).unwrap();
    let order = rank_order(&probs, table.ids()).unwrap();
    assert_eq!(table.ids().token(order[0]), "A");
    println!(
        "[PASS] golden pipeline: neighbors(A)={{B,C}}, rate(A)=0.4, ratio(A)={:.6} within 1e-6 of 1.083871, top rank A",
        scores[a.index()]
    );
}

#[test]
fn agreement_survives_1000_monotone_transforms() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let tokens: Vec<String> = (0..300).map(|i| format!("N{i:05}")).collect();

    for trial in 0..1_000 {
        // dyadic probabilities so transformed values stay exact
        let base: HashMap<String, f64> = tokens
            .iter()
            .map(|t| (t.clone(), f64::from(rng.random_range(0u32..=64)) / 64.0))
            .collect();
        let mut pairs = Vec::with_capacity(50);
        while pairs.len() < 50 {
            let a = rng.random_range(0..tokens.len());
            let b = rng.random_range(0..tokens.len());
            if a != b {
                pairs.push((tokens[a].clone(), tokens[b].clone()));
            }
        }
        let judgments = JudgmentSet { pairs, skipped: 0 };
        let before = agreement(&base, &judgments).unwrap();

        let scale = rng.random_range(0.5f64..20.0);
        let shift = rng.random_range(-10.0f64..10.0);
        let mapped: HashMap<String, f64> = match trial % 3 {
            0 => base.iter().map(|(t, &p)| (t.clone(), scale * p + shift)).collect(),
            1 => base.iter().map(|(t, &p)| (t.clone(), p.exp())).collect(),
            _ => base.iter().map(|(t, &p)| (t.clone(), p * p * p + 0.25 * p)).collect(),
        };
        let after = agreement(&mapped, &judgments).unwrap();
        assert_eq!(before.agreement, after.agreement, "trial {trial}");
        assert_eq!(
            (before.agree, before.disagree, before.tie, before.missing),
            (after.agree, after.disagree, after.tie, after.missing),
            "trial {trial}"
        );
    }

    // reversal: distinct scores, full coverage, so flipping the order
    // flips every verdict
    let forward_scores: HashMap<String, f64> = tokens
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i as f64))
        .collect();
    let backward_scores: HashMap<String, f64> = forward_scores
        .iter()
        .map(|(t, &p)| (t.clone(), -p))
        .collect();
    let mut pairs = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    while pairs.len() < 200 {
        let a = rng.random_range(0..tokens.len());
        let b = rng.random_range(0..tokens.len());
        if a != b {
            pairs.push((tokens[a].clone(), tokens[b].clone()));
        }
    }
    let judgments = JudgmentSet { pairs, skipped: 0 };
    let forward = agreement(&forward_scores, &judgments).unwrap();
    let backward = agreement(&backward_scores, &judgments).unwrap();
    assert_eq!(forward.tie, 0);
    assert_eq!(forward.missing, 0);
    assert!((forward.agreement + backward.agreement - 1.0).abs() <= 1e-15);
    println!("[PASS] agreement invariance: 1000 transforms exactly equal, reversal sums to 1 within 1e-15");
}

fn rank_args(dir: &Path, metric: MetricArg, out_name: &str) -> RankArgs {
    RankArgs {
        papers: dir.join("papers.tsv"),
        references: dir.join("references.tsv"),
        metric,
        out: dir.join(out_name),
        scores_out: None,
        as_of_year: None,
        alpha: 1.0,
        damping: 0.85,
        tolerance: 1e-10,
        max_iterations: 200,
        mode: ModeArg::Exact,
        memory_budget_mb: 4096,
        min_year: MIN_VALID_YEAR,
    }
}

fn peak_rss_bytes() -> u64 {
    let status = fs::read_to_string("/proc/self/status").expect("status readable");
    let line = status
        .lines()
        .find(|l| l.starts_with("VmHWM:"))
        .expect("VmHWM present");
    let kb: u64 = line
        .split_whitespace()
        .nth(1)
        .expect("VmHWM value")
        .parse()
        .expect("VmHWM numeric");
    kb * 1024
}

#[test]
fn end_to_end_synthetic_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();

    cmd_gen(&GenArgs {
        out_dir: dir.path().to_path_buf(),
        papers: 100_000,
        zero_info_fraction: 0.59,
        attachment_exponent: 1.0,
        mean_out_degree: 8.0,
        first_year: 2010,
        last_year: 2014,
        judgments: 2_000,
        min_rank_gap: None, // defaults to papers/10
        seed: 42,
    })
    .unwrap();

    let judgments = read_judgments(dir.path().join("judgments.tsv")).unwrap();
    let mut agreements = Vec::new();
    for (metric, name) in [
        (MetricArg::Citations, "citations"),
        (MetricArg::Acr, "acr"),
        (MetricArg::Srcr, "srcr"),
        (MetricArg::Pagerank, "pagerank"),
    ] {
        cmd_rank(&rank_args(dir.path(), metric, &format!("{name}.tsv"))).unwrap();
        let probs: HashMap<String, f64> = read_submission(dir.path().join(format!("{name}.tsv")))
            .unwrap()
            .into_iter()
            .collect();
        let report = agreement(&probs, &judgments).unwrap();
        assert!(
            report.agreement > 0.9,
            "{name} agreement {} not above 0.9",
            report.agreement
        );
        agreements.push(format!("{name}={}", report.agreement));
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    let peak = peak_rss_bytes();
    assert!(peak < 4u64 << 30, "peak rss {peak} bytes");
    println!(
        "[PASS] end-to-end smoke: 100000 papers, {} in {elapsed:.1?}, peak rss {} MiB",
        agreements.join(" "),
        peak >> 20
    );
}

#[test]
fn submissions_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_citerank");
    let output = Command::new(bin)
        .args([
            "gen",
            "--out-dir",
            dir.path().to_str().unwrap(),
            "--papers",
            "20000",
            "--judgments",
            "500",
            "--seed",
            "9",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());

    for metric in ["citations", "acr", "srcr", "pagerank"] {
        let mut outputs = Vec::new();
        for threads in ["1", "8"] {
            let out = dir.path().join(format!("{metric}-t{threads}.tsv"));
            let run = Command::new(bin)
                .args([
                    "--threads",
                    threads,
                    "rank",
                    "--papers",
                    dir.path().join("papers.tsv").to_str().unwrap(),
                    "--references",
                    dir.path().join("references.tsv").to_str().unwrap(),
                    "--metric",
                    metric,
                    "--out",
                    out.to_str().unwrap(),
                ])
                .output()
                .unwrap();
            assert!(run.status.success(), "{metric} with {threads} threads");
            outputs.push(fs::read(&out).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{metric} differs across thread counts");
        assert!(!outputs[0].is_empty());
    }
    println!("[PASS] determinism: all four metrics byte-identical for 1 and 8 threads");
}

#[test]
fn stats_are_self_consistent_on_synthetic_data() {
    let config = SynthConfig {
        papers: 20_000,
        zero_info_fraction: 0.59,
        attachment_exponent: 1.0,
        mean_out_degree: 8.0,
        year_range: (2010, 2014),
        judgment_count: 100,
        min_rank_gap: 500,
        seed: 10,
    };
    let dataset = generate(&config).unwrap();
    let spec = TokenGraph {
        papers: dataset.papers.clone(),
        edges: dataset
            .edges
            .iter()
            .map(|&(citing, cited)| {
                (
                    dataset.papers[citing as usize].0.clone(),
                    dataset.papers[cited as usize].0.clone(),
                )
            })
            .collect(),
    };
    let (_, graph) = spec.build();
    let index = build_neighborhoods(&graph, DEFAULT_MEMORY_BUDGET_BYTES).unwrap();

    let isolated = graph
        .papers()
        .filter(|&p| graph.in_degree(p) == 0 && graph.out_degree(p) == 0)
        .count() as u64;

    for with_info_only in [false, true] {
        let stats = neighborhood_stats(&index, &graph, with_info_only);
        assert_eq!(stats.papers, 20_000);
        assert_eq!(stats.with_info + isolated, stats.papers);
        let expected = if with_info_only { stats.with_info } else { stats.papers };
        assert_eq!(stats.considered, expected);
        let histogram: u64 = stats.buckets.iter().map(|b| b.count).sum();
        assert_eq!(histogram, stats.considered);
        assert!(stats.buckets.iter().all(|b| b.lo <= b.hi));
        assert!(stats.max <= stats.buckets.last().unwrap().hi);
    }
    println!("[PASS] stats self-consistency: with-info + isolated = total, histograms sum exactly");
}
