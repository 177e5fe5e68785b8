//! Score normalization and submission files.
//!
//! Raw metric scores are mapped to [0, 1] by min-max rescaling and
//! written as `paper_id<TAB>probability` rows, best paper first. Ties are
//! broken by ascending original id token so a submission is a pure
//! function of scores and ids, never of iteration order.

use std::io::{BufRead, BufReader, Write};
use std::fs::File;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::graph::{IdMap, PaperId};

#[derive(Debug, Error)]
pub enum RankingError {
    #[error("cannot rank an empty score table")]
    Empty,
    #[error("score at dense index {0} is not finite")]
    NonFinite(usize),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed submission row")]
    MalformedRow { path: PathBuf, line: usize },
    #[error("duplicate paper id {token} in submission")]
    DuplicateRow { token: String },
    #[error(transparent)]
    Write(#[from] std::io::Error),
}

fn check_finite(scores: &[f64]) -> Result<(), RankingError> {
    if scores.is_empty() {
        return Err(RankingError::Empty);
    }
    if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
        return Err(RankingError::NonFinite(i));
    }
    Ok(())
}

/// Min-max rescaling into [0, 1]. When every score is identical the
/// whole field collapses to 0.5: no paper is distinguishable, so none
/// gets an extreme probability.
pub fn normalize(scores: &[f64]) -> Result<Vec<f64>, RankingError> {
    check_finite(scores)?;
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return Ok(vec![0.5; scores.len()]);
    }
    let span = max - min;
    Ok(scores.iter().map(|&s| (s - min) / span).collect())
}

/// Dense ids sorted best first: probability descending, original token
/// ascending on ties.
pub fn rank_order(probs: &[f64], ids: &IdMap) -> Result<Vec<PaperId>, RankingError> {
    check_finite(probs)?;
    let mut order: Vec<PaperId> = (0..probs.len() as u64).map(PaperId::new).collect();
    order.sort_by(|&a, &b| {
        probs[b.index()]
            .total_cmp(&probs[a.index()])
            .then_with(|| ids.token(a).cmp(ids.token(b)))
    });
    Ok(order)
}

/// Renders a probability with nine significant digits, as a plain
/// decimal without exponent notation.
pub fn format_probability(p: f64) -> String {
    let sci = format!("{p:.8e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if exp >= 0 {
        // probabilities live in [0, 1]; a non-negative exponent only
        // happens for 0 and 1, whose mantissa is already the rendering
        mantissa.to_string()
    } else {
        let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
        format!("0.{}{digits}", "0".repeat(exp.unsigned_abs() as usize - 1))
    }
}

/// Writes a ranked submission: `paper_id<TAB>probability` rows, best
/// first, probabilities with nine significant digits.
pub fn write_submission(
    out: &mut impl Write,
    ids: &IdMap,
    probs: &[f64],
) -> Result<(), RankingError> {
    for p in rank_order(probs, ids)? {
        writeln!(out, "{}\t{}", ids.token(p), format_probability(probs[p.index()]))?;
    }
    Ok(())
}

/// Reads a submission back as `(token, probability)` rows in file order.
/// Any unparseable row or repeated paper id is an error: submissions are
/// machine-written, so damage means the file cannot be trusted.
pub fn read_submission(path: impl AsRef<Path>) -> Result<Vec<(String, f64)>, RankingError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| RankingError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut rows: Vec<(String, f64)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| RankingError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let malformed = || RankingError::MalformedRow {
            path: path.to_path_buf(),
            line: idx + 1,
        };
        let (token, prob) = line.split_once('\t').ok_or_else(malformed)?;
        let prob: f64 = prob.parse().map_err(|_| malformed())?;
        if token.is_empty() || !prob.is_finite() {
            return Err(malformed());
        }
        if !seen.insert(token.to_string()) {
            return Err(RankingError::DuplicateRow {
                token: token.to_string(),
            });
        }
        rows.push((token.to_string(), prob));
    }
    Ok(rows)
}
