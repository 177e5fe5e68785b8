//! Pairwise agreement between a submission and preference judgments.
//!
//! A judgment row `better<TAB>worse` asserts that the first paper should
//! outrank the second. Agreement is the fraction of scorable judgments
//! the submission satisfies, with ties worth half:
//! `(agree + 0.5 * tie) / (judgments - missing)`. Only the order of
//! probabilities matters, so the measure is invariant under any strictly
//! increasing rescaling of the submission.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::graph::valid_token;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no valid judgment pairs in {path}")]
    NoJudgments { path: PathBuf },
    #[error("no judgment pair has both papers in the submission")]
    NoOverlap,
}

/// Preference judgments: ordered `(better, worse)` token pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JudgmentSet {
    pub pairs: Vec<(String, String)>,
    /// Rows dropped while reading: malformed, or comparing a paper
    /// against itself.
    pub skipped: u64,
}

/// Reads a judgments file. Malformed and reflexive rows are skipped and
/// counted; a file with no usable pair at all is an error.
pub fn read_judgments(path: impl AsRef<Path>) -> Result<JudgmentSet, EvalError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut pairs = Vec::new();
    let mut skipped = 0u64;
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|source| EvalError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut fields = line.split('\t');
        match (fields.next(), fields.next(), fields.next()) {
            (Some(better), Some(worse), None)
                if valid_token(better) && valid_token(worse) && better != worse =>
            {
                pairs.push((better.to_string(), worse.to_string()));
            }
            _ => skipped += 1,
        }
    }
    if pairs.is_empty() {
        return Err(EvalError::NoJudgments {
            path: path.to_path_buf(),
        });
    }
    Ok(JudgmentSet { pairs, skipped })
}

/// Agreement between one submission and one judgment set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgreementReport {
    pub agreement: f64,
    pub agree: u64,
    pub disagree: u64,
    pub tie: u64,
    /// Judgments with either paper absent from the submission; excluded
    /// from the denominator.
    pub missing: u64,
}

impl fmt::Display for AgreementReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "agreement={} agree={} disagree={} tie={} missing={}",
            self.agreement, self.agree, self.disagree, self.tie, self.missing
        )
    }
}

/// Scores a submission against judgments. Probabilities are compared
/// exactly; equal values count as a tie worth half an agreement.
pub fn agreement(
    probs: &HashMap<String, f64>,
    judgments: &JudgmentSet,
) -> Result<AgreementReport, EvalError> {
    let mut agree = 0u64;
    let mut disagree = 0u64;
    let mut tie = 0u64;
    let mut missing = 0u64;
    for (better, worse) in &judgments.pairs {
        match (probs.get(better), probs.get(worse)) {
            (Some(b), Some(w)) => match b.total_cmp(w) {
                Ordering::Greater => agree += 1,
                Ordering::Less => disagree += 1,
                Ordering::Equal => tie += 1,
            },
            _ => missing += 1,
        }
    }
    let scorable = judgments.pairs.len() as u64 - missing;
    if scorable == 0 {
        return Err(EvalError::NoOverlap);
    }
    Ok(AgreementReport {
        agreement: (agree as f64 + 0.5 * tie as f64) / scorable as f64,
        agree,
        disagree,
        tie,
        missing,
    })
}
