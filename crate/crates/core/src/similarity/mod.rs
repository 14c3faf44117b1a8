//! Unsupervised translation ranking by cross-lingual image-set similarity.
//!
//! Four set similarities are available ([`SimilarityMethod`]). The two
//! "max" methods compare every source image with every target image; the
//! two aggregate methods compare one summary vector per set. The KNN
//! methods produce a single prediction per source word instead of a
//! ranking.

mod knn;
mod matrix;
mod tsv;

pub use knn::{knn_cluster_translate, knn_translate, KnnConfig, KnnPrediction};
pub use matrix::{rank_all, similarity_matrix, SimilarityMatrix};
pub use tsv::{parse_rankings, read_rankings, render_rankings, write_rankings};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::{Dataset, WordEntry};
use crate::features::{FeatureKind, ImageSet};
use crate::numerics::{cosine_with_norms, l2_norm, NumericsError};

#[derive(Debug, Error)]
pub enum SimilarityError {
    #[error("dimension mismatch: {expected} vs {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("feature kinds differ: {0} vs {1}")]
    KindMismatch(FeatureKind, FeatureKind),
    #[error("image set for {0:?} is empty")]
    EmptySet(String),
    #[error("{word:?} has {got} images, fewer than the {needed} clusters requested")]
    TooFewImages {
        word: String,
        needed: usize,
        got: usize,
    },
    #[error("no target words with images to rank")]
    NoCandidates,
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimilarityMethod {
    /// Mean over source images of the best cosine to any target image.
    AvgMax,
    /// Best cosine over all image pairs.
    MaxMax,
    /// Cosine of the component-wise mean vectors.
    SetMean,
    /// Cosine of the component-wise maximum vectors.
    SetMax,
}

impl SimilarityMethod {
    pub const ALL: [SimilarityMethod; 4] = [
        SimilarityMethod::AvgMax,
        SimilarityMethod::MaxMax,
        SimilarityMethod::SetMean,
        SimilarityMethod::SetMax,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SimilarityMethod::AvgMax => "avgmax",
            SimilarityMethod::MaxMax => "maxmax",
            SimilarityMethod::SetMean => "setmean",
            SimilarityMethod::SetMax => "setmax",
        }
    }
}

impl fmt::Display for SimilarityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SimilarityMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "avgmax" => Ok(SimilarityMethod::AvgMax),
            "maxmax" => Ok(SimilarityMethod::MaxMax),
            "setmean" | "cnnmean" | "cnn-mean" => Ok(SimilarityMethod::SetMean),
            "setmax" | "cnnmax" | "cnn-max" => Ok(SimilarityMethod::SetMax),
            other => Err(format!("unknown similarity method {other:?}")),
        }
    }
}

/// What produced a ranked list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankingMethod {
    Set(SimilarityMethod),
    Knn,
    KnnCluster { k: usize },
    LogRegr,
}

impl RankingMethod {
    /// Whether the method ranks every candidate (as opposed to emitting a
    /// single prediction).
    pub fn is_full_ranking(self) -> bool {
        !matches!(self, RankingMethod::Knn | RankingMethod::KnnCluster { .. })
    }
}

impl fmt::Display for RankingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankingMethod::Set(m) => m.fmt(f),
            RankingMethod::Knn => f.write_str("knn"),
            RankingMethod::KnnCluster { k } => write!(f, "knnc(k={k})"),
            RankingMethod::LogRegr => f.write_str("logregr"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub target: WordEntry,
    pub score: f64,
}

/// Scored candidate translations for one source word, best first.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedList {
    pub source: WordEntry,
    pub method: RankingMethod,
    pub candidates: Vec<Candidate>,
}

impl RankedList {
    /// Sorts `(target, score)` pairs by descending score; equal scores keep
    /// the input (target lexicon) order.
    pub fn from_scores(
        source: WordEntry,
        method: RankingMethod,
        scored: Vec<(WordEntry, f64)>,
    ) -> Self {
        let mut idx: Vec<usize> = (0..scored.len()).collect();
        idx.sort_by(|&a, &b| scored[b].1.total_cmp(&scored[a].1).then(a.cmp(&b)));
        let mut slots: Vec<Option<(WordEntry, f64)>> = scored.into_iter().map(Some).collect();
        let candidates = idx
            .into_iter()
            .map(|i| {
                let (target, score) = slots[i].take().unwrap();
                Candidate { target, score }
            })
            .collect();
        RankedList {
            source,
            method,
            candidates,
        }
    }

    /// 1-based position of `word` among the candidates.
    pub fn rank_of(&self, word: &str) -> Option<usize> {
        self.candidates
            .iter()
            .position(|c| c.target.word == word)
            .map(|p| p + 1)
    }

    pub fn top(&self) -> Option<&Candidate> {
        self.candidates.first()
    }
}

pub(crate) fn check_compatible(a: &ImageSet, b: &ImageSet) -> Result<(), SimilarityError> {
    if a.dim() != b.dim() {
        return Err(SimilarityError::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    if a.kind != b.kind {
        return Err(SimilarityError::KindMismatch(a.kind, b.kind));
    }
    for s in [a, b] {
        if s.is_empty() {
            return Err(SimilarityError::EmptySet(s.word.clone()));
        }
    }
    Ok(())
}

/// Per-set data reused across many comparisons: row norms and the two
/// aggregate vectors with their norms.
pub(crate) struct PreparedSet<'a> {
    pub set: &'a ImageSet,
    pub norms: Vec<f64>,
    pub mean: Vec<f64>,
    pub mean_norm: f64,
    pub max: Vec<f64>,
    pub max_norm: f64,
}

impl<'a> PreparedSet<'a> {
    pub fn new(set: &'a ImageSet) -> Result<Self, SimilarityError> {
        let mean = set
            .vectors
            .mean_row()
            .ok_or_else(|| SimilarityError::EmptySet(set.word.clone()))?;
        let max = set.vectors.max_row().expect("non-empty");
        Ok(PreparedSet {
            set,
            norms: set.vectors.rows().map(l2_norm).collect(),
            mean_norm: l2_norm(&mean),
            mean,
            max_norm: l2_norm(&max),
            max,
        })
    }

    pub fn similarity(&self, other: &PreparedSet<'_>, method: SimilarityMethod) -> f64 {
        let a = &self.set.vectors;
        match method {
            SimilarityMethod::AvgMax => {
                let total: f64 = a
                    .rows()
                    .zip(&self.norms)
                    .map(|(x, &nx)| best_match(x, nx, other))
                    .sum();
                total / a.nrows() as f64
            }
            SimilarityMethod::MaxMax => a
                .rows()
                .zip(&self.norms)
                .map(|(x, &nx)| best_match(x, nx, other))
                .fold(f64::NEG_INFINITY, f64::max),
            SimilarityMethod::SetMean => {
                cosine_with_norms(&self.mean, &other.mean, self.mean_norm, other.mean_norm)
            }
            SimilarityMethod::SetMax => {
                cosine_with_norms(&self.max, &other.max, self.max_norm, other.max_norm)
            }
        }
    }
}

fn best_match(x: &[f64], nx: f64, other: &PreparedSet<'_>) -> f64 {
    other
        .set
        .vectors
        .rows()
        .zip(&other.norms)
        .map(|(y, &ny)| cosine_with_norms(x, y, nx, ny))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Similarity of two image sets. Directional for [`SimilarityMethod::AvgMax`]
/// (`a` is the source side).
pub fn set_similarity(
    a: &ImageSet,
    b: &ImageSet,
    method: SimilarityMethod,
) -> Result<f64, SimilarityError> {
    check_compatible(a, b)?;
    Ok(PreparedSet::new(a)?.similarity(&PreparedSet::new(b)?, method))
}

/// Scores every eligible target word against one source set.
pub fn rank_translations(
    source: &WordEntry,
    source_set: &ImageSet,
    targets: &Dataset,
    method: SimilarityMethod,
) -> Result<RankedList, SimilarityError> {
    let eligible = targets.eligible();
    if eligible.is_empty() {
        return Err(SimilarityError::NoCandidates);
    }
    let src = PreparedSet::new(source_set)?;
    let mut scored = Vec::with_capacity(eligible.len());
    for (entry, set) in eligible {
        check_compatible(source_set, set)?;
        scored.push((
            entry.clone(),
            src.similarity(&PreparedSet::new(set)?, method),
        ));
    }
    Ok(RankedList::from_scores(
        source.clone(),
        RankingMethod::Set(method),
        scored,
    ))
}
