use super::{
    check_compatible, PreparedSet, RankedList, RankingMethod, SimilarityError, SimilarityMethod,
};
use crate::corpus::{Dataset, WordEntry};
use crate::numerics::Matrix;
use crate::parallel::{map_indexed, Execution};

/// Set similarities between every eligible source word (rows) and every
/// eligible target word (columns), both in lexicon order.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub method: SimilarityMethod,
    pub sources: Vec<WordEntry>,
    pub targets: Vec<WordEntry>,
    pub scores: Matrix,
}

impl SimilarityMatrix {
    /// The ranking of row `i`; identical to calling
    /// [`rank_translations`](super::rank_translations) for that word.
    pub fn ranked_list(&self, i: usize) -> RankedList {
        let scored = self
            .targets
            .iter()
            .cloned()
            .zip(self.scores.row(i).iter().copied())
            .collect();
        RankedList::from_scores(
            self.sources[i].clone(),
            RankingMethod::Set(self.method),
            scored,
        )
    }

    pub fn ranked_lists(&self) -> Vec<RankedList> {
        (0..self.sources.len())
            .map(|i| self.ranked_list(i))
            .collect()
    }
}

/// Batch form of [`set_similarity`](super::set_similarity). Rows may be
/// evaluated concurrently; the result is identical either way.
pub fn similarity_matrix(
    sources: &Dataset,
    targets: &Dataset,
    method: SimilarityMethod,
    exec: Execution,
) -> Result<SimilarityMatrix, SimilarityError> {
    let src = sources.eligible();
    let tgt = targets.eligible();
    if tgt.is_empty() {
        return Err(SimilarityError::NoCandidates);
    }
    if let (Some((_, a)), Some((_, b))) = (src.first(), tgt.first()) {
        check_compatible(a, b)?;
    }
    let prepared_targets = tgt
        .iter()
        .map(|(_, s)| PreparedSet::new(s))
        .collect::<Result<Vec<_>, _>>()?;

    let rows = map_indexed(src.len(), exec, |i| {
        let p = PreparedSet::new(src[i].1)?;
        Ok::<_, SimilarityError>(
            prepared_targets
                .iter()
                .map(|t| p.similarity(t, method))
                .collect::<Vec<f64>>(),
        )
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;

    Ok(SimilarityMatrix {
        method,
        sources: src.iter().map(|(e, _)| (*e).clone()).collect(),
        targets: tgt.iter().map(|(e, _)| (*e).clone()).collect(),
        scores: Matrix::from_rows_with_dim(tgt.len(), &rows)?,
    })
}

/// Ranked lists for every eligible source word.
pub fn rank_all(
    sources: &Dataset,
    targets: &Dataset,
    method: SimilarityMethod,
    exec: Execution,
) -> Result<Vec<RankedList>, SimilarityError> {
    Ok(similarity_matrix(sources, targets, method, exec)?.ranked_lists())
}
