use super::{check_compatible, SimilarityError};
use crate::corpus::{Dataset, WordEntry};
use crate::features::ImageSet;
use crate::numerics::{cosine_with_norms, kmeans, l2_norm};

/// Number of clusters for KNN-C; 1 is plain KNN.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnnConfig {
    pub clusters: usize,
}

impl Default for KnnConfig {
    fn default() -> Self {
        KnnConfig { clusters: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnnPrediction {
    pub source: WordEntry,
    pub word: WordEntry,
    /// Source images whose nearest target image belongs to `word`.
    pub votes: usize,
    /// Clusters won by `word` (always 1 for plain KNN).
    pub clusters_won: usize,
}

/// All target images flattened in (word, image) order.
struct TargetPool<'a> {
    words: Vec<&'a WordEntry>,
    /// (word index, row, norm)
    images: Vec<(usize, &'a [f64], f64)>,
}

impl<'a> TargetPool<'a> {
    fn new(source_set: &ImageSet, targets: &'a Dataset) -> Result<Self, SimilarityError> {
        let eligible = targets.eligible();
        if eligible.is_empty() {
            return Err(SimilarityError::NoCandidates);
        }
        let mut words = Vec::with_capacity(eligible.len());
        let mut images = Vec::new();
        for (w, (entry, set)) in eligible.into_iter().enumerate() {
            check_compatible(source_set, set)?;
            words.push(entry);
            images.extend(set.vectors.rows().map(|r| (w, r, l2_norm(r))));
        }
        Ok(TargetPool { words, images })
    }

    /// Word owning each source image's nearest target image (strictly
    /// greater cosine wins, so ties go to the earliest (word, image)).
    fn votes(&self, rows: &[&[f64]]) -> Vec<usize> {
        let mut votes = vec![0; self.words.len()];
        for x in rows {
            let nx = l2_norm(x);
            let mut best = (usize::MAX, f64::NEG_INFINITY);
            for &(w, y, ny) in &self.images {
                let c = cosine_with_norms(x, y, nx, ny);
                if c > best.1 {
                    best = (w, c);
                }
            }
            votes[best.0] += 1;
        }
        votes
    }

    /// Mean cosine distance over all (source image, image of word `w`) pairs.
    fn mean_distance(&self, rows: &[&[f64]], w: usize) -> f64 {
        let mut total = 0.0;
        let mut n = 0usize;
        for x in rows {
            let nx = l2_norm(x);
            for &(_, y, ny) in self.images.iter().filter(|im| im.0 == w) {
                total += 1.0 - cosine_with_norms(x, y, nx, ny);
                n += 1;
            }
        }
        total / n as f64
    }

    /// Lowest mean distance among `tied`; remaining ties go to the earliest word.
    fn closest(&self, rows: &[&[f64]], tied: &[usize]) -> usize {
        let mut best = (tied[0], self.mean_distance(rows, tied[0]));
        for &w in &tied[1..] {
            let d = self.mean_distance(rows, w);
            if d < best.1 {
                best = (w, d);
            }
        }
        best.0
    }

    fn winner(&self, rows: &[&[f64]], votes: &[usize]) -> usize {
        argmax_ties(votes).map_or(0, |tied| self.closest(rows, &tied))
    }
}

/// Indices attaining the maximum, ascending. `None` for an empty slice.
fn argmax_ties(values: &[usize]) -> Option<Vec<usize>> {
    let max = *values.iter().max()?;
    Some(
        values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == max)
            .map(|(i, _)| i)
            .collect(),
    )
}

fn rows_of(set: &ImageSet) -> Vec<&[f64]> {
    set.vectors.rows().collect()
}

/// Translates by nearest-neighbour voting: every source image votes for the
/// target word owning its most cosine-similar image among all target images.
/// Vote ties go to the word whose images are closest on average to the
/// source images.
pub fn knn_translate(
    source: &WordEntry,
    source_set: &ImageSet,
    targets: &Dataset,
) -> Result<KnnPrediction, SimilarityError> {
    if source_set.is_empty() {
        return Err(SimilarityError::EmptySet(source_set.word.clone()));
    }
    let pool = TargetPool::new(source_set, targets)?;
    let rows = rows_of(source_set);
    let votes = pool.votes(&rows);
    let w = pool.winner(&rows, &votes);
    Ok(KnnPrediction {
        source: source.clone(),
        word: pool.words[w].clone(),
        votes: votes[w],
        clusters_won: 1,
    })
}

/// KNN-C: clusters the source images into `cfg.clusters` groups with
/// k-means, runs KNN voting per cluster and returns the word that wins the
/// most clusters. Ties fall back to the total vote count, then to the mean
/// distance against the whole source set.
pub fn knn_cluster_translate(
    source: &WordEntry,
    source_set: &ImageSet,
    targets: &Dataset,
    cfg: KnnConfig,
    seed: u64,
) -> Result<KnnPrediction, SimilarityError> {
    let k = cfg.clusters.max(1);
    if k == 1 {
        return knn_translate(source, source_set, targets);
    }
    if source_set.len() < k {
        return Err(SimilarityError::TooFewImages {
            word: source_set.word.clone(),
            needed: k,
            got: source_set.len(),
        });
    }
    let pool = TargetPool::new(source_set, targets)?;
    let clustering = kmeans(&source_set.vectors, k, seed, 100)?;
    let all_rows = rows_of(source_set);

    let mut clusters_won = vec![0usize; pool.words.len()];
    let mut total_votes = vec![0usize; pool.words.len()];
    for c in 0..k {
        let members: Vec<&[f64]> = all_rows
            .iter()
            .zip(&clustering.assignments)
            .filter(|(_, &a)| a == c)
            .map(|(r, _)| *r)
            .collect();
        if members.is_empty() {
            continue;
        }
        let votes = pool.votes(&members);
        clusters_won[pool.winner(&members, &votes)] += 1;
        for (t, v) in total_votes.iter_mut().zip(&votes) {
            *t += v;
        }
    }

    let tied = argmax_ties(&clusters_won).expect("at least one target word");
    let tied = if tied.len() > 1 {
        let best = tied.iter().map(|&w| total_votes[w]).max().unwrap();
        tied.into_iter()
            .filter(|&w| total_votes[w] == best)
            .collect()
    } else {
        tied
    };
    let w = pool.closest(&all_rows, &tied);
    Ok(KnnPrediction {
        source: source.clone(),
        word: pool.words[w].clone(),
        votes: total_votes[w],
        clusters_won: clusters_won[w],
    })
}
