use std::collections::HashMap;
use std::fmt::Write as _;

use super::{gold_ranks, EvalError};
use crate::corpus::{Dataset, Pos, TranslationPair, WordEntry};
use crate::features::ImageSet;
use crate::numerics::{cosine_with_norms, l2_norm};
use crate::parallel::{map_indexed, Execution};
use crate::similarity::RankedList;

/// Mean pairwise cosine distance within an image set:
/// `2 / (n (n - 1)) * Σ_{k<j} (1 - cos(i_j, i_k))`.
pub fn image_dispersion(set: &ImageSet) -> Result<f64, EvalError> {
    let n = set.len();
    if n < 2 {
        return Err(EvalError::TooFewImages {
            word: set.word.clone(),
            got: n,
        });
    }
    let rows: Vec<&[f64]> = set.vectors.rows().collect();
    let norms: Vec<f64> = rows.iter().map(|r| l2_norm(r)).collect();
    let mut total = 0.0;
    for j in 0..n {
        for k in 0..j {
            if norms[j] > 0.0 && rows[j] == rows[k] {
                continue;
            }
            total += 1.0 - cosine_with_norms(rows[j], rows[k], norms[j], norms[k]);
        }
    }
    Ok(2.0 * total / (n * (n - 1)) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordDispersion {
    pub word: WordEntry,
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispersionReport {
    /// Words with at least 2 images, in lexicon order.
    pub words: Vec<WordDispersion>,
    /// Unweighted mean per POS; `None` when a class has no words.
    pub pos_means: [(Pos, Option<f64>); 3],
}

impl DispersionReport {
    /// Words by decreasing dispersion; ties keep lexicon order.
    pub fn sorted(&self) -> Vec<&WordDispersion> {
        let mut out: Vec<&WordDispersion> = self.words.iter().collect();
        out.sort_by(|a, b| b.d.total_cmp(&a.d));
        out
    }

    pub fn mean_for(&self, pos: Pos) -> Option<f64> {
        self.pos_means
            .iter()
            .find(|(p, _)| *p == pos)
            .and_then(|(_, m)| *m)
    }
}

/// Dispersion of every word with at least two images, plus per-POS means.
pub fn dispersion_summary(dataset: &Dataset, exec: Execution) -> DispersionReport {
    let eligible: Vec<(&WordEntry, &ImageSet)> = dataset
        .eligible()
        .into_iter()
        .filter(|(_, s)| s.len() >= 2)
        .collect();
    let ds = map_indexed(eligible.len(), exec, |i| {
        image_dispersion(eligible[i].1).expect("at least 2 images")
    });
    let words: Vec<WordDispersion> = eligible
        .iter()
        .zip(ds)
        .map(|((w, _), d)| WordDispersion {
            word: (*w).clone(),
            d,
        })
        .collect();
    let pos_means = Pos::ALL.map(|pos| {
        let vals: Vec<f64> = words
            .iter()
            .filter(|w| w.word.pos == pos)
            .map(|w| w.d)
            .collect();
        (
            pos,
            (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64),
        )
    });
    DispersionReport { words, pos_means }
}

/// `word<TAB>pos<TAB>d`, most dispersed first.
pub fn render_dispersion_tsv(report: &DispersionReport) -> String {
    let mut out = String::new();
    for w in report.sorted() {
        writeln!(out, "{}\t{}\t{:.9}", w.word.word, w.word.pos, w.d).unwrap();
    }
    out
}

/// Spearman rank correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub rho: f64,
    pub n: usize,
    /// One of the variables was constant; `rho` is reported as 0.
    pub degenerate: bool,
}

/// 1-based ranks with ties sharing their average rank.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Pearson correlation of the average ranks of `x` and `y`.
pub fn spearman(x: &[f64], y: &[f64]) -> Correlation {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let mean = (n as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mean) * (b - mean);
        sxx += (a - mean) * (a - mean);
        syy += (b - mean) * (b - mean);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Correlation {
            rho: 0.0,
            n,
            degenerate: true,
        };
    }
    Correlation {
        rho: (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0),
        n,
        degenerate: false,
    }
}

/// Spearman correlation between each word's dispersion and the reciprocal
/// rank of its gold translation, over words that have both.
pub fn dispersion_rank_correlation(
    dispersions: &[WordDispersion],
    rankings: &[RankedList],
    gold: &[TranslationPair],
) -> Result<Correlation, EvalError> {
    let rr: HashMap<WordEntry, f64> = gold_ranks(rankings, gold)?
        .into_iter()
        .map(|g| {
            let r = g.reciprocal();
            (g.source, r)
        })
        .collect();
    let (mut d, mut r) = (Vec::new(), Vec::new());
    for w in dispersions {
        if let Some(&x) = rr.get(&w.word) {
            d.push(w.d);
            r.push(x);
        }
    }
    if d.len() < 3 {
        return Err(EvalError::InsufficientOverlap {
            needed: 3,
            got: d.len(),
        });
    }
    Ok(spearman(&d, &r))
}
