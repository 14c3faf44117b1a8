//! Supervised translation ranking with logistic regression over pair
//! features built from the mean vectors of two image sets.
//!
//! Training pairs are every (source, target) combination of the training
//! words: gold translations are positives, all others negatives. Candidates
//! are ranked by their signed distance to the learned hyperplane.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::corpus::{split_two_folds, CorpusError, Dataset, TranslationPair, WordEntry};
use crate::eval::{per_setting_report, EvalError, EvalReport};
use crate::features::{encode_lxfv, parse_lxfv, FeatureError, ImageSet};
use crate::numerics::{dot, Matrix};
use crate::similarity::{RankedList, RankingMethod};

#[derive(Debug, Error)]
pub enum RankerError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("image set for {0:?} is empty")]
    EmptySet(String),
    #[error("gold pair ({source_word:?}, {target_word:?}) has no image set on one side")]
    UnresolvablePair {
        source_word: String,
        target_word: String,
    },
    #[error("training data needs both positive and negative pairs")]
    SingleClassData,
    #[error("invalid training configuration: {0}")]
    BadConfig(String),
    #[error("model file: {0}")]
    ModelFile(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

/// How a (source, target) pair of mean vectors becomes a feature vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairEncoding {
    /// `source - target`.
    #[default]
    Difference,
    /// `|source - target|`, component-wise.
    AbsDifference,
}

impl PairEncoding {
    pub fn as_str(self) -> &'static str {
        match self {
            PairEncoding::Difference => "diff",
            PairEncoding::AbsDifference => "absdiff",
        }
    }

    pub fn encode(self, source: &[f64], target: &[f64]) -> Vec<f64> {
        let diff = source.iter().zip(target).map(|(a, b)| a - b);
        match self {
            PairEncoding::Difference => diff.collect(),
            PairEncoding::AbsDifference => diff.map(f64::abs).collect(),
        }
    }
}

impl fmt::Display for PairEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PairEncoding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "diff" | "difference" => Ok(PairEncoding::Difference),
            "absdiff" => Ok(PairEncoding::AbsDifference),
            _ => Err(format!("unknown pair encoding {s:?}")),
        }
    }
}

/// Negatives kept per positive, or all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NegativeSampling {
    Ratio(usize),
    All,
}

impl FromStr for NegativeSampling {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(NegativeSampling::All);
        }
        match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(NegativeSampling::Ratio(n)),
            _ => Err(format!(
                "negative ratio must be a positive integer or \"all\", got {s:?}"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    pub negatives: NegativeSampling,
    pub encoding: PairEncoding,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.1,
            epochs: 500,
            l2: 1e-4,
            negatives: NegativeSampling::Ratio(10),
            encoding: PairEncoding::Difference,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), RankerError> {
        let bad = |m: &str| Err(RankerError::BadConfig(m.to_string()));
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return bad("learning rate must be positive");
        }
        if self.epochs == 0 {
            return bad("epochs must be at least 1");
        }
        if !(self.l2.is_finite() && self.l2 >= 0.0) {
            return bad("l2 must be non-negative");
        }
        if self.negatives == NegativeSampling::Ratio(0) {
            return bad("negative ratio must be at least 1");
        }
        Ok(())
    }
}

/// A labelled training pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFeature {
    pub source: WordEntry,
    pub target: WordEntry,
    pub x: Vec<f64>,
    /// +1 for a gold translation, -1 otherwise.
    pub label: i8,
}

/// Linear scorer `w·x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingModel {
    pub w: Vec<f64>,
    pub b: f64,
    pub encoding: PairEncoding,
}

impl RankingModel {
    pub fn zeros(dim: usize, encoding: PairEncoding) -> Self {
        RankingModel {
            w: vec![0.0; dim],
            b: 0.0,
            encoding,
        }
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        dot(&self.w, x) + self.b
    }

    /// LXFV payload: one row holding `w` followed by `b`.
    pub fn to_lxfv(&self) -> Result<Vec<u8>, RankerError> {
        let mut row = self.w.clone();
        row.push(self.b);
        Ok(encode_lxfv(
            &Matrix::from_rows(&[row]).map_err(FeatureError::from)?,
        )?)
    }

    pub fn from_lxfv(bytes: &[u8], encoding: PairEncoding) -> Result<Self, RankerError> {
        let m = parse_lxfv(bytes)?;
        if m.nrows() != 1 || m.ncols() < 2 {
            return Err(RankerError::ModelFile(format!(
                "expected a single row of at least 2 values, found {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let (w, b) = m.row(0).split_at(m.ncols() - 1);
        Ok(RankingModel {
            w: w.to_vec(),
            b: b[0],
            encoding,
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), RankerError> {
        std::fs::write(path, self.to_lxfv()?)
            .map_err(|e| RankerError::ModelFile(format!("{}: {e}", path.display())))
    }

    pub fn read(path: &Path, encoding: PairEncoding) -> Result<Self, RankerError> {
        let bytes = std::fs::read(path)
            .map_err(|e| RankerError::ModelFile(format!("{}: {e}", path.display())))?;
        Self::from_lxfv(&bytes, encoding)
    }
}

fn set_mean(set: &ImageSet) -> Result<Vec<f64>, RankerError> {
    set.vectors
        .mean_row()
        .ok_or_else(|| RankerError::EmptySet(set.word.clone()))
}

/// Difference of the two sets' mean vectors, source minus target.
pub fn make_pair_feature(a: &ImageSet, b: &ImageSet) -> Result<Vec<f64>, RankerError> {
    make_pair_feature_with(a, b, PairEncoding::Difference)
}

pub fn make_pair_feature_with(
    a: &ImageSet,
    b: &ImageSet,
    encoding: PairEncoding,
) -> Result<Vec<f64>, RankerError> {
    if a.dim() != b.dim() {
        return Err(RankerError::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    Ok(encoding.encode(&set_mean(a)?, &set_mean(b)?))
}

fn unique<'a>(words: impl IntoIterator<Item = &'a WordEntry>) -> Vec<&'a WordEntry> {
    let mut seen = HashSet::new();
    words.into_iter().filter(|w| seen.insert(*w)).collect()
}

/// Training pairs over `sources × targets` given a feature function.
/// Positives are the gold links; negatives every other combination,
/// subsampled in grid order according to `cfg.negatives`.
pub fn build_pairs_with<F>(
    sources: &[&WordEntry],
    targets: &[&WordEntry],
    gold: &[TranslationPair],
    cfg: &TrainConfig,
    stream: u64,
    mut feature: F,
) -> Result<Vec<PairFeature>, RankerError>
where
    F: FnMut(&WordEntry, &WordEntry) -> Result<Vec<f64>, RankerError>,
{
    let gold: HashSet<(&WordEntry, &WordEntry)> =
        gold.iter().map(|p| (&p.source, &p.target)).collect();
    let mut positives = Vec::new();
    let mut negatives = Vec::new();
    for &s in sources {
        for &t in targets {
            if gold.contains(&(s, t)) {
                positives.push((s, t));
            } else {
                negatives.push((s, t));
            }
        }
    }
    if let NegativeSampling::Ratio(r) = cfg.negatives {
        let keep = (r * positives.len()).min(negatives.len());
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream);
        let mut idx = rand::seq::index::sample(&mut rng, negatives.len(), keep).into_vec();
        idx.sort_unstable();
        negatives = idx.into_iter().map(|i| negatives[i]).collect();
    }
    let mut out = Vec::with_capacity(positives.len() + negatives.len());
    for (pairs, label) in [(positives, 1), (negatives, -1)] {
        for (s, t) in pairs {
            out.push(PairFeature {
                source: s.clone(),
                target: t.clone(),
                x: feature(s, t)?,
                label,
            });
        }
    }
    Ok(out)
}

/// Mean vectors of every gold word, keyed by word string.
struct MeanCache {
    source: HashMap<String, Vec<f64>>,
    target: HashMap<String, Vec<f64>>,
    encoding: PairEncoding,
}

impl MeanCache {
    fn new(
        sources: &Dataset,
        targets: &Dataset,
        gold: &[TranslationPair],
        encoding: PairEncoding,
    ) -> Result<Self, RankerError> {
        if let (Some(a), Some(b)) = (sources.dim(), targets.dim()) {
            if a != b {
                return Err(RankerError::DimensionMismatch {
                    expected: a,
                    actual: b,
                });
            }
        }
        let mut source = HashMap::new();
        let mut target = HashMap::new();
        for p in gold {
            let (Some(s), Some(t)) = (sources.set(&p.source.word), targets.set(&p.target.word))
            else {
                return Err(RankerError::UnresolvablePair {
                    source_word: p.source.word.clone(),
                    target_word: p.target.word.clone(),
                });
            };
            if !source.contains_key(&p.source.word) {
                source.insert(p.source.word.clone(), set_mean(s)?);
            }
            if !target.contains_key(&p.target.word) {
                target.insert(p.target.word.clone(), set_mean(t)?);
            }
        }
        Ok(MeanCache {
            source,
            target,
            encoding,
        })
    }

    fn feature(&self, s: &WordEntry, t: &WordEntry) -> Result<Vec<f64>, RankerError> {
        Ok(self
            .encoding
            .encode(&self.source[&s.word], &self.target[&t.word]))
    }
}

/// Training set over the gold source words × gold target words.
pub fn build_training_set(
    sources: &Dataset,
    targets: &Dataset,
    gold: &[TranslationPair],
    cfg: &TrainConfig,
) -> Result<Vec<PairFeature>, RankerError> {
    let cache = MeanCache::new(sources, targets, gold, cfg.encoding)?;
    let src = unique(gold.iter().map(|p| &p.source));
    let tgt = unique(gold.iter().map(|p| &p.target));
    build_pairs_with(&src, &tgt, gold, cfg, 0, |s, t| cache.feature(s, t))
}

fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Mean logistic loss plus `l2 / 2 * |w|²`.
pub fn logistic_loss(model: &RankingModel, data: &[PairFeature], l2: f64) -> f64 {
    let data_loss: f64 = data
        .iter()
        .map(|p| softplus(-f64::from(p.label) * model.score(&p.x)))
        .sum::<f64>()
        / data.len() as f64;
    data_loss + 0.5 * l2 * dot(&model.w, &model.w)
}

fn check_data(data: &[PairFeature]) -> Result<usize, RankerError> {
    let has = |l: i8| data.iter().any(|p| p.label == l);
    if !has(1) || !has(-1) {
        return Err(RankerError::SingleClassData);
    }
    let dim = data[0].x.len();
    if let Some(p) = data.iter().find(|p| p.x.len() != dim) {
        return Err(RankerError::DimensionMismatch {
            expected: dim,
            actual: p.x.len(),
        });
    }
    Ok(dim)
}

/// Full-batch gradient descent from `w = 0, b = 0`. The history holds the
/// loss at initialization and after every epoch.
pub fn train_with_history(
    data: &[PairFeature],
    cfg: &TrainConfig,
) -> Result<(RankingModel, Vec<f64>), RankerError> {
    cfg.validate()?;
    let dim = check_data(data)?;
    let n = data.len() as f64;
    let mut model = RankingModel::zeros(dim, cfg.encoding);
    let mut history = Vec::with_capacity(cfg.epochs + 1);
    history.push(logistic_loss(&model, data, cfg.l2));
    let mut gw = vec![0.0; dim];
    for _ in 0..cfg.epochs {
        gw.iter_mut().for_each(|g| *g = 0.0);
        let mut gb = 0.0;
        for p in data {
            let y = if p.label > 0 { 1.0 } else { 0.0 };
            let r = sigmoid(model.score(&p.x)) - y;
            for (g, x) in gw.iter_mut().zip(&p.x) {
                *g += r * x;
            }
            gb += r;
        }
        for (w, g) in model.w.iter_mut().zip(&gw) {
            *w -= cfg.learning_rate * (g / n + cfg.l2 * *w);
        }
        model.b -= cfg.learning_rate * gb / n;
        history.push(logistic_loss(&model, data, cfg.l2));
    }
    Ok((model, history))
}

pub fn train(data: &[PairFeature], cfg: &TrainConfig) -> Result<RankingModel, RankerError> {
    Ok(train_with_history(data, cfg)?.0)
}

/// Scores every eligible target word of `targets` with the model.
pub fn rank_with_model(
    model: &RankingModel,
    source: &WordEntry,
    source_set: &ImageSet,
    targets: &Dataset,
) -> Result<RankedList, RankerError> {
    let mean = set_mean(source_set)?;
    let scored = targets
        .eligible()
        .into_iter()
        .map(|(t, set)| {
            let x = model.encoding.encode(&mean, &set_mean(set)?);
            if x.len() != model.dim() {
                return Err(RankerError::DimensionMismatch {
                    expected: model.dim(),
                    actual: x.len(),
                });
            }
            Ok((t.clone(), model.score(&x)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RankedList::from_scores(
        source.clone(),
        RankingMethod::LogRegr,
        scored,
    ))
}

/// One train/test round of the two-fold protocol.
#[derive(Debug, Clone)]
pub struct FoldOutcome {
    pub model: RankingModel,
    pub loss_history: Vec<f64>,
    pub rankings: Vec<RankedList>,
    pub report: EvalReport,
}

#[derive(Debug, Clone)]
pub struct TwoFoldOutcome {
    pub folds: Vec<FoldOutcome>,
    /// Metrics averaged over the two test folds.
    pub report: EvalReport,
}

/// Two-fold protocol over an arbitrary pair feature.
///
/// Gold pairs are split into POS-stratified folds. Each fold in turn trains
/// a model on the other fold's words and ranks, for each of its own source
/// words, only its own gold target words. `target_order` fixes the order of
/// candidates (and so tie-breaking); it must contain every gold target.
pub fn two_fold_evaluate_with<F>(
    label: &str,
    gold: &[TranslationPair],
    target_order: &[WordEntry],
    cfg: &TrainConfig,
    feature: F,
) -> Result<TwoFoldOutcome, RankerError>
where
    F: Fn(&WordEntry, &WordEntry) -> Result<Vec<f64>, RankerError>,
{
    cfg.validate()?;
    let (a, b) = split_two_folds(gold, cfg.seed)?;
    let targets_of = |fold: &[TranslationPair]| -> Vec<&WordEntry> {
        let set: HashSet<&WordEntry> = fold.iter().map(|p| &p.target).collect();
        target_order.iter().filter(|t| set.contains(t)).collect()
    };

    let mut folds = Vec::with_capacity(2);
    for (i, (train_fold, test_fold)) in [(&a, &b), (&b, &a)].into_iter().enumerate() {
        let sources = unique(train_fold.iter().map(|p| &p.source));
        let data = build_pairs_with(
            &sources,
            &targets_of(train_fold),
            train_fold,
            cfg,
            i as u64 + 1,
            &feature,
        )?;
        let (model, loss_history) = train_with_history(&data, cfg)?;

        let candidates = targets_of(test_fold);
        let rankings = unique(test_fold.iter().map(|p| &p.source))
            .into_iter()
            .map(|s| {
                let scored = candidates
                    .iter()
                    .map(|&t| Ok(((*t).clone(), model.score(&feature(s, t)?))))
                    .collect::<Result<Vec<_>, RankerError>>()?;
                Ok(RankedList::from_scores(
                    s.clone(),
                    RankingMethod::LogRegr,
                    scored,
                ))
            })
            .collect::<Result<Vec<_>, RankerError>>()?;
        let report = per_setting_report(label, &rankings, test_fold)?;
        folds.push(FoldOutcome {
            model,
            loss_history,
            rankings,
            report,
        });
    }
    let report = EvalReport::average(label, &[folds[0].report.clone(), folds[1].report.clone()]);
    Ok(TwoFoldOutcome { folds, report })
}

/// Two-fold evaluation on image-set datasets, features from set means.
pub fn two_fold_evaluate(
    sources: &Dataset,
    targets: &Dataset,
    gold: &[TranslationPair],
    cfg: &TrainConfig,
) -> Result<TwoFoldOutcome, RankerError> {
    let cache = MeanCache::new(sources, targets, gold, cfg.encoding)?;
    let order = targets.lexicon().entries();
    two_fold_evaluate_with("logregr", gold, order, cfg, |s, t| cache.feature(s, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_translation_pairs, parse_word_list, Pos};
    use crate::features::FeatureKind;

    fn set(word: &str, rows: &[&[f64]]) -> ImageSet {
        ImageSet::new(word, FeatureKind::Cnn, Matrix::from_rows(rows).unwrap())
    }

    fn entry(w: &str, lang: &str) -> WordEntry {
        WordEntry::new(w, Pos::Noun, lang).unwrap()
    }

    fn feature(x: &[f64], label: i8) -> PairFeature {
        PairFeature {
            source: entry("s", "en"),
            target: entry("t", "de"),
            x: x.to_vec(),
            label,
        }
    }

    fn three_by_three() -> (Dataset, Dataset, Vec<TranslationPair>) {
        let sl = parse_word_list("a\tNOUN\nb\tNOUN\nc\tNOUN\n", "en").unwrap();
        let tl = parse_word_list("x\tNOUN\ny\tNOUN\nz\tNOUN\n", "de").unwrap();
        let gold = parse_translation_pairs("a\tx\nb\ty\nc\tz\n", &sl, &tl).unwrap();
        let mk = |words: [&str; 3], off: f64| {
            words
                .iter()
                .enumerate()
                .map(|(i, w)| set(w, &[&[i as f64 + off, 1.0], &[i as f64, -1.0]]))
                .collect::<Vec<_>>()
        };
        (
            Dataset::new(sl, vec![], mk(["a", "b", "c"], 0.5)).unwrap(),
            Dataset::new(tl, vec![], mk(["x", "y", "z"], 0.0)).unwrap(),
            gold,
        )
    }

    #[test]
    fn pair_feature_examples() {
        assert_eq!(
            make_pair_feature(&set("a", &[&[2.0, 0.0]]), &set("b", &[&[0.0, 2.0]])).unwrap(),
            vec![2.0, -2.0]
        );
        let a = set("a", &[&[1.0, 0.5], &[3.0, -2.0]]);
        assert_eq!(make_pair_feature(&a, &a).unwrap(), vec![0.0, 0.0]);
        assert_eq!(
            make_pair_feature(
                &set("a", &[&[1.0, 0.0], &[3.0, 0.0]]),
                &set("b", &[&[0.0, 0.0]])
            )
            .unwrap(),
            vec![2.0, 0.0]
        );
        assert_eq!(
            make_pair_feature_with(
                &set("a", &[&[2.0, 0.0]]),
                &set("b", &[&[0.0, 2.0]]),
                PairEncoding::AbsDifference
            )
            .unwrap(),
            vec![2.0, 2.0]
        );
        assert!(matches!(
            make_pair_feature(&set("a", &[&[1.0]]), &set("b", &[&[1.0, 2.0]])),
            Err(RankerError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            make_pair_feature(
                &ImageSet::new("e", FeatureKind::Cnn, Matrix::empty(2)),
                &set("b", &[&[1.0, 2.0]])
            ),
            Err(RankerError::EmptySet(_))
        ));
    }

    #[test]
    fn training_set_counts() {
        let (s, t, gold) = three_by_three();
        let all = TrainConfig {
            negatives: NegativeSampling::All,
            ..Default::default()
        };
        let data = build_training_set(&s, &t, &gold, &all).unwrap();
        assert_eq!(data.iter().filter(|p| p.label == 1).count(), 3);
        assert_eq!(data.iter().filter(|p| p.label == -1).count(), 6);
        let cow = data
            .iter()
            .filter(|p| p.source.word == "a" && p.target.word == "x")
            .collect::<Vec<_>>();
        assert_eq!(cow.len(), 1);
        assert_eq!(cow[0].label, 1);

        let one = TrainConfig {
            negatives: NegativeSampling::Ratio(1),
            seed: 9,
            ..Default::default()
        };
        let d1 = build_training_set(&s, &t, &gold, &one).unwrap();
        assert_eq!(d1.len(), 6);
        assert_eq!(d1, build_training_set(&s, &t, &gold, &one).unwrap());
    }

    #[test]
    fn unresolvable_gold() {
        let (s, _, gold) = three_by_three();
        let tl = parse_word_list("x\tNOUN\ny\tNOUN\nz\tNOUN\n", "de").unwrap();
        let t = Dataset::new(tl, vec![], vec![set("x", &[&[1.0, 0.0]])]).unwrap();
        assert!(matches!(
            build_training_set(&s, &t, &gold, &TrainConfig::default()),
            Err(RankerError::UnresolvablePair { .. })
        ));
    }

    #[test]
    fn initial_loss_is_ln2() {
        let data = [
            feature(&[3.0, -1.0], 1),
            feature(&[0.2, 7.0], -1),
            feature(&[1.0, 1.0], -1),
        ];
        let m = RankingModel::zeros(2, PairEncoding::Difference);
        assert!((logistic_loss(&m, &data, 0.5) - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn separable_1d() {
        let data = [feature(&[1.0], 1), feature(&[-1.0], -1)];
        let cfg = TrainConfig {
            epochs: 1,
            l2: 0.0,
            ..Default::default()
        };
        assert!(train(&data, &cfg).unwrap().w[0] > 0.0);
        let (_, hist) = train_with_history(&data, &TrainConfig { epochs: 10, ..cfg }).unwrap();
        assert_eq!(hist.len(), 11);
        assert!(hist.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn heavy_ridge_shrinks_weights() {
        let data = [feature(&[1.0, 2.0], 1), feature(&[-1.0, 0.5], -1)];
        let cfg = TrainConfig {
            l2: 1e6,
            learning_rate: 1e-6,
            epochs: 50,
            ..Default::default()
        };
        let m = train(&data, &cfg).unwrap();
        assert!(dot(&m.w, &m.w).sqrt() < 1e-2);
    }

    #[test]
    fn single_class_and_bad_config() {
        let data = [feature(&[1.0], 1)];
        assert!(matches!(
            train(&data, &TrainConfig::default()),
            Err(RankerError::SingleClassData)
        ));
        let cfg = TrainConfig {
            learning_rate: 0.0,
            ..Default::default()
        };
        assert!(matches!(train(&data, &cfg), Err(RankerError::BadConfig(_))));
    }

    #[test]
    fn rank_with_model_examples() {
        let tl = parse_word_list("p\tNOUN\nq\tNOUN\n", "de").unwrap();
        let t = Dataset::new(
            tl,
            vec![],
            vec![set("p", &[&[0.0, 0.0]]), set("q", &[&[1.0, 0.0]])],
        )
        .unwrap();
        let src = set("s", &[&[2.0, 0.0]]);
        let model = RankingModel {
            w: vec![1.0, 0.0],
            b: 0.0,
            encoding: PairEncoding::Difference,
        };
        let r = rank_with_model(&model, &entry("s", "en"), &src, &t).unwrap();
        assert_eq!(r.top().unwrap().target.word, "p");
        assert_eq!(r.candidates[0].score, 2.0);

        let flat = RankingModel::zeros(2, PairEncoding::Difference);
        let r = rank_with_model(&flat, &entry("s", "en"), &src, &t).unwrap();
        assert_eq!(
            r.candidates
                .iter()
                .map(|c| c.target.word.as_str())
                .collect::<Vec<_>>(),
            ["p", "q"]
        );
    }

    #[test]
    fn model_file_round_trip() {
        let m = RankingModel {
            w: vec![0.5, -1.25, 3.0],
            b: -0.75,
            encoding: PairEncoding::AbsDifference,
        };
        let back =
            RankingModel::from_lxfv(&m.to_lxfv().unwrap(), PairEncoding::AbsDifference).unwrap();
        assert_eq!(back, m);
        let not_model =
            encode_lxfv(&Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap()).unwrap();
        assert!(matches!(
            RankingModel::from_lxfv(&not_model, PairEncoding::Difference),
            Err(RankerError::ModelFile(_))
        ));
    }

    #[test]
    fn parse_options() {
        assert_eq!(
            "ALL".parse::<NegativeSampling>().unwrap(),
            NegativeSampling::All
        );
        assert_eq!(
            "3".parse::<NegativeSampling>().unwrap(),
            NegativeSampling::Ratio(3)
        );
        assert!("0".parse::<NegativeSampling>().is_err());
        assert_eq!(
            "absdiff".parse::<PairEncoding>().unwrap(),
            PairEncoding::AbsDifference
        );
    }
}
