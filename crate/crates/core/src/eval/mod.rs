//! Ranking metrics (MRR, P@k) per part-of-speech setting, image dispersion
//! and report tables.

mod dispersion;
mod report;

pub use dispersion::{
    dispersion_rank_correlation, dispersion_summary, image_dispersion, render_dispersion_tsv,
    spearman, Correlation, DispersionReport, WordDispersion,
};
pub use report::{parse_report_csv, render_report, ReportFormat, ReportRow};

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::{Pos, TranslationPair, WordEntry};
use crate::similarity::RankedList;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no gold translation for {0:?}")]
    MissingGold(String),
    #[error("gold translation {target_word:?} of {source_word:?} is not among the candidates")]
    GoldNotInCandidates {
        source_word: String,
        target_word: String,
    },
    #[error("more than one ranking for {0:?}")]
    DuplicateRanking(String),
    #[error("no rankings to score")]
    NoRankings,
    #[error("{0} produces single predictions; only precision can be computed")]
    PredictionsOnly(String),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("{word:?} has {got} images; dispersion needs at least 2")]
    TooFewImages { word: String, got: usize },
    #[error("only {got} words have both a dispersion and a ranking; need at least {needed}")]
    InsufficientOverlap { needed: usize, got: usize },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Evaluation subsets by source part of speech.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Setting {
    All,
    Nn,
    Vb,
    Adj,
}

impl Setting {
    pub const ALL: [Setting; 4] = [Setting::All, Setting::Nn, Setting::Vb, Setting::Adj];

    pub fn as_str(self) -> &'static str {
        match self {
            Setting::All => "ALL",
            Setting::Nn => "NN",
            Setting::Vb => "VB",
            Setting::Adj => "ADJ",
        }
    }

    pub fn includes(self, pos: Pos) -> bool {
        match self {
            Setting::All => true,
            Setting::Nn => pos == Pos::Noun,
            Setting::Vb => pos == Pos::Verb,
            Setting::Adj => pos == Pos::Adj,
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Setting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Setting::ALL
            .into_iter()
            .find(|x| x.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown setting {s:?}"))
    }
}

/// Where the gold translation of one source word landed.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldRank {
    pub source: WordEntry,
    /// 1-based rank; `None` when a single-prediction method missed.
    pub rank: Option<usize>,
}

impl GoldRank {
    pub fn reciprocal(&self) -> f64 {
        self.rank.map_or(0.0, |r| 1.0 / r as f64)
    }

    pub fn within(&self, k: usize) -> bool {
        self.rank.is_some_and(|r| r <= k)
    }
}

fn gold_map(gold: &[TranslationPair]) -> HashMap<&WordEntry, &WordEntry> {
    gold.iter().map(|p| (&p.source, &p.target)).collect()
}

/// Locates each ranking's gold target. Full rankings must contain it;
/// single predictions that miss get `rank: None`.
pub fn gold_ranks(
    rankings: &[RankedList],
    gold: &[TranslationPair],
) -> Result<Vec<GoldRank>, EvalError> {
    let gold = gold_map(gold);
    let mut seen = std::collections::HashSet::new();
    rankings
        .iter()
        .map(|list| {
            if !seen.insert(&list.source) {
                return Err(EvalError::DuplicateRanking(list.source.word.clone()));
            }
            let target = gold
                .get(&list.source)
                .ok_or_else(|| EvalError::MissingGold(list.source.word.clone()))?;
            let rank = list.rank_of(&target.word);
            if rank.is_none() && list.method.is_full_ranking() {
                return Err(EvalError::GoldNotInCandidates {
                    source_word: list.source.word.clone(),
                    target_word: target.word.clone(),
                });
            }
            Ok(GoldRank {
                source: list.source.clone(),
                rank,
            })
        })
        .collect()
}

fn require_full(rankings: &[RankedList]) -> Result<(), EvalError> {
    match rankings.iter().find(|l| !l.method.is_full_ranking()) {
        Some(l) => Err(EvalError::PredictionsOnly(l.method.to_string())),
        None => Ok(()),
    }
}

fn mean(values: impl ExactSizeIterator<Item = f64>) -> Option<f64> {
    let n = values.len();
    (n > 0).then(|| values.sum::<f64>() / n as f64)
}

fn mrr_of(ranks: &[GoldRank]) -> Option<f64> {
    mean(ranks.iter().map(GoldRank::reciprocal))
}

fn precision_of(ranks: &[GoldRank], k: usize) -> Option<f64> {
    mean(ranks.iter().map(|r| if r.within(k) { 1.0 } else { 0.0 }))
}

/// Mean reciprocal rank of the gold translations.
pub fn mrr(rankings: &[RankedList], gold: &[TranslationPair]) -> Result<f64, EvalError> {
    require_full(rankings)?;
    mrr_of(&gold_ranks(rankings, gold)?).ok_or(EvalError::NoRankings)
}

/// Fraction of source words whose gold translation is among the top `k`.
/// For single-prediction methods this is the exact-match rate.
pub fn precision_at_k(
    rankings: &[RankedList],
    gold: &[TranslationPair],
    k: usize,
) -> Result<f64, EvalError> {
    if k == 0 {
        return Err(EvalError::ZeroK);
    }
    precision_of(&gold_ranks(rankings, gold)?, k).ok_or(EvalError::NoRankings)
}

/// Metrics for one setting. Metrics are `None` when the setting has no
/// words, and MRR and P@10 are `None` for single-prediction methods.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SettingReport {
    pub num_words: usize,
    /// Gold source words of this setting that had no ranking.
    pub oov_excluded: usize,
    pub mrr: Option<f64>,
    pub p_at_1: Option<f64>,
    pub p_at_10: Option<f64>,
}

impl SettingReport {
    pub fn metrics(&self) -> [Option<f64>; 3] {
        [self.mrr, self.p_at_1, self.p_at_10]
    }
}

/// One method's results across the four settings.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub label: String,
    pub settings: [SettingReport; 4],
}

impl EvalReport {
    pub fn setting(&self, s: Setting) -> &SettingReport {
        &self.settings[s as usize]
    }

    /// The 12 metric cells in table order (settings × MRR, P@1, P@10).
    pub fn metric_row(&self) -> [Option<f64>; 12] {
        let mut row = [None; 12];
        for (i, s) in self.settings.iter().enumerate() {
            row[3 * i..3 * i + 3].copy_from_slice(&s.metrics());
        }
        row
    }

    /// Averages metrics over reports (e.g. test folds), skipping reports in
    /// which a cell is absent. Counts are summed.
    pub fn average(label: &str, reports: &[EvalReport]) -> EvalReport {
        let mut settings = [SettingReport::default(); 4];
        for (i, out) in settings.iter_mut().enumerate() {
            let cells: Vec<&SettingReport> = reports.iter().map(|r| &r.settings[i]).collect();
            out.num_words = cells.iter().map(|c| c.num_words).sum();
            out.oov_excluded = cells.iter().map(|c| c.oov_excluded).sum();
            let avg = |f: fn(&SettingReport) -> Option<f64>| {
                let vals: Vec<f64> = cells.iter().filter_map(|c| f(c)).collect();
                mean(vals.into_iter())
            };
            out.mrr = avg(|c| c.mrr);
            out.p_at_1 = avg(|c| c.p_at_1);
            out.p_at_10 = avg(|c| c.p_at_10);
        }
        EvalReport {
            label: label.to_string(),
            settings,
        }
    }
}

/// Scores rankings against gold pairs for ALL, NN, VB and ADJ, using each
/// source word's part of speech. Gold source words without a ranking are
/// counted as excluded instead of scored.
pub fn per_setting_report(
    label: &str,
    rankings: &[RankedList],
    gold: &[TranslationPair],
) -> Result<EvalReport, EvalError> {
    let ranks = gold_ranks(rankings, gold)?;
    let full = rankings.iter().all(|l| l.method.is_full_ranking());
    let ranked: std::collections::HashSet<&WordEntry> =
        rankings.iter().map(|l| &l.source).collect();

    let mut settings = [SettingReport::default(); 4];
    for (setting, out) in Setting::ALL.into_iter().zip(settings.iter_mut()) {
        let subset: Vec<GoldRank> = ranks
            .iter()
            .filter(|r| setting.includes(r.source.pos))
            .cloned()
            .collect();
        out.num_words = subset.len();
        out.oov_excluded = gold
            .iter()
            .filter(|p| setting.includes(p.pos()) && !ranked.contains(&p.source))
            .count();
        out.p_at_1 = precision_of(&subset, 1);
        if full {
            out.mrr = mrr_of(&subset);
            out.p_at_10 = precision_of(&subset, 10);
        }
    }
    Ok(EvalReport {
        label: label.to_string(),
        settings,
    })
}
