use std::collections::HashSet;
use std::path::PathBuf;

use clap::Args;
use lexiscope::corpus::WordEntry;
use lexiscope::eval::{render_report, ReportFormat};
use lexiscope::features::FeatureKind;
use lexiscope::parallel::{try_map_indexed, Execution};
use lexiscope::ranker::{two_fold_evaluate, NegativeSampling, PairEncoding, TrainConfig};
use lexiscope::similarity::{
    knn_cluster_translate, knn_translate, render_rankings, similarity_matrix, Candidate, KnnConfig,
    RankedList, RankingMethod, SimilarityMethod,
};

use crate::util::{emit, load_gold, load_language, usage};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodArg {
    Set(SimilarityMethod),
    Knn,
    KnnCluster,
}

fn parse_method(s: &str) -> Result<MethodArg, String> {
    match s.to_ascii_lowercase().as_str() {
        "knn" => Ok(MethodArg::Knn),
        "knnc" | "knn-c" => Ok(MethodArg::KnnCluster),
        other => other
            .parse::<SimilarityMethod>()
            .map(MethodArg::Set)
            .map_err(|_| {
                format!(
                    "unknown method {s:?} (expected avgmax, maxmax, setmean, setmax, knn or knnc)"
                )
            }),
    }
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Source language directory (words.tsv, manifest.tsv, features/).
    #[arg(long)]
    source: PathBuf,
    /// Target language directory.
    #[arg(long)]
    target: PathBuf,
    /// Feature kind stored in the feature directories.
    #[arg(long, default_value = "cnn")]
    kind: FeatureKind,
    #[arg(long)]
    source_features: Option<PathBuf>,
    #[arg(long)]
    target_features: Option<PathBuf>,
    /// avgmax, maxmax, setmean, setmax, knn or knnc.
    #[arg(long, value_parser = parse_method)]
    method: MethodArg,
    /// Clusters for knnc.
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Only rank source words that occur in these gold pairs.
    #[arg(long)]
    gold: Option<PathBuf>,
    /// Rankings TSV (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn rank(a: RankArgs) -> anyhow::Result<()> {
    if a.method == MethodArg::KnnCluster && a.k == 0 {
        return usage("--k must be at least 1");
    }
    let src = load_language(&a.source, a.kind, a.source_features.as_ref())?;
    let tgt = load_language(&a.target, a.kind, a.target_features.as_ref())?;
    let keep: Option<HashSet<WordEntry>> = match &a.gold {
        Some(g) => Some(
            load_gold(g, &src, &tgt)?
                .into_iter()
                .map(|p| p.source)
                .collect(),
        ),
        None => None,
    };
    let wanted = |e: &WordEntry| keep.as_ref().is_none_or(|k| k.contains(e));

    let lists: Vec<RankedList> = match a.method {
        MethodArg::Set(m) => similarity_matrix(&src, &tgt, m, Execution::Parallel)?
            .ranked_lists()
            .into_iter()
            .filter(|l| wanted(&l.source))
            .collect(),
        MethodArg::Knn | MethodArg::KnnCluster => {
            let sources: Vec<_> = src
                .eligible()
                .into_iter()
                .filter(|(e, _)| wanted(e))
                .collect();
            let method = if a.method == MethodArg::Knn {
                RankingMethod::Knn
            } else {
                RankingMethod::KnnCluster { k: a.k }
            };
            try_map_indexed(sources.len(), Execution::Parallel, |i| {
                let (entry, set) = sources[i];
                let p = match method {
                    RankingMethod::Knn => knn_translate(entry, set, &tgt)?,
                    _ => knn_cluster_translate(
                        entry,
                        set,
                        &tgt,
                        KnnConfig { clusters: a.k },
                        a.seed,
                    )?,
                };
                Ok::<_, anyhow::Error>(RankedList {
                    source: p.source,
                    method,
                    candidates: vec![Candidate {
                        target: p.word,
                        score: p.votes as f64,
                    }],
                })
            })?
        }
    };
    emit(a.out.as_deref(), &render_rankings(&lists))
}

#[derive(Debug, Args)]
pub struct TrainEvalArgs {
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    target: PathBuf,
    /// Gold translation pairs.
    #[arg(long)]
    gold: PathBuf,
    #[arg(long, default_value = "cnn")]
    kind: FeatureKind,
    #[arg(long)]
    source_features: Option<PathBuf>,
    #[arg(long)]
    target_features: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    lr: f64,
    #[arg(long, default_value_t = 500)]
    epochs: usize,
    #[arg(long, default_value_t = 1e-4)]
    l2: f64,
    /// Negatives per positive, or "all".
    #[arg(long, default_value = "10")]
    negatives: NegativeSampling,
    /// Pair encoding: diff or absdiff.
    #[arg(long, default_value = "diff")]
    encoding: PairEncoding,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "text")]
    format: ReportFormat,
    /// Report file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the held-out rankings of both folds.
    #[arg(long)]
    rankings_out: Option<PathBuf>,
}

pub fn train_eval(a: TrainEvalArgs) -> anyhow::Result<()> {
    let cfg = TrainConfig {
        learning_rate: a.lr,
        epochs: a.epochs,
        l2: a.l2,
        negatives: a.negatives,
        encoding: a.encoding,
        seed: a.seed,
    };
    if let Err(e) = cfg.validate() {
        return usage(e.to_string());
    }
    let src = load_language(&a.source, a.kind, a.source_features.as_ref())?;
    let tgt = load_language(&a.target, a.kind, a.target_features.as_ref())?;
    let gold = load_gold(&a.gold, &src, &tgt)?;
    let outcome = two_fold_evaluate(&src, &tgt, &gold, &cfg)?;
    if let Some(p) = &a.rankings_out {
        let lists: Vec<RankedList> = outcome
            .folds
            .iter()
            .flat_map(|f| f.rankings.iter().cloned())
            .collect();
        emit(Some(p), &render_rankings(&lists))?;
    }
    emit(
        a.out.as_deref(),
        &render_report(&[outcome.report], a.format),
    )
}
