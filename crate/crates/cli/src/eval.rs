use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use lexiscope::corpus::{
    load_manifests, load_translation_pairs, load_word_list, Dataset, ImageManifest, Lexicon,
};
use lexiscope::eval::{
    dispersion_summary, image_dispersion, per_setting_report, render_dispersion_tsv, render_report,
    EvalReport, ReportFormat,
};
use lexiscope::features::{load_feature_dir, FeatureKind, LanguageDir};
use lexiscope::parallel::{try_map_indexed, Execution};
use lexiscope::similarity::{parse_rankings, RankedList, RankingMethod, SimilarityMethod};

use crate::util::{emit, require, usage};

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Source language directory (only words.tsv is read).
    #[arg(long)]
    source: PathBuf,
    /// Target language directory (only words.tsv is read).
    #[arg(long)]
    target: PathBuf,
    #[arg(long)]
    gold: PathBuf,
    /// A rankings TSV, or a directory of them (one report row per file).
    #[arg(long)]
    rankings: PathBuf,
    /// Treat the files as single predictions (KNN-style); detected when omitted.
    #[arg(long)]
    predictions: bool,
    #[arg(long, default_value = "text")]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn lexicon(dir: &Path) -> anyhow::Result<Lexicon> {
    let lang = LanguageDir::new(dir);
    require(&lang.words(), "word list")?;
    load_word_list(&lang.words(), &lang.language)
        .with_context(|| format!("loading {}", lang.words().display()))
}

fn ranking_files(path: &Path) -> anyhow::Result<Vec<PathBuf>> {
    require(path, "rankings")?;
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "tsv"))
        .collect();
    files.sort();
    if files.is_empty() {
        return usage(format!("no .tsv files in {}", path.display()));
    }
    Ok(files)
}

fn looks_like_predictions(lists: &[RankedList], target: &Lexicon) -> bool {
    target.len() > 1 && !lists.is_empty() && lists.iter().all(|l| l.candidates.len() == 1)
}

pub fn eval(a: EvalArgs) -> anyhow::Result<()> {
    let src = lexicon(&a.source)?;
    let tgt = lexicon(&a.target)?;
    require(&a.gold, "gold pairs file")?;
    let gold = load_translation_pairs(&a.gold, &src, &tgt)?;
    let mut reports: Vec<EvalReport> = Vec::new();
    for file in ranking_files(&a.rankings)? {
        let text =
            fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
        let full = RankingMethod::Set(SimilarityMethod::AvgMax);
        let mut lists = parse_rankings(&text, &src, &tgt, full)
            .with_context(|| format!("parsing {}", file.display()))?;
        if a.predictions || looks_like_predictions(&lists, &tgt) {
            for l in &mut lists {
                l.method = RankingMethod::Knn;
            }
        }
        let label = file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        reports.push(
            per_setting_report(&label, &lists, &gold)
                .with_context(|| format!("scoring {}", file.display()))?,
        );
    }
    emit(a.out.as_deref(), &render_report(&reports, a.format))
}

#[derive(Debug, Args)]
pub struct DispersionArgs {
    /// Language directory; supplies defaults for the three paths below.
    #[arg(long)]
    dir: Option<PathBuf>,
    /// Word list; without one the POS column prints as "-".
    #[arg(long)]
    words: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    features: Option<PathBuf>,
    #[arg(long, default_value = "cnn")]
    kind: FeatureKind,
    /// Append per-POS means as `#mean<TAB>pos<TAB>d` lines.
    #[arg(long)]
    summary: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn dispersion(a: DispersionArgs) -> anyhow::Result<()> {
    let lang = a.dir.as_deref().map(LanguageDir::new);
    let pick = |explicit: &Option<PathBuf>, default: fn(&LanguageDir) -> PathBuf| {
        explicit.clone().or_else(|| lang.as_ref().map(default))
    };
    let (Some(manifest), Some(features)) = (
        pick(&a.manifest, LanguageDir::manifest),
        pick(&a.features, LanguageDir::features),
    ) else {
        return usage("give --dir, or --manifest and --features");
    };
    require(&manifest, "manifest")?;
    require(&features, "feature directory")?;
    let words = pick(&a.words, LanguageDir::words).filter(|w| a.words.is_some() || w.exists());

    let text = match words {
        Some(words) => {
            require(&words, "word list")?;
            let language = lang
                .as_ref()
                .map_or_else(String::new, |l| l.language.clone());
            let lexicon = load_word_list(&words, &language)?;
            let manifests = load_manifests(&manifest)?;
            let sets = load_feature_dir(&features, &manifests.iter().collect::<Vec<_>>(), a.kind)?;
            let ds = Dataset::new(lexicon, manifests, sets)?;
            let report = dispersion_summary(&ds, Execution::Parallel);
            let mut text = render_dispersion_tsv(&report);
            if a.summary {
                for (pos, m) in report.pos_means {
                    match m {
                        Some(m) => writeln!(text, "#mean\t{pos}\t{m:.9}")?,
                        None => writeln!(text, "#mean\t{pos}\t--")?,
                    }
                }
            }
            text
        }
        None => untagged(&manifest, &features, a.kind)?,
    };
    emit(a.out.as_deref(), &text)
}

fn untagged(manifest: &Path, features: &Path, kind: FeatureKind) -> anyhow::Result<String> {
    let manifests = load_manifests(manifest)?;
    let refs: Vec<&ImageManifest> = manifests.iter().collect();
    let sets: Vec<_> = load_feature_dir(features, &refs, kind)?
        .into_iter()
        .filter(|s| s.len() >= 2)
        .collect();
    let ds = try_map_indexed(sets.len(), Execution::Parallel, |i| {
        image_dispersion(&sets[i])
    })?;
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by(|&x, &y| ds[y].total_cmp(&ds[x]));
    let mut text = String::new();
    for i in order {
        writeln!(text, "{}\t-\t{:.9}", sets[i].word, ds[i])?;
    }
    Ok(text)
}
