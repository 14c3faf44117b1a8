use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use lexiscope::corpus::{dedupe_cross_lingual, write_translation_pairs, Pos};
use lexiscope::features::{FeatureKind, LanguageDir};
use lexiscope::parallel::Execution;
use lexiscope::synth::{generate, Preset, SynthConfig, GOLD_FILE};

use crate::util::{emit, load_gold, load_language, usage};

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// pos-gap (quiet nouns, noisy verbs and adjectives) or uniform.
    #[arg(long, default_value = "pos-gap")]
    preset: Preset,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory; receives one language directory per side and gold.tsv.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    images: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    /// Expected distance between a word's source and target concepts.
    #[arg(long)]
    shift: Option<f64>,
    /// Noise of every tier, overriding the preset.
    #[arg(long)]
    sigma: Option<f64>,
    /// Words per tier, overriding the preset.
    #[arg(long)]
    words: Option<usize>,
    #[arg(long, default_value = "en")]
    source_language: String,
    #[arg(long, default_value = "de")]
    target_language: String,
}

pub fn synth(a: SynthArgs) -> anyhow::Result<()> {
    let mut cfg = SynthConfig::preset(a.preset, a.seed);
    if let Some(n) = a.images {
        cfg.images_per_word = n;
    }
    if let Some(d) = a.dim {
        cfg.dim = d;
    }
    if let Some(s) = a.shift {
        cfg.cross_lingual_shift = s;
    }
    for t in &mut cfg.tiers {
        if let Some(s) = a.sigma {
            t.sigma = s;
        }
        if let Some(w) = a.words {
            t.words = w;
        }
    }
    cfg.source_language = a.source_language.to_lowercase();
    cfg.target_language = a.target_language.to_lowercase();
    if let Err(e) = cfg.validate() {
        return usage(e.to_string());
    }
    let corpus = generate(&cfg, Execution::Parallel)?;
    corpus.write(&a.out)?;

    let mut text = String::new();
    for (pos, t) in Pos::ALL.into_iter().zip(&cfg.tiers) {
        writeln!(text, "{pos}\t{}\t{}", t.words, t.sigma)?;
    }
    emit(None, &text)
}

#[derive(Debug, Args)]
pub struct DedupeArgs {
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    target: PathBuf,
    #[arg(long)]
    gold: PathBuf,
    /// Kind of the features carried along (if any).
    #[arg(long, default_value = "cnn")]
    kind: FeatureKind,
    /// Receives both pruned language directories, gold.tsv and removed.tsv.
    #[arg(long)]
    out: PathBuf,
}

pub fn dedupe(a: DedupeArgs) -> anyhow::Result<()> {
    let src = load_language(&a.source, a.kind, None)?;
    let tgt = load_language(&a.target, a.kind, None)?;
    let gold = load_gold(&a.gold, &src, &tgt)?;
    let outcome = dedupe_cross_lingual(&src, &tgt, &gold)?;
    for ds in [&outcome.source, &outcome.target] {
        LanguageDir::with_language(&a.out.join(ds.language()), ds.language()).write(ds)?;
    }
    write_translation_pairs(&a.out.join(GOLD_FILE), &outcome.kept)?;
    let mut removed = String::new();
    for (p, n) in &outcome.removed {
        writeln!(removed, "{}\t{}\t{n}", p.source.word, p.target.word)?;
    }
    emit(Some(&a.out.join("removed.tsv")), &removed)
}
