//! Synthetic bilingual corpora with controllable image dispersion.
//!
//! Each word gets a latent unit-norm concept vector. Source images are the
//! concept plus isotropic Gaussian noise of the word's POS-specific `sigma`;
//! target images do the same around a perturbed copy of the concept.

use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::corpus::{
    write_translation_pairs, ContentHash, CorpusError, Dataset, ImageManifest, Lexicon, Pos,
    TranslationPair, WordEntry, MAX_IMAGES_PER_WORD,
};
use crate::features::{FeatureError, FeatureKind, ImageSet, LanguageDir};
use crate::numerics::{l2_normalize, Matrix};
use crate::parallel::{map_indexed, Execution};

pub const GOLD_FILE: &str = "gold.tsv";

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid synthetic corpus configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

/// Word count and image noise for one part of speech.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosTier {
    pub words: usize,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    /// Nouns, verbs, adjectives.
    pub tiers: [PosTier; 3],
    pub images_per_word: usize,
    pub dim: usize,
    /// Expected norm of the offset between a word's source and target concepts.
    pub cross_lingual_shift: f64,
    pub seed: u64,
    pub source_language: String,
    pub target_language: String,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig::preset(Preset::Uniform, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Low-noise nouns, high-noise verbs and adjectives.
    PosGap,
    /// One noise level for every POS.
    Uniform,
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pos-gap" => Ok(Preset::PosGap),
            "uniform" => Ok(Preset::Uniform),
            _ => Err(format!("unknown preset {s:?}")),
        }
    }
}

pub const DEFAULT_SHIFT: f64 = 2.0;

impl SynthConfig {
    pub fn preset(preset: Preset, seed: u64) -> Self {
        let tiers = match preset {
            Preset::PosGap => [
                PosTier {
                    words: 40,
                    sigma: 0.1,
                },
                PosTier {
                    words: 20,
                    sigma: 0.8,
                },
                PosTier {
                    words: 20,
                    sigma: 0.8,
                },
            ],
            Preset::Uniform => {
                [PosTier {
                    words: 20,
                    sigma: 0.3,
                }; 3]
            }
        };
        SynthConfig {
            tiers,
            images_per_word: 20,
            dim: 64,
            cross_lingual_shift: DEFAULT_SHIFT,
            seed,
            source_language: "en".into(),
            target_language: "de".into(),
        }
    }

    /// A single-POS corpus (all nouns) at one noise level.
    pub fn single_tier(words: usize, sigma: f64, seed: u64) -> Self {
        let mut cfg = SynthConfig::preset(Preset::Uniform, seed);
        cfg.tiers = [
            PosTier { words, sigma },
            PosTier { words: 0, sigma },
            PosTier { words: 0, sigma },
        ];
        cfg
    }

    pub fn num_words(&self) -> usize {
        self.tiers.iter().map(|t| t.words).sum()
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::BadConfig(m));
        if self.num_words() == 0 {
            return bad("need at least one word".into());
        }
        if self.images_per_word == 0 || self.images_per_word > MAX_IMAGES_PER_WORD {
            return bad(format!(
                "images per word must be in 1..={MAX_IMAGES_PER_WORD}"
            ));
        }
        if self.dim == 0 {
            return bad("dimension must be at least 1".into());
        }
        if self
            .tiers
            .iter()
            .any(|t| !(t.sigma.is_finite() && t.sigma >= 0.0))
        {
            return bad("noise sigma must be finite and non-negative".into());
        }
        if !(self.cross_lingual_shift.is_finite() && self.cross_lingual_shift >= 0.0) {
            return bad("shift must be finite and non-negative".into());
        }
        if self.source_language == self.target_language {
            return bad("source and target language must differ".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub source: Dataset,
    pub target: Dataset,
    pub gold: Vec<TranslationPair>,
}

impl SynthCorpus {
    /// Writes `<dir>/<src>/`, `<dir>/<tgt>/` language directories and
    /// `<dir>/gold.tsv`.
    pub fn write(&self, dir: &Path) -> Result<(), SynthError> {
        LanguageDir::new(&dir.join(self.source.language())).write(&self.source)?;
        LanguageDir::new(&dir.join(self.target.language())).write(&self.target)?;
        write_translation_pairs(&dir.join(GOLD_FILE), &self.gold)?;
        Ok(())
    }
}

fn pos_tag(pos: Pos) -> &'static str {
    match pos {
        Pos::Noun => "noun",
        Pos::Verb => "verb",
        Pos::Adj => "adj",
    }
}

fn gaussian(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim)
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Values are rounded to `f32` so the in-memory corpus equals what LXFV
/// files store.
fn images(rng: &mut ChaCha8Rng, center: &[f64], n: usize, sigma: f64) -> Matrix {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let noise = gaussian(rng, center.len(), sigma);
            center
                .iter()
                .zip(noise)
                .map(|(c, e)| (c + e) as f32 as f64)
                .collect()
        })
        .collect();
    Matrix::from_rows_with_dim(center.len(), &rows).expect("rectangular")
}

fn manifest(word: &str, set: &Matrix) -> ImageManifest {
    let images = set
        .rows()
        .enumerate()
        .map(|(i, row)| {
            let bytes: Vec<u8> = row.iter().flat_map(|&x| (x as f32).to_le_bytes()).collect();
            (format!("{word}_{i:02}"), ContentHash::of_bytes(&bytes))
        })
        .collect();
    ImageManifest::new(word, images).expect("ids unique and within the limit")
}

/// Generates a corpus. Every word draws from its own random stream, so the
/// output does not depend on `exec`.
pub fn generate(cfg: &SynthConfig, exec: Execution) -> Result<SynthCorpus, SynthError> {
    cfg.validate()?;
    let mut words: Vec<(Pos, usize, f64)> = Vec::with_capacity(cfg.num_words());
    for (pos, tier) in Pos::ALL.into_iter().zip(&cfg.tiers) {
        words.extend((0..tier.words).map(|i| (pos, i, tier.sigma)));
    }

    let generated = map_indexed(words.len(), exec, |w| {
        let (_, _, sigma) = words[w];
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(w as u64);
        let mut concept = gaussian(&mut rng, cfg.dim, 1.0);
        l2_normalize(&mut concept);
        let shift = gaussian(
            &mut rng,
            cfg.dim,
            cfg.cross_lingual_shift / (cfg.dim as f64).sqrt(),
        );
        let shifted: Vec<f64> = concept.iter().zip(&shift).map(|(c, s)| c + s).collect();
        let src = images(&mut rng, &concept, cfg.images_per_word, sigma);
        let tgt = images(&mut rng, &shifted, cfg.images_per_word, sigma);
        (src, tgt)
    });

    let side = |lang: &str, prefix: &str| {
        let entries: Vec<WordEntry> = words
            .iter()
            .map(|&(pos, i, _)| {
                WordEntry::new(&format!("{prefix}_{}_{i:03}", pos_tag(pos)), pos, lang)
                    .expect("valid word")
            })
            .collect();
        (Lexicon::new(lang, entries.clone()), entries)
    };
    let (src_lex, src_words) = side(&cfg.source_language, "s");
    let (tgt_lex, tgt_words) = side(&cfg.target_language, "t");

    let mut src_sets = Vec::new();
    let mut tgt_sets = Vec::new();
    let mut src_manifests = Vec::new();
    let mut tgt_manifests = Vec::new();
    for ((s, t), (sw, tw)) in generated.into_iter().zip(src_words.iter().zip(&tgt_words)) {
        src_manifests.push(manifest(&sw.word, &s));
        tgt_manifests.push(manifest(&tw.word, &t));
        src_sets.push(ImageSet::new(&sw.word, FeatureKind::Cnn, s));
        tgt_sets.push(ImageSet::new(&tw.word, FeatureKind::Cnn, t));
    }
    let gold = src_words
        .iter()
        .zip(&tgt_words)
        .map(|(s, t)| {
            TranslationPair::new(s.clone(), t.clone()).expect("same POS, different languages")
        })
        .collect();
    Ok(SynthCorpus {
        source: Dataset::new(src_lex?, src_manifests, src_sets)?,
        target: Dataset::new(tgt_lex?, tgt_manifests, tgt_sets)?,
        gold,
    })
}
