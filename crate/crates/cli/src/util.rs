use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use lexiscope::corpus::{load_translation_pairs, Dataset, TranslationPair};
use lexiscope::features::{FeatureKind, LanguageDir};

/// An invocation problem (missing input, conflicting flags). Maps to exit 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(UsageError(msg.into()).into())
}

pub fn require(path: &Path, what: &str) -> anyhow::Result<()> {
    if !path.exists() {
        return usage(format!("{what} {} does not exist", path.display()));
    }
    Ok(())
}

/// Writes to `out`, or to standard output without it.
pub fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn load_language(
    dir: &Path,
    kind: FeatureKind,
    features: Option<&PathBuf>,
) -> anyhow::Result<Dataset> {
    let lang = LanguageDir::new(dir);
    require(&lang.words(), "word list")?;
    require(&lang.manifest(), "manifest")?;
    if let Some(f) = features {
        require(f, "feature directory")?;
    }
    lang.load(kind, features.map(PathBuf::as_path))
        .with_context(|| format!("loading {}", dir.display()))
}

pub fn load_gold(
    path: &Path,
    source: &Dataset,
    target: &Dataset,
) -> anyhow::Result<Vec<TranslationPair>> {
    require(path, "gold pairs file")?;
    load_translation_pairs(path, source.lexicon(), target.lexicon())
        .with_context(|| format!("loading {}", path.display()))
}
