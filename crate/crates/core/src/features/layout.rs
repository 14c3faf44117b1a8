use std::path::{Path, PathBuf};

use super::{load_feature_dir, write_feature_dir, FeatureError, FeatureKind};
use crate::corpus::{load_manifests, load_word_list, write_manifests, write_word_list, Dataset};

pub const WORDS_FILE: &str = "words.tsv";
pub const MANIFEST_FILE: &str = "manifest.tsv";
pub const FEATURES_DIR: &str = "features";

/// A language directory: `words.tsv`, `manifest.tsv` and a `features/`
/// directory of per-word LXFV files. The language code defaults to the
/// directory name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageDir {
    pub root: PathBuf,
    pub language: String,
}

impl LanguageDir {
    pub fn new(root: &Path) -> Self {
        let language = root
            .file_name()
            .map(|n| n.to_string_lossy().to_lowercase())
            .unwrap_or_default();
        LanguageDir {
            root: root.to_path_buf(),
            language,
        }
    }

    pub fn with_language(root: &Path, language: &str) -> Self {
        LanguageDir {
            root: root.to_path_buf(),
            language: language.to_lowercase(),
        }
    }

    pub fn words(&self) -> PathBuf {
        self.root.join(WORDS_FILE)
    }

    pub fn manifest(&self) -> PathBuf {
        self.root.join(MANIFEST_FILE)
    }

    pub fn features(&self) -> PathBuf {
        self.root.join(FEATURES_DIR)
    }

    /// Loads the dataset with image sets from `features` (default: the
    /// directory's own `features/`). Words without a feature file get no set.
    pub fn load(
        &self,
        kind: FeatureKind,
        features: Option<&Path>,
    ) -> Result<Dataset, FeatureError> {
        let lexicon = load_word_list(&self.words(), &self.language)?;
        let manifests = load_manifests(&self.manifest())?;
        let dir = features.map_or_else(|| self.features(), Path::to_path_buf);
        let sets = load_feature_dir(&dir, &manifests.iter().collect::<Vec<_>>(), kind)?;
        Ok(Dataset::new(lexicon, manifests, sets)?)
    }

    /// Writes word list, manifests and features.
    pub fn write(&self, dataset: &Dataset) -> Result<(), FeatureError> {
        std::fs::create_dir_all(&self.root).map_err(super::io_err(&self.root))?;
        write_word_list(&self.words(), dataset.lexicon())?;
        write_manifests(&self.manifest(), dataset.manifests())?;
        write_feature_dir(&self.features(), dataset.sets())?;
        Ok(())
    }
}
