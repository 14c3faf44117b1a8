//! Per-image feature vectors and their assembly into image sets.
//!
//! Native features (colour histograms, bag-of-visual-words over a dense
//! gradient descriptor) are computed from PPM images. CNN activations and
//! word embeddings are produced elsewhere and imported through the LXFV
//! and embedding-table formats, then optionally combined or PCA-reduced.

mod bovw;
mod color;
mod combine;
mod descriptor;
mod embedding;
mod image;
mod layout;
mod lxfv;
mod native;

pub use self::image::Image;
pub use bovw::{bovw_encode, build_codebook, sample_descriptors, Codebook, DEFAULT_CODEBOOK_ITERS};
pub use color::color_histogram;
pub use combine::{combine, combine_pca, reduce_sets};
pub use descriptor::{
    extract_descriptors, DenseGradientDescriptor, DescriptorExtractor, DESCRIPTOR_DIM,
};
pub use embedding::{
    attach_text_embedding, load_embedding_table, parse_embedding_table, write_embedding_table,
    EmbeddingTable,
};
pub use layout::{LanguageDir, FEATURES_DIR, MANIFEST_FILE, WORDS_FILE};
pub use lxfv::{
    encode_lxfv, feature_file_name, import_feature_file, load_feature_dir, parse_lxfv, read_lxfv,
    write_feature_dir, write_lxfv, LXFV_MAGIC, LXFV_VERSION,
};
pub use native::{featurize_manifest, NativeFeaturizer};

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::numerics::{Matrix, NumericsError};

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("bins per channel must be at least 2 and divide 256, got {0}")]
    BadBinCount(usize),
    #[error("image is {width}x{height}, smaller than the {patch}-pixel patch")]
    ImageTooSmall {
        width: usize,
        height: usize,
        patch: usize,
    },
    #[error("invalid descriptor geometry: {0}")]
    InvalidGeometry(String),
    #[error("need at least {needed} descriptors, got {got}")]
    TooFewDescriptors { needed: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("{0:?} has no embedding")]
    OovWord(String),
    #[error("image sets do not line up: {0}")]
    SetMismatch(String),
    #[error("expected a {expected} image set, got {actual}")]
    WrongKind {
        expected: String,
        actual: FeatureKind,
    },
    #[error("not an LXFV file")]
    BadMagic,
    #[error("unsupported LXFV version {0}")]
    UnsupportedVersion(u16),
    #[error("{what}: expected {expected}, found {actual}")]
    CountMismatch {
        what: String,
        expected: usize,
        actual: usize,
    },
    #[error("non-finite value at row {row}, column {col}")]
    NonFiniteValue { row: usize, col: usize },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("cannot decode image: {0}")]
    Decode(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Corpus(#[from] crate::corpus::CorpusError),
}

pub(crate) fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> FeatureError + '_ {
    move |source| FeatureError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureKind {
    Color,
    Bovw,
    Cnn,
    Tex,
    Combi,
    VisPca,
    CombiPca,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 7] = [
        FeatureKind::Color,
        FeatureKind::Bovw,
        FeatureKind::Cnn,
        FeatureKind::Tex,
        FeatureKind::Combi,
        FeatureKind::VisPca,
        FeatureKind::CombiPca,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureKind::Color => "color",
            FeatureKind::Bovw => "bovw",
            FeatureKind::Cnn => "cnn",
            FeatureKind::Tex => "tex",
            FeatureKind::Combi => "combi",
            FeatureKind::VisPca => "vispca",
            FeatureKind::CombiPca => "combipca",
        }
    }

    /// Kinds computed from images alone.
    pub fn is_visual(self) -> bool {
        matches!(
            self,
            FeatureKind::Color | FeatureKind::Bovw | FeatureKind::Cnn | FeatureKind::VisPca
        )
    }
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FeatureKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown feature kind {s:?}"))
    }
}

/// A word's images as feature vectors, one row per image in manifest order.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageSet {
    pub word: String,
    pub kind: FeatureKind,
    pub vectors: Matrix,
}

impl ImageSet {
    pub fn new(word: &str, kind: FeatureKind, vectors: Matrix) -> Self {
        ImageSet {
            word: word.to_string(),
            kind,
            vectors,
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in FeatureKind::ALL {
            assert_eq!(k.as_str().parse::<FeatureKind>().unwrap(), k);
        }
        assert_eq!(
            "VisPca".parse::<FeatureKind>().unwrap(),
            FeatureKind::VisPca
        );
        assert!("sift".parse::<FeatureKind>().is_err());
    }
}
