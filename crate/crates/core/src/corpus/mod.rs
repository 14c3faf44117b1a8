//! Bilingual corpus handling: POS-tagged word lists, gold translation
//! pairs, image manifests, cross-lingual image deduplication and stratified
//! two-fold splitting.

mod dataset;
mod dedupe;
mod io;
mod split;

pub use dataset::Dataset;
pub use dedupe::{dedupe_cross_lingual, DedupeOutcome, MAX_SHARED_IMAGES};
pub use io::{
    load_manifests, load_translation_pairs, load_word_list, parse_manifests,
    parse_translation_pairs, parse_word_list, write_manifests, write_translation_pairs,
    write_word_list,
};
pub use split::{split_two_folds, split_two_folds_by};

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

/// Upper bound on images kept per word.
pub const MAX_IMAGES_PER_WORD: usize = 50;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: malformed line: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: duplicate entry {word:?} ({pos})")]
    DuplicateEntry { line: usize, word: String, pos: Pos },
    #[error("line {line}: unknown part of speech {pos:?}")]
    UnknownPos { line: usize, pos: String },
    #[error("line {line}: unknown word {word:?}")]
    UnknownWord { line: usize, word: String },
    #[error("line {line}: part-of-speech mismatch between {source_word:?} and {target_word:?}")]
    PosMismatch {
        line: usize,
        source_word: String,
        target_word: String,
    },
    #[error("line {line}: source word {word:?} already has a translation")]
    DuplicateSource { line: usize, word: String },
    #[error("line {line}: duplicate image id {image_id:?} for {word:?}")]
    DuplicateImage {
        line: usize,
        word: String,
        image_id: String,
    },
    #[error("word {word:?} has {count} images, more than the limit of {MAX_IMAGES_PER_WORD}")]
    TooManyImages { word: String, count: usize },
    #[error("need at least 2 translation pairs to split, got {0}")]
    TooFewPairs(usize),
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Closed set of parts of speech.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    Noun,
    Verb,
    Adj,
}

impl Pos {
    pub const ALL: [Pos; 3] = [Pos::Noun, Pos::Verb, Pos::Adj];

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "NOUN",
            Pos::Verb => "VERB",
            Pos::Adj => "ADJ",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "NOUN" => Ok(Pos::Noun),
            "VERB" => Ok(Pos::Verb),
            "ADJ" => Ok(Pos::Adj),
            other => Err(other.to_string()),
        }
    }
}

/// Lowercases, trims and NFC-normalizes a word.
pub fn normalize_word(raw: &str) -> String {
    raw.trim().to_lowercase().nfc().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordEntry {
    pub word: String,
    pub pos: Pos,
    pub language: String,
}

impl WordEntry {
    /// Builds an entry from a raw word, normalizing it. Returns `None` for
    /// words that are empty after trimming or contain tabs or newlines.
    pub fn new(raw: &str, pos: Pos, language: &str) -> Option<Self> {
        let word = normalize_word(raw);
        if word.is_empty() || word.contains(['\t', '\n', '\r']) {
            return None;
        }
        Some(WordEntry {
            word,
            pos,
            language: language.to_lowercase(),
        })
    }
}

/// A language's word list in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    pub language: String,
    entries: Vec<WordEntry>,
}

impl Lexicon {
    /// Builds a lexicon, rejecting duplicate `(word, pos)` pairs.
    pub fn new(language: &str, entries: Vec<WordEntry>) -> Result<Self, CorpusError> {
        let mut seen = std::collections::HashSet::new();
        for (i, e) in entries.iter().enumerate() {
            if !seen.insert((e.word.as_str(), e.pos)) {
                return Err(CorpusError::DuplicateEntry {
                    line: i + 1,
                    word: e.word.clone(),
                    pos: e.pos,
                });
            }
        }
        Ok(Lexicon {
            language: language.to_lowercase(),
            entries,
        })
    }

    pub fn entries(&self) -> &[WordEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, word: &str, pos: Pos) -> Option<&WordEntry> {
        self.entries.iter().find(|e| e.word == word && e.pos == pos)
    }

    /// All entries spelled `word`, in file order.
    pub fn by_word<'a>(&'a self, word: &'a str) -> impl Iterator<Item = &'a WordEntry> + 'a {
        self.entries.iter().filter(move |e| e.word == word)
    }

    /// File-order position of an entry.
    pub fn position(&self, entry: &WordEntry) -> Option<usize> {
        self.entries.iter().position(|e| e == entry)
    }
}

/// A gold translation link between two entries of equal POS.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TranslationPair {
    pub source: WordEntry,
    pub target: WordEntry,
}

impl TranslationPair {
    pub fn new(source: WordEntry, target: WordEntry) -> Option<Self> {
        (source.pos == target.pos && source.language != target.language)
            .then_some(TranslationPair { source, target })
    }

    pub fn pos(&self) -> Pos {
        self.source.pos
    }
}

/// 256-bit content digest of an image file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContentHash(pub [u8; 32]);

impl ContentHash {
    pub fn of_bytes(bytes: &[u8]) -> Self {
        use sha2::{Digest, Sha256};
        ContentHash(Sha256::digest(bytes).into())
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        let mut out = [0u8; 32];
        hex::decode_to_slice(s, &mut out).ok()?;
        Some(ContentHash(out))
    }
}

/// The ordered images retrieved for one word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageManifest {
    pub word: String,
    pub image_ids: Vec<String>,
    pub content_hashes: Vec<ContentHash>,
}

impl ImageManifest {
    pub fn new(word: &str, images: Vec<(String, ContentHash)>) -> Result<Self, CorpusError> {
        let word = normalize_word(word);
        if images.len() > MAX_IMAGES_PER_WORD {
            return Err(CorpusError::TooManyImages {
                word,
                count: images.len(),
            });
        }
        let mut seen = std::collections::HashSet::new();
        for (i, (id, _)) in images.iter().enumerate() {
            if !seen.insert(id.as_str()) {
                return Err(CorpusError::DuplicateImage {
                    line: i + 1,
                    word,
                    image_id: id.clone(),
                });
            }
        }
        let (image_ids, content_hashes) = images.into_iter().unzip();
        Ok(ImageManifest {
            word,
            image_ids,
            content_hashes,
        })
    }

    pub fn len(&self) -> usize {
        self.image_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image_ids.is_empty()
    }
}
