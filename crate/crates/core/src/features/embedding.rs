use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{io_err, FeatureError, FeatureKind, ImageSet};
use crate::corpus::{normalize_word, ImageManifest};
use crate::numerics::Matrix;

/// Pretrained word vectors for one language, all of one dimensionality.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    pub language: String,
    dim: usize,
    words: Vec<String>,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new(language: &str, dim: usize) -> Self {
        EmbeddingTable {
            language: language.to_lowercase(),
            dim,
            words: Vec::new(),
            vectors: HashMap::new(),
        }
    }

    pub fn insert(&mut self, word: &str, v: Vec<f64>) -> Result<(), FeatureError> {
        if v.len() != self.dim {
            return Err(FeatureError::DimensionMismatch {
                expected: self.dim,
                actual: v.len(),
            });
        }
        let word = normalize_word(word);
        if !self.vectors.contains_key(&word) {
            self.words.push(word.clone());
        }
        self.vectors.insert(word, v);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).map(Vec::as_slice)
    }

    /// Words in insertion (file) order.
    pub fn words(&self) -> &[String] {
        &self.words
    }
}

/// Parses `word v1 … vd` lines separated by single spaces.
pub fn parse_embedding_table(text: &str, language: &str) -> Result<EmbeddingTable, FeatureError> {
    let mut table: Option<EmbeddingTable> = None;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |reason: String| FeatureError::Malformed {
            line: line_no,
            reason,
        };
        let mut parts = line.split(' ');
        let word = parts
            .next()
            .filter(|w| !w.is_empty())
            .ok_or_else(|| malformed("missing word".into()))?;
        let mut v = Vec::new();
        for tok in parts {
            let x: f64 = tok
                .parse()
                .map_err(|_| malformed(format!("bad number {tok:?}")))?;
            if !x.is_finite() {
                return Err(FeatureError::NonFiniteValue {
                    row: line_no,
                    col: v.len(),
                });
            }
            v.push(x);
        }
        if v.is_empty() {
            return Err(malformed("no vector components".into()));
        }
        let t = table.get_or_insert_with(|| EmbeddingTable::new(language, v.len()));
        if t.get(&normalize_word(word)).is_some() {
            return Err(malformed(format!("duplicate word {word:?}")));
        }
        t.insert(word, v).map_err(|e| match e {
            FeatureError::DimensionMismatch { expected, actual } => {
                malformed(format!("expected {expected} components, found {actual}"))
            }
            other => other,
        })?;
    }
    Ok(table.unwrap_or_else(|| EmbeddingTable::new(language, 0)))
}

pub fn load_embedding_table(path: &Path, language: &str) -> Result<EmbeddingTable, FeatureError> {
    parse_embedding_table(&fs::read_to_string(path).map_err(io_err(path))?, language)
}

pub fn write_embedding_table(path: &Path, table: &EmbeddingTable) -> Result<(), FeatureError> {
    let mut out = String::new();
    for w in table.words() {
        out.push_str(w);
        for x in table.get(w).unwrap() {
            write!(out, " {x}").unwrap();
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(io_err(path))
}

/// A TEX image set: every image of the word carries the word's embedding.
pub fn attach_text_embedding(
    manifest: &ImageManifest,
    table: &EmbeddingTable,
) -> Result<ImageSet, FeatureError> {
    let e = table
        .get(&manifest.word)
        .ok_or_else(|| FeatureError::OovWord(manifest.word.clone()))?;
    let rows = vec![e; manifest.len()];
    Ok(ImageSet::new(
        &manifest.word,
        FeatureKind::Tex,
        Matrix::from_rows_with_dim(table.dim(), &rows)?,
    ))
}
