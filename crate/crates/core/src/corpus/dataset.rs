use std::collections::BTreeMap;

use super::{CorpusError, ImageManifest, Lexicon, WordEntry};
use crate::features::{FeatureKind, ImageSet};

/// One language's lexicon together with its image manifests and the
/// featurized image sets, both keyed by word.
///
/// Image sets are keyed by the word string rather than `(word, pos)`: a
/// search engine is queried with the bare word, so homographs share images.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    lexicon: Lexicon,
    manifests: BTreeMap<String, ImageManifest>,
    sets: BTreeMap<String, ImageSet>,
}

impl Dataset {
    /// Assembles a dataset and checks its invariants: every manifest and set
    /// names a lexicon word, a word's set has as many rows as its manifest,
    /// and all sets share one feature kind and dimensionality.
    pub fn new(
        lexicon: Lexicon,
        manifests: Vec<ImageManifest>,
        sets: Vec<ImageSet>,
    ) -> Result<Self, CorpusError> {
        let invalid = |msg: String| Err(CorpusError::InvalidDataset(msg));
        let mut m = BTreeMap::new();
        for man in manifests {
            if lexicon.by_word(&man.word).next().is_none() {
                return invalid(format!(
                    "manifest for {:?} which is not in the word list",
                    man.word
                ));
            }
            let word = man.word.clone();
            if m.insert(word.clone(), man).is_some() {
                return invalid(format!("two manifests for {word:?}"));
            }
        }
        let mut s = BTreeMap::new();
        let mut shape: Option<(FeatureKind, usize)> = None;
        for set in sets {
            if lexicon.by_word(&set.word).next().is_none() {
                return invalid(format!(
                    "image set for {:?} which is not in the word list",
                    set.word
                ));
            }
            match shape {
                None => shape = Some((set.kind, set.dim())),
                Some((kind, dim)) => {
                    if kind != set.kind || dim != set.dim() {
                        return invalid(format!(
                            "image set for {:?} is {} with dim {}, expected {} with dim {}",
                            set.word,
                            set.kind,
                            set.dim(),
                            kind,
                            dim
                        ));
                    }
                }
            }
            if let Some(man) = m.get(&set.word) {
                if man.len() != set.len() {
                    return invalid(format!(
                        "image set for {:?} has {} rows but its manifest lists {} images",
                        set.word,
                        set.len(),
                        man.len()
                    ));
                }
            }
            let word = set.word.clone();
            if s.insert(word.clone(), set).is_some() {
                return invalid(format!("two image sets for {word:?}"));
            }
        }
        Ok(Dataset {
            lexicon,
            manifests: m,
            sets: s,
        })
    }

    pub fn lexicon(&self) -> &Lexicon {
        &self.lexicon
    }

    pub fn language(&self) -> &str {
        &self.lexicon.language
    }

    pub fn manifest(&self, word: &str) -> Option<&ImageManifest> {
        self.manifests.get(word)
    }

    /// Manifests in lexicon order (each word once).
    pub fn manifests(&self) -> Vec<&ImageManifest> {
        self.unique_words()
            .filter_map(|w| self.manifests.get(w))
            .collect()
    }

    pub fn set(&self, word: &str) -> Option<&ImageSet> {
        self.sets.get(word)
    }

    /// Image sets in lexicon order (each word once).
    pub fn sets(&self) -> Vec<&ImageSet> {
        self.unique_words()
            .filter_map(|w| self.sets.get(w))
            .collect()
    }

    pub fn kind(&self) -> Option<FeatureKind> {
        self.sets.values().next().map(|s| s.kind)
    }

    pub fn dim(&self) -> Option<usize> {
        self.sets.values().next().map(|s| s.dim())
    }

    /// Lexicon entries that have a non-empty image set, in lexicon order.
    /// These are the candidates a ranking must cover.
    pub fn eligible(&self) -> Vec<(&WordEntry, &ImageSet)> {
        self.lexicon
            .entries()
            .iter()
            .filter_map(|e| {
                self.sets
                    .get(&e.word)
                    .filter(|s| !s.is_empty())
                    .map(|s| (e, s))
            })
            .collect()
    }

    /// Same lexicon and manifests with a new family of image sets.
    pub fn with_sets(&self, sets: Vec<ImageSet>) -> Result<Self, CorpusError> {
        Dataset::new(
            self.lexicon.clone(),
            self.manifests.values().cloned().collect(),
            sets,
        )
    }

    /// Same lexicon with new manifests and sets.
    pub fn rebuild(
        &self,
        manifests: Vec<ImageManifest>,
        sets: Vec<ImageSet>,
    ) -> Result<Self, CorpusError> {
        Dataset::new(self.lexicon.clone(), manifests, sets)
    }

    fn unique_words(&self) -> impl Iterator<Item = &str> + '_ {
        let mut seen = std::collections::HashSet::new();
        self.lexicon
            .entries()
            .iter()
            .map(|e| e.word.as_str())
            .filter(move |w| seen.insert(*w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_word_list, ContentHash};
    use crate::numerics::Matrix;

    fn set(word: &str, kind: FeatureKind, rows: &[[f64; 2]]) -> ImageSet {
        ImageSet::new(word, kind, Matrix::from_rows(rows).unwrap())
    }

    #[test]
    fn rejects_mixed_kinds_and_counts() {
        let lex = parse_word_list("cow\tNOUN\nsad\tADJ\n", "en").unwrap();
        let a = set("cow", FeatureKind::Cnn, &[[1.0, 0.0]]);
        let b = set("sad", FeatureKind::Color, &[[1.0, 0.0]]);
        assert!(Dataset::new(lex.clone(), vec![], vec![a.clone(), b]).is_err());

        let man = ImageManifest::new(
            "cow",
            vec![
                ("x".into(), ContentHash([1; 32])),
                ("y".into(), ContentHash([2; 32])),
            ],
        )
        .unwrap();
        assert!(Dataset::new(lex.clone(), vec![man], vec![a.clone()]).is_err());

        let stray = set("horse", FeatureKind::Cnn, &[[1.0, 0.0]]);
        assert!(Dataset::new(lex, vec![], vec![a, stray]).is_err());
    }

    #[test]
    fn eligible_follows_lexicon_order_and_skips_empty() {
        let lex = parse_word_list("sad\tADJ\ncow\tNOUN\nrun\tVERB\n", "en").unwrap();
        let sets = vec![
            set("cow", FeatureKind::Cnn, &[[1.0, 0.0]]),
            set("sad", FeatureKind::Cnn, &[[0.0, 1.0]]),
            ImageSet::new("run", FeatureKind::Cnn, Matrix::empty(2)),
        ];
        let ds = Dataset::new(lex, vec![], sets).unwrap();
        let words: Vec<_> = ds.eligible().iter().map(|(e, _)| e.word.clone()).collect();
        assert_eq!(words, vec!["sad", "cow"]);
        assert_eq!(ds.dim(), Some(2));
    }
}
