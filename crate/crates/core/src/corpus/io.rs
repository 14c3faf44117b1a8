use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use super::{
    normalize_word, ContentHash, CorpusError, ImageManifest, Lexicon, Pos, TranslationPair,
    WordEntry,
};

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CorpusError> {
    fs::File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })
}

/// Non-blank lines with 1-based line numbers. A trailing CR is tolerated.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn fields<const N: usize>(line_no: usize, line: &str) -> Result<[&str; N], CorpusError> {
    let parts: Vec<&str> = line.split('\t').collect();
    parts
        .try_into()
        .map_err(|p: Vec<&str>| CorpusError::MalformedLine {
            line: line_no,
            reason: format!("expected {N} tab-separated fields, found {}", p.len()),
        })
}

pub fn parse_word_list(text: &str, language: &str) -> Result<Lexicon, CorpusError> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (line_no, line) in lines(text) {
        let [word, pos] = fields::<2>(line_no, line)?;
        let pos: Pos = pos
            .trim()
            .parse()
            .map_err(|pos| CorpusError::UnknownPos { line: line_no, pos })?;
        let entry =
            WordEntry::new(word, pos, language).ok_or_else(|| CorpusError::MalformedLine {
                line: line_no,
                reason: "empty word".into(),
            })?;
        if !seen.insert((entry.word.clone(), pos)) {
            return Err(CorpusError::DuplicateEntry {
                line: line_no,
                word: entry.word,
                pos,
            });
        }
        entries.push(entry);
    }
    Lexicon::new(language, entries)
}

/// Loads a `word<TAB>POS` list.
pub fn load_word_list(path: &Path, language: &str) -> Result<Lexicon, CorpusError> {
    parse_word_list(&read(path)?, language)
}

pub fn write_word_list(path: &Path, lexicon: &Lexicon) -> Result<(), CorpusError> {
    let text: String = lexicon
        .entries()
        .iter()
        .map(|e| format!("{}\t{}\n", e.word, e.pos))
        .collect();
    write(path, &text)
}

pub fn parse_translation_pairs(
    text: &str,
    source: &Lexicon,
    target: &Lexicon,
) -> Result<Vec<TranslationPair>, CorpusError> {
    let mut pairs = Vec::new();
    let mut seen = HashSet::new();
    for (line_no, line) in lines(text) {
        let [s, t] = fields::<2>(line_no, line)?;
        let (s, t) = (normalize_word(s), normalize_word(t));
        let unknown = |word: &str| CorpusError::UnknownWord {
            line: line_no,
            word: word.to_string(),
        };
        let src: Vec<&WordEntry> = source.by_word(&s).collect();
        let tgt: Vec<&WordEntry> = target.by_word(&t).collect();
        if src.is_empty() {
            return Err(unknown(&s));
        }
        if tgt.is_empty() {
            return Err(unknown(&t));
        }
        let matched = src
            .iter()
            .find_map(|a| tgt.iter().find(|b| b.pos == a.pos).map(|b| (*a, *b)));
        let Some((a, b)) = matched else {
            return Err(CorpusError::PosMismatch {
                line: line_no,
                source_word: s,
                target_word: t,
            });
        };
        if !seen.insert(s.clone()) {
            return Err(CorpusError::DuplicateSource {
                line: line_no,
                word: s,
            });
        }
        let pair = TranslationPair::new(a.clone(), b.clone()).ok_or_else(|| {
            CorpusError::MalformedLine {
                line: line_no,
                reason: "source and target lexicons share a language".into(),
            }
        })?;
        pairs.push(pair);
    }
    Ok(pairs)
}

/// Loads `source<TAB>target` gold pairs and resolves them against both
/// lexicons. When a word has several POS entries the first POS shared by
/// both sides is used.
pub fn load_translation_pairs(
    path: &Path,
    source: &Lexicon,
    target: &Lexicon,
) -> Result<Vec<TranslationPair>, CorpusError> {
    parse_translation_pairs(&read(path)?, source, target)
}

pub fn write_translation_pairs(path: &Path, pairs: &[TranslationPair]) -> Result<(), CorpusError> {
    let text: String = pairs
        .iter()
        .map(|p| format!("{}\t{}\n", p.source.word, p.target.word))
        .collect();
    write(path, &text)
}

pub fn parse_manifests(text: &str) -> Result<Vec<ImageManifest>, CorpusError> {
    let mut groups: Vec<(usize, String, Vec<(String, ContentHash)>)> = Vec::new();
    let mut closed = HashSet::new();
    for (line_no, line) in lines(text) {
        let [word, id, digest] = fields::<3>(line_no, line)?;
        let word = normalize_word(word);
        let hash =
            ContentHash::from_hex(digest.trim()).ok_or_else(|| CorpusError::MalformedLine {
                line: line_no,
                reason: format!("bad 256-bit hex digest {digest:?}"),
            })?;
        match groups.last_mut() {
            Some((_, w, images)) if *w == word => {
                if images.iter().any(|(i, _)| i == id) {
                    return Err(CorpusError::DuplicateImage {
                        line: line_no,
                        word,
                        image_id: id.to_string(),
                    });
                }
                images.push((id.to_string(), hash));
            }
            _ => {
                if !closed.insert(word.clone()) {
                    return Err(CorpusError::MalformedLine {
                        line: line_no,
                        reason: format!("images for {word:?} are not grouped together"),
                    });
                }
                groups.push((line_no, word, vec![(id.to_string(), hash)]));
            }
        }
    }
    groups
        .into_iter()
        .map(|(_, word, images)| ImageManifest::new(&word, images))
        .collect()
}

/// Loads a `word<TAB>image_id<TAB>hex_digest` manifest. Rows of one word
/// must be contiguous; their order is the image order.
pub fn load_manifests(path: &Path) -> Result<Vec<ImageManifest>, CorpusError> {
    parse_manifests(&read(path)?)
}

pub fn write_manifests<'a>(
    path: &Path,
    manifests: impl IntoIterator<Item = &'a ImageManifest>,
) -> Result<(), CorpusError> {
    let mut text = String::new();
    for m in manifests {
        for (id, h) in m.image_ids.iter().zip(&m.content_hashes) {
            text.push_str(&format!("{}\t{}\t{}\n", m.word, id, h.to_hex()));
        }
    }
    write(path, &text)
}
