use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Candidate, RankedList, RankingMethod, SimilarityError};
use crate::corpus::{Lexicon, WordEntry};

/// `source<TAB>rank<TAB>target<TAB>score`, one line per candidate, scores
/// with 9 decimals.
pub fn render_rankings(lists: &[RankedList]) -> String {
    let mut out = String::new();
    for list in lists {
        for (i, c) in list.candidates.iter().enumerate() {
            writeln!(
                out,
                "{}\t{}\t{}\t{:.9}",
                list.source.word,
                i + 1,
                c.target.word,
                c.score
            )
            .unwrap();
        }
    }
    out
}

pub fn write_rankings(path: &Path, lists: &[RankedList]) -> Result<(), SimilarityError> {
    fs::write(path, render_rankings(lists)).map_err(|source| SimilarityError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Picks the n-th lexicon entry spelled `word`, so homographs written in
/// lexicon order resolve back to the entries they came from.
fn resolve(
    lex: &Lexicon,
    word: &str,
    nth: usize,
    line: usize,
) -> Result<WordEntry, SimilarityError> {
    let entries: Vec<&WordEntry> = lex.by_word(word).collect();
    if entries.is_empty() {
        return Err(SimilarityError::Malformed {
            line,
            reason: format!("{word:?} is not in the {} word list", lex.language),
        });
    }
    Ok(entries[nth.min(entries.len() - 1)].clone())
}

/// Parses ranked lists written by [`render_rankings`]. A new list starts
/// whenever the rank column returns to 1.
pub fn parse_rankings(
    text: &str,
    source: &Lexicon,
    target: &Lexicon,
    method: RankingMethod,
) -> Result<Vec<RankedList>, SimilarityError> {
    let mut lists: Vec<RankedList> = Vec::new();
    let mut source_seen: HashMap<String, usize> = HashMap::new();
    let mut target_seen: HashMap<String, usize> = HashMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let malformed = |reason: String| SimilarityError::Malformed { line, reason };
        let fields: Vec<&str> = raw.split('\t').collect();
        let [src, rank, tgt, score] = fields[..] else {
            return Err(malformed(format!(
                "expected 4 tab-separated fields, found {}",
                fields.len()
            )));
        };
        let rank: usize = rank
            .parse()
            .map_err(|_| malformed(format!("bad rank {rank:?}")))?;
        let score: f64 = score
            .parse()
            .map_err(|_| malformed(format!("bad score {score:?}")))?;
        if !score.is_finite() {
            return Err(malformed(format!("non-finite score {score}")));
        }

        if rank == 1 {
            let n = source_seen.entry(src.to_string()).or_insert(0);
            let entry = resolve(source, src, *n, line)?;
            *n += 1;
            target_seen.clear();
            lists.push(RankedList {
                source: entry,
                method,
                candidates: Vec::new(),
            });
        }
        let Some(list) = lists.last_mut() else {
            return Err(malformed("first line must have rank 1".into()));
        };
        if list.source.word != src {
            return Err(malformed(format!(
                "source changed to {src:?} without restarting at rank 1"
            )));
        }
        if rank != list.candidates.len() + 1 {
            return Err(malformed(format!(
                "expected rank {}, found {rank}",
                list.candidates.len() + 1
            )));
        }
        let n = target_seen.entry(tgt.to_string()).or_insert(0);
        let entry = resolve(target, tgt, *n, line)?;
        *n += 1;
        list.candidates.push(Candidate {
            target: entry,
            score,
        });
    }
    Ok(lists)
}

pub fn read_rankings(
    path: &Path,
    source: &Lexicon,
    target: &Lexicon,
    method: RankingMethod,
) -> Result<Vec<RankedList>, SimilarityError> {
    let text = fs::read_to_string(path).map_err(|e| SimilarityError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    parse_rankings(&text, source, target, method)
}
