use std::collections::HashSet;

use super::{ContentHash, CorpusError, Dataset, ImageManifest, TranslationPair};
use crate::features::ImageSet;

/// A translation pair is dropped when its two image sets share more than
/// this many identical images.
pub const MAX_SHARED_IMAGES: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct DedupeOutcome {
    pub source: Dataset,
    pub target: Dataset,
    pub kept: Vec<TranslationPair>,
    /// Removed pairs with the number of identical images they shared.
    pub removed: Vec<(TranslationPair, usize)>,
}

/// Removes images occurring in both languages from both datasets and drops
/// translation pairs whose sets shared more than [`MAX_SHARED_IMAGES`]
/// identical images. Shared counts are taken before any image is removed.
///
/// Words whose sets become empty lose both their set and their manifest.
pub fn dedupe_cross_lingual(
    source: &Dataset,
    target: &Dataset,
    pairs: &[TranslationPair],
) -> Result<DedupeOutcome, CorpusError> {
    let hashes = |ds: &Dataset| -> HashSet<ContentHash> {
        ds.manifests()
            .into_iter()
            .flat_map(|m| m.content_hashes.iter().copied())
            .collect()
    };
    let src_all = hashes(source);
    let tgt_all = hashes(target);
    let shared: HashSet<ContentHash> = src_all.intersection(&tgt_all).copied().collect();

    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for pair in pairs {
        let count = match (
            source.manifest(&pair.source.word),
            target.manifest(&pair.target.word),
        ) {
            (Some(a), Some(b)) => {
                let a: HashSet<_> = a.content_hashes.iter().collect();
                b.content_hashes
                    .iter()
                    .collect::<HashSet<_>>()
                    .intersection(&a)
                    .count()
            }
            _ => 0,
        };
        if count > MAX_SHARED_IMAGES {
            removed.push((pair.clone(), count));
        } else {
            kept.push(pair.clone());
        }
    }

    Ok(DedupeOutcome {
        source: prune(source, &shared)?,
        target: prune(target, &shared)?,
        kept,
        removed,
    })
}

fn prune(ds: &Dataset, drop: &HashSet<ContentHash>) -> Result<Dataset, CorpusError> {
    let mut manifests = Vec::new();
    let mut sets = Vec::new();
    for man in ds.manifests() {
        let keep: Vec<bool> = man
            .content_hashes
            .iter()
            .map(|h| !drop.contains(h))
            .collect();
        if !keep.iter().any(|&k| k) {
            continue;
        }
        let images = man
            .image_ids
            .iter()
            .zip(&man.content_hashes)
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|((id, h), _)| (id.clone(), *h))
            .collect();
        manifests.push(ImageManifest::new(&man.word, images)?);
        if let Some(set) = ds.set(&man.word) {
            sets.push(ImageSet::new(
                &set.word,
                set.kind,
                set.vectors.retain_rows(|i| keep[i]),
            ));
        }
    }
    // sets without a manifest cannot be matched to hashes; keep them as is
    for set in ds.sets() {
        if ds.manifest(&set.word).is_none() {
            sets.push(set.clone());
        }
    }
    ds.rebuild(manifests, sets)
}
