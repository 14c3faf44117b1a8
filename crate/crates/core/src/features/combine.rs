use super::{FeatureError, FeatureKind, ImageSet};
use crate::corpus::Dataset;
use crate::numerics::{l2_normalize, pca_fit, Matrix, PcaModel};

fn concat(
    vis: &ImageSet,
    tex: &ImageSet,
    kind: FeatureKind,
    normalize: bool,
) -> Result<ImageSet, FeatureError> {
    if tex.kind != FeatureKind::Tex {
        return Err(FeatureError::WrongKind {
            expected: "tex".into(),
            actual: tex.kind,
        });
    }
    if vis.word != tex.word {
        return Err(FeatureError::SetMismatch(format!(
            "{:?} vs {:?}",
            vis.word, tex.word
        )));
    }
    if vis.len() != tex.len() {
        return Err(FeatureError::SetMismatch(format!(
            "{:?} has {} visual rows and {} text rows",
            vis.word,
            vis.len(),
            tex.len()
        )));
    }
    let mut out = Matrix::empty(vis.dim() + tex.dim());
    let mut row = Vec::with_capacity(vis.dim() + tex.dim());
    for (a, b) in vis.vectors.rows().zip(tex.vectors.rows()) {
        row.clear();
        row.extend_from_slice(a);
        if normalize {
            l2_normalize(&mut row);
        }
        let split = row.len();
        row.extend_from_slice(b);
        if normalize {
            l2_normalize(&mut row[split..]);
        }
        out.push_row(&row)?;
    }
    Ok(ImageSet::new(&vis.word, kind, out))
}

/// Row-wise concatenation of a visual set with the word's TEX set. With
/// `normalize`, each half is L2-normalized before concatenation.
pub fn combine(vis: &ImageSet, tex: &ImageSet, normalize: bool) -> Result<ImageSet, FeatureError> {
    if !vis.kind.is_visual() || vis.kind == FeatureKind::VisPca {
        return Err(FeatureError::WrongKind {
            expected: "color, bovw or cnn".into(),
            actual: vis.kind,
        });
    }
    concat(vis, tex, FeatureKind::Combi, normalize)
}

/// Concatenation of a PCA-reduced visual set with the TEX set.
pub fn combine_pca(
    vispca: &ImageSet,
    tex: &ImageSet,
    normalize: bool,
) -> Result<ImageSet, FeatureError> {
    if vispca.kind != FeatureKind::VisPca {
        return Err(FeatureError::WrongKind {
            expected: "vispca".into(),
            actual: vispca.kind,
        });
    }
    concat(vispca, tex, FeatureKind::CombiPca, normalize)
}

/// Fits one PCA model on every image vector of both languages and projects
/// all sets to `out_dim` dimensions, producing VISPCA datasets.
pub fn reduce_sets(
    source: &Dataset,
    target: &Dataset,
    out_dim: usize,
) -> Result<(Dataset, Dataset, PcaModel), FeatureError> {
    for ds in [source, target] {
        if let Some(kind) = ds.kind().filter(|k| *k != FeatureKind::Cnn) {
            return Err(FeatureError::WrongKind {
                expected: "cnn".into(),
                actual: kind,
            });
        }
    }
    let dim = source.dim().or(target.dim()).unwrap_or(0);
    if let Some(d) = target.dim().filter(|&d| d != dim) {
        return Err(FeatureError::DimensionMismatch {
            expected: dim,
            actual: d,
        });
    }
    let all_sets: Vec<&ImageSet> = source.sets().into_iter().chain(target.sets()).collect();
    let pooled = Matrix::stack(dim, all_sets.iter().map(|s| &s.vectors))?;
    let model = pca_fit(&pooled, out_dim)?;

    let project = |ds: &Dataset| -> Result<Dataset, FeatureError> {
        let sets = ds
            .sets()
            .into_iter()
            .map(|s| {
                Ok(ImageSet::new(
                    &s.word,
                    FeatureKind::VisPca,
                    model.transform_rows(&s.vectors)?,
                ))
            })
            .collect::<Result<Vec<_>, FeatureError>>()?;
        Ok(ds.with_sets(sets)?)
    };
    Ok((project(source)?, project(target)?, model))
}
