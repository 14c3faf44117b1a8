use std::path::Path;

use super::{
    bovw_encode, color_histogram, Codebook, DescriptorExtractor, FeatureError, FeatureKind, Image,
    ImageSet,
};
use crate::corpus::ImageManifest;
use crate::numerics::Matrix;
use crate::parallel::{try_map_indexed, Execution};

/// Feature extractors that work directly on pixels.
pub enum NativeFeaturizer<'a> {
    Color {
        bins: usize,
    },
    Bovw {
        codebook: &'a Codebook,
        extractor: &'a dyn DescriptorExtractor,
    },
}

impl NativeFeaturizer<'_> {
    pub fn kind(&self) -> FeatureKind {
        match self {
            NativeFeaturizer::Color { .. } => FeatureKind::Color,
            NativeFeaturizer::Bovw { .. } => FeatureKind::Bovw,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            NativeFeaturizer::Color { bins } => 4 * bins,
            NativeFeaturizer::Bovw { codebook, .. } => codebook.size(),
        }
    }

    pub fn featurize(&self, img: &Image) -> Result<Vec<f64>, FeatureError> {
        match self {
            NativeFeaturizer::Color { bins } => color_histogram(img, *bins),
            NativeFeaturizer::Bovw {
                codebook,
                extractor,
            } => bovw_encode(&extractor.extract(img)?, codebook),
        }
    }
}

/// Loads every image of a manifest from `image_dir` (file name = image id)
/// and featurizes them, one image per work item.
pub fn featurize_manifest(
    image_dir: &Path,
    manifest: &ImageManifest,
    featurizer: &NativeFeaturizer<'_>,
    exec: Execution,
) -> Result<ImageSet, FeatureError> {
    let rows = try_map_indexed(manifest.len(), exec, |i| {
        let img = Image::load_ppm(&image_dir.join(&manifest.image_ids[i]))?;
        featurizer.featurize(&img)
    })?;
    Ok(ImageSet::new(
        &manifest.word,
        featurizer.kind(),
        Matrix::from_rows_with_dim(featurizer.dim(), &rows)?,
    ))
}
