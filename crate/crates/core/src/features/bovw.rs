use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::FeatureError;
use crate::numerics::{kmeans, l1_normalize, Matrix};

/// Lloyd iterations used when building a codebook.
pub const DEFAULT_CODEBOOK_ITERS: usize = 100;

/// k-means centroids used to quantize local descriptors.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    pub centroids: Matrix,
}

impl Codebook {
    pub fn new(centroids: Matrix) -> Result<Self, FeatureError> {
        if centroids.nrows() == 0 {
            return Err(FeatureError::TooFewDescriptors { needed: 1, got: 0 });
        }
        if let Some((row, col)) = centroids.find_non_finite() {
            return Err(FeatureError::NonFiniteValue { row, col });
        }
        Ok(Codebook { centroids })
    }

    pub fn size(&self) -> usize {
        self.centroids.nrows()
    }

    pub fn descriptor_dim(&self) -> usize {
        self.centroids.ncols()
    }
}

/// Uniformly samples up to `max_samples` descriptors from a corpus,
/// preserving corpus order. Returns everything when the corpus is small
/// enough.
pub fn sample_descriptors(
    per_image: &[Matrix],
    dim: usize,
    max_samples: usize,
    seed: u64,
) -> Result<Matrix, FeatureError> {
    let total: usize = per_image.iter().map(Matrix::nrows).sum();
    let flat = Matrix::stack(dim, per_image)?;
    if total <= max_samples {
        return Ok(flat);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, total, max_samples).into_vec();
    picked.sort_unstable();
    let mut out = Matrix::empty(dim);
    for i in picked {
        out.push_row(flat.row(i))?;
    }
    Ok(out)
}

/// Clusters a descriptor sample into a `k`-word codebook.
pub fn build_codebook(sample: &Matrix, k: usize, seed: u64) -> Result<Codebook, FeatureError> {
    if k == 0 || sample.nrows() < k {
        return Err(FeatureError::TooFewDescriptors {
            needed: k.max(1),
            got: sample.nrows(),
        });
    }
    let result = kmeans(sample, k, seed, DEFAULT_CODEBOOK_ITERS)?;
    Codebook::new(result.centroids)
}

/// Bag-of-visual-words histogram: every descriptor votes for its nearest
/// centroid (ties to the lowest index), counts are L1-normalized. No
/// descriptors give the zero vector.
pub fn bovw_encode(descriptors: &Matrix, codebook: &Codebook) -> Result<Vec<f64>, FeatureError> {
    let mut hist = vec![0.0; codebook.size()];
    if descriptors.nrows() == 0 {
        return Ok(hist);
    }
    if descriptors.ncols() != codebook.descriptor_dim() {
        return Err(FeatureError::DimensionMismatch {
            expected: codebook.descriptor_dim(),
            actual: descriptors.ncols(),
        });
    }
    for d in descriptors.rows() {
        let (c, _) = crate::numerics::kmeans::nearest(d, &codebook.centroids);
        hist[c] += 1.0;
    }
    l1_normalize(&mut hist);
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn book() -> Codebook {
        Codebook::new(
            Matrix::from_rows(&[[0.0, 0.0], [10.0, 0.0], [0.0, 10.0], [10.0, 10.0]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn empty_descriptors_encode_to_zero() {
        assert_eq!(
            bovw_encode(&Matrix::empty(2), &book()).unwrap(),
            vec![0.0; 4]
        );
    }

    #[test]
    fn one_hot_when_all_descriptors_hit_one_centroid() {
        let d = Matrix::from_rows(&[[10.0, 10.0], [10.0, 10.0], [9.5, 9.0]]).unwrap();
        assert_eq!(bovw_encode(&d, &book()).unwrap(), vec![0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn two_descriptors_split_evenly() {
        // (1,1) is nearest centroid 0 (d2 = 2 vs 82, 82, 162),
        // (9,1) is nearest centroid 1 (d2 = 82 vs 2, 162, 82).
        let d = Matrix::from_rows(&[[1.0, 1.0], [9.0, 1.0]]).unwrap();
        assert_eq!(bovw_encode(&d, &book()).unwrap(), vec![0.5, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let d = Matrix::from_rows(&[[5.0, 0.0]]).unwrap();
        assert_eq!(bovw_encode(&d, &book()).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn dimension_mismatch() {
        let d = Matrix::from_rows(&[[1.0, 2.0, 3.0]]).unwrap();
        assert!(matches!(
            bovw_encode(&d, &book()),
            Err(FeatureError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn codebook_with_k_equal_sample_size_keeps_every_point() {
        let sample = Matrix::from_rows(&[[0.0, 1.0], [3.0, 4.0], [-2.0, 5.0]]).unwrap();
        let cb = build_codebook(&sample, 3, 17).unwrap();
        let mut got: Vec<Vec<f64>> = cb.centroids.rows().map(|r| r.to_vec()).collect();
        let mut want: Vec<Vec<f64>> = sample.rows().map(|r| r.to_vec()).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(got, want);
        assert!(matches!(
            build_codebook(&sample, 4, 0),
            Err(FeatureError::TooFewDescriptors { .. })
        ));
    }

    #[test]
    fn sampling_is_seeded_and_bounded() {
        let parts: Vec<Matrix> = (0..5)
            .map(|i| {
                Matrix::from_flat(10, 1, (0..10).map(|j| (i * 10 + j) as f64).collect()).unwrap()
            })
            .collect();
        let a = sample_descriptors(&parts, 1, 20, 4).unwrap();
        let b = sample_descriptors(&parts, 1, 20, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.nrows(), 20);
        let vals: Vec<f64> = a.rows().map(|r| r[0]).collect();
        assert!(vals.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(sample_descriptors(&parts, 1, 100, 4).unwrap().nrows(), 50);
    }
}
