use super::image::gray_level;
use super::{FeatureError, Image};

/// Concatenated R, G, B and grayscale histograms, each L1-normalized.
/// Output dimension is `4 * bins_per_channel`.
pub fn color_histogram(img: &Image, bins_per_channel: usize) -> Result<Vec<f64>, FeatureError> {
    if bins_per_channel < 2 || 256 % bins_per_channel != 0 {
        return Err(FeatureError::BadBinCount(bins_per_channel));
    }
    let width = 256 / bins_per_channel;
    let mut hist = vec![0.0; 4 * bins_per_channel];
    for &p in img.pixels() {
        let levels = [p[0], p[1], p[2], gray_level(p)];
        for (ch, level) in levels.into_iter().enumerate() {
            hist[ch * bins_per_channel + usize::from(level) / width] += 1.0;
        }
    }
    let n = img.pixels().len() as f64;
    hist.iter_mut().for_each(|h| *h /= n);
    Ok(hist)
}
