use std::f64::consts::TAU;

use super::{FeatureError, Image};
use crate::numerics::{l2_normalize, Matrix};

const CELLS: usize = 4;
const ORIENTATIONS: usize = 8;
pub const DESCRIPTOR_DIM: usize = CELLS * CELLS * ORIENTATIONS;

/// Anything that turns an image into a bag of local descriptors.
pub trait DescriptorExtractor: Sync {
    fn dim(&self) -> usize;
    fn extract(&self, img: &Image) -> Result<Matrix, FeatureError>;
}

/// SIFT-like descriptor sampled on a dense grid: each square patch is cut
/// into 4x4 cells, and every cell accumulates a magnitude-weighted
/// 8-bin histogram of grayscale gradient orientations. The 128-d result is
/// L2-normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenseGradientDescriptor {
    pub patch_size: usize,
    pub stride: usize,
}

impl Default for DenseGradientDescriptor {
    fn default() -> Self {
        DenseGradientDescriptor {
            patch_size: 16,
            stride: 8,
        }
    }
}

impl DescriptorExtractor for DenseGradientDescriptor {
    fn dim(&self) -> usize {
        DESCRIPTOR_DIM
    }

    fn extract(&self, img: &Image) -> Result<Matrix, FeatureError> {
        extract_descriptors(img, self.patch_size, self.stride)
    }
}

pub fn extract_descriptors(
    img: &Image,
    patch_size: usize,
    stride: usize,
) -> Result<Matrix, FeatureError> {
    if patch_size < CELLS {
        return Err(FeatureError::InvalidGeometry(format!(
            "patch size {patch_size} is smaller than the {CELLS}x{CELLS} cell grid"
        )));
    }
    if stride == 0 {
        return Err(FeatureError::InvalidGeometry(
            "stride must be positive".into(),
        ));
    }
    let (w, h) = (img.width(), img.height());
    if patch_size > w.min(h) {
        return Err(FeatureError::ImageTooSmall {
            width: w,
            height: h,
            patch: patch_size,
        });
    }

    let gray = img.luma();
    let at = |x: usize, y: usize| gray[y * w + x];
    // central differences, one-sided at the border
    let mut magnitude = vec![0.0; w * h];
    let mut bin = vec![0usize; w * h];
    for y in 0..h {
        for x in 0..w {
            let dx = (at((x + 1).min(w - 1), y) - at(x.saturating_sub(1), y)) / 2.0;
            let dy = (at(x, (y + 1).min(h - 1)) - at(x, y.saturating_sub(1))) / 2.0;
            let m = dx.hypot(dy);
            magnitude[y * w + x] = m;
            if m > 0.0 {
                let mut angle = dy.atan2(dx);
                if angle < 0.0 {
                    angle += TAU;
                }
                bin[y * w + x] =
                    ((angle / (TAU / ORIENTATIONS as f64)) as usize).min(ORIENTATIONS - 1);
            }
        }
    }

    let nx = (w - patch_size) / stride + 1;
    let ny = (h - patch_size) / stride + 1;
    let mut out = Matrix::zeros(nx * ny, DESCRIPTOR_DIM);
    for py in 0..ny {
        for px in 0..nx {
            let desc = out.row_mut(py * nx + px);
            let (ox, oy) = (px * stride, py * stride);
            for v in 0..patch_size {
                let cy = v * CELLS / patch_size;
                for u in 0..patch_size {
                    let cx = u * CELLS / patch_size;
                    let idx = (oy + v) * w + ox + u;
                    if magnitude[idx] > 0.0 {
                        desc[(cy * CELLS + cx) * ORIENTATIONS + bin[idx]] += magnitude[idx];
                    }
                }
            }
            l2_normalize(desc);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_gives_zero_descriptors() {
        let img = Image::from_fn(12, 12, |_, _| [90, 90, 90]).unwrap();
        let d = extract_descriptors(&img, 8, 4).unwrap();
        assert_eq!(d.nrows(), 4);
        assert!(d.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn vertical_step_edge_by_hand() {
        // Columns 0..4 black, 4..8 white. Central differences give
        // dx = 127.5 at columns 3 and 4 and zero elsewhere; dy is zero.
        // Columns 3 and 4 fall in cell columns 1 and 2 of an 8-px patch,
        // two pixel rows per cell row, all at orientation bin 0.
        // Eight equal entries of 255 normalize to 1/sqrt(8).
        let img =
            Image::from_fn(8, 8, |x, _| if x < 4 { [0, 0, 0] } else { [255, 255, 255] }).unwrap();
        let d = extract_descriptors(&img, 8, 8).unwrap();
        assert_eq!(d.nrows(), 1);
        let mut expected = vec![0.0; DESCRIPTOR_DIM];
        for cy in 0..4 {
            for cx in [1, 2] {
                expected[(cy * 4 + cx) * 8] = 1.0 / 8f64.sqrt();
            }
        }
        for (a, b) in d.row(0).iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn reversed_edge_uses_opposite_bin() {
        let img =
            Image::from_fn(8, 8, |x, _| if x < 4 { [255, 255, 255] } else { [0, 0, 0] }).unwrap();
        let d = extract_descriptors(&img, 8, 8).unwrap();
        let mass_in_4: f64 = (0..16).map(|c| d.row(0)[c * 8 + 4].powi(2)).sum();
        assert!((mass_in_4 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grid_count() {
        let img = Image::from_fn(37, 21, |x, y| [(x * 7) as u8, (y * 11) as u8, 3]).unwrap();
        let d = extract_descriptors(&img, 8, 5).unwrap();
        assert_eq!(d.nrows(), ((37 - 8) / 5 + 1) * ((21 - 8) / 5 + 1));
        for r in d.rows() {
            let n: f64 = r.iter().map(|v| v * v).sum();
            assert!(n == 0.0 || (n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn geometry_errors() {
        let img = Image::from_fn(6, 10, |_, _| [0, 0, 0]).unwrap();
        assert!(matches!(
            extract_descriptors(&img, 8, 4),
            Err(FeatureError::ImageTooSmall { .. })
        ));
        assert!(matches!(
            extract_descriptors(&img, 3, 1),
            Err(FeatureError::InvalidGeometry(_))
        ));
        assert!(matches!(
            extract_descriptors(&img, 4, 0),
            Err(FeatureError::InvalidGeometry(_))
        ));
    }
}
