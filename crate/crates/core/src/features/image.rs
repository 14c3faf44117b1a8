use std::path::Path;

use super::{io_err, FeatureError};

/// An 8-bit RGB raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self, FeatureError> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(FeatureError::CountMismatch {
                what: format!("pixels for a {width}x{height} image"),
                expected: width * height,
                actual: pixels.len(),
            });
        }
        Ok(Image {
            width,
            height,
            pixels,
        })
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        f: impl Fn(usize, usize) -> [u8; 3],
    ) -> Result<Self, FeatureError> {
        let pixels = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Image::new(width, height, pixels)
    }

    /// Decodes a binary PPM (P6).
    pub fn from_ppm_bytes(bytes: &[u8]) -> Result<Self, FeatureError> {
        if !bytes.starts_with(b"P6") {
            return Err(FeatureError::Decode(
                "expected a binary PPM (P6) header".into(),
            ));
        }
        let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Pnm)
            .map_err(|e| FeatureError::Decode(e.to_string()))?
            .to_rgb8();
        let (w, h) = (img.width() as usize, img.height() as usize);
        let pixels = img.pixels().map(|p| p.0).collect();
        Image::new(w, h, pixels)
    }

    pub fn load_ppm(path: &Path) -> Result<Self, FeatureError> {
        let bytes = std::fs::read(path).map_err(io_err(path))?;
        Image::from_ppm_bytes(&bytes).map_err(|e| match e {
            FeatureError::Decode(msg) => FeatureError::Decode(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Encodes as binary PPM with maxval 255.
    pub fn to_ppm_bytes(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.pixels.iter().flatten());
        out
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    /// BT.601 luma of every pixel, unrounded.
    pub fn luma(&self) -> Vec<f64> {
        self.pixels.iter().map(|&p| luma(p)).collect()
    }
}

pub(crate) fn luma([r, g, b]: [u8; 3]) -> f64 {
    0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b)
}

/// Luma rounded to the nearest 8-bit level.
pub(crate) fn gray_level(p: [u8; 3]) -> u8 {
    luma(p).round().clamp(0.0, 255.0) as u8
}
