//! LXFV: a minimal binary container for a matrix of `f32` feature rows.
//!
//! Layout (all little-endian): the 4 magic bytes `LXFV`, a `u16` version
//! (currently 1), `u32` row count, `u32` dimension, then `rows * dim`
//! IEEE-754 `f32` values in row-major order.

use std::fs;
use std::path::{Path, PathBuf};

use super::{io_err, FeatureError, FeatureKind, ImageSet};
use crate::corpus::ImageManifest;
use crate::numerics::Matrix;

pub const LXFV_MAGIC: &[u8; 4] = b"LXFV";
pub const LXFV_VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 4 + 4;

pub fn encode_lxfv(m: &Matrix) -> Result<Vec<u8>, FeatureError> {
    if let Some((row, col)) = m.find_non_finite() {
        return Err(FeatureError::NonFiniteValue { row, col });
    }
    let too_big = |n: usize| {
        u32::try_from(n).map_err(|_| FeatureError::InvalidGeometry(format!("{n} exceeds u32")))
    };
    let mut out = Vec::with_capacity(HEADER_LEN + 4 * m.as_slice().len());
    out.extend_from_slice(LXFV_MAGIC);
    out.extend_from_slice(&LXFV_VERSION.to_le_bytes());
    out.extend_from_slice(&too_big(m.nrows())?.to_le_bytes());
    out.extend_from_slice(&too_big(m.ncols())?.to_le_bytes());
    for &v in m.as_slice() {
        let f = v as f32;
        if !f.is_finite() {
            let p = out.len() - HEADER_LEN;
            let idx = p / 4;
            return Err(FeatureError::NonFiniteValue {
                row: idx / m.ncols().max(1),
                col: idx % m.ncols().max(1),
            });
        }
        out.extend_from_slice(&f.to_le_bytes());
    }
    Ok(out)
}

pub fn parse_lxfv(bytes: &[u8]) -> Result<Matrix, FeatureError> {
    if bytes.len() < 4 || &bytes[..4] != LXFV_MAGIC {
        return Err(FeatureError::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(FeatureError::CountMismatch {
            what: "LXFV header bytes".into(),
            expected: HEADER_LEN,
            actual: bytes.len(),
        });
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != LXFV_VERSION {
        return Err(FeatureError::UnsupportedVersion(version));
    }
    let rows = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
    let dim = u32::from_le_bytes(bytes[10..14].try_into().unwrap()) as usize;
    let payload = &bytes[HEADER_LEN..];
    let expected = rows.checked_mul(dim).and_then(|n| n.checked_mul(4));
    if expected != Some(payload.len()) {
        return Err(FeatureError::CountMismatch {
            what: format!("LXFV payload bytes for {rows}x{dim}"),
            expected: expected.unwrap_or(usize::MAX),
            actual: payload.len(),
        });
    }
    let mut data = Vec::with_capacity(rows * dim);
    for (i, chunk) in payload.chunks_exact(4).enumerate() {
        let v = f32::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(FeatureError::NonFiniteValue {
                row: i / dim.max(1),
                col: i % dim.max(1),
            });
        }
        data.push(f64::from(v));
    }
    Ok(Matrix::from_flat(rows, dim, data)?)
}

pub fn read_lxfv(path: &Path) -> Result<Matrix, FeatureError> {
    parse_lxfv(&fs::read(path).map_err(io_err(path))?)
}

pub fn write_lxfv(path: &Path, m: &Matrix) -> Result<(), FeatureError> {
    fs::write(path, encode_lxfv(m)?).map_err(io_err(path))
}

/// File name holding a word's features. Letters, digits, `-` and `_` are
/// kept; every other byte is percent-encoded so any word maps to a safe,
/// unique name.
pub fn feature_file_name(word: &str) -> String {
    let mut name = String::with_capacity(word.len() + 5);
    for ch in word.chars() {
        if ch.is_alphanumeric() || ch == '-' || ch == '_' {
            name.push(ch);
        } else {
            let mut buf = [0u8; 4];
            for b in ch.encode_utf8(&mut buf).bytes() {
                name.push_str(&format!("%{b:02X}"));
            }
        }
    }
    name.push_str(".lxfv");
    name
}

/// Reads a word's feature file and binds its rows to the manifest images.
pub fn import_feature_file(
    path: &Path,
    manifest: &ImageManifest,
    kind: FeatureKind,
) -> Result<ImageSet, FeatureError> {
    let m = read_lxfv(path)?;
    if m.nrows() != manifest.len() {
        return Err(FeatureError::CountMismatch {
            what: format!("feature rows for {:?} in {}", manifest.word, path.display()),
            expected: manifest.len(),
            actual: m.nrows(),
        });
    }
    Ok(ImageSet::new(&manifest.word, kind, m))
}

/// Loads every manifest word's feature file from `dir`. Words without a
/// file are skipped (they have no representation of this kind).
pub fn load_feature_dir(
    dir: &Path,
    manifests: &[&ImageManifest],
    kind: FeatureKind,
) -> Result<Vec<ImageSet>, FeatureError> {
    let mut sets = Vec::new();
    for m in manifests {
        let path = dir.join(feature_file_name(&m.word));
        if path.exists() {
            sets.push(import_feature_file(&path, m, kind)?);
        }
    }
    Ok(sets)
}

/// Writes one LXFV file per set and returns the written paths.
pub fn write_feature_dir<'a>(
    dir: &Path,
    sets: impl IntoIterator<Item = &'a ImageSet>,
) -> Result<Vec<PathBuf>, FeatureError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut paths = Vec::new();
    for s in sets {
        let p = dir.join(feature_file_name(&s.word));
        write_lxfv(&p, &s.vectors)?;
        paths.push(p);
    }
    Ok(paths)
}
