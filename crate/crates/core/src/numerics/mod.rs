//! Deterministic numerical kernels: cosine similarity, k-means, PCA and a
//! small row-major matrix type shared by every other module.

pub(crate) mod kmeans;
mod pca;

pub use kmeans::{kmeans, kmeans_with, KMeansResult};
pub use pca::{pca_fit, PcaModel};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("requested {requested} components but at most {max} are available")]
    DimensionTooLarge { requested: usize, max: usize },
    #[error("data has rank {rank}, fewer than the {out_dim} requested components")]
    DegenerateData { rank: usize, out_dim: usize },
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("rows have unequal lengths ({first} vs {other})")]
    Ragged { first: usize, other: usize },
}

/// Dense row-major matrix of `f64`. Each row is one vector (an image, a
/// descriptor, a centroid).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// An empty matrix with a fixed row width.
    pub fn empty(cols: usize) -> Self {
        Matrix {
            rows: 0,
            cols,
            data: Vec::new(),
        }
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, NumericsError> {
        if data.len() != rows * cols {
            return Err(NumericsError::DimensionMismatch {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, NumericsError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(NumericsError::Ragged {
                    first: cols,
                    other: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Like [`Matrix::from_rows`] but with an explicit width, so that zero
    /// rows still carry a dimensionality.
    pub fn from_rows_with_dim<R: AsRef<[f64]>>(
        cols: usize,
        rows: &[R],
    ) -> Result<Self, NumericsError> {
        let mut m = Matrix::empty(cols);
        for r in rows {
            m.push_row(r.as_ref())?;
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn push_row(&mut self, row: &[f64]) -> Result<(), NumericsError> {
        if row.len() != self.cols {
            return Err(NumericsError::DimensionMismatch {
                expected: self.cols,
                actual: row.len(),
            });
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    /// Keeps only the rows whose index satisfies `keep`.
    pub fn retain_rows(&self, mut keep: impl FnMut(usize) -> bool) -> Matrix {
        let mut out = Matrix::empty(self.cols);
        for i in 0..self.rows {
            if keep(i) {
                out.data.extend_from_slice(self.row(i));
                out.rows += 1;
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn stack<'a>(
        cols: usize,
        parts: impl IntoIterator<Item = &'a Matrix>,
    ) -> Result<Matrix, NumericsError> {
        let mut out = Matrix::empty(cols);
        for p in parts {
            if p.cols != cols {
                return Err(NumericsError::DimensionMismatch {
                    expected: cols,
                    actual: p.cols,
                });
            }
            out.data.extend_from_slice(&p.data);
            out.rows += p.rows;
        }
        Ok(out)
    }

    /// Returns the position of the first non-finite entry, if any.
    pub fn find_non_finite(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|v| !v.is_finite())
            .map(|p| (p / self.cols.max(1), p % self.cols.max(1)))
    }

    /// Component-wise mean of the rows. `None` for an empty matrix.
    pub fn mean_row(&self) -> Option<Vec<f64>> {
        if self.rows == 0 {
            return None;
        }
        let mut acc = vec![0.0; self.cols];
        for r in self.rows() {
            for (a, v) in acc.iter_mut().zip(r) {
                *a += v;
            }
        }
        let n = self.rows as f64;
        acc.iter_mut().for_each(|a| *a /= n);
        Some(acc)
    }

    /// Component-wise maximum of the rows. `None` for an empty matrix.
    pub fn max_row(&self) -> Option<Vec<f64>> {
        let mut it = self.rows();
        let mut acc = it.next()?.to_vec();
        for r in it {
            for (a, v) in acc.iter_mut().zip(r) {
                if *v > *a {
                    *a = *v;
                }
            }
        }
        Some(acc)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn l2_norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Cosine similarity, clamped to [-1, 1]. A zero vector on either side
/// yields 0.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64, NumericsError> {
    if a.len() != b.len() {
        return Err(NumericsError::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(cosine_with_norms(a, b, l2_norm(a), l2_norm(b)))
}

/// Cosine with precomputed norms; callers guarantee equal lengths.
#[inline]
pub(crate) fn cosine_with_norms(a: &[f64], b: &[f64], na: f64, nb: f64) -> f64 {
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot(a, b) / (na * nb)).clamp(-1.0, 1.0)
}

/// Scales `v` in place to unit L2 norm; zero vectors are left untouched.
pub fn l2_normalize(v: &mut [f64]) {
    let n = l2_norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// Scales `v` in place so its components sum to 1; an all-zero vector is
/// left untouched.
pub fn l1_normalize(v: &mut [f64]) {
    let s: f64 = v.iter().map(|x| x.abs()).sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
}
