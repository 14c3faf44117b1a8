use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{dot, Matrix, NumericsError};

/// Eigenvalues below this fraction of the largest one count as zero when
/// determining the rank of the centered data.
const RANK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// `out_dim` orthonormal principal axes, one per row.
    pub basis: Matrix,
    /// Sample variance along each axis, non-increasing.
    pub explained_variance: Vec<f64>,
    /// Numerical rank of the centered data.
    pub rank: usize,
}

impl PcaModel {
    pub fn input_dim(&self) -> usize {
        self.mean.len()
    }

    pub fn output_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// True when fewer than `output_dim` axes carry variance; the trailing
    /// axes then complete the basis but are otherwise arbitrary.
    pub fn is_degenerate(&self) -> bool {
        self.rank < self.output_dim()
    }

    /// Errors with [`NumericsError::DegenerateData`] when the model is
    /// degenerate.
    pub fn require_full_rank(&self) -> Result<&Self, NumericsError> {
        if self.is_degenerate() {
            Err(NumericsError::DegenerateData {
                rank: self.rank,
                out_dim: self.output_dim(),
            })
        } else {
            Ok(self)
        }
    }

    /// Projects `v` onto the principal axes: `basis · (v − mean)`.
    pub fn transform(&self, v: &[f64]) -> Result<Vec<f64>, NumericsError> {
        if v.len() != self.mean.len() {
            return Err(NumericsError::DimensionMismatch {
                expected: self.mean.len(),
                actual: v.len(),
            });
        }
        let centered: Vec<f64> = v.iter().zip(&self.mean).map(|(x, m)| x - m).collect();
        Ok(self.basis.rows().map(|axis| dot(axis, &centered)).collect())
    }

    pub fn transform_rows(&self, m: &Matrix) -> Result<Matrix, NumericsError> {
        let mut out = Matrix::empty(self.output_dim());
        for r in m.rows() {
            out.push_row(&self.transform(r)?)?;
        }
        Ok(out)
    }

    /// Maps projected coordinates back into the input space.
    pub fn inverse_transform(&self, z: &[f64]) -> Result<Vec<f64>, NumericsError> {
        if z.len() != self.output_dim() {
            return Err(NumericsError::DimensionMismatch {
                expected: self.output_dim(),
                actual: z.len(),
            });
        }
        let mut out = self.mean.clone();
        for (coef, axis) in z.iter().zip(self.basis.rows()) {
            for (o, a) in out.iter_mut().zip(axis) {
                *o += coef * a;
            }
        }
        Ok(out)
    }
}

/// Fits a PCA model by exact symmetric eigendecomposition of the sample
/// covariance (divisor n − 1).
///
/// The decomposition runs in whichever of feature space (d × d covariance)
/// or sample space (n × n Gram matrix) is smaller. Each axis is signed so
/// that its largest-magnitude component is positive. Rank-deficient data
/// still yields a full orthonormal basis; check [`PcaModel::is_degenerate`].
pub fn pca_fit(points: &Matrix, out_dim: usize) -> Result<PcaModel, NumericsError> {
    let n = points.nrows();
    let d = points.ncols();
    if n < 2 {
        return Err(NumericsError::TooFewPoints { needed: 2, got: n });
    }
    if out_dim == 0 || out_dim > n.min(d) {
        return Err(NumericsError::DimensionTooLarge {
            requested: out_dim,
            max: n.min(d),
        });
    }
    if let Some((row, col)) = points.find_non_finite() {
        return Err(NumericsError::NonFinite { row, col });
    }

    let mean = points.mean_row().expect("n >= 2");
    let mut centered = DMatrix::<f64>::zeros(n, d);
    for (i, r) in points.rows().enumerate() {
        for j in 0..d {
            centered[(i, j)] = r[j] - mean[j];
        }
    }
    let denom = (n - 1) as f64;

    // (eigenvalue, axis in feature space) pairs
    let mut axes: Vec<(f64, DVector<f64>)> = if d <= n {
        let cov = (centered.transpose() * &centered) / denom;
        let eig = SymmetricEigen::new(cov);
        (0..d)
            .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).into_owned()))
            .collect()
    } else {
        let gram = (&centered * centered.transpose()) / denom;
        let eig = SymmetricEigen::new(gram);
        (0..n)
            .map(|i| {
                let lambda = eig.eigenvalues[i];
                let u = centered.transpose() * eig.eigenvectors.column(i);
                (lambda, u)
            })
            .collect()
    };
    axes.sort_by(|a, b| b.0.total_cmp(&a.0));

    let top = axes.first().map_or(0.0, |a| a.0.max(0.0));
    let threshold = top * RANK_TOLERANCE;
    let rank = axes.iter().filter(|a| a.0 > threshold && top > 0.0).count();

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(out_dim);
    let mut variance = Vec::with_capacity(out_dim);
    for (lambda, v) in axes.into_iter().take(rank.min(out_dim)) {
        let mut v: Vec<f64> = v.iter().copied().collect();
        // Gram-route vectors need normalising; re-orthogonalise either way.
        orthonormalize_against(&mut v, &basis);
        basis.push(v);
        variance.push(lambda.max(0.0));
    }
    complete_basis(&mut basis, d, out_dim);
    variance.resize(out_dim, 0.0);
    for v in &mut basis {
        fix_sign(v);
    }

    Ok(PcaModel {
        mean,
        basis: Matrix::from_rows_with_dim(d, &basis)?,
        explained_variance: variance,
        rank,
    })
}

/// Gram-Schmidt step; returns false if `v` is (numerically) in the span.
fn orthonormalize_against(v: &mut [f64], basis: &[Vec<f64>]) -> bool {
    for _ in 0..2 {
        for b in basis {
            let p = dot(v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
    }
    let norm = dot(v, v).sqrt();
    if norm < 1e-10 {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    true
}

/// Extends `basis` to `out_dim` orthonormal vectors using standard basis
/// candidates in index order.
fn complete_basis(basis: &mut Vec<Vec<f64>>, d: usize, out_dim: usize) {
    let mut e = 0;
    while basis.len() < out_dim && e < d {
        let mut v = vec![0.0; d];
        v[e] = 1.0;
        if orthonormalize_against(&mut v, basis) {
            basis.push(v);
        }
        e += 1;
    }
}

fn fix_sign(v: &mut [f64]) {
    let mut idx = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[idx].abs() {
            idx = i;
        }
    }
    if v[idx] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}
