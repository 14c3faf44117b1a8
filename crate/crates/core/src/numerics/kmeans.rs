use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{squared_distance, Matrix, NumericsError};
use crate::parallel::{map_indexed, Execution};

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub centroids: Matrix,
    /// Centroid index per input point.
    pub assignments: Vec<usize>,
    /// Sum of squared distances of each point to its assigned centroid.
    pub inertia: f64,
    /// Inertia after the initial assignment and after every Lloyd step.
    pub inertia_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Lloyd's algorithm with seeded k-means++ seeding.
///
/// Stops when an update leaves every assignment unchanged or after
/// `max_iters` updates. A cluster that ends up empty is re-seeded with the
/// point lying farthest from its own centroid.
pub fn kmeans(
    points: &Matrix,
    k: usize,
    seed: u64,
    max_iters: usize,
) -> Result<KMeansResult, NumericsError> {
    kmeans_with(points, k, seed, max_iters, Execution::default())
}

/// [`kmeans`] with an explicit execution mode for the assignment step. The
/// result does not depend on `exec`.
pub fn kmeans_with(
    points: &Matrix,
    k: usize,
    seed: u64,
    max_iters: usize,
    exec: Execution,
) -> Result<KMeansResult, NumericsError> {
    let n = points.nrows();
    if k == 0 || n < k {
        return Err(NumericsError::TooFewPoints {
            needed: k.max(1),
            got: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = init_plus_plus(points, k, &mut rng);

    let (mut assignments, mut dists) = assign(points, &centroids, exec);
    let mut history = vec![dists.iter().sum::<f64>()];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iters {
        iterations += 1;
        update_centroids(points, &assignments, &mut centroids);
        repair_empty(points, &assignments, &mut centroids);
        let (next, next_dists) = assign(points, &centroids, exec);
        history.push(next_dists.iter().sum());
        let changed = next != assignments;
        assignments = next;
        dists = next_dists;
        if !changed {
            converged = true;
            break;
        }
    }

    Ok(KMeansResult {
        centroids,
        assignments,
        inertia: dists.iter().sum(),
        inertia_history: history,
        iterations,
        converged,
    })
}

fn init_plus_plus(points: &Matrix, k: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let n = points.nrows();
    let mut chosen = Vec::with_capacity(k);
    let first = rng.random_range(0..n);
    chosen.push(first);
    let mut d2: Vec<f64> = points
        .rows()
        .map(|p| squared_distance(p, points.row(first)))
        .collect();

    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                if w <= 0.0 {
                    continue;
                }
                acc += w;
                pick = Some(i);
                if acc > target {
                    break;
                }
            }
            pick.expect("positive total implies a positive weight")
        } else {
            // every remaining point coincides with a chosen centre
            (0..n).find(|i| !chosen.contains(i)).unwrap_or(0)
        };
        chosen.push(next);
        for (i, p) in points.rows().enumerate() {
            let d = squared_distance(p, points.row(next));
            if d < d2[i] {
                d2[i] = d;
            }
        }
    }

    let rows: Vec<&[f64]> = chosen.iter().map(|&i| points.row(i)).collect();
    Matrix::from_rows_with_dim(points.ncols(), &rows).expect("rows share the point width")
}

/// Nearest centroid per point (ties to the lowest index) and the squared
/// distance to it.
pub(crate) fn assign(
    points: &Matrix,
    centroids: &Matrix,
    exec: Execution,
) -> (Vec<usize>, Vec<f64>) {
    let pairs = map_indexed(points.nrows(), exec, |i| nearest(points.row(i), centroids));
    pairs.into_iter().unzip()
}

pub(crate) fn nearest(p: &[f64], centroids: &Matrix) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, row) in centroids.rows().enumerate() {
        let d = squared_distance(p, row);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn update_centroids(points: &Matrix, assignments: &[usize], centroids: &mut Matrix) {
    let k = centroids.nrows();
    let dim = points.ncols();
    let mut sums = Matrix::zeros(k, dim);
    let mut counts = vec![0usize; k];
    for (p, &a) in points.rows().zip(assignments) {
        counts[a] += 1;
        for (s, v) in sums.row_mut(a).iter_mut().zip(p) {
            *s += v;
        }
    }
    for (c, &count) in counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let inv = count as f64;
        let sum = sums.row(c).to_vec();
        for (dst, s) in centroids.row_mut(c).iter_mut().zip(sum) {
            *dst = s / inv;
        }
    }
}

fn repair_empty(points: &Matrix, assignments: &[usize], centroids: &mut Matrix) {
    let k = centroids.nrows();
    let mut counts = vec![0usize; k];
    for &a in assignments {
        counts[a] += 1;
    }
    let mut taken = vec![false; points.nrows()];
    for c in 0..k {
        if counts[c] > 0 {
            continue;
        }
        let mut far: Option<(usize, f64)> = None;
        for (i, p) in points.rows().enumerate() {
            if taken[i] {
                continue;
            }
            let d = squared_distance(p, centroids.row(assignments[i]));
            if far.is_none_or(|(_, best)| d > best) {
                far = Some((i, d));
            }
        }
        if let Some((i, _)) = far {
            taken[i] = true;
            let row = points.row(i).to_vec();
            centroids.row_mut(c).copy_from_slice(&row);
        }
    }
}
