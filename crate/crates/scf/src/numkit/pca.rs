//! Two-component PCA via power iteration with deflation.

use crate::error::{Error, Result};
use crate::numkit::matrix::{dot, Matrix};
use crate::numkit::rng::Rng;

/// Seed of the internal start-vector stream; fixed so projections are
/// deterministic across runs.
const POWER_SEED: u64 = 0x5ca1ab1e;
const MAX_ITERATIONS: usize = 500;
const CONVERGENCE_TOL: f64 = 1e-10;

/// Result of a 2-D PCA projection.
#[derive(Debug, Clone)]
pub struct Pca2d {
    /// Input rows projected on the top-2 principal directions, `B x 2`.
    pub coords: Matrix,
    /// Eigenvalues of the sample covariance for those directions.
    pub eigenvalues: [f64; 2],
    /// The principal directions themselves, unit length (or all-zero when
    /// the data has no variance left for a component).
    pub components: [Vec<f64>; 2],
}

/// Project rows of `z` onto the top-2 principal directions of the
/// mean-centered data.
pub fn pca_2d(z: &Matrix) -> Result<Pca2d> {
    let (b, d) = (z.rows(), z.cols());
    if b < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: b });
    }

    // Column means, then the d x d sample covariance of the centered data.
    let mut mean = vec![0.0; d];
    for i in 0..b {
        for (m, &v) in mean.iter_mut().zip(z.row(i)) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= b as f64;
    }
    let mut centered = z.clone();
    for i in 0..b {
        for (v, m) in centered.row_mut(i).iter_mut().zip(&mean) {
            *v -= m;
        }
    }
    let mut cov = Matrix::zeros(d, d);
    for i in 0..b {
        let row = centered.row(i);
        for p in 0..d {
            for q in p..d {
                let v = cov.get(p, q) + row[p] * row[q];
                cov.set(p, q, v);
                cov.set(q, p, v);
            }
        }
    }
    let denom = (b - 1) as f64;
    for v in cov.data_mut() {
        *v /= denom;
    }

    let mut rng = Rng::new(POWER_SEED, 0);
    let mut components: [Vec<f64>; 2] = [vec![0.0; d], vec![0.0; d]];
    let mut eigenvalues = [0.0; 2];
    for c in 0..2 {
        let (value, vector) = dominant_eigenpair(&cov, &components[..c], &mut rng);
        // Deflate so the next pass converges to the following eigenpair.
        for p in 0..d {
            for q in 0..d {
                let v = cov.get(p, q) - value * vector[p] * vector[q];
                cov.set(p, q, v);
            }
        }
        eigenvalues[c] = value;
        components[c] = vector;
    }

    let mut coords = Matrix::zeros(b, 2);
    for i in 0..b {
        let row = centered.row(i);
        coords.set(i, 0, dot(row, &components[0]));
        coords.set(i, 1, dot(row, &components[1]));
    }
    Ok(Pca2d {
        coords,
        eigenvalues,
        components,
    })
}

/// Power iteration on `m`, kept orthogonal to `previous` components.
/// Returns `(0, zero vector)` when no variance is left in that subspace.
fn dominant_eigenpair(m: &Matrix, previous: &[Vec<f64>], rng: &mut Rng) -> (f64, Vec<f64>) {
    let d = m.rows();
    let mut v: Vec<f64> = (0..d).map(|_| rng.gaussian()).collect();
    orthogonalize(&mut v, previous);
    if normalize(&mut v) == 0.0 {
        return (0.0, vec![0.0; d]);
    }
    for _ in 0..MAX_ITERATIONS {
        let mut next = mat_vec(m, &v);
        orthogonalize(&mut next, previous);
        if normalize(&mut next) < 1e-150 {
            // The operator annihilates this subspace: zero eigenvalue.
            return (0.0, vec![0.0; d]);
        }
        let delta: f64 = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        v = next;
        if delta < CONVERGENCE_TOL {
            break;
        }
    }
    let mv = mat_vec(m, &v);
    (dot(&v, &mv), v)
}

fn mat_vec(m: &Matrix, v: &[f64]) -> Vec<f64> {
    (0..m.rows()).map(|i| dot(m.row(i), v)).collect()
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let proj = dot(v, b);
        for (x, y) in v.iter_mut().zip(b) {
            *x -= proj * y;
        }
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}
