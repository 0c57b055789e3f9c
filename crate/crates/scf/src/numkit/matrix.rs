//! Dense row-major matrices of 64-bit floats.

use crate::error::{Error, Result};

/// Dense matrix with row-major `f64` storage.
///
/// Values are immutable once a matrix leaves the function that built it;
/// shared references are safe to hand across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Build from a row-major buffer. Fails if the length is wrong or any
    /// entry is non-finite.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "buffer of length {} cannot fill a {rows}x{cols} matrix",
                    data.len()
                ),
            });
        }
        if !data.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("{rows}x{cols} matrix data"),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Build from nested rows. All rows must share a length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::ShapeMismatch {
                context: format!("row of length {} in a matrix of width {m}", bad.len()),
            });
        }
        Self::from_vec(n, m, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Entry-wise map into a new matrix.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// True when every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

/// Dot product of two equal-length slices.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gram matrix of the rows of `z`: `S[i][j] = dot(row i, row j)`.
///
/// Each pair is computed once and mirrored, so the result is symmetric
/// bitwise. An empty input yields a 0x0 matrix.
pub fn similarity_matrix(z: &Matrix) -> Matrix {
    let b = z.rows();
    let mut s = Matrix::zeros(b, b);
    for i in 0..b {
        for j in i..b {
            let v = dot(z.row(i), z.row(j));
            s.set(i, j, v);
            s.set(j, i, v);
        }
    }
    s
}

/// Scale each row to unit Euclidean norm. Zero rows are passed through
/// unchanged; their indices are returned alongside the result.
pub fn l2_normalize_rows(z: &Matrix) -> (Matrix, Vec<usize>) {
    let mut out = z.clone();
    let mut zero_rows = Vec::new();
    for i in 0..z.rows() {
        let norm = dot(z.row(i), z.row(i)).sqrt();
        if norm == 0.0 {
            zero_rows.push(i);
        } else {
            for v in out.row_mut(i) {
                *v /= norm;
            }
        }
    }
    (out, zero_rows)
}
