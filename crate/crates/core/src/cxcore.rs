//! Dense complex vectors and matrices.
//!
//! Deliberately small: row-major storage, `O(n^3)` schoolbook products,
//! no blocking or SIMD. Orders beyond a few hundred are out of scope, so
//! clarity and deterministic rounding win over throughput. Products
//! accumulate left to right in the order written at every call site.

use crate::error::{Error, Result};

pub use num_complex::Complex64;

/// Column vector of complex entries. Always has at least one component.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex64>,
}

impl ComplexVector {
    /// Wraps a non-empty entry list.
    ///
    /// # Panics
    /// Panics if `entries` is empty; a zero-length vector is never meaningful
    /// here and always indicates a caller bug.
    pub fn new(entries: Vec<Complex64>) -> Self {
        assert!(!entries.is_empty(), "vector must have at least one entry");
        ComplexVector { entries }
    }

    /// Vector of `len` zeros.
    pub fn zeros(len: usize) -> Self {
        ComplexVector::new(vec![Complex64::new(0.0, 0.0); len])
    }

    /// Standard basis vector `e_k` (0-based `k`) of length `len`.
    pub fn basis(len: usize, k: usize) -> Self {
        assert!(k < len, "basis index {k} out of range for length {len}");
        let mut v = ComplexVector::zeros(len);
        v.entries[k] = Complex64::new(1.0, 0.0);
        v
    }

    /// Builds a vector from real components.
    pub fn from_real(entries: &[f64]) -> Self {
        ComplexVector::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Kept for clippy symmetry; construction forbids emptiness.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.entries[i]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    pub(crate) fn set(&mut self, i: usize, value: Complex64) {
        self.entries[i] = value;
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Scales every component by `z`.
    pub fn scale(&self, z: Complex64) -> ComplexVector {
        ComplexVector::new(self.entries.iter().map(|&e| e * z).collect())
    }

    /// Hermitian inner product `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> Result<Complex64> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch {
                matrix: self.len(),
                vector: other.len(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Rank-one matrix `|self><other|` with entries `self_i * conj(other_j)`.
    pub fn outer(&self, other: &ComplexVector) -> ComplexMatrix {
        let rows = self.len();
        let cols = other.len();
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(self.entries[i] * other.entries[j].conj());
            }
        }
        ComplexMatrix::new(rows, cols, entries).expect("outer product shape is consistent")
    }

    /// True when every component is finite.
    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Wraps a row-major entry buffer; its length must equal `n_rows * n_cols`.
    pub fn new(n_rows: usize, n_cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        let expected = n_rows * n_cols;
        if entries.len() != expected {
            return Err(Error::BadEntryCount {
                rows: n_rows,
                cols: n_cols,
                expected,
                got: entries.len(),
            });
        }
        Ok(ComplexMatrix {
            n_rows,
            n_cols,
            entries,
        })
    }

    /// Zero matrix of the given shape.
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        ComplexMatrix {
            n_rows,
            n_cols,
            entries: vec![Complex64::new(0.0, 0.0); n_rows * n_cols],
        }
    }

    /// Identity of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Diagonal matrix with the given complex entries.
    pub fn diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (i, &z) in diag.iter().enumerate() {
            m.set(i, i, z);
        }
        m
    }

    /// Builds a matrix from a list of equally long rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        for row in rows {
            if row.len() != n_cols {
                return Err(Error::BadEntryCount {
                    rows: n_rows,
                    cols: n_cols,
                    expected: n_rows * n_cols,
                    got: row.len() + n_cols * (n_rows - 1),
                });
            }
        }
        let entries = rows.iter().flatten().copied().collect();
        ComplexMatrix::new(n_rows, n_cols, entries)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        debug_assert!(i < self.n_rows && j < self.n_cols);
        self.entries[i * self.n_cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        debug_assert!(i < self.n_rows && j < self.n_cols);
        self.entries[i * self.n_cols + j] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    /// Product `self * other`. Inner dimensions must agree.
    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.n_cols != other.n_rows {
            return Err(Error::ShapeMismatch {
                left_rows: self.n_rows,
                left_cols: self.n_cols,
                right_rows: other.n_rows,
                right_cols: other.n_cols,
            });
        }
        let mut out = ComplexMatrix::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let aik = self.get(i, k);
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.n_cols {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vector(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.n_cols != v.len() {
            return Err(Error::SizeMismatch {
                matrix: self.n_cols,
                vector: v.len(),
            });
        }
        let mut out = ComplexVector::zeros(self.n_rows);
        for i in 0..self.n_rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.n_cols {
                acc += self.get(i, j) * v.get(j);
            }
            out.set(i, acc);
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Entrywise sum; shapes must match.
    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.n_rows != other.n_rows || self.n_cols != other.n_cols {
            return Err(Error::DifferentShapes {
                a_rows: self.n_rows,
                a_cols: self.n_cols,
                b_rows: other.n_rows,
                b_cols: other.n_cols,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix::new(self.n_rows, self.n_cols, entries)
    }

    /// Max-modulus deviation of `self' * self` from the identity.
    ///
    /// Returns exactly 0 only for exactly unitary input; a few `1e-16`-scale
    /// ulps of noise are expected for anything computed in floating point.
    pub fn unitarity_deviation(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.n_rows,
                cols: self.n_cols,
            });
        }
        let gram = self.adjoint().matmul(self)?;
        let n = self.n_rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                let dev = (gram.get(i, j) - target).norm();
                if dev > worst {
                    worst = dev;
                }
            }
        }
        Ok(worst)
    }

    /// Frobenius norm of `self - other`; shapes must match.
    pub fn frobenius_distance(&self, other: &ComplexMatrix) -> Result<f64> {
        if self.n_rows != other.n_rows || self.n_cols != other.n_cols {
            return Err(Error::DifferentShapes {
                a_rows: self.n_rows,
                a_cols: self.n_cols,
                b_rows: other.n_rows,
                b_cols: other.n_cols,
            });
        }
        let sum: f64 = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok(sum.sqrt())
    }

    /// Determinant via LU factorisation with partial pivoting.
    pub fn determinant(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.n_rows,
                cols: self.n_cols,
            });
        }
        let n = self.n_rows;
        let mut lu = self.entries.clone();
        let at = |buf: &[Complex64], i: usize, j: usize| buf[i * n + j];
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let mut pivot = col;
            let mut best = at(&lu, col, col).norm();
            for row in col + 1..n {
                let mag = at(&lu, row, col).norm();
                if mag > best {
                    best = mag;
                    pivot = row;
                }
            }
            if best == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            if pivot != col {
                for j in 0..n {
                    lu.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let diag = at(&lu, col, col);
            det *= diag;
            for row in col + 1..n {
                let factor = at(&lu, row, col) / diag;
                lu[row * n + col] = factor;
                for j in col + 1..n {
                    lu[row * n + j] = at(&lu, row, j) - factor * at(&lu, col, j);
                }
            }
        }
        Ok(det)
    }

    /// Copies the `rows x cols` block whose top-left corner is `(row0, col0)`.
    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> ComplexMatrix {
        assert!(
            row0 + rows <= self.n_rows && col0 + cols <= self.n_cols,
            "block out of range"
        );
        let mut out = ComplexMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(row0 + i, col0 + j));
            }
        }
        out
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> ComplexVector {
        assert!(j < self.n_cols, "column index out of range");
        let mut out = ComplexVector::zeros(self.n_rows);
        for i in 0..self.n_rows {
            out.set(i, self.get(i, j));
        }
        out
    }

    /// Multiplies row `i` by `e^{i phases[i]}` in place semantics (returns a copy).
    pub(crate) fn scale_rows_by_phases(&self, phases: &[f64]) -> ComplexMatrix {
        debug_assert_eq!(phases.len(), self.n_rows);
        let mut out = self.clone();
        for (i, &p) in phases.iter().enumerate() {
            let z = Complex64::from_polar(1.0, p);
            for j in 0..self.n_cols {
                out.set(i, j, self.get(i, j) * z);
            }
        }
        out
    }

    /// Multiplies column `j` by `e^{i phases[j]}` (returns a copy).
    pub(crate) fn scale_cols_by_phases(&self, phases: &[f64]) -> ComplexMatrix {
        debug_assert_eq!(phases.len(), self.n_cols);
        let mut out = self.clone();
        for (j, &p) in phases.iter().enumerate() {
            let z = Complex64::from_polar(1.0, p);
            for i in 0..self.n_rows {
                out.set(i, j, self.get(i, j) * z);
            }
        }
        out
    }

    /// True when every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Position of the first non-finite entry, if any.
    pub fn first_non_finite(&self) -> Option<(usize, usize)> {
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                let z = self.get(i, j);
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}
