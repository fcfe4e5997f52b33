//! Dense matrices over the Gaussian rationals.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::scalar::{int, rat, Scalar};
use super::ExactError;

/// Dense row-major matrix with exact entries. Structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Mat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::new(rows, cols, vec![Scalar::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds a matrix from integer entries, row by row.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::from_fn(r, c, |i, j| int(rows[i][j]))
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn from_diag(entries: &[Scalar]) -> Self {
        let n = entries.len();
        Mat::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { Scalar::zero() })
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(ambient: usize, cols: &[Vec<Scalar>]) -> Self {
        assert!(cols.iter().all(|c| c.len() == ambient), "column length mismatch");
        Mat::from_fn(ambient, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.data[i * self.cols + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    /// Entrywise complex conjugate.
    pub fn conj_entries(&self) -> Mat {
        self.map(|s| s.conj())
    }

    /// Conjugate transpose `A^H`.
    pub fn dagger(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).conj())
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        self.map(|x| x * s)
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square(), "trace of non-square matrix");
        let mut t = Scalar::zero();
        for i in 0..self.rows {
            t += self.at(i, i).clone();
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, entry) in v.iter().enumerate() {
                    acc += self.at(i, j) * entry;
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: usize) -> Mat {
        assert!(self.is_square(), "power of non-square matrix");
        let mut acc = Mat::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Horizontal concatenation.
    pub fn hstack(blocks: &[&Mat]) -> Mat {
        assert!(!blocks.is_empty(), "hstack of nothing");
        let rows = blocks[0].rows;
        assert!(blocks.iter().all(|b| b.rows == rows), "row count mismatch");
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, offset + j, b.at(i, j).clone());
                }
            }
            offset += b.cols;
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(blocks: &[&Mat]) -> Mat {
        assert!(!blocks.is_empty(), "vstack of nothing");
        let cols = blocks[0].cols;
        assert!(blocks.iter().all(|b| b.cols == cols), "column count mismatch");
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..cols {
                    out.set(offset + i, j, b.at(i, j).clone());
                }
            }
            offset += b.rows;
        }
        out
    }

    /// The submatrix of the given column range.
    pub fn column_range(&self, start: usize, end: usize) -> Mat {
        assert!(start <= end && end <= self.cols, "column range out of bounds");
        Mat::from_fn(self.rows, end - start, |i, j| self.at(i, start + j).clone())
    }

    /// The submatrix of the given row range.
    pub fn row_range(&self, start: usize, end: usize) -> Mat {
        assert!(start <= end && end <= self.rows, "row range out of bounds");
        Mat::from_fn(end - start, self.cols, |i, j| self.at(start + i, j).clone())
    }

    /// Flattens the matrix into a single vector, column by column.
    pub fn vec_columns(&self) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.at(i, j).clone());
            }
        }
        out
    }

    /// Inverse of [`Mat::vec_columns`].
    pub fn from_vec_columns(rows: usize, cols: usize, v: &[Scalar]) -> Mat {
        assert_eq!(v.len(), rows * cols, "vector length mismatch");
        Mat::from_fn(rows, cols, |i, j| v[j * rows + i].clone())
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch in add");
        Mat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + rhs.at(i, j))
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "shape mismatch in sub");
        Mat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - rhs.at(i, j))
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.map(|s| -s.clone())
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        Mat::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.cols {
                acc += self.at(i, k) * rhs.at(k, j);
            }
            acc
        })
    }
}

/// The commutator `[a, b] = ab - ba`.
pub fn commutator(a: &Mat, b: &Mat) -> Mat {
    &(a * b) - &(b * a)
}

/// Exact exponential `exp(scale * A)` of a nilpotent matrix, as the finite
/// sum of the first `dim` terms. Fails if `A^dim != 0`.
pub fn nilpotent_exp(a: &Mat, scale: &Scalar) -> Result<Mat, ExactError> {
    assert!(a.is_square(), "exponential of non-square matrix");
    let n = a.rows();
    let mut sum = Mat::identity(n);
    let mut term = Mat::identity(n);
    let mut factorial = rat(1, 1);
    let mut scale_pow = Scalar::one();
    for k in 1..=n {
        term = &term * a;
        if term.is_zero() {
            return Ok(sum);
        }
        if k == n {
            return Err(ExactError::NotNilpotent);
        }
        factorial *= rat(k as i64, 1);
        scale_pow *= scale;
        let coeff = Scalar::new(rat(1, 1) / factorial.clone(), rat(0, 1)) * &scale_pow;
        sum = &sum + &term.scale(&coeff);
    }
    Ok(sum)
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let s = self.at(i, j);
                if s.im.is_zero() {
                    write!(f, "{} ", s.re)?;
                } else {
                    write!(f, "{}+{}i ", s.re, s.im)?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
