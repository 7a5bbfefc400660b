//! Dense row-major matrices and the elimination kernels used throughout the
//! crate (products, rank, kernel bases).

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row-major storage, rejecting bad lengths and
    /// non-finite entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("matrix".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a list of rows. An empty list yields a `0 x cols`
    /// matrix, so the column count has to be given explicitly.
    pub fn from_rows(cols: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(rows.len(), cols, data)
    }

    pub fn column(values: &[f64]) -> Self {
        Self {
            rows: values.len(),
            cols: 1,
            data: values.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        mat_mul(self, other)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "adding {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, factor: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// Induced infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        norm_inf(&self.data)
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(|v| *v == 0.0)
    }

    /// Determinant by partial-pivoting LU; intended for the small square
    /// matrices of hand-sized examples.
    pub fn determinant(&self) -> Result<f64> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1.0;
        for c in 0..n {
            let p = (c..n)
                .max_by(|&i, &j| a[(i, c)].abs().total_cmp(&a[(j, c)].abs()))
                .unwrap_or(c);
            if a[(p, c)] == 0.0 {
                return Ok(0.0);
            }
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a[(c, c)];
            det *= piv;
            for i in c + 1..n {
                let f = a[(i, c)] / piv;
                if f != 0.0 {
                    for j in c..n {
                        let v = a[(c, j)];
                        a[(i, j)] -= f * v;
                    }
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{:?}", self.to_rows())
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for l in 0..a.cols {
            let f = a[(i, l)];
            if f == 0.0 {
                continue;
            }
            let brow = b.row(l);
            let orow = out.row_mut(i);
            for (o, bv) in orow.iter_mut().zip(brow) {
                *o += f * bv;
            }
        }
    }
    Ok(out)
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Gauss-Jordan elimination with partial pivoting. A candidate pivot is
/// accepted only if it exceeds `tol` times the largest entry of its original
/// row, so rows that cancel down to round-off are treated as zero.
pub fn rref(a: &Matrix, tol: f64) -> Rref {
    let (m, n) = a.shape();
    let mut r = a.clone();
    let mut row_scale: Vec<f64> = (0..m).map(|i| norm_inf(a.row(i))).collect();
    let mut pivots = Vec::new();
    let mut lead = 0;
    for c in 0..n {
        if lead == m {
            break;
        }
        let best = (lead..m)
            .filter(|&i| row_scale[i] > 0.0)
            .max_by(|&i, &j| r[(i, c)].abs().total_cmp(&r[(j, c)].abs()));
        let Some(p) = best else { break };
        if r[(p, c)].abs() <= tol * row_scale[p] {
            // Zero out the column remnant so later columns do not see noise.
            for i in lead..m {
                if r[(i, c)].abs() <= tol * row_scale[i] {
                    r[(i, c)] = 0.0;
                }
            }
            continue;
        }
        r.swap_rows(p, lead);
        row_scale.swap(p, lead);
        let piv = r[(lead, c)];
        for v in r.row_mut(lead) {
            *v /= piv;
        }
        let pivot_row = r.row(lead).to_vec();
        for i in 0..m {
            if i == lead {
                continue;
            }
            let f = r[(i, c)];
            if f != 0.0 {
                for (v, pv) in r.row_mut(i).iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                r[(i, c)] = 0.0;
            }
        }
        pivots.push(c);
        lead += 1;
    }
    Rref { reduced: r, pivots }
}

pub fn rank(a: &Matrix, tol: f64) -> usize {
    rref(a, tol).rank()
}

/// Basis of `{v : A v = 0}` read off the reduced row echelon form: one
/// vector per free column, scaled to unit infinity norm. Ordered by free
/// column index. A matrix with zero rows yields the standard basis.
pub fn rref_kernel_basis(a: &Matrix, tol: f64) -> Vec<Vec<f64>> {
    let n = a.cols();
    let Rref { reduced, pivots } = rref(a, tol);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0.0; n];
        v[f] = 1.0;
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -reduced[(row, f)];
        }
        let scale = norm_inf(&v);
        for x in &mut v {
            *x /= scale;
        }
        basis.push(v);
    }
    basis
}
