//! Dense matrices over a runtime-configured finite field.
//!
//! All arithmetic is exact; there is no rounding concept. Matrices do not
//! carry their field, so every arithmetic operation takes a [`Field`]
//! explicitly.

use crate::error::{Error, Result};
use crate::field::{Field, Symbol};

/// Row-major dense matrix of field symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Symbol>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from explicit rows. Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Symbol>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged row lengths");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// A 1-by-n matrix wrapping a row vector.
    pub fn from_row(row: &[Symbol]) -> Self {
        Matrix {
            rows: 1,
            cols: row.len(),
            data: row.to_vec(),
        }
    }

    /// An n-by-1 matrix wrapping a column vector.
    pub fn from_col(col: &[Symbol]) -> Self {
        Matrix {
            rows: col.len(),
            cols: 1,
            data: col.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Symbol {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Symbol) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Symbol] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[Symbol] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// Copy of the column range `[c0, c1)`.
    pub fn columns(&self, c0: usize, c1: usize) -> Matrix {
        assert!(c0 <= c1 && c1 <= self.cols);
        let mut out = Matrix::zeros(self.rows, c1 - c0);
        for r in 0..self.rows {
            for c in c0..c1 {
                out.set(r, c - c0, self.get(r, c));
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Matrix, f: &Field) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(r, t);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = f.add(out.get(r, c), f.mul(a, rhs.get(t, c)));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Matrix, f: &Field) -> Result<Matrix> {
        self.zip(rhs, |a, b| f.add(a, b))
    }

    pub fn sub(&self, rhs: &Matrix, f: &Field) -> Result<Matrix> {
        self.zip(rhs, |a, b| f.sub(a, b))
    }

    pub fn scale(&self, s: Symbol, f: &Field) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f.mul(v, s)).collect(),
        }
    }

    fn zip(&self, rhs: &Matrix, op: impl Fn(Symbol, Symbol) -> Symbol) -> Result<Matrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "cannot combine {}x{} with {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: Symbol, f: &Field) {
        for c in 0..self.cols {
            let v = f.mul(self.get(r, c), s);
            self.set(r, c, v);
        }
    }

    /// row[dst] -= s * row[src]
    fn submul_row(&mut self, dst: usize, src: usize, s: Symbol, f: &Field) {
        for c in 0..self.cols {
            let v = f.sub(self.get(dst, c), f.mul(s, self.get(src, c)));
            self.set(dst, c, v);
        }
    }
}

/// Dot product of two equally long symbol slices.
pub fn dot(f: &Field, a: &[Symbol], b: &[Symbol]) -> Symbol {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Generalized Vandermonde matrix: entry (i, j) is `points[i]^(c + j + 1)`
/// for 0-based j, i.e. row i holds the consecutive powers
/// `e_i^(c+1), ..., e_i^(c+cols)`.
///
/// The points must be distinct and nonzero; any square matrix built this way
/// is then invertible.
pub fn gv_matrix(f: &Field, points: &[Symbol], c: u64, cols: usize) -> Result<Matrix> {
    for (i, &p) in points.iter().enumerate() {
        if p == 0 {
            return Err(Error::Input(format!("evaluation point {} is zero", i + 1)));
        }
        if !f.contains(p) {
            return Err(Error::Input(format!(
                "evaluation point {p} outside the field"
            )));
        }
        if points[..i].contains(&p) {
            return Err(Error::Input(format!("repeated evaluation point {p}")));
        }
    }
    let mut m = Matrix::zeros(points.len(), cols);
    for (i, &p) in points.iter().enumerate() {
        let mut v = f.pow(p, c + 1);
        for j in 0..cols {
            m.set(i, j, v);
            v = f.mul(v, p);
        }
    }
    Ok(m)
}

/// Solve A·X = B exactly by Gauss-Jordan elimination with first-nonzero
/// pivoting. A must be square and nonsingular; the error reports the rank
/// otherwise.
pub fn solve_linear(f: &Field, a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Dimension(format!(
            "coefficient matrix is {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if b.rows() != n {
        return Err(Error::Dimension(format!(
            "right-hand side has {} rows, expected {n}",
            b.rows()
        )));
    }
    let mut a = a.clone();
    let mut x = b.clone();
    let mut rank = 0;
    for col in 0..n {
        // First nonzero entry below the already-fixed rows; there is no
        // magnitude to compare in a finite field.
        let Some(p) = (rank..n).find(|&r| a.get(r, col) != 0) else {
            continue;
        };
        a.swap_rows(rank, p);
        x.swap_rows(rank, p);
        let inv = f.inv(a.get(rank, col))?;
        a.scale_row(rank, inv, f);
        x.scale_row(rank, inv, f);
        for r in 0..n {
            if r != rank {
                let s = a.get(r, col);
                if s != 0 {
                    a.submul_row(r, rank, s, f);
                    x.submul_row(r, rank, s, f);
                }
            }
        }
        rank += 1;
    }
    if rank < n {
        return Err(Error::Singular { rank, dim: n });
    }
    Ok(x)
}

/// Matrix inverse via [`solve_linear`] against the identity.
pub fn invert(f: &Field, a: &Matrix) -> Result<Matrix> {
    solve_linear(f, a, &Matrix::identity(a.rows()))
}
