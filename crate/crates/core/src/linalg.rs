//! Exact linear algebra over Q(params): elimination, kernels, inverses.
//!
//! Pivoting is deterministic (first column, first row with a numerator that
//! is nonzero as a polynomial).  Any pivot whose numerator involves
//! parameters is recorded in the exceptional locus: off that locus the
//! computed rank/kernel stays valid, on it a specialization may differ.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::ShapeError("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeError(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                m.set(i, j, acc);
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::ShapeError("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    acc = acc.add(&self.get(i, j).mul(&v[j]));
                }
                acc
            })
            .collect())
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mul(s)).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeError("matrix addition".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn eq_matrix(&self, other: &Matrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.eq_scalar(b))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Basis of a solution space plus the parameter conditions assumed while
/// pivoting.
#[derive(Debug, Clone)]
pub struct SolutionSpace {
    pub basis: Vec<Vec<Scalar>>,
    pub generic_dimension: usize,
    pub exceptional_locus: Vec<Scalar>,
}

struct Rref {
    mat: Matrix,
    /// pivot column of each pivot row, in row order
    pivots: Vec<usize>,
    locus: Vec<Scalar>,
    /// determinant scale: product of pivots before normalization, with
    /// row-swap signs (meaningful for square input)
    det: Scalar,
}

/// Reduced row echelon form over the fraction field.
fn rref(mut m: Matrix) -> Rref {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut locus: Vec<Scalar> = Vec::new();
    let mut det = Scalar::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut pivot_row = None;
        for i in r..rows {
            if !m.get(i, c).is_zero() {
                pivot_row = Some(i);
                break;
            }
        }
        let Some(p) = pivot_row else { continue };
        if p != r {
            for j in 0..cols {
                m.data.swap(p * cols + j, r * cols + j);
            }
            det = det.neg();
        }
        let pv = m.get(r, c).clone();
        det = det.mul(&pv);
        if pv.num().as_constant().is_none() {
            if !locus.iter().any(|l| l.eq_scalar(&pv)) {
                locus.push(pv.clone());
            }
        }
        let inv = pv.inv().expect("pivot nonzero");
        for j in c..cols {
            let v = m.get(r, j).mul(&inv);
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || m.get(i, c).is_zero() {
                continue;
            }
            let f = m.get(i, c).clone();
            for j in c..cols {
                let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() < rows.min(cols) || rows != cols {
        // determinant only meaningful for full-rank square input
    }
    Rref {
        mat: m,
        pivots,
        locus,
        det,
    }
}

pub fn rank(m: &Matrix) -> usize {
    rref(m.clone()).pivots.len()
}

/// Determinant via elimination; exact, zero iff identically singular.
pub fn determinant(m: &Matrix) -> Result<Scalar> {
    if m.rows != m.cols {
        return Err(Error::ShapeError("determinant of non-square matrix".into()));
    }
    let e = rref(m.clone());
    if e.pivots.len() < m.rows {
        return Ok(Scalar::zero());
    }
    Ok(e.det)
}

/// Basis of the right null space { v : M v = 0 } over Q(params).
pub fn kernel(m: &Matrix) -> SolutionSpace {
    let e = rref(m.clone());
    let cols = m.cols;
    let pivot_set: Vec<usize> = e.pivots.clone();
    let mut basis = Vec::new();
    for f in 0..cols {
        if pivot_set.contains(&f) {
            continue;
        }
        let mut v = vec![Scalar::zero(); cols];
        v[f] = Scalar::one();
        for (row, &pc) in pivot_set.iter().enumerate() {
            v[pc] = e.mat.get(row, f).neg();
        }
        basis.push(v);
    }
    SolutionSpace {
        generic_dimension: basis.len(),
        basis,
        exceptional_locus: e.locus,
    }
}

/// Exact inverse; fails with the vanishing determinant when M is singular
/// as a matrix over the fraction field.
pub fn invert(m: &Matrix) -> Result<Matrix> {
    if m.rows != m.cols {
        return Err(Error::ShapeError("inverse of non-square matrix".into()));
    }
    let n = m.rows;
    let mut aug = Matrix::zero(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, Scalar::one());
    }
    let e = rref(aug);
    if e.pivots.len() < n || e.pivots.iter().enumerate().any(|(r, &c)| c != r) {
        return Err(Error::SingularMatrix {
            det: determinant(m).map(|d| d.to_string()).unwrap_or_else(|_| "0".into()),
        });
    }
    let mut inv = Matrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, e.mat.get(i, n + j).clone());
        }
    }
    Ok(inv)
}

/// Solve M x = b for square invertible M.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Vec<Scalar>> {
    invert(m)?.mul_vec(b)
}

/// Given a nonzero 1x2 row X, produce an invertible 2x2 matrix A with
/// X A = (1 0), using the two explicit constructions: for X = (a b) with
/// a nonzero take ((1/a, -b), (0, a)); for X = (0 b) take ((0, 1), (1/b, 0)).
pub fn normalize_row(x: &Matrix) -> Result<Matrix> {
    if x.nrows() != 1 || x.ncols() != 2 {
        return Err(Error::ShapeError("normalize_row expects a 1x2 matrix".into()));
    }
    let a = x.get(0, 0).clone();
    let b = x.get(0, 1).clone();
    if !a.is_zero() {
        Matrix::from_rows(vec![
            vec![a.inv()?, b.neg()],
            vec![Scalar::zero(), a.clone()],
        ])
    } else if !b.is_zero() {
        Matrix::from_rows(vec![
            vec![Scalar::zero(), Scalar::one()],
            vec![b.inv()?, Scalar::zero()],
        ])
    } else {
        Err(Error::ZeroVector)
    }
}
