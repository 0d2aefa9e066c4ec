//! Structure-constant algebras: products, plus/minus decomposition, change
//! of basis, and basis-invariant subspace dimensions.
//!
//! Convention: `c(i, j, k)` is the coefficient of `e_k` in `e_i * e_j`
//! (0-indexed).  A change of basis takes a matrix whose *row* i lists the
//! new basis vector `E_i` in the old basis, matching the tuple notation
//! `(t e1 + e2 - e3, ...)` used throughout the catalog.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct AlgebraDef {
    pub name: String,
    pub dim: usize,
    pub params: Vec<String>,
    c: Vec<Scalar>,
}

impl AlgebraDef {
    pub fn new(name: &str, dim: usize, params: Vec<String>, c: Vec<Scalar>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::ShapeError(format!(
                "algebra `{name}`: expected {} structure constants, got {}",
                dim * dim * dim,
                c.len()
            )));
        }
        for s in &c {
            for v in s.vars() {
                if !params.contains(&v) {
                    return Err(Error::ShapeError(format!(
                        "algebra `{name}`: constant uses undeclared parameter `{v}`"
                    )));
                }
            }
        }
        Ok(AlgebraDef {
            name: name.to_string(),
            dim,
            params,
            c,
        })
    }

    pub fn zero_algebra(name: &str, dim: usize) -> Self {
        AlgebraDef {
            name: name.to_string(),
            dim,
            params: Vec::new(),
            c: vec![Scalar::zero(); dim * dim * dim],
        }
    }

    /// Test helper: build from sparse (i, j, k, coefficient) triples, 1-indexed.
    pub fn from_triples(
        name: &str,
        dim: usize,
        params: &[&str],
        entries: &[(usize, usize, usize, &str)],
    ) -> Result<Self> {
        let params: Vec<String> = params.iter().map(|s| s.to_string()).collect();
        let mut c = vec![Scalar::zero(); dim * dim * dim];
        for &(i, j, k, expr) in entries {
            let s = Scalar::parse_with_vars(expr, Some(&params))
                .map_err(|e| Error::ShapeError(format!("bad coefficient `{expr}`: {e}")))?;
            c[((i - 1) * dim + (j - 1)) * dim + (k - 1)] = s;
        }
        AlgebraDef::new(name, dim, params, c)
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn set_c(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        self.c[(i * self.dim + j) * self.dim + k] = v;
    }

    pub fn constants(&self) -> &[Scalar] {
        &self.c
    }

    /// Bilinear product of coordinate vectors.
    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        let n = self.dim;
        if x.len() != n || y.len() != n {
            return Err(Error::ShapeError(format!(
                "product in dim {n} got vectors of length {} and {}",
                x.len(),
                y.len()
            )));
        }
        let mut out = vec![Scalar::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let xy = x[i].mul(&y[j]);
                for k in 0..n {
                    let ck = self.c(i, j, k);
                    if !ck.is_zero() {
                        out[k] = out[k].add(&xy.mul(ck));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product of two basis vectors as a coordinate vector.
    pub fn basis_product(&self, i: usize, j: usize) -> Vec<Scalar> {
        (0..self.dim).map(|k| self.c(i, j, k).clone()).collect()
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| {
            (i + 1..n).all(|j| (0..n).all(|k| self.c(i, j, k).eq_scalar(self.c(j, i, k))))
        })
    }

    pub fn is_anticommutative(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| {
            (i..n).all(|j| (0..n).all(|k| self.c(i, j, k).eq_scalar(&self.c(j, i, k).neg())))
        })
    }

    /// Split into symmetric and antisymmetric parts.
    pub fn split(&self) -> PairAlgebraDef {
        let n = self.dim;
        let half = Scalar::parse("1/2").unwrap();
        let mut circ = vec![Scalar::zero(); n * n * n];
        let mut bracket = vec![Scalar::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let idx = (i * n + j) * n + k;
                    circ[idx] = half.mul(&self.c(i, j, k).add(self.c(j, i, k)));
                    bracket[idx] = half.mul(&self.c(i, j, k).sub(self.c(j, i, k)));
                }
            }
        }
        PairAlgebraDef {
            name: self.name.clone(),
            dim: n,
            params: self.params.clone(),
            circ: AlgebraDef {
                name: format!("{}+", self.name),
                dim: n,
                params: self.params.clone(),
                c: circ,
            },
            bracket: AlgebraDef {
                name: format!("{}-", self.name),
                dim: n,
                params: self.params.clone(),
                c: bracket,
            },
        }
    }

    /// Rewrite the same multiplication in the basis whose rows are given by
    /// `e_rows` (row i = E_i in the old basis).
    pub fn change_of_basis(&self, e_rows: &Matrix) -> Result<AlgebraDef> {
        let n = self.dim;
        if e_rows.nrows() != n || e_rows.ncols() != n {
            return Err(Error::ShapeError("basis matrix shape".into()));
        }
        // coordinates w.r.t. the rows of E: v = E^T x  =>  x = (E^-1)^T v
        let et_inv = linalg::invert(e_rows)?.transpose();
        let mut params = self.params.clone();
        for i in 0..n {
            for j in 0..n {
                for v in e_rows.get(i, j).vars() {
                    if !params.contains(&v) {
                        params.push(v);
                    }
                }
            }
        }
        params.sort();
        params.dedup();
        let mut c = vec![Scalar::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = self.product(&e_rows.row(i), &e_rows.row(j))?;
                let coords = et_inv.mul_vec(&prod)?;
                for (k, x) in coords.into_iter().enumerate() {
                    c[(i * n + j) * n + k] = x;
                }
            }
        }
        Ok(AlgebraDef {
            name: self.name.clone(),
            dim: n,
            params,
            c,
        })
    }

    /// Exact parameter substitution.
    pub fn substitute(&self, bindings: &BTreeMap<String, Scalar>) -> Result<AlgebraDef> {
        let c: Result<Vec<Scalar>> = self.c.iter().map(|s| s.substitute(bindings)).collect();
        let c = c?;
        let mut params: Vec<String> = Vec::new();
        for s in &c {
            for v in s.vars() {
                if !params.contains(&v) {
                    params.push(v);
                }
            }
        }
        params.sort();
        Ok(AlgebraDef {
            name: self.name.clone(),
            dim: self.dim,
            params,
            c,
        })
    }

    /// Same multiplication table (names ignored).
    pub fn same_table(&self, other: &AlgebraDef) -> bool {
        self.dim == other.dim && self.c.iter().zip(&other.c).all(|(a, b)| a.eq_scalar(b))
    }

    /// Basis-invariant subspace data.
    pub fn subspace_products(&self) -> SubspaceInfo {
        let n = self.dim;
        let mut sq_rows = Vec::new();
        for i in 0..n {
            for j in 0..n {
                sq_rows.push(self.basis_product(i, j));
            }
        }
        let dim_square = linalg::rank(&Matrix::from_rows(sq_rows.clone()).unwrap());
        let mut cube_rows = Vec::new();
        for r in &sq_rows {
            for l in 0..n {
                let mut el = vec![Scalar::zero(); n];
                el[l] = Scalar::one();
                cube_rows.push(self.product(r, &el).unwrap());
                cube_rows.push(self.product(&el, r).unwrap());
            }
        }
        let dim_cube = linalg::rank(&Matrix::from_rows(cube_rows).unwrap());
        // left annihilator: rows indexed by (j, k), columns by i
        let mut left = Matrix::zero(n * n, n);
        let mut right = Matrix::zero(n * n, n);
        for j in 0..n {
            for k in 0..n {
                for i in 0..n {
                    left.set(j * n + k, i, self.c(i, j, k).clone());
                    right.set(j * n + k, i, self.c(j, i, k).clone());
                }
            }
        }
        SubspaceInfo {
            dim_square,
            dim_cube,
            dim_left_ann: linalg::kernel(&left).generic_dimension,
            dim_right_ann: linalg::kernel(&right).generic_dimension,
            commutative: self.is_commutative(),
            anticommutative: self.is_anticommutative(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceInfo {
    pub dim_square: usize,
    pub dim_cube: usize,
    pub dim_left_ann: usize,
    pub dim_right_ann: usize,
    pub commutative: bool,
    pub anticommutative: bool,
}

/// Two-product algebra (commutative circle product, anticommutative bracket).
#[derive(Debug, Clone)]
pub struct PairAlgebraDef {
    pub name: String,
    pub dim: usize,
    pub params: Vec<String>,
    pub circ: AlgebraDef,
    pub bracket: AlgebraDef,
}

impl PairAlgebraDef {
    pub fn new(name: &str, circ: AlgebraDef, bracket: AlgebraDef) -> Result<Self> {
        if circ.dim != bracket.dim {
            return Err(Error::InvalidPair("dimension mismatch".into()));
        }
        if !circ.is_commutative() {
            return Err(Error::InvalidPair(format!(
                "`{name}`: circle product is not symmetric"
            )));
        }
        if !bracket.is_anticommutative() {
            return Err(Error::InvalidPair(format!(
                "`{name}`: bracket is not antisymmetric"
            )));
        }
        let mut params = circ.params.clone();
        params.extend(bracket.params.iter().cloned());
        params.sort();
        params.dedup();
        Ok(PairAlgebraDef {
            name: name.to_string(),
            dim: circ.dim,
            params,
            circ,
            bracket,
        })
    }

    /// Recombine into the one-product algebra x*y = x o y + [x, y].
    pub fn fuse(&self) -> AlgebraDef {
        let n = self.dim;
        let mut c = vec![Scalar::zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    c[(i * n + j) * n + k] = self.circ.c(i, j, k).add(self.bracket.c(i, j, k));
                }
            }
        }
        AlgebraDef {
            name: self.name.clone(),
            dim: n,
            params: self.params.clone(),
            c,
        }
    }
}
