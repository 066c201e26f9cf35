//! Small dense linear algebra: a row-major matrix and a one-sided Jacobi SVD.
//!
//! Matrices here are similarity kernels and term-by-caption tables of at most
//! a few dozen rows, so the implementation favours accuracy and simplicity
//! over blocking or cache tricks.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use libm::{fabs, sqrt};

use crate::{Error, Result};

/// Rotation threshold relative to the column norms.
const ROTATION_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Input(alloc::format!("matrix shape {rows}x{cols} has a zero side")));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: bad.len() });
        }
        Self::from_row_major(rows.len(), cols, rows.concat())
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> Self {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| c * x).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|x| x * x).sum())
    }

    fn column_dot(&self, p: usize, q: usize) -> f64 {
        (0..self.rows).map(|i| self[(i, p)] * self[(i, q)]).sum()
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Thin SVD `A = U * diag(S) * Vt` with `U: m x r`, `Vt: r x n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    pub u: DenseMatrix,
    pub s: Vec<f64>,
    pub vt: DenseMatrix,
}

impl SvdResult {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    /// `U * diag(S) * Vt`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let mut us = self.u.clone();
        for i in 0..us.rows() {
            for (j, s) in self.s.iter().enumerate() {
                us[(i, j)] *= s;
            }
        }
        us.matmul(&self.vt).expect("shapes agree")
    }

    /// Keeps the leading `k` triplets.
    pub fn truncate(mut self, k: usize) -> Self {
        let k = k.min(self.s.len());
        let m = self.u.rows();
        let n = self.vt.cols();
        let mut u = DenseMatrix::zeros(m, k);
        for i in 0..m {
            for j in 0..k {
                u[(i, j)] = self.u[(i, j)];
            }
        }
        self.s.truncate(k);
        let vt = DenseMatrix { rows: k, cols: n, data: self.vt.data[..k * n].to_vec() };
        SvdResult { u, s: self.s, vt }
    }
}

/// Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
///
/// Wide matrices are decomposed through their transpose. Singular values come
/// back non-increasing, and the first nonzero entry of every `U` column is
/// non-negative.
pub fn svd(a: &DenseMatrix) -> Result<SvdResult> {
    if a.rows == 0 || a.cols == 0 {
        return Err(Error::Input(alloc::format!("matrix shape {}x{} has a zero side", a.rows, a.cols)));
    }
    if a.data.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    if a.rows < a.cols {
        let t = svd_tall(&a.transpose());
        // A^T = U' S V'^T  =>  A = V' S U'^T
        let mut out = SvdResult { u: t.vt.transpose(), s: t.s, vt: t.u.transpose() };
        fix_signs(&mut out);
        return Ok(out);
    }
    let mut out = svd_tall(a);
    fix_signs(&mut out);
    Ok(out)
}

/// SVD keeping at most the top `k` singular triplets.
pub fn truncated_svd(a: &DenseMatrix, k: usize) -> Result<SvdResult> {
    if k == 0 {
        return Err(Error::Input("truncation rank must be at least 1".into()));
    }
    Ok(svd(a)?.truncate(k))
}

/// Requires `rows >= cols`.
fn svd_tall(a: &DenseMatrix) -> SvdResult {
    let m = a.rows;
    let n = a.cols;
    let mut w = a.clone();
    let mut v = DenseMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha = w.column_dot(p, p);
                let beta = w.column_dot(q, q);
                let gamma = w.column_dot(p, q);
                if gamma == 0.0 || fabs(gamma) <= ROTATION_TOL * sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (fabs(zeta) + sqrt(1.0 + zeta * zeta));
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = c * t;
                rotate_columns(&mut w, p, q, c, s);
                rotate_columns(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| sqrt(w.column_dot(j, j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let scale = norms.iter().copied().fold(0.0, f64::max);
    let negligible = scale * f64::EPSILON * (m.max(n) as f64);

    let mut u = DenseMatrix::zeros(m, n);
    let mut s = Vec::with_capacity(n);
    let mut vt = DenseMatrix::zeros(n, n);
    let mut filled = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        for k in 0..n {
            vt[(dst, k)] = v[(k, src)];
        }
        if sigma > negligible && sigma > 0.0 {
            for i in 0..m {
                u[(i, dst)] = w[(i, src)] / sigma;
            }
            s.push(sigma);
            filled.push(dst);
        } else {
            s.push(0.0);
        }
    }
    complete_basis(&mut u, &filled);
    SvdResult { u, s, vt }
}

fn rotate_columns(m: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..m.rows {
        let xp = m[(i, p)];
        let xq = m[(i, q)];
        m[(i, p)] = c * xp - s * xq;
        m[(i, q)] = s * xp + c * xq;
    }
}

/// Fills the columns of `u` not listed in `filled` with unit vectors
/// orthogonal to every other column (Gram-Schmidt against the standard basis).
fn complete_basis(u: &mut DenseMatrix, filled: &[usize]) {
    let m = u.rows;
    let mut basis: Vec<usize> = filled.to_vec();
    let mut candidate = 0;
    for col in 0..u.cols {
        if filled.contains(&col) {
            continue;
        }
        while candidate < m {
            let mut x = vec![0.0; m];
            x[candidate] = 1.0;
            candidate += 1;
            // two passes for numerical orthogonality
            for _ in 0..2 {
                for &b in &basis {
                    let d: f64 = (0..m).map(|i| u[(i, b)] * x[i]).sum();
                    for (i, xi) in x.iter_mut().enumerate() {
                        *xi -= d * u[(i, b)];
                    }
                }
            }
            let norm = sqrt(x.iter().map(|v| v * v).sum());
            if norm > 1e-6 {
                for (i, xi) in x.iter().enumerate() {
                    u[(i, col)] = xi / norm;
                }
                basis.push(col);
                break;
            }
        }
    }
}

fn fix_signs(out: &mut SvdResult) {
    for j in 0..out.u.cols {
        let first = (0..out.u.rows).map(|i| out.u[(i, j)]).find(|&x| x != 0.0);
        if first.is_some_and(|x| x < 0.0) {
            for i in 0..out.u.rows {
                out.u[(i, j)] = -out.u[(i, j)];
            }
            for k in 0..out.vt.cols {
                out.vt[(j, k)] = -out.vt[(j, k)];
            }
        }
    }
}
