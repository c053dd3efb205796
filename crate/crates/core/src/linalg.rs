//! Small floating-point linear-algebra helpers shared by the isoscalar solver
//! and the brute-force oracle: column-sparse matrices, null spaces by
//! singular-value thresholding, and seeded Gram–Schmidt.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)] // float methods come from here when std is absent
use num_traits::Float;

/// Singular values at or below this fraction of the largest one are treated
/// as zero when extracting null spaces.
pub const NULL_SPACE_REL_TOL: f64 = 1e-8;

/// A real matrix stored column by column as `(row, value)` lists.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SparseColumns {
    /// Number of rows.
    pub nrows: usize,
    /// Nonzero entries of each column.
    pub cols: Vec<Vec<(usize, f64)>>,
}

impl SparseColumns {
    /// An all-zero `nrows × ncols` matrix.
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            cols: vec![Vec::new(); ncols],
        }
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.nrows];
        for (c, col) in self.cols.iter().enumerate() {
            let x = v[c];
            if x != 0.0 {
                for &(r, a) in col {
                    out[r] += a * x;
                }
            }
        }
        out
    }

    /// Entry `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.cols[col]
            .iter()
            .filter(|(r, _)| *r == row)
            .map(|(_, a)| *a)
            .sum()
    }

    /// Dense copy.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols());
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, a) in col {
                m[(r, c)] += a;
            }
        }
        m
    }

    /// Transpose.
    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols(), self.nrows);
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, a) in col {
                t.cols[r].push((c, a));
            }
        }
        t
    }
}

/// Orthonormal basis (as columns) of the null space of `m`.
///
/// Singular values `σ ≤ rel_tol · σ_max` count as zero.  Wide matrices are
/// padded with zero rows so the decomposition yields a full right basis.
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = m.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let rows = m.nrows().max(n);
    let mut a = DMatrix::zeros(rows, n);
    a.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cut = if smax > 0.0 { rel_tol * smax } else { 1.0 };
    let cols: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= cut)
        .map(|(k, _)| vt.row(k).transpose())
        .collect();
    if cols.is_empty() {
        return DMatrix::zeros(n, 0);
    }
    DMatrix::from_columns(&cols)
}

/// Gram–Schmidt with one re-orthogonalisation pass: append `v` to the
/// orthonormal set `basis` if its residual norm exceeds `min_norm`.
pub fn push_orthonormal(basis: &mut Vec<DVector<f64>>, v: &DVector<f64>, min_norm: f64) -> bool {
    let mut r = v.clone();
    for _ in 0..2 {
        for b in basis.iter() {
            let c = b.dot(&r);
            r.axpy(-c, b, 1.0);
        }
    }
    let n = r.norm();
    if n > min_norm {
        basis.push(r / n);
        true
    } else {
        false
    }
}

/// Orthonormal basis of the column space of `space` (assumed orthonormal)
/// chosen by projecting `seeds` into it in order and orthonormalising the
/// projections, skipping those that are (numerically) dependent.
pub fn seeded_basis<I>(space: &DMatrix<f64>, seeds: I) -> Vec<DVector<f64>>
where
    I: IntoIterator<Item = DVector<f64>>,
{
    let target = space.ncols();
    let mut out = Vec::with_capacity(target);
    for seed in seeds {
        if out.len() == target {
            break;
        }
        let proj = space * (space.transpose() * &seed);
        push_orthonormal(&mut out, &proj, 1e-6);
    }
    out
}

/// Largest absolute entry of a matrix (zero for an empty one).
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}
