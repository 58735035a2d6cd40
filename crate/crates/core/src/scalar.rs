//! Scalar abstraction over the two arithmetic backends.
//!
//! Every analysis in this crate runs over a coefficient field `R` that is
//! either exact rationals (`BigRational`) or double-precision floats. The
//! [`Coeff`] trait carries the handful of linear-algebra primitives whose
//! implementation genuinely differs between the two: rank, null space,
//! basis canonicalization, and span membership. Exact mode uses fraction-free
//! Gauss-Jordan elimination; float mode uses rank-revealing SVD with a
//! combined absolute/relative singular-value threshold.
//!
//! Canonical form differs by backend and is relied on elsewhere:
//! exact bases are reduced row echelon rows (pivot 1, pivot columns cleared),
//! float bases are orthonormal rows.

use nalgebra::{Complex as NComplex, DMatrix};
use num::{BigInt, BigRational, Complex, Num, ToPrimitive, Zero};
use std::fmt;
use std::ops::Neg;

/// Coefficient field for states, algebra elements, and subspaces.
pub trait Coeff:
    Num + Clone + Neg<Output = Self> + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// True for the exact rational backend. Exact backends ignore tolerances.
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    /// Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Rank of the matrix given as rows (all rows the same length).
    fn rank(rows: &[Vec<Self>], tol_abs: f64, tol_rel: f64) -> usize;

    /// Basis of the right null space `{ x : M x = 0 }`, returned as rows in
    /// canonical form. `ncols` must be supplied because `rows` may be empty.
    fn null_space(rows: &[Vec<Self>], ncols: usize, tol_abs: f64, tol_rel: f64) -> Vec<Vec<Self>>;

    /// Null space at the working relative threshold, plus a stability probe:
    /// `true` when the nullity is identical at the `loose_rel` and
    /// `tight_rel` relative thresholds. Exact backends are always stable.
    /// Float backends answer all three thresholds from a single SVD.
    fn null_space_with_stability(
        rows: &[Vec<Self>],
        ncols: usize,
        tol_rel: f64,
        loose_rel: f64,
        tight_rel: f64,
    ) -> (Vec<Vec<Self>>, bool) {
        let _ = (loose_rel, tight_rel);
        (Self::null_space(rows, ncols, 0.0, tol_rel), true)
    }

    /// Canonical basis of the row span: RREF rows (exact) or orthonormal
    /// rows (float). Zero rows are dropped.
    fn reduce_basis(rows: Vec<Vec<Self>>, tol_abs: f64, tol_rel: f64) -> Vec<Vec<Self>>;

    /// Rank of a complex matrix given as rows.
    fn complex_rank(rows: &[Vec<Complex<Self>>], ncols: usize, tol_abs: f64, tol_rel: f64)
        -> usize;

    /// Residual distance from `v` to the span of `basis`, where `basis` is in
    /// canonical form per [`Coeff::reduce_basis`]. Exact backends return
    /// exactly `0.0` (member) or `1.0` (non-member); float backends return
    /// the Euclidean norm of the component of `v` orthogonal to the span.
    fn span_residual(basis: &[Vec<Self>], v: &[Self]) -> f64;
}

/// Gauss-Jordan elimination to reduced row echelon form, in place.
/// Returns the pivot column indices; zero rows are truncated away.
fn rref_exact(rows: &mut Vec<Vec<BigRational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone();
        for x in rows[r][c..].iter_mut() {
            *x = std::mem::take(x) / inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let sub = f.clone() * rows[r][j].clone();
                    rows[i][j] = std::mem::take(&mut rows[i][j]) - sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Build an nalgebra matrix from rows, padded with zero rows up to `ncols`
/// rows so the SVD exposes a complete set of right singular vectors.
fn padded_matrix(rows: &[Vec<f64>], ncols: usize) -> DMatrix<f64> {
    let nrows = rows.len().max(ncols).max(1);
    let mut m = DMatrix::zeros(nrows, ncols.max(1));
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    m
}

fn svd_threshold(sigma: &[f64], tol_abs: f64, tol_rel: f64) -> f64 {
    let sigma_max = sigma.iter().cloned().fold(0.0_f64, f64::max);
    tol_abs.max(tol_rel * sigma_max)
}

impl Coeff for BigRational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn rank(rows: &[Vec<Self>], _tol_abs: f64, _tol_rel: f64) -> usize {
        let mut m = rows.to_vec();
        rref_exact(&mut m).len()
    }

    fn null_space(
        rows: &[Vec<Self>],
        ncols: usize,
        _tol_abs: f64,
        _tol_rel: f64,
    ) -> Vec<Vec<Self>> {
        let mut m = rows.to_vec();
        let pivots = rref_exact(&mut m);
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; ncols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for f in 0..ncols {
            if is_pivot[f] {
                continue;
            }
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::from_int(1);
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            basis.push(v);
        }
        basis
    }

    fn reduce_basis(mut rows: Vec<Vec<Self>>, _tol_abs: f64, _tol_rel: f64) -> Vec<Vec<Self>> {
        rref_exact(&mut rows);
        rows
    }

    fn complex_rank(
        rows: &[Vec<Complex<Self>>],
        ncols: usize,
        _tol_abs: f64,
        _tol_rel: f64,
    ) -> usize {
        // Forward elimination over the field of Gaussian rationals.
        let mut m = rows.to_vec();
        let mut rank = 0;
        for c in 0..ncols {
            if rank == m.len() {
                break;
            }
            let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank][c].clone();
            for i in rank + 1..m.len() {
                if !m[i][c].is_zero() {
                    let f = m[i][c].clone() / pivot.clone();
                    for j in c..ncols {
                        let sub = f.clone() * m[rank][j].clone();
                        m[i][j] = m[i][j].clone() - sub;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn span_residual(basis: &[Vec<Self>], v: &[Self]) -> f64 {
        let mut w = v.to_vec();
        for row in basis {
            let Some(p) = row.iter().position(|x| !x.is_zero()) else {
                continue;
            };
            if !w[p].is_zero() {
                let f = w[p].clone();
                for (wj, rj) in w.iter_mut().zip(row) {
                    let sub = f.clone() * rj.clone();
                    *wj = std::mem::take(wj) - sub;
                }
            }
        }
        if w.iter().all(Zero::is_zero) {
            0.0
        } else {
            1.0
        }
    }
}

impl Coeff for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn rank(rows: &[Vec<Self>], tol_abs: f64, tol_rel: f64) -> usize {
        if rows.is_empty() {
            return 0;
        }
        let m = padded_matrix(rows, rows[0].len());
        let sigma = m.singular_values();
        let thresh = svd_threshold(sigma.as_slice(), tol_abs, tol_rel);
        sigma.iter().filter(|&&s| s > thresh).count()
    }

    fn null_space(rows: &[Vec<Self>], ncols: usize, tol_abs: f64, tol_rel: f64) -> Vec<Vec<Self>> {
        if ncols == 0 {
            return Vec::new();
        }
        let m = padded_matrix(rows, ncols);
        let svd = m.svd(false, true);
        let v_t = svd.v_t.expect("svd requested v_t");
        let sigma = svd.singular_values;
        let thresh = svd_threshold(sigma.as_slice(), tol_abs, tol_rel);
        let mut basis = Vec::new();
        for i in 0..v_t.nrows() {
            if sigma[i] <= thresh {
                basis.push(v_t.row(i).iter().cloned().collect());
            }
        }
        basis
    }

    fn null_space_with_stability(
        rows: &[Vec<Self>],
        ncols: usize,
        tol_rel: f64,
        loose_rel: f64,
        tight_rel: f64,
    ) -> (Vec<Vec<Self>>, bool) {
        if ncols == 0 {
            return (Vec::new(), true);
        }
        let m = padded_matrix(rows, ncols);
        let svd = m.svd(false, true);
        let v_t = svd.v_t.expect("svd requested v_t");
        let sigma = svd.singular_values;
        let nullity_at = |rel: f64| {
            let thresh = svd_threshold(sigma.as_slice(), 0.0, rel);
            sigma.iter().filter(|&&s| s <= thresh).count()
        };
        let thresh = svd_threshold(sigma.as_slice(), 0.0, tol_rel);
        let mut basis = Vec::new();
        for i in 0..v_t.nrows() {
            if sigma[i] <= thresh {
                basis.push(v_t.row(i).iter().cloned().collect());
            }
        }
        let stable = nullity_at(loose_rel) == nullity_at(tight_rel);
        (basis, stable)
    }

    fn reduce_basis(rows: Vec<Vec<Self>>, tol_abs: f64, tol_rel: f64) -> Vec<Vec<Self>> {
        if rows.is_empty() {
            return rows;
        }
        let ncols = rows[0].len();
        let mut m = DMatrix::zeros(rows.len(), ncols);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        let svd = m.svd(false, true);
        let v_t = svd.v_t.expect("svd requested v_t");
        let sigma = svd.singular_values;
        let thresh = svd_threshold(sigma.as_slice(), tol_abs, tol_rel);
        let mut basis = Vec::new();
        for i in 0..sigma.len().min(v_t.nrows()) {
            if sigma[i] > thresh {
                basis.push(v_t.row(i).iter().cloned().collect());
            }
        }
        basis
    }

    fn complex_rank(
        rows: &[Vec<Complex<Self>>],
        ncols: usize,
        tol_abs: f64,
        tol_rel: f64,
    ) -> usize {
        if rows.is_empty() || ncols == 0 {
            return 0;
        }
        let mut m = DMatrix::<NComplex<f64>>::zeros(rows.len(), ncols);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = NComplex::new(v.re, v.im);
            }
        }
        let sigma = m.singular_values();
        let thresh = svd_threshold(sigma.as_slice(), tol_abs, tol_rel);
        sigma.iter().filter(|&&s| s > thresh).count()
    }

    fn span_residual(basis: &[Vec<Self>], v: &[Self]) -> f64 {
        let mut w = v.to_vec();
        for row in basis {
            let dot: f64 = row.iter().zip(&w).map(|(a, b)| a * b).sum();
            for (wj, rj) in w.iter_mut().zip(row) {
                *wj -= dot * rj;
            }
        }
        w.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}
