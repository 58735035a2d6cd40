//! Real linear subspaces of the local-unitary algebra.
//!
//! A subspace stores a canonical basis: reduced row-echelon rows in exact
//! mode (so equal subspaces have identical representations) and orthonormal
//! rows in float mode (so membership and intersection reduce to residuals
//! and singular values against an absolute threshold of orthonormal-scale
//! data).

use crate::algebra::{algebra_dim, AlgebraElement};
use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// Absolute tolerance for structural subspace operations (membership,
/// intersection, restriction) on canonical bases, whose entries are O(1).
pub const STRUCTURE_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct Subspace<R: Coeff> {
    n: usize,
    basis: Vec<AlgebraElement<R>>,
}

impl<R: Coeff> Subspace<R> {
    /// Canonicalize arbitrary spanning rows into a basis.
    pub fn from_rows(n: usize, rows: Vec<Vec<R>>) -> Result<Self> {
        let ncols = algebra_dim(n);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::param(format!(
                "subspace row has {} coordinates, expected {ncols}",
                bad.len()
            )));
        }
        let reduced = R::reduce_basis(rows, 1e-12, 1e-9);
        let basis = reduced
            .into_iter()
            .map(|coords| AlgebraElement::from_coords(n, coords))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace { n, basis })
    }

    pub fn from_elements(n: usize, elements: Vec<AlgebraElement<R>>) -> Result<Self> {
        for x in &elements {
            if x.n() != n {
                return Err(Error::QubitCountMismatch {
                    left: x.n(),
                    right: n,
                });
            }
        }
        Self::from_rows(n, elements.into_iter().map(|x| x.into_coords()).collect())
    }

    pub fn zero(n: usize) -> Self {
        Subspace { n, basis: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[AlgebraElement<R>] {
        &self.basis
    }

    pub fn row_matrix(&self) -> Vec<Vec<R>> {
        self.basis.iter().map(|x| x.coords().to_vec()).collect()
    }

    /// Distance from `x` to this span (exact mode: 0.0 or 1.0).
    pub fn residual(&self, x: &AlgebraElement<R>) -> f64 {
        let rows = self.row_matrix();
        R::span_residual(&rows, x.coords())
    }

    /// Membership within an absolute tolerance scaled by max(1, ‖x‖).
    pub fn contains(&self, x: &AlgebraElement<R>, tol: f64) -> bool {
        if R::EXACT {
            self.residual(x) == 0.0
        } else {
            self.residual(x) <= tol * x.norm().max(1.0)
        }
    }

    /// The subspace of elements whose coordinates vanish outside `allowed`,
    /// found by solving for combinations of the basis that are zero on every
    /// forbidden coordinate.
    pub fn restrict_to_allowed(&self, allowed: &[bool]) -> Result<Self> {
        let ncols = algebra_dim(self.n);
        if allowed.len() != ncols {
            return Err(Error::param(format!(
                "allowed mask has length {}, expected {ncols}",
                allowed.len()
            )));
        }
        let d = self.dim();
        if d == 0 {
            return Ok(Subspace::zero(self.n));
        }
        let mut constraints: Vec<Vec<R>> = Vec::new();
        for (c, &ok) in allowed.iter().enumerate() {
            if !ok {
                constraints.push(self.basis.iter().map(|x| x.coords()[c].clone()).collect());
            }
        }
        let combos = R::null_space(&constraints, d, STRUCTURE_TOL, 0.0);
        let mut rows = Vec::with_capacity(combos.len());
        for y in combos {
            let mut row = vec![R::zero(); ncols];
            for (yi, x) in y.iter().zip(&self.basis) {
                for (rv, xv) in row.iter_mut().zip(x.coords()) {
                    *rv = rv.clone() + yi.clone() * xv.clone();
                }
            }
            // Forbidden coordinates vanish only up to tolerance in float
            // mode; zero them so reports stay clean.
            if !R::EXACT {
                for (c, &ok) in allowed.iter().enumerate() {
                    if !ok {
                        row[c] = R::zero();
                    }
                }
            }
            rows.push(row);
        }
        Self::from_rows(self.n, rows)
    }

    /// Rank of the union span.
    pub fn union_rank(&self, other: &Self) -> Result<usize> {
        if self.n != other.n {
            return Err(Error::QubitCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut rows = self.row_matrix();
        rows.extend(other.row_matrix());
        Ok(R::rank(&rows, STRUCTURE_TOL, 0.0))
    }

    /// dim(self ∩ other) = dim self + dim other − dim(self + other).
    pub fn intersection_dim(&self, other: &Self) -> Result<usize> {
        Ok(self.dim() + other.dim() - self.union_rank(other)?)
    }

    /// Subspace equality: identical canonical rows in exact mode; equal
    /// dimension with full mutual overlap in float mode.
    pub fn eq_subspace(&self, other: &Self) -> Result<bool> {
        if self.n != other.n || self.dim() != other.dim() {
            return Ok(false);
        }
        if R::EXACT {
            return Ok(self.row_matrix() == other.row_matrix());
        }
        Ok(self.intersection_dim(other)? == self.dim())
    }

    pub fn to_float(&self) -> Subspace<f64> {
        let rows = self
            .basis
            .iter()
            .map(|x| x.coords().iter().map(Coeff::to_f64).collect())
            .collect();
        Subspace::<f64>::from_rows(self.n, rows).expect("row lengths preserved")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{col_a, col_b, COL_PHASE};
    use num::BigRational;

    type Q = BigRational;

    fn q(v: i64) -> Q {
        <Q as Coeff>::from_int(v)
    }

    fn diag_su2(n: usize) -> Subspace<Q> {
        // span{A_1+A_2, B_1+B_2, C_1+C_2} inside n=2.
        let mk = |offset: usize| {
            let mut row = vec![q(0); algebra_dim(n)];
            row[col_a(1) + offset] = q(1);
            row[col_a(2) + offset] = q(1);
            row
        };
        Subspace::from_rows(n, vec![mk(0), mk(1), mk(2)]).unwrap()
    }

    #[test]
    fn canonical_form_is_representation_independent() {
        let a = Subspace::<Q>::from_rows(
            1,
            vec![vec![q(2), q(0), q(2), q(0)], vec![q(0), q(3), q(0), q(0)]],
        )
        .unwrap();
        let b = Subspace::<Q>::from_rows(
            1,
            vec![vec![q(1), q(1), q(1), q(0)], vec![q(0), q(1), q(0), q(0)]],
        )
        .unwrap();
        assert!(a.eq_subspace(&b).unwrap());
        assert_eq!(a.dim(), 2);
    }

    #[test]
    fn membership_and_residual() {
        let s = diag_su2(2);
        let x = AlgebraElement::a(2, 1, q(5))
            .unwrap()
            .plus(&AlgebraElement::a(2, 2, q(5)).unwrap())
            .unwrap();
        assert!(s.contains(&x, STRUCTURE_TOL));
        let y = AlgebraElement::a(2, 1, q(1)).unwrap();
        assert!(!s.contains(&y, STRUCTURE_TOL));
    }

    #[test]
    fn restriction_to_allowed_coordinates() {
        // span{A_1+A_2, B_1} restricted away from qubit 2 leaves span{B_1}.
        let n = 2;
        let mut r1 = vec![q(0); algebra_dim(n)];
        r1[col_a(1)] = q(1);
        r1[col_a(2)] = q(1);
        let mut r2 = vec![q(0); algebra_dim(n)];
        r2[col_b(1)] = q(1);
        let s = Subspace::from_rows(n, vec![r1, r2]).unwrap();

        let mut allowed = vec![true; algebra_dim(n)];
        for c in col_a(2)..=col_a(2) + 2 {
            allowed[c] = false;
        }
        let restricted = s.restrict_to_allowed(&allowed).unwrap();
        assert_eq!(restricted.dim(), 1);
        assert!(restricted.contains(&AlgebraElement::b(n, 1, q(1)).unwrap(), STRUCTURE_TOL));
    }

    #[test]
    fn intersection_dims() {
        let s = diag_su2(2);
        let mut row = vec![q(0); algebra_dim(2)];
        row[col_a(1)] = q(1);
        row[col_a(2)] = q(1);
        let mut phase = vec![q(0); algebra_dim(2)];
        phase[COL_PHASE] = q(1);
        let t = Subspace::from_rows(2, vec![row, phase]).unwrap();
        assert_eq!(s.intersection_dim(&t).unwrap(), 1);
        assert_eq!(s.union_rank(&t).unwrap(), 4);
    }

    #[test]
    fn float_round_trip_keeps_dimension() {
        let s = diag_su2(2);
        let f = s.to_float();
        assert_eq!(f.dim(), 3);
        let x = AlgebraElement::<f64>::a(2, 1, 1.0)
            .unwrap()
            .plus(&AlgebraElement::a(2, 2, 1.0).unwrap())
            .unwrap();
        assert!(f.contains(&x, STRUCTURE_TOL));
    }
}
