//! The local-unitary Lie algebra and its infinitesimal action on states.
//!
//! The algebra is u(1) ⊕ su(2)^n with real dimension 3n+1. Coordinates are
//! ordered iI, A_1, B_1, C_1, …, A_n, B_n, C_n over the su(2) basis
//!
//! ```text
//! A = [[ i,  0],     B = [[ 0, 1],     C = [[0, i],
//!      [ 0, -i]]          [-1, 0]]          [i, 0]]
//! ```
//!
//! so the per-qubit brackets are [A,B] = 2C, [B,C] = 2A, [C,A] = 2B and the
//! global-phase generator iI is central. The action on a state is realified:
//! its matrix has 2·2^n rows (all real parts stacked above all imaginary
//! parts) and 3n+1 columns, one per basis element, keeping the kernel a real
//! null-space problem.

use crate::error::{Error, Result};
use crate::scalar::Coeff;
use crate::state::{add_amp, bit_of, flip_bit, PureState};
use num::{Complex, Zero};
use std::collections::BTreeMap;

/// Coordinate column of the global-phase generator iI.
pub const COL_PHASE: usize = 0;

/// Coordinate column of A_j (1-based j).
pub fn col_a(j: usize) -> usize {
    3 * j - 2
}

/// Coordinate column of B_j.
pub fn col_b(j: usize) -> usize {
    3 * j - 1
}

/// Coordinate column of C_j.
pub fn col_c(j: usize) -> usize {
    3 * j
}

/// Total coordinate count for n qubits.
pub fn algebra_dim(n: usize) -> usize {
    3 * n + 1
}

/// An element of the local-unitary algebra: 3n+1 real coordinates.
#[derive(Clone, PartialEq, Debug)]
pub struct AlgebraElement<R: Coeff> {
    n: usize,
    coords: Vec<R>,
}

impl<R: Coeff> AlgebraElement<R> {
    pub fn zero(n: usize) -> Self {
        AlgebraElement {
            n,
            coords: vec![R::zero(); algebra_dim(n)],
        }
    }

    pub fn from_coords(n: usize, coords: Vec<R>) -> Result<Self> {
        if coords.len() != algebra_dim(n) {
            return Err(Error::param(format!(
                "expected {} coordinates for {n} qubits, got {}",
                algebra_dim(n),
                coords.len()
            )));
        }
        Ok(AlgebraElement { n, coords })
    }

    /// Basis element e_k (k < 3n+1).
    pub fn basis(n: usize, k: usize) -> Self {
        let mut x = Self::zero(n);
        assert!(k < algebra_dim(n), "basis index out of range");
        x.coords[k] = R::one();
        x
    }

    /// t0 · iI.
    pub fn phase(n: usize, t0: R) -> Self {
        let mut x = Self::zero(n);
        x.coords[COL_PHASE] = t0;
        x
    }

    /// v · A_j.
    pub fn a(n: usize, j: usize, v: R) -> Result<Self> {
        Self::single(n, j, 0, v)
    }

    /// v · B_j.
    pub fn b(n: usize, j: usize, v: R) -> Result<Self> {
        Self::single(n, j, 1, v)
    }

    /// v · C_j.
    pub fn c(n: usize, j: usize, v: R) -> Result<Self> {
        Self::single(n, j, 2, v)
    }

    fn single(n: usize, j: usize, offset: usize, v: R) -> Result<Self> {
        if j == 0 || j > n {
            return Err(Error::QubitIndex { index: j, n });
        }
        let mut x = Self::zero(n);
        x.coords[col_a(j) + offset] = v;
        Ok(x)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[R] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<R> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        Ok(AlgebraElement {
            n: self.n,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn scaled(&self, factor: &R) -> Self {
        AlgebraElement {
            n: self.n,
            coords: self
                .coords
                .iter()
                .map(|a| a.clone() * factor.clone())
                .collect(),
        }
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        Ok(AlgebraElement {
            n: self.n,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    /// Euclidean norm of the coordinate vector.
    pub fn norm(&self) -> f64 {
        self.coords
            .iter()
            .map(|v| {
                let f = v.to_f64();
                f * f
            })
            .sum::<f64>()
            .sqrt()
    }

    /// The 𝔤_j coordinates (a_j, b_j, c_j).
    pub fn project(&self, j: usize) -> Result<[R; 3]> {
        if j == 0 || j > self.n {
            return Err(Error::QubitIndex { index: j, n: self.n });
        }
        Ok([
            self.coords[col_a(j)].clone(),
            self.coords[col_b(j)].clone(),
            self.coords[col_c(j)].clone(),
        ])
    }

    /// Commutator. Per qubit the (a,b,c) triple behaves as twice the vector
    /// cross product; the global-phase component is central and drops out.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let two = R::from_int(2);
        let mut out = Self::zero(self.n);
        for j in 1..=self.n {
            let [xa, xb, xc] = self.project(j)?;
            let [ya, yb, yc] = other.project(j)?;
            out.coords[col_a(j)] =
                (xb.clone() * yc.clone() - xc.clone() * yb.clone()) * two.clone();
            out.coords[col_b(j)] =
                (xc.clone() * ya.clone() - xa.clone() * yc.clone()) * two.clone();
            out.coords[col_c(j)] =
                (xa.clone() * yb.clone() - xb.clone() * ya.clone()) * two.clone();
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> AlgebraElement<f64> {
        AlgebraElement {
            n: self.n,
            coords: self.coords.iter().map(Coeff::to_f64).collect(),
        }
    }

    fn check_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::QubitCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

/// Image amplitude table of one algebra element applied to a state.
pub type AmpMap<R> = BTreeMap<u64, Complex<R>>;

/// dΦ_ψ(X) = t0·(iψ) + Σ_j (a_j A_j + b_j B_j + c_j C_j)·ψ.
///
/// Per basis generator: A_j scales |I⟩ by i(−1)^{i_j}; B_j maps
/// |…0_j…⟩ ↦ −|…1_j…⟩ and |…1_j…⟩ ↦ |…0_j…⟩; C_j maps |…0_j…⟩ ↦ i|…1_j…⟩
/// and |…1_j…⟩ ↦ i|…0_j…⟩; iI scales everything by i.
pub fn apply_element<R: Coeff>(
    state: &PureState<R>,
    x: &AlgebraElement<R>,
) -> Result<AmpMap<R>> {
    let n = state.n();
    if x.n() != n {
        return Err(Error::QubitCountMismatch {
            left: x.n(),
            right: n,
        });
    }
    let i = Complex::new(R::zero(), R::one());
    let mut out: AmpMap<R> = BTreeMap::new();
    let t0 = &x.coords()[COL_PHASE];
    for (idx, amp) in state.iter() {
        if !t0.is_zero() {
            add_amp(&mut out, idx, i.clone() * amp.clone() * t0.clone());
        }
        for j in 1..=n {
            let a = &x.coords()[col_a(j)];
            let b = &x.coords()[col_b(j)];
            let c = &x.coords()[col_c(j)];
            let bit = bit_of(idx, j, n);
            if !a.is_zero() {
                let signed = if bit == 0 { a.clone() } else { -a.clone() };
                add_amp(&mut out, idx, i.clone() * amp.clone() * signed);
            }
            if !b.is_zero() {
                let signed = if bit == 0 { -b.clone() } else { b.clone() };
                add_amp(&mut out, flip_bit(idx, j, n), amp.clone() * signed);
            }
            if !c.is_zero() {
                add_amp(
                    &mut out,
                    flip_bit(idx, j, n),
                    i.clone() * amp.clone() * c.clone(),
                );
            }
        }
    }
    Ok(out)
}

/// Squared 2-norm of an image amplitude table.
pub fn amp_map_norm_sq<R: Coeff>(map: &AmpMap<R>) -> R {
    map.values().fold(R::zero(), |acc, z| acc + z.norm_sqr())
}

/// Real matrix realization of dΦ_ψ: 2·2^n rows (real parts of all basis
/// amplitudes stacked over imaginary parts), 3n+1 columns in basis order.
#[derive(Clone, Debug)]
pub struct ActionMatrix<R: Coeff> {
    n: usize,
    rows: Vec<Vec<R>>,
}

impl<R: Coeff> ActionMatrix<R> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        algebra_dim(self.n)
    }

    pub fn rows(&self) -> &[Vec<R>] {
        &self.rows
    }
}

/// Dense action matrix; column k is apply_element(state, e_k) realified.
pub fn build_action_matrix<R: Coeff>(state: &PureState<R>) -> ActionMatrix<R> {
    let n = state.n();
    let dim = 1usize << n;
    let ncols = algebra_dim(n);
    let mut rows = vec![vec![R::zero(); ncols]; 2 * dim];
    for k in 0..ncols {
        let image = apply_element(state, &AlgebraElement::<R>::basis(n, k))
            .expect("basis element has matching qubit count");
        for (idx, z) in image {
            rows[idx as usize][k] = z.re;
            rows[dim + idx as usize][k] = z.im;
        }
    }
    ActionMatrix { n, rows }
}

/// Action matrix restricted to rows that can be nonzero: basis states in the
/// support of ψ or reachable from it by one bit flip. All other rows vanish
/// for every generator, so the kernel (and the nonzero singular values) are
/// unchanged while the row count drops from 2·2^n to at most
/// 2·|support|·(n+1).
pub(crate) fn action_rows_compressed<R: Coeff>(state: &PureState<R>) -> Vec<Vec<R>> {
    let n = state.n();
    let ncols = algebra_dim(n);
    let mut live: Vec<u64> = Vec::new();
    for (idx, _) in state.iter() {
        live.push(idx);
        for j in 1..=n {
            live.push(flip_bit(idx, j, n));
        }
    }
    live.sort_unstable();
    live.dedup();
    let pos: BTreeMap<u64, usize> = live.iter().enumerate().map(|(p, &v)| (v, p)).collect();
    let mut rows = vec![vec![R::zero(); ncols]; 2 * live.len()];
    for k in 0..ncols {
        let image = apply_element(state, &AlgebraElement::<R>::basis(n, k))
            .expect("basis element has matching qubit count");
        for (idx, z) in image {
            let p = pos[&idx];
            rows[p][k] = z.re;
            rows[live.len() + p][k] = z.im;
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{BigRational, One};

    type Q = BigRational;

    fn q(v: i64) -> Q {
        <Q as Coeff>::from_int(v)
    }

    fn ket0() -> PureState<Q> {
        PureState::from_amplitudes(1, vec![(0, Complex::one())]).unwrap()
    }

    /// 2×2 complex matrices for A, B, C, used as an independent check of the
    /// coordinate bracket: the commutator is computed by matrix arithmetic.
    type M2 = [[Complex<f64>; 2]; 2];

    const fn cx(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn mat_a() -> M2 {
        [[cx(0.0, 1.0), cx(0.0, 0.0)], [cx(0.0, 0.0), cx(0.0, -1.0)]]
    }

    fn mat_b() -> M2 {
        [[cx(0.0, 0.0), cx(1.0, 0.0)], [cx(-1.0, 0.0), cx(0.0, 0.0)]]
    }

    fn mat_c() -> M2 {
        [[cx(0.0, 0.0), cx(0.0, 1.0)], [cx(0.0, 1.0), cx(0.0, 0.0)]]
    }

    fn mat_mul(x: &M2, y: &M2) -> M2 {
        let mut out = [[cx(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                for k in 0..2 {
                    out[r][c] += x[r][k] * y[k][c];
                }
            }
        }
        out
    }

    fn mat_comm(x: &M2, y: &M2) -> M2 {
        let xy = mat_mul(x, y);
        let yx = mat_mul(y, x);
        let mut out = [[cx(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = xy[r][c] - yx[r][c];
            }
        }
        out
    }

    fn mat_close(x: &M2, y: &M2) -> bool {
        (0..2).all(|r| (0..2).all(|c| (x[r][c] - y[r][c]).norm() < 1e-14))
    }

    fn mat_scale(x: &M2, s: f64) -> M2 {
        let mut out = *x;
        for row in &mut out {
            for v in row.iter_mut() {
                *v *= cx(s, 0.0);
            }
        }
        out
    }

    #[test]
    fn base_brackets_match_matrix_commutators() {
        // [A,B] = 2C, [B,C] = 2A, [C,A] = 2B as 2×2 matrices.
        assert!(mat_close(&mat_comm(&mat_a(), &mat_b()), &mat_scale(&mat_c(), 2.0)));
        assert!(mat_close(&mat_comm(&mat_b(), &mat_c()), &mat_scale(&mat_a(), 2.0)));
        assert!(mat_close(&mat_comm(&mat_c(), &mat_a()), &mat_scale(&mat_b(), 2.0)));

        // The coordinate bracket reproduces the same structure constants.
        let a1 = AlgebraElement::<Q>::a(1, 1, q(1)).unwrap();
        let b1 = AlgebraElement::<Q>::b(1, 1, q(1)).unwrap();
        let c1 = AlgebraElement::<Q>::c(1, 1, q(1)).unwrap();
        assert_eq!(a1.bracket(&b1).unwrap(), c1.scaled(&q(2)));
        assert_eq!(b1.bracket(&c1).unwrap(), a1.scaled(&q(2)));
        assert_eq!(c1.bracket(&a1).unwrap(), b1.scaled(&q(2)));
    }

    #[test]
    fn cross_qubit_brackets_vanish() {
        let a1 = AlgebraElement::<Q>::a(2, 1, q(1)).unwrap();
        let b2 = AlgebraElement::<Q>::b(2, 2, q(1)).unwrap();
        assert!(a1.bracket(&b2).unwrap().is_zero());
        // Antisymmetry degenerate case: [X,X] = 0.
        let x = a1.plus(&b2).unwrap();
        assert!(x.bracket(&x).unwrap().is_zero());
        // The phase generator is central.
        let p = AlgebraElement::<Q>::phase(2, q(5));
        assert!(p.bracket(&x).unwrap().is_zero());
    }

    #[test]
    fn generator_actions_on_kets() {
        // A_1 |0⟩ = i|0⟩.
        let img = apply_element(&ket0(), &AlgebraElement::a(1, 1, q(1)).unwrap()).unwrap();
        assert_eq!(img[&0], Complex::new(q(0), q(1)));
        assert_eq!(img.len(), 1);

        // Global-phase generator: iψ.
        let img = apply_element(&ket0(), &AlgebraElement::phase(1, q(1))).unwrap();
        assert_eq!(img[&0], Complex::new(q(0), q(1)));

        // B_1 |0⟩ = −|1⟩.
        let img = apply_element(&ket0(), &AlgebraElement::b(1, 1, q(1)).unwrap()).unwrap();
        assert_eq!(img[&1], Complex::new(q(-1), q(0)));
        assert!(!img.contains_key(&0));

        // C_1 |0⟩ = i|1⟩.
        let img = apply_element(&ket0(), &AlgebraElement::c(1, 1, q(1)).unwrap()).unwrap();
        assert_eq!(img[&1], Complex::new(q(0), q(1)));

        // A_1 |1⟩ = −i|1⟩.
        let ket1 = PureState::from_amplitudes(1, vec![(1, Complex::one())]).unwrap();
        let img = apply_element(&ket1, &AlgebraElement::a(1, 1, q(1)).unwrap()).unwrap();
        assert_eq!(img[&1], Complex::new(q(0), q(-1)));
    }

    #[test]
    fn projections_read_off_coordinates() {
        let x = AlgebraElement::<Q>::a(3, 1, q(1))
            .unwrap()
            .plus(&AlgebraElement::b(3, 2, q(1)).unwrap())
            .unwrap();
        assert_eq!(x.project(1).unwrap(), [q(1), q(0), q(0)]);
        assert_eq!(x.project(2).unwrap(), [q(0), q(1), q(0)]);
        assert_eq!(x.project(3).unwrap(), [q(0), q(0), q(0)]);
        assert!(x.project(4).is_err());
    }

    #[test]
    fn action_matrix_shapes_and_phase_column() {
        let singlet = PureState::from_amplitudes(
            2,
            vec![(0b01, Complex::one()), (0b10, -Complex::<Q>::one())],
        )
        .unwrap();
        let m = build_action_matrix(&singlet);
        assert_eq!(m.nrows(), 8);
        assert_eq!(m.ncols(), 7);
        // The iI column is the real embedding of iψ: real rows zero,
        // imaginary rows carry the original real amplitudes.
        for idx in 0..4u64 {
            assert_eq!(m.rows()[idx as usize][COL_PHASE], q(0));
            let expected = singlet.amplitude(idx).re;
            assert_eq!(m.rows()[4 + idx as usize][COL_PHASE], expected);
        }
    }

    #[test]
    fn compressed_rows_drop_only_zero_rows() {
        let ghz = PureState::from_amplitudes(
            3,
            vec![(0, Complex::<Q>::one()), (7, Complex::one())],
        )
        .unwrap();
        let dense = build_action_matrix(&ghz);
        let compressed = action_rows_compressed(&ghz);
        // support {000,111} plus one-bit flips = 8 indices → 16 rows.
        assert_eq!(compressed.len(), 16);
        let nonzero_dense = dense
            .rows()
            .iter()
            .filter(|row| row.iter().any(|v| !v.is_zero()))
            .count();
        let nonzero_compressed = compressed
            .iter()
            .filter(|row| row.iter().any(|v| !v.is_zero()))
            .count();
        assert_eq!(nonzero_dense, nonzero_compressed);
    }
}
