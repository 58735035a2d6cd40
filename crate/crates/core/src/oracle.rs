//! Independent reference computation of the stabilizer kernel.
//!
//! This deliberately shares no linear algebra with the main engine: it
//! always builds the dense 2·2^n × (3n+1) action matrix (no row
//! compression) and solves for its null space by Gaussian elimination
//! rather than echelon-form RREF or SVD. The exact backend eliminates with
//! partial pivoting on the largest-magnitude entry of each column; the
//! float backend eliminates with full pivoting (row and column exchanges)
//! and a pinned pivot cutoff relative to the largest initial entry. Cross
//! checking engine results against this routine guards against a shared
//! systematic mistake.

use crate::algebra::{algebra_dim, build_action_matrix};
use crate::error::{Error, Result};
use crate::scalar::Coeff;
use crate::state::PureState;
use crate::subspace::Subspace;

/// The dense matrix grows as 2^n; the oracle is a cross-check for small
/// systems, not a production path.
pub const ORACLE_MAX_QUBITS: usize = 10;

/// Pivot cutoff for the float elimination, relative to the largest
/// absolute entry of the initial matrix.
const PIVOT_REL_TOL: f64 = 1e-9;

fn magnitude<R: Coeff>(x: &R) -> f64 {
    x.to_f64().abs()
}

/// Null space by column-ordered elimination with largest-magnitude row
/// pivots and back substitution. Zero tests are exact; used by the exact
/// backend.
fn null_space_partial_pivot<R: Coeff>(mut a: Vec<Vec<R>>, ncols: usize) -> Vec<Vec<R>> {
    let m = a.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let mut best: Option<(usize, f64)> = None;
        for i in r..m {
            if !a[i][c].is_zero() {
                let mag = magnitude(&a[i][c]);
                if best.is_none_or(|(_, bm)| mag > bm) {
                    best = Some((i, mag));
                }
            }
        }
        let Some((p, _)) = best else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..m {
            if !a[i][c].is_zero() {
                let f = a[i][c].clone() / a[r][c].clone();
                for j in c..ncols {
                    let sub = f.clone() * a[r][j].clone();
                    a[i][j] = a[i][j].clone() - sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }

    let mut basis = Vec::new();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut x = vec![R::zero(); ncols];
        x[free] = R::one();
        for (row, &pc) in pivot_cols.iter().enumerate().rev() {
            let mut s = R::zero();
            for j in pc + 1..ncols {
                if !a[row][j].is_zero() && !x[j].is_zero() {
                    s = s + a[row][j].clone() * x[j].clone();
                }
            }
            x[pc] = -s / a[row][pc].clone();
        }
        basis.push(x);
    }
    basis
}

/// Null space by full-pivoting elimination: at each step the
/// largest-magnitude entry of the remaining submatrix becomes the pivot,
/// exchanging both rows and columns. Used by the float backend.
fn null_space_full_pivot<R: Coeff>(mut a: Vec<Vec<R>>, ncols: usize) -> Vec<Vec<R>> {
    let m = a.len();
    let mut colperm: Vec<usize> = (0..ncols).collect();
    let cutoff = PIVOT_REL_TOL
        * a.iter()
            .flat_map(|row| row.iter().map(magnitude))
            .fold(0.0f64, f64::max);

    let mut r = 0;
    while r < m.min(ncols) {
        let mut best = (r, r, -1.0f64);
        for i in r..m {
            for j in r..ncols {
                let mag = magnitude(&a[i][j]);
                if mag > best.2 {
                    best = (i, j, mag);
                }
            }
        }
        if best.2 <= cutoff {
            break;
        }
        a.swap(r, best.0);
        if best.1 != r {
            for row in a.iter_mut() {
                row.swap(r, best.1);
            }
            colperm.swap(r, best.1);
        }
        for i in r + 1..m {
            if !a[i][r].is_zero() {
                let f = a[i][r].clone() / a[r][r].clone();
                for j in r..ncols {
                    let sub = f.clone() * a[r][j].clone();
                    a[i][j] = a[i][j].clone() - sub;
                }
            }
        }
        r += 1;
    }

    let mut basis = Vec::new();
    for free in r..ncols {
        let mut xp = vec![R::zero(); ncols];
        xp[free] = R::one();
        for i in (0..r).rev() {
            let mut s = R::zero();
            for j in i + 1..ncols {
                if !xp[j].is_zero() {
                    s = s + a[i][j].clone() * xp[j].clone();
                }
            }
            xp[i] = -s / a[i][i].clone();
        }
        let mut x = vec![R::zero(); ncols];
        for (pos, &orig) in colperm.iter().enumerate() {
            x[orig] = xp[pos].clone();
        }
        basis.push(x);
    }
    basis
}

/// Reference stabilizer kernel, for cross-checking the engine. Limited to
/// [`ORACLE_MAX_QUBITS`] because of the dense matrix.
pub fn oracle_kernel<R: Coeff>(state: &PureState<R>) -> Result<Subspace<R>> {
    let n = state.n();
    if n > ORACLE_MAX_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            max: ORACLE_MAX_QUBITS,
        });
    }
    let ncols = algebra_dim(n);
    let rows = build_action_matrix(state).rows().to_vec();
    let basis = if R::EXACT {
        null_space_partial_pivot(rows, ncols)
    } else {
        null_space_full_pivot(rows, ncols)
    };
    Subspace::from_rows(n, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::stabilizer::{compute_kernel, DEFAULT_TOL};
    use num::BigRational;
    use num::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn oracle_agrees_with_engine_on_the_singlet() {
        let s = catalog::singlet();
        let oracle = oracle_kernel(&s).unwrap();
        let engine = compute_kernel(&s, DEFAULT_TOL).unwrap();
        assert_eq!(oracle.dim(), 3);
        assert!(oracle.eq_subspace(engine.space()).unwrap());
    }

    #[test]
    fn oracle_agrees_on_ghz_in_both_modes() {
        let s = catalog::ghz(3, BigRational::one(), BigRational::one()).unwrap();
        assert_eq!(oracle_kernel(&s).unwrap().dim(), 2);

        let f = s.to_float();
        let oracle = oracle_kernel(&f).unwrap();
        let engine = compute_kernel(&f, DEFAULT_TOL).unwrap();
        assert_eq!(oracle.dim(), 2);
        assert_eq!(oracle.intersection_dim(engine.space()).unwrap(), 2);
    }

    #[test]
    fn oracle_matches_engine_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 2..=4 {
            let s = catalog::haar_state(n, &mut rng).unwrap();
            let oracle = oracle_kernel(&s).unwrap();
            let engine = compute_kernel(&s, DEFAULT_TOL).unwrap();
            assert_eq!(oracle.dim(), engine.dim(), "n = {n}");
        }
    }

    #[test]
    fn oracle_handles_the_four_qubit_examples() {
        assert_eq!(oracle_kernel(&catalog::block4()).unwrap().dim(), 3);
        assert_eq!(oracle_kernel(&catalog::m4()).unwrap().dim(), 3);
    }

    #[test]
    fn oracle_rejects_large_systems() {
        let s = catalog::basis_state(11).unwrap();
        assert!(matches!(
            oracle_kernel(&s),
            Err(Error::TooManyQubits { .. })
        ));
    }
}
