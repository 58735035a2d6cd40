//! The stabilizer subalgebra of a pure state and its block structure.
//!
//! For the group U(1) × SU(2)^n acting on n qubits by local unitaries and
//! a global phase, the stabilizer of |ψ⟩ has Lie algebra
//! K_ψ = { X : X ψ = 0 }, the kernel of the orbit map differential. This
//! module computes K_ψ as a real subspace of the 3n+1 dimensional algebra,
//! decomposes it into su(2) blocks (subsets S of qubits carrying a
//! three-dimensional simple summand supported exactly on S), and verifies
//! the structural facts the decomposition rests on:
//!
//! * the projection of K_ψ onto any single qubit has dimension 0, 1, or 3,
//!   never 2, and a qubit belongs to a block exactly when it is 3;
//! * each block's summand K_ψ ∩ 𝔤_S is isomorphic to su(2): a basis can be
//!   rescaled to a frame U, V, W with [U,V] = W, [V,W] = U, [W,U] = V;
//! * K_ψ splits as the direct sum of its block summands and a residual part
//!   supported away from all block qubits, so with p blocks
//!   dim K_ψ = 3p + dim(K_ψ ∩ ḡ_ℬ);
//! * K_ψ is closed under the bracket.
//!
//! Violations of any of these are reported as structure errors rather than
//! silently repaired, since they can only arise from numerical trouble.

use crate::algebra::{
    action_rows_compressed, algebra_dim, amp_map_norm_sq, apply_element, col_a, col_b, col_c,
    AlgebraElement, COL_PHASE,
};
use crate::error::{Error, Result};
use crate::factor::{classify, Classification};
use crate::scalar::Coeff;
use crate::state::{AnyState, PureState};
use crate::subspace::{Subspace, STRUCTURE_TOL};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Default relative singular-value tolerance for kernel extraction.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Every reported kernel element must move the state by no more than this
/// factor times ‖ψ‖·‖X‖.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// Bracket-closure residuals above this indicate numerical trouble.
pub const CLOSURE_TOL: f64 = 1e-8;

/// Loose and tight relative thresholds for the tolerance-stability probe:
/// if the kernel dimension differs between them, the answer is
/// threshold-sensitive and the report is flagged.
pub const STABILITY_LOOSE: f64 = 1e-7;
pub const STABILITY_TIGHT: f64 = 1e-11;

/// The stabilizer kernel of a state, with the tolerance it was computed at
/// and whether that dimension is stable across the probe thresholds.
#[derive(Clone, Debug)]
pub struct Kernel<R: Coeff> {
    space: Subspace<R>,
    tol: f64,
    stable: bool,
}

impl<R: Coeff> Kernel<R> {
    pub fn space(&self) -> &Subspace<R> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn stable(&self) -> bool {
        self.stable
    }
}

/// Compute K_ψ = { X : X ψ = 0 } at the given relative tolerance.
///
/// Every element of the returned basis is verified to actually annihilate
/// the state within [`MEMBERSHIP_TOL`] (exactly, in exact mode); failure is
/// a structure error, which can only happen when the tolerance is loose
/// enough to admit directions that merely nearly annihilate the state.
pub fn compute_kernel<R: Coeff>(state: &PureState<R>, tol: f64) -> Result<Kernel<R>> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::param(format!("tolerance {tol} must be positive")));
    }
    let n = state.n();
    let rows = action_rows_compressed(state);
    let (null_rows, stable) =
        R::null_space_with_stability(&rows, algebra_dim(n), tol, STABILITY_LOOSE, STABILITY_TIGHT);
    let space = Subspace::from_rows(n, null_rows)?;

    let psi_norm = state.norm_sq().to_f64().sqrt();
    for x in space.basis() {
        if R::EXACT {
            if !apply_element(state, x)?.is_empty() {
                return Err(Error::structure(
                    "kernel candidate does not annihilate the state exactly".to_string(),
                ));
            }
        } else {
            let moved = amp_map_norm_sq(&apply_element(state, x)?).to_f64().sqrt();
            let budget = MEMBERSHIP_TOL * psi_norm * x.norm();
            if moved > budget {
                return Err(Error::structure(format!(
                    "kernel candidate moves the state by {moved:.3e}, above the membership \
                     budget {budget:.3e}; the tolerance {tol:.1e} admits near-kernel directions"
                )));
            }
        }
    }
    Ok(Kernel { space, tol, stable })
}

/// Dimension of P_j K, the projection of a subspace onto qubit j's su(2)
/// coordinates. The result is 0, 1, or 3 for stabilizer kernels; observing
/// 2 is reported as a structure error.
pub fn qubit_projection_dim<R: Coeff>(space: &Subspace<R>, j: usize) -> Result<usize> {
    let rows: Vec<Vec<R>> = space
        .basis()
        .iter()
        .map(|x| x.project(j).map(|p| p.to_vec()))
        .collect::<Result<_>>()?;
    let d = R::rank(&rows, STRUCTURE_TOL, 0.0);
    if d == 2 {
        return Err(Error::structure(format!(
            "projection of the stabilizer onto qubit {j} has dimension 2"
        )));
    }
    Ok(d)
}

/// Intersect a subspace with the coordinate subalgebra supported on the
/// given qubits, optionally including the global-phase direction. With all
/// qubits listed and the phase included this is the whole space, so the
/// intersection returns the input subspace itself.
pub fn intersect_support<R: Coeff>(
    space: &Subspace<R>,
    qubits: &[usize],
    include_g0: bool,
) -> Result<Subspace<R>> {
    let n = space.n();
    let mut allowed = vec![false; algebra_dim(n)];
    allowed[COL_PHASE] = include_g0;
    for &j in qubits {
        if j < 1 || j > n {
            return Err(Error::QubitIndex { index: j, n });
        }
        allowed[col_a(j)] = true;
        allowed[col_b(j)] = true;
        allowed[col_c(j)] = true;
    }
    space.restrict_to_allowed(&allowed)
}

/// One su(2) block: the qubits it is supported on and an orthogonal frame
/// (U, V, W) of its summand satisfying [U,V] = W, [V,W] = U, [W,U] = V.
/// Frames are stored in float coordinates; the rescalings that produce them
/// involve square roots even when the state is exact.
#[derive(Clone, Debug)]
pub struct Su2Block {
    pub qubits: Vec<usize>,
    pub frame: [AlgebraElement<f64>; 3],
}

/// Full block decomposition of a stabilizer kernel.
#[derive(Clone, Debug)]
pub struct BlockReport {
    pub blocks: Vec<Su2Block>,
    /// Number of blocks.
    pub p: usize,
    /// All qubits that belong to some block, ascending.
    pub block_qubits: Vec<usize>,
    /// dim(K ∩ ḡ_ℬ), the part supported away from every block qubit.
    pub residual_dim: usize,
    pub kernel_dim: usize,
    /// dim P_j K for j = 1..n.
    pub per_qubit_projection_dims: Vec<usize>,
    /// Always true on success; the decomposition errors out otherwise.
    pub formula_holds: bool,
}

fn dot(x: &AlgebraElement<f64>, y: &AlgebraElement<f64>) -> f64 {
    x.coords().iter().zip(y.coords()).map(|(a, b)| a * b).sum()
}

/// Rescale a basis of a three-dimensional bracket-closed subalgebra into a
/// frame with the standard su(2) relations. Starting from any pair X, Y
/// with Z = [X,Y] ≠ 0, the vectors X' = [Y,Z], Y, Z are orthogonal with
/// [Z,X'] = bY and [X',Y] = cZ for positive b, c, and U = X'/√(bc),
/// V = Y/√c, W = Z/√b close the bracket exactly.
fn extract_frame(s: &Subspace<f64>) -> Result<[AlgebraElement<f64>; 3]> {
    let basis = s.basis();
    if basis.len() != 3 {
        return Err(Error::structure(format!(
            "frame extraction needs a 3-dimensional subalgebra, got dimension {}",
            basis.len()
        )));
    }
    let mut best = (0usize, 1usize, -1.0f64);
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let norm = basis[a].bracket(&basis[b])?.norm();
        if norm > best.2 {
            best = (a, b, norm);
        }
    }
    if best.2 <= 1e-6 {
        return Err(Error::structure(
            "block summand brackets to zero; expected a simple subalgebra".to_string(),
        ));
    }
    let x = &basis[best.0];
    let y = basis[best.1].clone();
    let z = x.bracket(&y)?;
    let xp = y.bracket(&z)?;

    let zxp = z.bracket(&xp)?;
    let b = dot(&zxp, &y) / dot(&y, &y);
    let dev_b = zxp.minus(&y.scaled(&b))?.norm();
    let xpy = xp.bracket(&y)?;
    let c = dot(&xpy, &z) / dot(&z, &z);
    let dev_c = xpy.minus(&z.scaled(&c))?.norm();
    let budget = |v: f64| STRUCTURE_TOL * v.max(1.0);
    if b <= 0.0 || c <= 0.0 || dev_b > budget(zxp.norm()) || dev_c > budget(xpy.norm()) {
        return Err(Error::structure(format!(
            "block frame construction failed: b = {b:.3e}, c = {c:.3e}, \
             deviations {dev_b:.3e}, {dev_c:.3e}"
        )));
    }

    let u = xp.scaled(&(1.0 / (b * c).sqrt()));
    let v = y.scaled(&(1.0 / c.sqrt()));
    let w = z.scaled(&(1.0 / b.sqrt()));
    let e = u
        .bracket(&v)?
        .minus(&w)?
        .norm()
        .max(v.bracket(&w)?.minus(&u)?.norm())
        .max(w.bracket(&u)?.minus(&v)?.norm());
    if e > STRUCTURE_TOL {
        return Err(Error::structure(format!(
            "block frame fails the su(2) relations by {e:.3e}"
        )));
    }
    Ok([u, v, w])
}

/// Decompose a stabilizer kernel into su(2) blocks.
///
/// Qubits with three-dimensional projection are grouped by their nullifier
/// subspaces Null_j = { X ∈ K : P_j X = 0 }: qubits j and k lie in the same
/// block exactly when dim Null_j = dim Null_k = dim(Null_j ∩ Null_k). Each
/// group is then verified: even size, a summand K ∩ 𝔤_S of dimension
/// exactly 3 with a valid su(2) frame, the splitting
/// dim K = 3 + dim(K ∩ ḡ_S), and finally the global dimension formula
/// dim K = 3p + residual.
pub fn detect_su2_blocks<R: Coeff>(space: &Subspace<R>) -> Result<BlockReport> {
    let n = space.n();
    let mut dims = Vec::with_capacity(n);
    for j in 1..=n {
        dims.push(qubit_projection_dim(space, j)?);
    }
    let block_qubits: Vec<usize> = (1..=n).filter(|&j| dims[j - 1] == 3).collect();

    let mut nullifier: BTreeMap<usize, Subspace<R>> = BTreeMap::new();
    for &j in &block_qubits {
        let mut allowed = vec![true; algebra_dim(n)];
        allowed[col_a(j)] = false;
        allowed[col_b(j)] = false;
        allowed[col_c(j)] = false;
        nullifier.insert(j, space.restrict_to_allowed(&allowed)?);
    }

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut assigned: Vec<usize> = Vec::new();
    for (idx, &j) in block_qubits.iter().enumerate() {
        if assigned.contains(&j) {
            continue;
        }
        let mut group = vec![j];
        assigned.push(j);
        let nj = &nullifier[&j];
        for &k in &block_qubits[idx + 1..] {
            if assigned.contains(&k) {
                continue;
            }
            let nk = &nullifier[&k];
            if nj.dim() == nk.dim() && nj.intersection_dim(nk)? == nj.dim() {
                group.push(k);
                assigned.push(k);
            }
        }
        groups.push(group);
    }

    let mut blocks = Vec::new();
    for group in &groups {
        if group.len() % 2 != 0 {
            return Err(Error::structure(format!(
                "block {group:?} has odd size {}",
                group.len()
            )));
        }
        let inside = intersect_support(space, group, false)?;
        if inside.dim() != 3 {
            return Err(Error::structure(format!(
                "block {group:?} carries a summand of dimension {}, expected 3",
                inside.dim()
            )));
        }
        let outside: Vec<usize> = (1..=n).filter(|q| !group.contains(q)).collect();
        let rest = intersect_support(space, &outside, true)?;
        if space.dim() != 3 + rest.dim() {
            return Err(Error::structure(format!(
                "stabilizer does not split across block {group:?}: dim {} != 3 + {}",
                space.dim(),
                rest.dim()
            )));
        }
        let frame = extract_frame(&inside.to_float())?;
        blocks.push(Su2Block {
            qubits: group.clone(),
            frame,
        });
    }

    let p = blocks.len();
    let non_block: Vec<usize> = (1..=n).filter(|j| !block_qubits.contains(j)).collect();
    let residual_dim = intersect_support(space, &non_block, true)?.dim();
    if space.dim() != 3 * p + residual_dim {
        return Err(Error::structure(format!(
            "dimension formula fails: dim {} != 3·{p} + {residual_dim}",
            space.dim()
        )));
    }

    Ok(BlockReport {
        blocks,
        p,
        block_qubits,
        residual_dim,
        kernel_dim: space.dim(),
        per_qubit_projection_dims: dims,
        formula_holds: true,
    })
}

/// Worst relative distance of any pairwise bracket of basis elements from
/// the subspace itself. Stabilizer kernels are Lie subalgebras, so this is
/// zero up to numerical error; values above [`CLOSURE_TOL`] indicate
/// trouble.
pub fn bracket_closure_residual<R: Coeff>(space: &Subspace<R>) -> Result<f64> {
    let basis = space.basis();
    let mut worst = 0.0f64;
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let br = basis[i].bracket(&basis[j])?;
            let denom = if R::EXACT { 1.0 } else { br.norm().max(1.0) };
            worst = worst.max(space.residual(&br) / denom);
        }
    }
    Ok(worst)
}

/// Everything the analysis produces for one state, in serializable form.
/// Kernel basis rows are float coordinates in basis order (phase, then
/// qubit 1's a, b, c, then qubit 2's, ...), exact bases converted.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilizerReport {
    pub n: usize,
    pub mode: String,
    pub tol: f64,
    pub tol_stable: bool,
    pub kernel_dim: usize,
    pub p: usize,
    pub blocks: Vec<Vec<usize>>,
    pub residual_dim: usize,
    pub per_qubit_projection_dims: Vec<usize>,
    pub formula_holds: bool,
    pub closure_residual: f64,
    pub kernel_basis: Vec<Vec<f64>>,
    pub classification: Classification,
}

fn report_typed<R: Coeff>(state: &PureState<R>, mode: &str, tol: f64) -> Result<StabilizerReport> {
    let kernel = compute_kernel(state, tol)?;
    let block_report = detect_su2_blocks(kernel.space())?;
    let closure_residual = bracket_closure_residual(kernel.space())?;
    let classification = classify(state, kernel.dim(), tol)?;
    Ok(StabilizerReport {
        n: state.n(),
        mode: mode.to_string(),
        tol,
        tol_stable: kernel.stable(),
        kernel_dim: kernel.dim(),
        p: block_report.p,
        blocks: block_report
            .blocks
            .iter()
            .map(|b| b.qubits.clone())
            .collect(),
        residual_dim: block_report.residual_dim,
        per_qubit_projection_dims: block_report.per_qubit_projection_dims,
        formula_holds: block_report.formula_holds,
        closure_residual,
        kernel_basis: kernel
            .space()
            .basis()
            .iter()
            .map(|x| x.coords().iter().map(Coeff::to_f64).collect())
            .collect(),
        classification,
    })
}

/// Run the full analysis: kernel, block decomposition, bracket closure,
/// factorization, and the dimension-bound classification.
pub fn stabilizer_report(state: &AnyState, tol: f64) -> Result<StabilizerReport> {
    match state {
        AnyState::Exact(s) => report_typed(s, "exact", tol),
        AnyState::Float(s) => report_typed(s, "float", tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::parse::parse_state;
    use num::BigRational;

    type Q = BigRational;

    fn qi(v: i64) -> Q {
        <Q as Coeff>::from_int(v)
    }

    fn exact(text: &str) -> PureState<Q> {
        match parse_state(text).unwrap() {
            AnyState::Exact(s) => s,
            AnyState::Float(_) => panic!("expected exact parse for {text}"),
        }
    }

    fn sum_elem(n: usize, mk: fn(usize, usize, Q) -> Result<AlgebraElement<Q>>, qs: &[usize]) -> AlgebraElement<Q> {
        let mut acc = AlgebraElement::zero(n);
        for &j in qs {
            acc = acc.plus(&mk(n, j, qi(1)).unwrap()).unwrap();
        }
        acc
    }

    #[test]
    fn singlet_kernel_is_the_diagonal_su2() {
        let s = exact("|01> - |10>");
        let k = compute_kernel(&s, DEFAULT_TOL).unwrap();
        assert_eq!(k.dim(), 3);
        assert!(k.stable());
        for mk in [
            AlgebraElement::<Q>::a as fn(usize, usize, Q) -> Result<AlgebraElement<Q>>,
            AlgebraElement::<Q>::b,
            AlgebraElement::<Q>::c,
        ] {
            let x = sum_elem(2, mk, &[1, 2]);
            assert!(k.space().contains(&x, STRUCTURE_TOL));
        }
        assert_eq!(qubit_projection_dim(k.space(), 1).unwrap(), 3);
        assert_eq!(qubit_projection_dim(k.space(), 2).unwrap(), 3);

        let blocks = detect_su2_blocks(k.space()).unwrap();
        assert_eq!(blocks.p, 1);
        assert_eq!(blocks.blocks[0].qubits, vec![1, 2]);
        assert_eq!(blocks.residual_dim, 0);
        assert!(blocks.formula_holds);
        assert_eq!(bracket_closure_residual(k.space()).unwrap(), 0.0);
    }

    #[test]
    fn single_qubit_kernel_balances_phase_against_rotation() {
        let s = exact("|0>");
        let k = compute_kernel(&s, DEFAULT_TOL).unwrap();
        assert_eq!(k.dim(), 1);
        // A_1|0> = i|0>, so iI - A_1 annihilates.
        let x = AlgebraElement::phase(1, qi(1))
            .minus(&AlgebraElement::a(1, 1, qi(1)).unwrap())
            .unwrap();
        assert!(k.space().contains(&x, STRUCTURE_TOL));
        assert_eq!(qubit_projection_dim(k.space(), 1).unwrap(), 1);
    }

    #[test]
    fn unentangled_states_have_dimension_n() {
        let k = compute_kernel(&exact("|00>"), DEFAULT_TOL).unwrap();
        assert_eq!(k.dim(), 2);
        let blocks = detect_su2_blocks(k.space()).unwrap();
        assert_eq!(blocks.p, 0);
        assert_eq!(blocks.residual_dim, 2);
        assert_eq!(blocks.per_qubit_projection_dims, vec![1, 1]);
    }

    #[test]
    fn ghz_kernel_is_traceless_diagonal() {
        let s = exact("|000> + |111>");
        let k = compute_kernel(&s, DEFAULT_TOL).unwrap();
        assert_eq!(k.dim(), 2);

        // Expected: { t1 A_1 + t2 A_2 + t3 A_3 : t1 + t2 + t3 = 0 }.
        let d12 = AlgebraElement::a(3, 1, qi(1))
            .unwrap()
            .minus(&AlgebraElement::a(3, 2, qi(1)).unwrap())
            .unwrap();
        let d23 = AlgebraElement::a(3, 2, qi(1))
            .unwrap()
            .minus(&AlgebraElement::a(3, 3, qi(1)).unwrap())
            .unwrap();
        let expected = Subspace::from_elements(3, vec![d12, d23]).unwrap();
        assert!(k.space().eq_subspace(&expected).unwrap());

        let blocks = detect_su2_blocks(k.space()).unwrap();
        assert_eq!(blocks.p, 0);
        assert_eq!(blocks.residual_dim, 2);
        assert_eq!(blocks.per_qubit_projection_dims, vec![1, 1, 1]);
    }

    #[test]
    fn singlet_with_spectator_splits() {
        let s = exact("|010> - |100>");
        let k = compute_kernel(&s, DEFAULT_TOL).unwrap();
        assert_eq!(k.dim(), 4);
        let blocks = detect_su2_blocks(k.space()).unwrap();
        assert_eq!(blocks.p, 1);
        assert_eq!(blocks.blocks[0].qubits, vec![1, 2]);
        assert_eq!(blocks.residual_dim, 1);
        assert_eq!(blocks.per_qubit_projection_dims, vec![3, 3, 1]);
        assert_eq!(blocks.block_qubits, vec![1, 2]);
    }

    #[test]
    fn two_singlets_give_two_blocks() {
        let s = exact("|0101> - |0110> - |1001> + |1010>");
        let k = compute_kernel(&s, DEFAULT_TOL).unwrap();
        assert_eq!(k.dim(), 6);
        let blocks = detect_su2_blocks(k.space()).unwrap();
        assert_eq!(blocks.p, 2);
        assert_eq!(blocks.blocks[0].qubits, vec![1, 2]);
        assert_eq!(blocks.blocks[1].qubits, vec![3, 4]);
        assert_eq!(blocks.residual_dim, 0);
    }

    #[test]
    fn float_singlet_matches_exact_analysis() {
        let s = exact("|01> - |10>").to_float();
        let k = compute_kernel(&s, DEFAULT_TOL).unwrap();
        assert_eq!(k.dim(), 3);
        assert!(k.stable());
        let blocks = detect_su2_blocks(k.space()).unwrap();
        assert_eq!(blocks.p, 1);
        assert_eq!(blocks.blocks[0].qubits, vec![1, 2]);
        let frame = &blocks.blocks[0].frame;
        let uv = frame[0].bracket(&frame[1]).unwrap();
        assert!(uv.minus(&frame[2]).unwrap().norm() < STRUCTURE_TOL);
        assert!(bracket_closure_residual(k.space()).unwrap() < CLOSURE_TOL);
    }

    #[test]
    fn projection_dimension_two_is_rejected() {
        // span{A_1, B_1} is not a stabilizer kernel; its qubit-1 projection
        // has dimension 2 and must be flagged.
        let bad = Subspace::from_elements(
            1,
            vec![
                AlgebraElement::a(1, 1, qi(1)).unwrap(),
                AlgebraElement::b(1, 1, qi(1)).unwrap(),
            ],
        )
        .unwrap();
        assert!(matches!(
            qubit_projection_dim(&bad, 1),
            Err(Error::StructureViolation { .. })
        ));
    }

    #[test]
    fn intersect_support_with_everything_allowed_is_identity() {
        let s = exact("|01> - |10>");
        let k = compute_kernel(&s, DEFAULT_TOL).unwrap();
        let all = intersect_support(k.space(), &[1, 2], true).unwrap();
        assert!(all.eq_subspace(k.space()).unwrap());
        let one = intersect_support(k.space(), &[1], false).unwrap();
        assert_eq!(one.dim(), 0);
    }

    #[test]
    fn report_serializes_the_full_analysis() {
        let state = parse_state("|01> - |10>").unwrap();
        let report = stabilizer_report(&state, DEFAULT_TOL).unwrap();
        assert_eq!(report.kernel_dim, 3);
        assert_eq!(report.p, 1);
        assert_eq!(report.blocks, vec![vec![1, 2]]);
        assert_eq!(report.mode, "exact");
        assert!(report.formula_holds);
        assert!(report.tol_stable);
        assert_eq!(report.classification.bound_name, "nonproduct");

        let v = serde_json::to_value(&report).unwrap();
        for key in [
            "kernel_dim",
            "blocks",
            "p",
            "residual_dim",
            "per_qubit_projection_dims",
            "formula_holds",
            "closure_residual",
            "kernel_basis",
            "mode",
            "tol",
        ] {
            assert!(v.get(key).is_some(), "missing report key {key}");
        }
        assert_eq!(v["kernel_basis"].as_array().unwrap().len(), 3);
        assert_eq!(v["kernel_basis"][0].as_array().unwrap().len(), 7);
    }

    #[test]
    fn loose_tolerance_near_kernel_directions_are_refused() {
        // A state close to a singlet but not equal: at a very loose
        // tolerance the near-kernel directions get picked up and must be
        // rejected by the membership check rather than reported.
        let mut s = exact("|01> - |10>").to_float();
        s = crate::state::PureState::from_amplitudes(
            2,
            s.iter()
                .map(|(idx, z)| (idx, *z))
                .chain([(0u64, num::Complex::new(1e-3, 0.0))])
                .collect::<Vec<_>>(),
        )
        .unwrap();
        match compute_kernel(&s, 1e-2) {
            Err(Error::StructureViolation { .. }) => {}
            Ok(k) => {
                // If the SVD still resolves the perturbation, the kernel
                // must have shrunk to the exactly-annihilating directions.
                for x in k.space().basis() {
                    let moved = amp_map_norm_sq(&apply_element(&s, x).unwrap())
                        .to_f64()
                        .sqrt();
                    assert!(moved <= MEMBERSHIP_TOL * x.norm().max(1.0) * 2.0_f64.sqrt());
                }
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}
