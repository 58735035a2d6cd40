//! Tensor factorization of pure states and the dimension bounds that
//! depend on it.
//!
//! A subset S of qubits carries a tensor factor exactly when the
//! bipartition matrix of the cut (S, complement) has rank 1. The finest
//! factorization is found by repeatedly splitting off the smallest such
//! subset; a state with no splitting subset is nonproduct. Singlet pairs
//! are the two-qubit factors whose one-qubit marginal is maximally mixed,
//! which characterizes the states locally equivalent to
//! (|01> - |10>)/sqrt(2).
//!
//! The stabilizer dimension of a state obeys bounds determined by this
//! structure: 3n/2 in general, n when no singlet pair is present, n - 1
//! when additionally no single-qubit factor is present, and for nonproduct
//! states 1 (n = 1), 3 (n = 2), or n - 1 (n >= 3).

use crate::error::{Error, Result};
use crate::scalar::Coeff;
use crate::state::{bipartition_rank, reduced_density_one_qubit, PureState};
use itertools::Itertools;
use num::Complex;
use serde::{Deserialize, Serialize};

/// Absolute tolerance on the marginal-eigenvalue deviation below which a
/// two-qubit factor counts as a singlet pair.
pub const SINGLET_TOL: f64 = 1e-8;

/// The finest tensor factorization of a state, as sorted qubit lists
/// ordered by their smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub parts: Vec<Vec<usize>>,
}

impl Factorization {
    pub fn is_product(&self) -> bool {
        self.parts.len() > 1
    }

    pub fn single_qubit_factors(&self) -> Vec<usize> {
        self.parts
            .iter()
            .filter(|p| p.len() == 1)
            .map(|p| p[0])
            .collect()
    }
}

fn split_part<R: Coeff>(
    state: &PureState<R>,
    part: Vec<usize>,
    tol: f64,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    let m = part.len();
    if m > 1 {
        for size in 1..=m / 2 {
            for s in part.iter().cloned().combinations(size) {
                if bipartition_rank(state, &s, tol)? == 1 {
                    let rest: Vec<usize> = part.iter().cloned().filter(|q| !s.contains(q)).collect();
                    split_part(state, s, tol, out)?;
                    split_part(state, rest, tol, out)?;
                    return Ok(());
                }
            }
        }
    }
    out.push(part);
    Ok(())
}

/// Finest tensor factorization. Candidate subsets of each part are tried in
/// increasing size (up to half the part) and lexicographic order within a
/// size; the first rank-1 cut splits the part and both sides recurse.
pub fn finest_factorization<R: Coeff>(state: &PureState<R>, tol: f64) -> Result<Factorization> {
    let mut parts = Vec::new();
    split_part(state, (1..=state.n()).collect(), tol, &mut parts)?;
    parts.sort_by_key(|p| p[0]);
    Ok(Factorization { parts })
}

/// Extract the tensor factor carried by `part`, which must be one side of a
/// rank-1 cut. The factor's qubit i is the i-th smallest member of `part`.
/// The result is unnormalized (proportional to the true factor).
pub fn extract_factor<R: Coeff>(
    state: &PureState<R>,
    part: &[usize],
    tol: f64,
) -> Result<PureState<R>> {
    let mut sorted = part.to_vec();
    sorted.sort_unstable();
    let n = state.n();
    if sorted.len() == n && sorted.iter().enumerate().all(|(i, &q)| q == i + 1) {
        return Ok(state.clone());
    }
    if bipartition_rank(state, part, tol)? != 1 {
        return Err(Error::InvalidCut {
            msg: format!("qubits {part:?} do not carry a tensor factor"),
        });
    }
    let rest: Vec<usize> = (1..=n).filter(|q| !sorted.contains(q)).collect();

    let pack = |bits: u64, qubits: &[usize]| -> u64 {
        qubits.iter().enumerate().fold(0u64, |acc, (pos, &j)| {
            acc | (u64::from(crate::state::bit_of(bits, j, n)) << (qubits.len() - 1 - pos))
        })
    };

    // Pick the pivot column (assignment of the complementary qubits): the
    // first populated one in exact mode, the heaviest one in float mode.
    let mut weights: std::collections::BTreeMap<u64, f64> = std::collections::BTreeMap::new();
    for (bits, amp) in state.iter() {
        let c = pack(bits, &rest);
        let w = amp.re.to_f64().powi(2) + amp.im.to_f64().powi(2);
        *weights.entry(c).or_insert(0.0) += w;
    }
    let pivot = if R::EXACT {
        *weights.keys().next().expect("state has support")
    } else {
        weights
            .iter()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(c, _)| *c)
            .expect("state has support")
    };

    let mut amps: Vec<(u64, Complex<R>)> = Vec::new();
    for (bits, amp) in state.iter() {
        if pack(bits, &rest) == pivot {
            amps.push((pack(bits, &sorted), amp.clone()));
        }
    }
    PureState::from_amplitudes(sorted.len(), amps)
}

/// Two-qubit parts whose extracted factor has a maximally mixed one-qubit
/// marginal, returned as (smaller, larger) qubit pairs in part order.
pub fn singlet_pairs<R: Coeff>(
    state: &PureState<R>,
    parts: &[Vec<usize>],
    tol: f64,
) -> Result<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    for part in parts {
        if part.len() != 2 {
            continue;
        }
        let factor = extract_factor(state, part, tol)?;
        let rho = reduced_density_one_qubit(&factor, 1)?;
        let mixed = if R::EXACT {
            rho.is_exactly_maximally_mixed()
        } else {
            rho.maximally_mixed_deviation() <= SINGLET_TOL
        };
        if mixed {
            pairs.push((part[0], part[1]));
        }
    }
    Ok(pairs)
}

/// Which stabilizer-dimension bound applies and whether it is attained.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub is_product: bool,
    pub parts: Vec<Vec<usize>>,
    pub singlet_pairs: Vec<(usize, usize)>,
    pub single_qubit_factors: Vec<usize>,
    pub bound_name: String,
    pub bound_value: f64,
    pub kernel_dim: usize,
    pub saturated: bool,
}

/// Select the tightest applicable dimension bound given the factorization
/// data. Errors if `kernel_dim` exceeds the bound, which no state attains.
pub fn classify_given(
    n: usize,
    kernel_dim: usize,
    parts: Vec<Vec<usize>>,
    singlets: Vec<(usize, usize)>,
) -> Result<Classification> {
    let single_qubit_factors: Vec<usize> = parts
        .iter()
        .filter(|p| p.len() == 1)
        .map(|p| p[0])
        .collect();

    // (name, value, specificity); the tightest bound wins, with specificity
    // breaking value ties.
    let mut candidates: Vec<(&'static str, f64, u8)> = vec![("general", 1.5 * n as f64, 0)];
    if singlets.is_empty() {
        candidates.push(("no_singlet", n as f64, 1));
        if single_qubit_factors.is_empty() {
            candidates.push(("no_singlet_no_single_qubit", (n - 1) as f64, 2));
        }
    }
    if parts.len() == 1 {
        let v = match n {
            1 => 1.0,
            2 => 3.0,
            _ => (n - 1) as f64,
        };
        candidates.push(("nonproduct", v, 3));
    }
    candidates.sort_by(|a, b| a.1.total_cmp(&b.1).then(b.2.cmp(&a.2)));
    let (bound_name, bound_value, _) = candidates[0];

    if kernel_dim as f64 > bound_value {
        return Err(Error::structure(format!(
            "stabilizer dimension {kernel_dim} exceeds the {bound_name} bound {bound_value}"
        )));
    }
    Ok(Classification {
        is_product: parts.len() > 1,
        singlet_pairs: singlets,
        single_qubit_factors,
        bound_name: bound_name.to_string(),
        bound_value,
        kernel_dim,
        saturated: kernel_dim as f64 == bound_value,
        parts,
    })
}

/// Factor the state and classify its stabilizer dimension against the
/// tightest applicable bound.
pub fn classify<R: Coeff>(
    state: &PureState<R>,
    kernel_dim: usize,
    tol: f64,
) -> Result<Classification> {
    let factorization = finest_factorization(state, tol)?;
    let singlets = singlet_pairs(state, &factorization.parts, tol)?;
    classify_given(state.n(), kernel_dim, factorization.parts, singlets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::parse::parse_state;
    use crate::state::AnyState;
    use num::BigRational;

    const TOL: f64 = 1e-9;

    fn exact(text: &str) -> PureState<BigRational> {
        match parse_state(text).unwrap() {
            AnyState::Exact(s) => s,
            AnyState::Float(_) => panic!("expected exact parse for {text}"),
        }
    }

    #[test]
    fn basis_state_splits_into_single_qubits() {
        let s = exact("|000>");
        let f = finest_factorization(&s, TOL).unwrap();
        assert_eq!(f.parts, vec![vec![1], vec![2], vec![3]]);
        assert!(f.is_product());
        assert_eq!(f.single_qubit_factors(), vec![1, 2, 3]);
    }

    #[test]
    fn ghz_is_nonproduct() {
        let s = exact("|000> + |111>");
        let f = finest_factorization(&s, TOL).unwrap();
        assert_eq!(f.parts, vec![vec![1, 2, 3]]);
        assert!(!f.is_product());
    }

    #[test]
    fn singlet_times_basis_state() {
        let s = exact("|010> - |100>");
        let f = finest_factorization(&s, TOL).unwrap();
        assert_eq!(f.parts, vec![vec![1, 2], vec![3]]);
        let pairs = singlet_pairs(&s, &f.parts, TOL).unwrap();
        assert_eq!(pairs, vec![(1, 2)]);
    }

    #[test]
    fn interleaved_singlet_is_found() {
        // Singlet on qubits 1 and 3, |1> on qubit 2.
        let s = exact("|011> - |110>");
        let f = finest_factorization(&s, TOL).unwrap();
        assert_eq!(f.parts, vec![vec![1, 3], vec![2]]);
        let pairs = singlet_pairs(&s, &f.parts, TOL).unwrap();
        assert_eq!(pairs, vec![(1, 3)]);

        let factor = extract_factor(&s, &[1, 3], TOL).unwrap();
        assert_eq!(factor.n(), 2);
        let rho = reduced_density_one_qubit(&factor, 1).unwrap();
        assert!(rho.is_exactly_maximally_mixed());
    }

    #[test]
    fn entangled_non_singlet_pair_is_not_a_singlet() {
        // |00> + 2|11> factors nothing and its marginal is not mixed.
        let s = exact("|00> + 2|11>");
        let f = finest_factorization(&s, TOL).unwrap();
        assert_eq!(f.parts, vec![vec![1, 2]]);
        let pairs = singlet_pairs(&s, &f.parts, TOL).unwrap();
        assert!(pairs.is_empty());
    }

    #[test]
    fn extract_factor_rejects_entangling_cuts() {
        let s = exact("|000> + |111>");
        assert!(matches!(
            extract_factor(&s, &[1], TOL),
            Err(Error::InvalidCut { .. })
        ));
    }

    #[test]
    fn float_factorization_matches_exact() {
        let s = exact("|010> - |100>").to_float();
        let f = finest_factorization(&s, TOL).unwrap();
        assert_eq!(f.parts, vec![vec![1, 2], vec![3]]);
        let pairs = singlet_pairs(&s, &f.parts, TOL).unwrap();
        assert_eq!(pairs, vec![(1, 2)]);
    }

    #[test]
    fn classification_picks_the_tightest_bound() {
        // Singlet: nonproduct n = 2 bound 3, saturated at dimension 3.
        let c = classify(&exact("|01> - |10>"), 3, TOL).unwrap();
        assert_eq!(c.bound_name, "nonproduct");
        assert_eq!(c.bound_value, 3.0);
        assert!(c.saturated);
        assert_eq!(c.singlet_pairs, vec![(1, 2)]);

        // Generic entangled pair: no singlet, no single-qubit factor.
        let c = classify(&exact("|00> + 2|11>"), 1, TOL).unwrap();
        assert_eq!(c.bound_name, "no_singlet_no_single_qubit");
        assert_eq!(c.bound_value, 1.0);
        assert!(c.saturated);

        // Fully product basis state: n bound.
        let c = classify(&exact("|000>"), 3, TOL).unwrap();
        assert_eq!(c.bound_name, "no_singlet");
        assert_eq!(c.bound_value, 3.0);
        assert!(c.saturated);
        assert_eq!(c.single_qubit_factors, vec![1, 2, 3]);

        // Singlet times |0>: only the general 3n/2 bound applies.
        let c = classify(&exact("|010> - |100>"), 4, TOL).unwrap();
        assert_eq!(c.bound_name, "general");
        assert_eq!(c.bound_value, 4.5);
        assert!(!c.saturated);

        // Single qubit: nonproduct bound 1.
        let c = classify(&exact("|0>"), 1, TOL).unwrap();
        assert_eq!(c.bound_name, "nonproduct");
        assert_eq!(c.bound_value, 1.0);
        assert!(c.saturated);

        // GHZ on 4 qubits: nonproduct bound n - 1.
        let c = classify(&exact("|0000> + |1111>"), 3, TOL).unwrap();
        assert_eq!(c.bound_name, "nonproduct");
        assert_eq!(c.bound_value, 3.0);
        assert!(c.saturated);
    }

    #[test]
    fn classification_rejects_bound_violations() {
        assert!(matches!(
            classify(&exact("|000> + |111>"), 3, TOL),
            Err(Error::StructureViolation { .. })
        ));
    }
}
