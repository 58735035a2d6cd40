//! Named example states, random state generators, and the reference
//! catalog with frozen expected stabilizer dimensions.
//!
//! Exact constructors return unnormalized integer-amplitude states where
//! possible (normalization does not affect the stabilizer). The frozen
//! expectations in [`catalog`] are derived independently of the engine:
//!
//! * |0…0⟩ and every product of single-qubit states: dimension n;
//! * GHZ-type α|0…0⟩ + β|1…1⟩ with αβ ≠ 0, n ≥ 3: the kernel is the
//!   traceless diagonal algebra { Σ t_j A_j : Σ t_j = 0 }, dimension n−1;
//! * any two-qubit state with a maximally mixed marginal (singlet, Bell,
//!   two-qubit W): one su(2) block, dimension 3;
//! * products of s singlets and optionally one |0⟩: dimension 3s (+1);
//! * W states for n ≥ 3: only the diagonal direction
//!   (2−n)·iI + Σ_j A_j survives, dimension 1. Off-diagonal generators
//!   map the weight-1 support onto weight 0 and 2, and the pairwise
//!   cancellation conditions over n ≥ 3 qubits force those coefficients
//!   to zero;
//! * the two four-qubit states `block4` and `m4` below: dimension 3, a
//!   single four-qubit block.

use crate::error::{Error, Result};
use crate::state::parse::parse_rational;
use crate::state::{AnyState, Mat2, PureState, MAX_QUBITS};
use num::{BigRational, Complex, One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Q = BigRational;
type CQ = Complex<Q>;

fn cq(re: i64) -> CQ {
    Complex::new(Q::from_integer(re.into()), Q::zero())
}

/// α|0…0⟩ + β|1…1⟩.
pub fn ghz(n: usize, alpha: Q, beta: Q) -> Result<PureState<Q>> {
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::param(
            "ghz requires nonzero alpha and beta".to_string(),
        ));
    }
    PureState::from_amplitudes(
        n,
        vec![
            (0u64, Complex::new(alpha, Q::zero())),
            ((1u64 << n) - 1, Complex::new(beta, Q::zero())),
        ],
    )
}

/// |01⟩ − |10⟩ (unnormalized singlet).
pub fn singlet() -> PureState<Q> {
    PureState::from_amplitudes(2, vec![(0b01, cq(1)), (0b10, cq(-1))]).expect("valid amplitudes")
}

/// |0…0⟩.
pub fn basis_state(n: usize) -> Result<PureState<Q>> {
    PureState::from_amplitudes(n, vec![(0u64, cq(1))])
}

/// Σ_k |0…1_k…0⟩ (unnormalized W state).
pub fn w_state(n: usize) -> Result<PureState<Q>> {
    PureState::from_amplitudes(n, (1..=n).map(|k| (1u64 << (n - k), cq(1))))
}

/// ⌊n/2⌋ singlets on consecutive pairs, followed by |0⟩ when n is odd.
pub fn singlet_product(n: usize) -> Result<PureState<Q>> {
    if n < 2 {
        return Err(Error::param(
            "singlet_product requires at least 2 qubits".to_string(),
        ));
    }
    let mut state = singlet();
    for _ in 1..n / 2 {
        state = state.tensor(&singlet())?;
    }
    if n % 2 == 1 {
        state = state.tensor(&basis_state(1)?)?;
    }
    Ok(state)
}

/// |0011⟩ + |0101⟩ − 2|0110⟩ − 2|1001⟩ + |1010⟩ + |1100⟩: a four-qubit
/// state whose stabilizer is a single four-qubit su(2) block.
pub fn block4() -> PureState<Q> {
    PureState::from_amplitudes(
        4,
        vec![
            (0b0011, cq(1)),
            (0b0101, cq(1)),
            (0b0110, cq(-2)),
            (0b1001, cq(-2)),
            (0b1010, cq(1)),
            (0b1100, cq(1)),
        ],
    )
    .expect("valid amplitudes")
}

/// (|0011⟩+|1100⟩ + ω(|1010⟩+|0101⟩) + ω²(|1001⟩+|0110⟩))/√6 with
/// ω = exp(2πi/3): the other known four-qubit single-block state.
pub fn m4() -> PureState<f64> {
    let s = 1.0 / 6.0_f64.sqrt();
    let omega = Complex::new(-0.5, 3.0_f64.sqrt() / 2.0);
    let omega2 = omega * omega;
    let one = Complex::new(1.0, 0.0);
    PureState::from_amplitudes(
        4,
        vec![
            (0b0011, one * s),
            (0b1100, one * s),
            (0b1010, omega * s),
            (0b0101, omega * s),
            (0b1001, omega2 * s),
            (0b0110, omega2 * s),
        ],
    )
    .expect("valid amplitudes")
}

fn cgauss(rng: &mut impl Rng) -> Complex<f64> {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random state: 2^n complex Gaussian amplitudes, normalized.
pub fn haar_state(n: usize, rng: &mut impl Rng) -> Result<PureState<f64>> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::TooManyQubits { n, max: MAX_QUBITS });
    }
    let dim = 1u64 << n;
    let amps: Vec<(u64, Complex<f64>)> = (0..dim).map(|i| (i, cgauss(rng))).collect();
    let norm = amps.iter().map(|(_, z)| z.norm_sqr()).sum::<f64>().sqrt();
    PureState::from_amplitudes(n, amps.into_iter().map(|(i, z)| (i, z / norm)))
}

/// Product of n independent Haar-random single-qubit states.
pub fn product_state(n: usize, rng: &mut impl Rng) -> Result<PureState<f64>> {
    let mut state = haar_state(1, rng)?;
    for _ in 1..n {
        state = state.tensor(&haar_state(1, rng)?)?;
    }
    Ok(state)
}

/// Haar-random 2×2 unitary: QR of a complex Gaussian matrix with the R
/// diagonal made real positive.
pub fn haar_unitary(rng: &mut impl Rng) -> Mat2 {
    loop {
        let (g00, g10, g01, g11) = (cgauss(rng), cgauss(rng), cgauss(rng), cgauss(rng));
        let r00 = (g00.norm_sqr() + g10.norm_sqr()).sqrt();
        if r00 < 1e-6 {
            continue;
        }
        let q00 = g00 / r00;
        let q10 = g10 / r00;
        let proj = q00.conj() * g01 + q10.conj() * g11;
        let v0 = g01 - proj * q00;
        let v1 = g11 - proj * q10;
        let r11 = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
        if r11 < 1e-6 {
            continue;
        }
        return Mat2::new([[q00, v0 / r11], [q10, v1 / r11]]);
    }
}

/// One independent Haar-random factor per qubit.
pub fn random_local_unitaries(n: usize, rng: &mut impl Rng) -> Vec<Mat2> {
    (0..n).map(|_| haar_unitary(rng)).collect()
}

/// Parameters for [`make_named`]. `alpha` and `beta` default to 1.
#[derive(Clone, Debug, Default)]
pub struct NamedParams {
    pub n: Option<usize>,
    pub alpha: Option<Q>,
    pub beta: Option<Q>,
    pub seed: u64,
}

impl NamedParams {
    pub fn with_n(n: usize) -> Self {
        NamedParams {
            n: Some(n),
            ..Default::default()
        }
    }

    pub fn parse_coeff(text: &str) -> Result<Q> {
        parse_rational(text)
    }
}

fn require_n(name: &str, params: &NamedParams) -> Result<usize> {
    params.n.ok_or_else(|| {
        Error::param(format!("state '{name}' requires an explicit qubit count"))
    })
}

fn fixed_n(name: &str, params: &NamedParams, fixed: usize) -> Result<usize> {
    match params.n {
        None => Ok(fixed),
        Some(n) if n == fixed => Ok(fixed),
        Some(n) => Err(Error::param(format!(
            "state '{name}' is defined on {fixed} qubits, not {n}"
        ))),
    }
}

/// Construct a named state. Recognized names: ghz, singlet,
/// singlet_product, m4, block4, w, basis, random_haar, random_product.
pub fn make_named(name: &str, params: &NamedParams) -> Result<AnyState> {
    match name {
        "ghz" => {
            let n = require_n(name, params)?;
            let alpha = params.alpha.clone().unwrap_or_else(Q::one);
            let beta = params.beta.clone().unwrap_or_else(Q::one);
            Ok(AnyState::Exact(ghz(n, alpha, beta)?))
        }
        "singlet" => {
            fixed_n(name, params, 2)?;
            Ok(AnyState::Exact(singlet()))
        }
        "singlet_product" => Ok(AnyState::Exact(singlet_product(require_n(name, params)?)?)),
        "m4" => {
            fixed_n(name, params, 4)?;
            Ok(AnyState::Float(m4()))
        }
        "block4" => {
            fixed_n(name, params, 4)?;
            Ok(AnyState::Exact(block4()))
        }
        "w" => Ok(AnyState::Exact(w_state(require_n(name, params)?)?)),
        "basis" => Ok(AnyState::Exact(basis_state(require_n(name, params)?)?)),
        "random_haar" => {
            let n = require_n(name, params)?;
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            Ok(AnyState::Float(haar_state(n, &mut rng)?))
        }
        "random_product" => {
            let n = require_n(name, params)?;
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            Ok(AnyState::Float(product_state(n, &mut rng)?))
        }
        _ => Err(Error::UnknownState {
            name: name.to_string(),
        }),
    }
}

/// A named state with its independently derived stabilizer dimension and
/// block layout, used as ground truth by the verification suites.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub state: AnyState,
    pub expected_dim: usize,
    pub expected_blocks: Vec<Vec<usize>>,
}

fn entry(
    name: String,
    state: AnyState,
    expected_dim: usize,
    expected_blocks: Vec<Vec<usize>>,
) -> CatalogEntry {
    CatalogEntry {
        name,
        state,
        expected_dim,
        expected_blocks,
    }
}

/// The deterministic reference catalog up to `n_max` qubits.
pub fn catalog(n_max: usize) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.push(entry(
            format!("basis_{n}"),
            AnyState::Exact(basis_state(n)?),
            n,
            vec![],
        ));
    }
    if n_max >= 2 {
        out.push(entry(
            "singlet".to_string(),
            AnyState::Exact(singlet()),
            3,
            vec![vec![1, 2]],
        ));
    }
    for n in 2..=n_max {
        let (dim, blocks) = if n == 2 {
            (3, vec![vec![1, 2]])
        } else {
            (n - 1, vec![])
        };
        out.push(entry(
            format!("ghz_{n}"),
            AnyState::Exact(ghz(n, Q::one(), Q::one())?),
            dim,
            blocks.clone(),
        ));
        if n >= 3 {
            out.push(entry(
                format!("ghz_{n}_skew"),
                AnyState::Exact(ghz(n, Q::one(), <Q as crate::scalar::Coeff>::from_int(2))?),
                n - 1,
                vec![],
            ));
        }
    }
    for n in 2..=n_max {
        let (dim, blocks) = if n == 2 {
            (3, vec![vec![1, 2]])
        } else {
            (1, vec![])
        };
        out.push(entry(
            format!("w_{n}"),
            AnyState::Exact(w_state(n)?),
            dim,
            blocks,
        ));
    }
    for n in 3..=n_max {
        let pairs = n / 2;
        let dim = 3 * pairs + n % 2;
        let blocks: Vec<Vec<usize>> = (0..pairs).map(|k| vec![2 * k + 1, 2 * k + 2]).collect();
        out.push(entry(
            format!("singlet_product_{n}"),
            AnyState::Exact(singlet_product(n)?),
            dim,
            blocks,
        ));
    }
    if n_max >= 4 {
        out.push(entry(
            "block4".to_string(),
            AnyState::Exact(block4()),
            3,
            vec![vec![1, 2, 3, 4]],
        ));
        out.push(entry(
            "m4".to_string(),
            AnyState::Float(m4()),
            3,
            vec![vec![1, 2, 3, 4]],
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::parse::parse_state;

    #[test]
    fn ghz_matches_its_ket_expansion() {
        let built = ghz(3, Q::one(), Q::one()).unwrap();
        match parse_state("|000> + |111>").unwrap() {
            AnyState::Exact(parsed) => assert_eq!(built, parsed),
            AnyState::Float(_) => panic!("expected exact"),
        }
    }

    #[test]
    fn ghz_rejects_vanishing_coefficients() {
        assert!(ghz(3, Q::zero(), Q::one()).is_err());
    }

    #[test]
    fn singlet_product_layout() {
        let s = singlet_product(5).unwrap();
        assert_eq!(s.n(), 5);
        // Two singlets and a |0⟩: support is the 4 sign patterns of the
        // pairs, each ending in 0.
        assert_eq!(s.support_len(), 4);
        for (bits, _) in s.iter() {
            assert_eq!(bits & 1, 0);
        }
    }

    #[test]
    fn w_state_support_is_weight_one() {
        let s = w_state(4).unwrap();
        assert_eq!(s.support_len(), 4);
        for (bits, _) in s.iter() {
            assert_eq!(bits.count_ones(), 1);
        }
    }

    #[test]
    fn four_qubit_examples_have_the_right_support() {
        let b = block4();
        assert_eq!(b.support_len(), 6);
        for (bits, _) in b.iter() {
            assert_eq!(bits.count_ones(), 2);
        }
        let m = m4();
        assert_eq!(m.support_len(), 6);
        assert!((m.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_unitary_is_unitary_and_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = haar_unitary(&mut rng);
        assert!(u.unitarity_deviation() < 1e-12);

        let mut rng2 = ChaCha8Rng::seed_from_u64(7);
        let v = haar_unitary(&mut rng2);
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(u.e[r][c], v.e[r][c]);
            }
        }
    }

    #[test]
    fn haar_state_is_normalized_and_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = haar_state(3, &mut rng).unwrap();
        assert!((s.norm_sq() - 1.0).abs() < 1e-12);

        let mut rng2 = ChaCha8Rng::seed_from_u64(11);
        let t = haar_state(3, &mut rng2).unwrap();
        assert_eq!(s, t);

        let mut rng3 = ChaCha8Rng::seed_from_u64(12);
        let r = haar_state(3, &mut rng3).unwrap();
        assert_ne!(s, r);
    }

    #[test]
    fn named_constructors_validate_parameters() {
        assert!(matches!(
            make_named("nope", &NamedParams::default()),
            Err(Error::UnknownState { .. })
        ));
        assert!(make_named("ghz", &NamedParams::default()).is_err());
        assert!(make_named("m4", &NamedParams::with_n(5)).is_err());
        assert!(make_named("m4", &NamedParams::default()).is_ok());
        assert!(make_named("singlet", &NamedParams::with_n(2)).is_ok());

        let s = make_named("random_haar", &NamedParams::with_n(3)).unwrap();
        assert_eq!(s.n(), 3);
        assert!(!s.is_exact());
    }

    #[test]
    fn catalog_is_deterministic_and_in_bounds() {
        let entries = catalog(4).unwrap();
        let names: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
        for expected in ["basis_1", "singlet", "ghz_3", "w_4", "singlet_product_4", "block4", "m4"]
        {
            assert!(names.contains(&expected), "missing {expected}");
        }
        for e in &entries {
            let n = e.state.n();
            assert!(e.expected_dim as f64 <= 1.5 * n as f64, "{}", e.name);
        }
        let again = catalog(4).unwrap();
        assert_eq!(names.len(), again.len());
    }
}
