//! n-qubit pure states over exact or floating scalars.
//!
//! A state is a sparse amplitude table keyed by the linear value of its
//! multi-index. Qubit 1 is the leftmost bit of the ket string and the most
//! significant bit of the linear index, so `|011⟩` on three qubits is
//! index 3. Amplitudes need not be normalized: every quantity computed
//! downstream (kernels, ranks, block structure) is invariant under nonzero
//! scaling, and trace-1 contracts normalize internally.

pub mod json;
pub mod parse;

use crate::error::{Error, Result};
use crate::scalar::Coeff;
use num::{BigRational, Complex, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Hard cap on qubit count (amplitude tables up to 65536 entries).
pub const MAX_QUBITS: usize = 16;

/// Value of bit `j` (1-based, qubit 1 = most significant) of a linear index.
#[inline]
pub fn bit_of(bits: u64, j: usize, n: usize) -> u8 {
    ((bits >> (n - j)) & 1) as u8
}

/// Linear index with bit `j` flipped.
#[inline]
pub fn flip_bit(bits: u64, j: usize, n: usize) -> u64 {
    bits ^ (1u64 << (n - j))
}

/// Label of one computational basis state: n binary digits, qubit 1 leftmost.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MultiIndex {
    n: usize,
    bits: u64,
}

impl MultiIndex {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_qubit_count(n)?;
        if n < 64 && bits >> n != 0 {
            return Err(Error::param(format!(
                "index {bits} out of range for {n} qubits"
            )));
        }
        Ok(MultiIndex { n, bits })
    }

    /// Parse a bit string such as "0011".
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let mut bits = 0u64;
        for ch in s.chars() {
            match ch {
                '0' => bits <<= 1,
                '1' => bits = (bits << 1) | 1,
                _ => {
                    return Err(Error::param(format!("invalid bit character {ch:?}")));
                }
            }
        }
        MultiIndex::new(s.len(), bits)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn linear(&self) -> u64 {
        self.bits
    }

    /// Digit i_j for 1 ≤ j ≤ n.
    pub fn bit(&self, j: usize) -> u8 {
        bit_of(self.bits, j, self.n)
    }

    pub fn flipped(&self, j: usize) -> Self {
        MultiIndex {
            n: self.n,
            bits: flip_bit(self.bits, j, self.n),
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 1..=self.n {
            write!(f, "{}", self.bit(j))?;
        }
        Ok(())
    }
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("qubit count must be at least 1"));
    }
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Add `dz` into the amplitude at `idx`, dropping the entry if it cancels.
pub(crate) fn add_amp<R: Coeff>(
    map: &mut BTreeMap<u64, Complex<R>>,
    idx: u64,
    dz: Complex<R>,
) {
    if dz.is_zero() {
        return;
    }
    let entry = map.entry(idx).or_insert_with(Complex::zero);
    *entry = entry.clone() + dz;
    if entry.is_zero() {
        map.remove(&idx);
    }
}

/// Sparse n-qubit pure state. Invariants: at least one nonzero amplitude,
/// every stored amplitude nonzero, all indices below 2^n.
#[derive(Clone, PartialEq, Debug)]
pub struct PureState<R: Coeff> {
    n: usize,
    amps: BTreeMap<u64, Complex<R>>,
}

impl<R: Coeff> PureState<R> {
    /// Build from (index, amplitude) terms; equal indices are summed and
    /// exact cancellations removed.
    pub fn from_amplitudes(
        n: usize,
        terms: impl IntoIterator<Item = (u64, Complex<R>)>,
    ) -> Result<Self> {
        check_qubit_count(n)?;
        let mut amps = BTreeMap::new();
        for (idx, z) in terms {
            if n < 64 && idx >> n != 0 {
                return Err(Error::param(format!(
                    "index {idx} out of range for {n} qubits"
                )));
            }
            add_amp(&mut amps, idx, z);
        }
        if amps.is_empty() {
            return Err(Error::ZeroState);
        }
        Ok(PureState { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    /// Amplitude c_I (zero when absent).
    pub fn amplitude(&self, bits: u64) -> Complex<R> {
        self.amps.get(&bits).cloned().unwrap_or_else(Complex::zero)
    }

    /// Nonzero amplitudes in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, &Complex<R>)> {
        self.amps.iter().map(|(k, v)| (*k, v))
    }

    pub fn indices(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        let n = self.n;
        self.amps.keys().map(move |&bits| MultiIndex { n, bits })
    }

    /// ⟨ψ|ψ⟩, exact in exact mode.
    pub fn norm_sq(&self) -> R {
        self.amps
            .values()
            .fold(R::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// Tensor product; `self` takes qubits 1..=n, `other` the rest.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let n = self.n + other.n;
        check_qubit_count(n)?;
        let mut amps = BTreeMap::new();
        for (i, a) in self.amps.iter() {
            for (j, b) in other.amps.iter() {
                let idx = (i << other.n) | j;
                add_amp(&mut amps, idx, a.clone() * b.clone());
            }
        }
        debug_assert!(!amps.is_empty());
        Ok(PureState { n, amps })
    }

    /// Relabel qubits: qubit j moves to position `perm[j-1]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::QubitCountMismatch {
                left: perm.len(),
                right: self.n,
            });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p == 0 || p > self.n || seen[p - 1] {
                return Err(Error::param("not a permutation of 1..=n"));
            }
            seen[p - 1] = true;
        }
        let mut amps = BTreeMap::new();
        for (&idx, z) in self.amps.iter() {
            let mut new_idx = 0u64;
            for j in 1..=self.n {
                if bit_of(idx, j, self.n) == 1 {
                    new_idx |= 1u64 << (self.n - perm[j - 1]);
                }
            }
            amps.insert(new_idx, z.clone());
        }
        Ok(PureState { n: self.n, amps })
    }

    pub fn to_float(&self) -> PureState<f64> {
        PureState {
            n: self.n,
            amps: self
                .amps
                .iter()
                .map(|(&k, z)| (k, Complex::new(z.re.to_f64(), z.im.to_f64())))
                .collect(),
        }
    }

    /// Dense amplitude vector of length 2^n.
    pub fn dense(&self) -> Vec<Complex<R>> {
        let mut v = vec![Complex::zero(); 1usize << self.n];
        for (&idx, z) in self.amps.iter() {
            v[idx as usize] = z.clone();
        }
        v
    }
}

/// A state in whichever scalar mode its construction permitted.
#[derive(Clone, Debug)]
pub enum AnyState {
    Exact(PureState<BigRational>),
    Float(PureState<f64>),
}

impl AnyState {
    pub fn n(&self) -> usize {
        match self {
            AnyState::Exact(s) => s.n(),
            AnyState::Float(s) => s.n(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, AnyState::Exact(_))
    }

    pub fn mode_str(&self) -> &'static str {
        match self {
            AnyState::Exact(_) => "exact",
            AnyState::Float(_) => "float",
        }
    }

    pub fn to_float_state(&self) -> PureState<f64> {
        match self {
            AnyState::Exact(s) => s.to_float(),
            AnyState::Float(s) => s.clone(),
        }
    }
}

/// 2×2 complex matrix, row-major; the local factors of U_1⊗…⊗U_n.
#[derive(Clone, Copy, Debug)]
pub struct Mat2 {
    pub e: [[Complex<f64>; 2]; 2],
}

impl Mat2 {
    pub fn new(e: [[Complex<f64>; 2]; 2]) -> Self {
        Mat2 { e }
    }

    pub fn identity() -> Self {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        Mat2 {
            e: [[one, zero], [zero, one]],
        }
    }

    /// Bit flip, used in tests and the relabeling example.
    pub fn x_gate() -> Self {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        Mat2 {
            e: [[zero, one], [one, zero]],
        }
    }

    /// Max-abs entry of U†U − I.
    pub fn unitarity_deviation(&self) -> f64 {
        let mut dev = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                let mut s = Complex::new(0.0, 0.0);
                for k in 0..2 {
                    s += self.e[k][r].conj() * self.e[k][c];
                }
                let target = if r == c { 1.0 } else { 0.0 };
                dev = dev.max((s - Complex::new(target, 0.0)).norm());
            }
        }
        dev
    }
}

/// Tolerance for accepting a factor as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// Apply U_1 ⊗ U_2 ⊗ ⋯ ⊗ U_n to the state, one factor per qubit.
pub fn apply_local_unitary(state: &PureState<f64>, factors: &[Mat2]) -> Result<PureState<f64>> {
    let n = state.n();
    if factors.len() != n {
        return Err(Error::QubitCountMismatch {
            left: factors.len(),
            right: n,
        });
    }
    for (j, u) in factors.iter().enumerate() {
        let deviation = u.unitarity_deviation();
        if deviation > UNITARY_TOL {
            return Err(Error::NonUnitary {
                qubit: j + 1,
                deviation,
            });
        }
    }
    let mut amps = state.amps.clone();
    for (j, u) in factors.iter().enumerate() {
        let qubit = j + 1;
        let mut next: BTreeMap<u64, Complex<f64>> = BTreeMap::new();
        for (&idx, z) in amps.iter() {
            let b = bit_of(idx, qubit, n) as usize;
            let idx0 = if b == 0 { idx } else { flip_bit(idx, qubit, n) };
            let idx1 = flip_bit(idx0, qubit, n);
            add_amp(&mut next, idx0, u.e[0][b] * z);
            add_amp(&mut next, idx1, u.e[1][b] * z);
        }
        amps = next;
    }
    if amps.is_empty() {
        // Unitaries cannot annihilate a state; only float cancellation could.
        return Err(Error::ZeroState);
    }
    Ok(PureState { n, amps })
}

/// 2×2 Hermitian operator: h00, h11 real, h10 = conj(h01).
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOneQubit<R: Coeff> {
    pub h00: R,
    pub h11: R,
    pub h01: Complex<R>,
}

impl<R: Coeff> HermitianOneQubit<R> {
    pub fn trace(&self) -> R {
        self.h00.clone() + self.h11.clone()
    }

    /// Distance of the eigenvalue pair from (1/2, 1/2). For a trace-1
    /// Hermitian 2×2 operator the eigenvalues are 1/2 ± d with
    /// d = sqrt((h00 − 1/2)² + |h01|²), so this returns d exactly.
    pub fn maximally_mixed_deviation(&self) -> f64 {
        let d00 = self.h00.to_f64() - 0.5;
        let off = Complex::new(self.h01.re.to_f64(), self.h01.im.to_f64()).norm_sqr();
        (d00 * d00 + off).sqrt()
    }

    /// Exact test: both eigenvalues equal (requires trace normalized to 1).
    pub fn is_exactly_maximally_mixed(&self) -> bool {
        self.h00 == self.h11 && self.h01.is_zero()
    }
}

/// Partial trace over all qubits except `j`, normalized to trace 1.
pub fn reduced_density_one_qubit<R: Coeff>(
    state: &PureState<R>,
    j: usize,
) -> Result<HermitianOneQubit<R>> {
    let n = state.n();
    if j == 0 || j > n {
        return Err(Error::QubitIndex { index: j, n });
    }
    let norm = state.norm_sq();
    let mut h00 = R::zero();
    let mut h11 = R::zero();
    let mut h01: Complex<R> = Complex::zero();
    for (&idx, z) in state.amps.iter() {
        if bit_of(idx, j, n) == 0 {
            h00 = h00 + z.norm_sqr();
            let partner = state.amplitude(flip_bit(idx, j, n));
            h01 = h01 + z.clone() * partner.conj();
        } else {
            h11 = h11 + z.norm_sqr();
        }
    }
    Ok(HermitianOneQubit {
        h00: h00 / norm.clone(),
        h11: h11 / norm.clone(),
        h01: Complex::new(h01.re / norm.clone(), h01.im / norm),
    })
}

/// Schmidt rank of ψ across the cut S | complement: the rank of the
/// 2^|S| × 2^(n−|S|) amplitude array. Rank 1 iff ψ factors across the cut.
/// `tol` is the relative singular-value threshold used in float mode.
pub fn bipartition_rank<R: Coeff>(state: &PureState<R>, s: &[usize], tol: f64) -> Result<usize> {
    let n = state.n();
    let mut cut = s.to_vec();
    cut.sort_unstable();
    cut.dedup();
    if cut.len() != s.len() {
        return Err(Error::InvalidCut {
            msg: "duplicate qubit in cut".into(),
        });
    }
    if cut.is_empty() || cut.len() >= n {
        return Err(Error::InvalidCut {
            msg: format!("cut must be a nonempty proper subset of 1..={n}"),
        });
    }
    if let Some(&q) = cut.iter().find(|&&q| q == 0 || q > n) {
        return Err(Error::QubitIndex { index: q, n });
    }
    let complement: Vec<usize> = (1..=n).filter(|q| !cut.contains(q)).collect();
    let pack = |idx: u64, qubits: &[usize]| -> u64 {
        qubits
            .iter()
            .fold(0u64, |acc, &q| (acc << 1) | u64::from(bit_of(idx, q, n)))
    };
    // Only occupied row/column labels matter for the rank.
    let mut row_ids: Vec<u64> = state.amps.keys().map(|&i| pack(i, &cut)).collect();
    row_ids.sort_unstable();
    row_ids.dedup();
    let mut col_ids: Vec<u64> = state.amps.keys().map(|&i| pack(i, &complement)).collect();
    col_ids.sort_unstable();
    col_ids.dedup();
    let row_pos: BTreeMap<u64, usize> = row_ids.iter().enumerate().map(|(p, &v)| (v, p)).collect();
    let col_pos: BTreeMap<u64, usize> = col_ids.iter().enumerate().map(|(p, &v)| (v, p)).collect();
    let mut rows = vec![vec![Complex::<R>::zero(); col_ids.len()]; row_ids.len()];
    for (&idx, z) in state.amps.iter() {
        let r = row_pos[&pack(idx, &cut)];
        let c = col_pos[&pack(idx, &complement)];
        rows[r][c] = z.clone();
    }
    Ok(R::complex_rank(&rows, col_ids.len(), 0.0, tol))
}
