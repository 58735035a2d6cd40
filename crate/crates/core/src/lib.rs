//! Local-unitary stabilizer analysis for multi-qubit pure states.
//!
//! For a pure state of n qubits, the group of local symmetries is the
//! compact group U(1) × SU(2)^n acting by a global phase together with one
//! special unitary per qubit. Its Lie algebra 𝔤 = 𝔲(1) ⊕ 𝔰𝔲(2)^n has
//! dimension 3n + 1, and the stabilizer subalgebra of a state ψ is the
//! kernel of the differential X ↦ Xψ of the orbit map. This crate computes
//! that kernel, either exactly over the rationals or numerically over f64,
//! and analyzes its structure:
//!
//! - [`stabilizer::compute_kernel`] finds the kernel of the (2·2ⁿ) × (3n+1)
//!   real action matrix;
//! - [`stabilizer::detect_su2_blocks`] locates the diagonal 𝔰𝔲(2) summands
//!   supported on even-sized sets of qubits and builds an explicit
//!   bracket-normalized frame for each;
//! - [`factor`] computes the finest tensor factorization of the state and
//!   classifies its stabilizer dimension against the sharp upper bounds
//!   (3n/2 in general, n without singlet pairs, n − 1 additionally without
//!   single-qubit factors, and n − 1 for nonproduct states);
//! - [`oracle`] recomputes kernels by an independent dense elimination for
//!   cross-checking;
//! - [`catalog`] constructs the named reference states (GHZ, W, singlets
//!   and their products, and the two sporadic four-qubit states with a
//!   single four-qubit block);
//! - [`verify`] runs seeded randomized suites over all of the structure
//!   lemmas and bounds, reproduces the reference dimension table, and scans
//!   random families for nonproduct states of maximal stabilizer dimension.
//!
//! States are parsed from a small ket grammar ([`state::parse::parse_state`])
//! or a JSON schema ([`state::json`]), with exact rational arithmetic
//! whenever every amplitude is rational.

// Matrix code throughout uses explicit row/column index loops to mirror the
// usual linear-algebra notation; iterator rewrites obscure the pivoting.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod factor;
pub mod oracle;
pub mod scalar;
pub mod stabilizer;
pub mod state;
pub mod subspace;
pub mod verify;

pub use algebra::{algebra_dim, AlgebraElement};
pub use error::{Error, Result};
pub use factor::{classify, finest_factorization, singlet_pairs, Classification, Factorization};
pub use oracle::oracle_kernel;
pub use scalar::Coeff;
pub use stabilizer::{
    bracket_closure_residual, compute_kernel, detect_su2_blocks, intersect_support,
    qubit_projection_dim, stabilizer_report, Kernel, StabilizerReport, DEFAULT_TOL,
};
pub use state::json::{parse_state_json, state_from_json, state_to_json, StateJson};
pub use state::parse::parse_state;
pub use state::{
    apply_local_unitary, bipartition_rank, reduced_density_one_qubit, AnyState, Mat2, PureState,
    MAX_QUBITS,
};
pub use subspace::Subspace;
pub use verify::{
    scan_nonproduct_max, table_rows, verify_suite, ScanHit, SuiteConfig, SuiteReport, TableRow,
};
