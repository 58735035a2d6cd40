//! Error types shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while parsing, constructing, or analyzing a
/// state. Parse errors carry a byte offset into the source text; structural
/// errors carry enough context to identify the offending qubit or subset.
#[derive(Debug, Error)]
pub enum Error {
    /// The ket-expression parser rejected the input at byte `pos`.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A qubit label outside `1..=n` was used.
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitIndex { index: usize, n: usize },

    /// Two objects that must share a qubit count do not.
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitCountMismatch { left: usize, right: usize },

    /// The zero vector is not a state.
    #[error("state has no nonzero amplitudes")]
    ZeroState,

    /// A matrix handed to `apply_local_unitary` fails the unitarity check.
    #[error("matrix for qubit {qubit} is not unitary (deviation {deviation:.3e})")]
    NonUnitary { qubit: usize, deviation: f64 },

    /// A bipartition cut must be a nonempty proper subset of the qubits.
    #[error("invalid bipartition cut: {msg}")]
    InvalidCut { msg: String },

    /// Dense operations are capped to keep memory bounded.
    #[error("{n} qubits exceeds the supported maximum of {max}")]
    TooManyQubits { n: usize, max: usize },

    /// `make_named` received a name not in the catalog.
    #[error("unknown state name {name:?}")]
    UnknownState { name: String },

    /// A named-state parameter is out of range or malformed.
    #[error("invalid parameter: {msg}")]
    InvalidParameter { msg: String },

    /// An internal consistency guarantee failed. Analysis results are
    /// untrustworthy when this is raised; callers should treat it as a bug
    /// or as numerically unstable input, not as a property of the state.
    #[error("structure violation: {msg}")]
    StructureViolation { msg: String },

    /// The numerical tolerance is outside the accepted range.
    #[error("tolerance {tol:e} outside accepted range [{min:e}, {max:e}]")]
    ToleranceRange { tol: f64, min: f64, max: f64 },

    /// JSON (de)serialization failure while reading or writing a state file.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Helper for structure violations, which are raised from many places.
    pub fn structure(msg: impl Into<String>) -> Self {
        Error::StructureViolation { msg: msg.into() }
    }

    /// Helper for parameter errors.
    pub fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter { msg: msg.into() }
    }
}
