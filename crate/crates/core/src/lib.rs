//! Symmetric Dicke, GHZ and W states on `n` qubits: construction, SLOCC
//! invariants, orbit-based inequivalence checks and concurrence monogamy.
//!
//! - [`statekit`]: bit-indexed state vectors, partial traces, product tests
//! - [`invariants`]: τ for even and odd `n`, the `D^(l)` discriminants
//! - [`slocc`]: local operator chains, orbit sampling, verdicts
//! - [`monogamy`]: Wootters concurrence and the CKW gap for Dicke states

pub mod error;
pub mod invariants;
pub mod monogamy;
pub mod slocc;
pub mod statekit;
pub mod tolerances;

pub use error::{Error, Result};
