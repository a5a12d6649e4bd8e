use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_qubits, dicke_state, ghz_state_capped, popcount, DickeSpec, StateVector};
use crate::error::Result;
use crate::tolerances;

/// Integer-amplitude form of a reference state.
///
/// The physical state is `amplitudes / sqrt(norm_sqr)`; keeping the
/// normalizer symbolic lets polynomial invariants be evaluated as exact
/// rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactState {
    n: usize,
    amplitudes: Vec<i64>,
    norm_sqr: u64,
}

impl ExactState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[i64] {
        &self.amplitudes
    }

    /// Squared norm of the integer amplitude vector.
    pub fn norm_sqr(&self) -> u64 {
        self.norm_sqr
    }

    /// Floating-point unit-norm state.
    pub fn to_state(&self) -> StateVector {
        let scale = 1.0 / (self.norm_sqr as f64).sqrt();
        let amplitudes = self
            .amplitudes
            .iter()
            .map(|&a| Complex64::new(a as f64 * scale, 0.0))
            .collect();
        StateVector::from_parts(self.n, amplitudes)
    }

    pub fn dicke(spec: DickeSpec) -> Self {
        let amplitudes: Vec<i64> = (0..1usize << spec.n())
            .map(|i| i64::from(popcount(i) as usize == spec.l()))
            .collect();
        Self {
            n: spec.n(),
            amplitudes,
            norm_sqr: spec.terms(),
        }
    }

    pub fn ghz(n: usize, max_qubits: usize) -> Result<Self> {
        check_qubits(n, max_qubits)?;
        let mut amplitudes = vec![0i64; 1 << n];
        amplitudes[0] = 1;
        amplitudes[(1 << n) - 1] = 1;
        Ok(Self {
            n,
            amplitudes,
            norm_sqr: 2,
        })
    }
}

/// One of the named reference states, buildable in floating or exact form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ReferenceState {
    Ghz { n: usize },
    W { n: usize },
    Dicke { n: usize, l: usize },
}

impl ReferenceState {
    pub fn n(&self) -> usize {
        match *self {
            Self::Ghz { n } | Self::W { n } | Self::Dicke { n, .. } => n,
        }
    }

    /// Checks the parameters against `max_qubits`.
    pub fn validate(&self, max_qubits: usize) -> Result<()> {
        match *self {
            Self::Ghz { n } => check_qubits(n, max_qubits),
            Self::W { n } => DickeSpec::with_cap(n, 1, max_qubits).map(|_| ()),
            Self::Dicke { n, l } => DickeSpec::with_cap(n, l, max_qubits).map(|_| ()),
        }
    }

    /// The Dicke parameters when the state is a Dicke state (W included).
    pub fn dicke_spec(&self) -> Option<DickeSpec> {
        match *self {
            Self::Ghz { .. } => None,
            Self::W { n } => DickeSpec::with_cap(n, 1, usize::MAX).ok(),
            Self::Dicke { n, l } => DickeSpec::with_cap(n, l, usize::MAX).ok(),
        }
    }

    pub fn state(&self) -> Result<StateVector> {
        self.state_capped(tolerances::DEFAULT_MAX_QUBITS)
    }

    pub fn state_capped(&self, max_qubits: usize) -> Result<StateVector> {
        self.validate(max_qubits)?;
        match self.dicke_spec() {
            Some(spec) => Ok(dicke_state(spec)),
            None => ghz_state_capped(self.n(), max_qubits),
        }
    }

    pub fn exact(&self) -> Result<ExactState> {
        self.exact_capped(tolerances::DEFAULT_MAX_QUBITS)
    }

    pub fn exact_capped(&self, max_qubits: usize) -> Result<ExactState> {
        self.validate(max_qubits)?;
        match self.dicke_spec() {
            Some(spec) => Ok(ExactState::dicke(spec)),
            None => ExactState::ghz(self.n(), max_qubits),
        }
    }
}

impl fmt::Display for ReferenceState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Ghz { n } => write!(f, "GHZ_{n}"),
            Self::W { n } => write!(f, "W_{n}"),
            Self::Dicke { n, l } => write!(f, "|{l},{n}>"),
        }
    }
}
