//! Dense n-qubit pure states stored as bit-indexed amplitude vectors.
//!
//! Basis index `i` encodes the computational basis label through its binary
//! expansion `i_{n-1} ... i_1 i_0`. Qubit 1 is the most significant bit, so
//! the label `|0011>` is index 3 and qubit `q` (1-based) lives at bit
//! position `n - q`.

mod density;
mod exact;
mod io;

pub use density::{is_genuinely_entangled, is_product_across, partial_trace, DensityMatrix};
pub use exact::{ExactState, ReferenceState};
pub use io::{load_state, load_state_capped, read_state, store_state, write_state, StateFile};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances;

/// Smallest qubit count accepted anywhere in the crate.
pub const MIN_QUBITS: usize = 2;

/// A dense state vector over `n` qubits.
///
/// Vectors produced by the constructors in this module are unit-norm.
/// Vectors obtained from files or from SLOCC maps may carry any nonzero
/// norm; [`StateVector::is_normalized`] reports which case applies.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps an amplitude vector, checking the qubit count against the
    /// default cap and the length against `2^n`.
    pub fn new(n: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::with_cap(n, amplitudes, tolerances::DEFAULT_MAX_QUBITS)
    }

    pub fn with_cap(n: usize, amplitudes: Vec<Complex64>, max_qubits: usize) -> Result<Self> {
        check_qubits(n, max_qubits)?;
        if amplitudes.len() != 1usize << n {
            return Err(Error::Dimension {
                expected: 1 << n,
                got: amplitudes.len(),
            });
        }
        Ok(Self { n, amplitudes })
    }

    /// Internal constructor for vectors whose shape is already known to be valid.
    pub(crate) fn from_parts(n: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n);
        Self { n, amplitudes }
    }

    /// Computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_qubits(n, tolerances::DEFAULT_MAX_QUBITS)?;
        if index >= 1 << n {
            return Err(Error::OutOfRange {
                what: "basis index",
                value: index,
                lo: 0,
                hi: (1 << n) - 1,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amplitudes })
    }

    /// Tensor product `|q_1> ⊗ |q_2> ⊗ ... ⊗ |q_n>` of single-qubit vectors,
    /// qubit 1 first.
    pub fn product(qubits: &[[Complex64; 2]]) -> Result<Self> {
        let n = qubits.len();
        check_qubits(n, tolerances::DEFAULT_MAX_QUBITS)?;
        let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
        for q in qubits {
            amplitudes = amplitudes
                .iter()
                .flat_map(|a| [a * q[0], a * q[1]])
                .collect();
        }
        Ok(Self { n, amplitudes })
    }

    /// Tensor product `self ⊗ other`; the qubits of `self` come first.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        let n = self.n + other.n;
        check_qubits(n, tolerances::DEFAULT_MAX_QUBITS)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(Self { n, amplitudes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tolerances::NORM
    }

    /// Returns a unit-norm copy. Fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::Format("cannot normalize the zero vector".into()));
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            amplitudes: self.amplitudes.iter().map(|a| a * c).collect(),
        }
    }

    /// Indices carrying a nonzero amplitude, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != Complex64::new(0.0, 0.0))
            .map(|(i, _)| i)
            .collect()
    }

    /// Largest componentwise distance to `other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A validated `(n, l)` pair naming the Dicke state `|l,n>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DickeSpec {
    n: usize,
    l: usize,
}

impl DickeSpec {
    pub fn new(n: usize, l: usize) -> Result<Self> {
        Self::with_cap(n, l, tolerances::DEFAULT_MAX_QUBITS)
    }

    pub fn with_cap(n: usize, l: usize, max_qubits: usize) -> Result<Self> {
        check_qubits(n, max_qubits)?;
        // l = 0 and l = n are product states and not Dicke states here.
        if l == 0 || l >= n {
            return Err(Error::Excitation { n, l });
        }
        Ok(Self { n, l })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Number of basis terms, `C(n, l)`.
    pub fn terms(&self) -> u64 {
        binomial(self.n as u64, self.l as u64)
    }
}

pub(crate) fn check_qubits(n: usize, max_qubits: usize) -> Result<()> {
    if n < MIN_QUBITS || n > max_qubits {
        return Err(Error::QubitCount {
            n,
            min: MIN_QUBITS,
            max: max_qubits,
        });
    }
    Ok(())
}

/// Number of one bits in a basis index, i.e. its excitation count.
#[inline]
pub fn popcount(i: usize) -> u32 {
    i.count_ones()
}

/// Bit position holding qubit `q` (1-based) in an `n`-qubit index.
#[inline]
pub fn qubit_bit(n: usize, q: usize) -> usize {
    n - q
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `|l,n>`: amplitude `1/sqrt(C(n,l))` on every index of popcount `l`.
pub fn dicke_state(spec: DickeSpec) -> StateVector {
    let amp = Complex64::new(1.0 / (spec.terms() as f64).sqrt(), 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let amplitudes = (0..1usize << spec.n)
        .map(|i| {
            if popcount(i) as usize == spec.l {
                amp
            } else {
                zero
            }
        })
        .collect();
    StateVector::from_parts(spec.n, amplitudes)
}

pub fn ghz_state(n: usize) -> Result<StateVector> {
    ghz_state_capped(n, tolerances::DEFAULT_MAX_QUBITS)
}

pub fn ghz_state_capped(n: usize, max_qubits: usize) -> Result<StateVector> {
    check_qubits(n, max_qubits)?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amplitudes[0] = amp;
    amplitudes[(1 << n) - 1] = amp;
    Ok(StateVector::from_parts(n, amplitudes))
}

/// The W state, identical to `|1,n>`.
pub fn w_state(n: usize) -> Result<StateVector> {
    w_state_capped(n, tolerances::DEFAULT_MAX_QUBITS)
}

pub fn w_state_capped(n: usize, max_qubits: usize) -> Result<StateVector> {
    Ok(dicke_state(DickeSpec::with_cap(n, 1, max_qubits)?))
}

/// Bitwise complement of every basis label, i.e. `σ_x^{⊗n}` applied to `s`.
pub fn complement(s: &StateVector) -> StateVector {
    let mask = s.dim() - 1;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); s.dim()];
    for (i, a) in s.amplitudes.iter().enumerate() {
        amplitudes[i ^ mask] = *a;
    }
    StateVector::from_parts(s.n, amplitudes)
}

/// Relabels qubits: qubit `q` of `s` becomes qubit `perm[q - 1]` of the
/// result. `perm` must be a permutation of `1..=n`.
pub fn permute_qubits(s: &StateVector, perm: &[usize]) -> Result<StateVector> {
    let n = s.n;
    if perm.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p == 0 || p > n || seen[p - 1] {
            return Err(Error::Positions(format!(
                "{perm:?} is not a permutation of 1..={n}"
            )));
        }
        seen[p - 1] = true;
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); s.dim()];
    for (i, a) in s.amplitudes.iter().enumerate() {
        let mut j = 0usize;
        for (q, &target) in perm.iter().enumerate() {
            if i >> qubit_bit(n, q + 1) & 1 == 1 {
                j |= 1 << qubit_bit(n, target);
            }
        }
        amplitudes[j] = *a;
    }
    Ok(StateVector::from_parts(n, amplitudes))
}
