//! Numerical thresholds shared by every module.
//!
//! All values are absolute for unit-norm inputs. Quantities computed on
//! unnormalized vectors are compared against `tolerance * scale`, where the
//! scale is the squared norm raised to half the polynomial degree of the
//! quantity (see [`crate::invariants::homogeneous_scale`]).

/// Squared-norm deviation accepted for states built by the constructors.
pub const NORM: f64 = 1e-12;

/// Relative singular-value cutoff used by the bipartition rank test.
pub const RANK_ONE: f64 = 1e-10;

/// Hermiticity and unit-trace tolerance for density matrices.
pub const DENSITY: f64 = 1e-12;

/// Most negative eigenvalue a density matrix may carry before it is
/// rejected as not positive semidefinite. Values in `[PSD_FLOOR, 0)` are
/// clipped to zero.
pub const PSD_FLOOR: f64 = -1e-10;

/// Eigenvalues of a reduced state below this are treated as exact zeros
/// before forming the spin-flip matrix.
pub const SUPPORT_CUTOFF: f64 = 1e-14;

/// An invariant is flagged as vanishing when `|value| <= ZERO * scale`.
pub const ZERO: f64 = 1e-10;

/// An invariant is treated as certainly nonzero only when
/// `|value| >= NONZERO * scale`. Values strictly between [`ZERO`] and this
/// bound are indeterminate and never drive an inequivalence verdict.
pub const NONZERO: f64 = 1e-6;

/// Smallest `|det|` accepted for a local operator in an SLOCC chain.
pub const INVERTIBILITY_FLOOR: f64 = 0.05;

/// Dual-route agreement required between the two monogamy gap formulas.
pub const CHI_ROUTES: f64 = 1e-10;

/// Relative covariance residual accepted by orbit campaigns.
pub const COVARIANCE: f64 = 1e-8;

/// Agreement required between the closed-form orbit amplitudes and the
/// operator-application path, relative to the amplitude scale.
pub const ORBIT_PATHS: f64 = 1e-12;

/// Default upper bound on the qubit count of a dense state vector.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Largest qubit count for which every bipartition is enumerated.
pub const MAX_EXHAUSTIVE_QUBITS: usize = 16;

/// Every threshold above, in serializable form, for embedding in reports.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Tolerances {
    pub norm: f64,
    pub rank_one: f64,
    pub density: f64,
    pub psd_floor: f64,
    pub support_cutoff: f64,
    pub zero: f64,
    pub nonzero: f64,
    pub invertibility_floor: f64,
    pub chi_routes: f64,
    pub covariance: f64,
    pub orbit_paths: f64,
    pub max_exhaustive_qubits: usize,
}

pub const ALL: Tolerances = Tolerances {
    norm: NORM,
    rank_one: RANK_ONE,
    density: DENSITY,
    psd_floor: PSD_FLOOR,
    support_cutoff: SUPPORT_CUTOFF,
    zero: ZERO,
    nonzero: NONZERO,
    invertibility_floor: INVERTIBILITY_FLOOR,
    chi_routes: CHI_ROUTES,
    covariance: COVARIANCE,
    orbit_paths: ORBIT_PATHS,
    max_exhaustive_qubits: MAX_EXHAUSTIVE_QUBITS,
};
