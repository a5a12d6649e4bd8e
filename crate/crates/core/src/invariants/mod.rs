//! Polynomial SLOCC invariants of n-qubit amplitude vectors.
//!
//! All kernels are written once over the [`Amplitude`] ring so the same
//! index bookkeeping serves the floating path (`Complex64`) and the exact
//! integer path (`i128`, with the normalizer carried separately).

mod report;

pub use report::{
    invariant_report, invariant_report_exact, ExactValues, InvariantReport, Parity, ZeroFlags,
};

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::statekit::{popcount, ExactState, StateVector};
use crate::tolerances;

/// Ring operations needed by the invariant kernels.
pub trait Amplitude:
    Copy + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> Amplitude for T where
    T: Copy + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

#[inline]
fn signed<T: Amplitude>(negative: bool, x: T) -> T {
    if negative {
        -x
    } else {
        x
    }
}

/// Outcome of testing a quantity against the zero thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Vanishing {
    Zero,
    NonZero,
    /// Between the zero and nonzero thresholds; carries no evidence.
    Indeterminate,
}

impl Vanishing {
    pub fn classify(abs_value: f64, scale: f64) -> Self {
        if abs_value <= tolerances::ZERO * scale {
            Vanishing::Zero
        } else if abs_value >= tolerances::NONZERO * scale {
            Vanishing::NonZero
        } else {
            Vanishing::Indeterminate
        }
    }

    pub fn exact(is_zero: bool) -> Self {
        if is_zero {
            Vanishing::Zero
        } else {
            Vanishing::NonZero
        }
    }
}

/// Natural magnitude of a degree-`degree` homogeneous polynomial evaluated
/// on `s`: the squared norm raised to `degree / 2`. Equals 1 on unit states.
pub fn homogeneous_scale(s: &StateVector, degree: u32) -> f64 {
    s.norm_sqr().powi(degree as i32 / 2)
}

/// Polynomial degree of τ for `n` qubits: 2 for even `n`, 4 for odd `n`.
pub fn tau_degree(n: usize) -> u32 {
    if n.is_multiple_of(2) {
        2
    } else {
        4
    }
}

/// Sign pattern of the even/odd pairing sums: `(-1)^{N(i)}` on the first
/// quarter block and `(-1)^{n+N(i)}` on the second. Defined for
/// `0 <= i <= 2^{n-2} - 1`.
pub fn sgn_star(n: usize, i: usize) -> Result<i8> {
    if n < 2 {
        return Err(Error::QubitCount {
            n,
            min: 2,
            max: usize::MAX,
        });
    }
    let hi = (1usize << (n - 2)) - 1;
    if i > hi {
        return Err(Error::OutOfRange {
            what: "sgn* index",
            value: i,
            lo: 0,
            hi,
        });
    }
    Ok(if sgn_star_negative(n, i) { -1 } else { 1 })
}

#[inline]
fn sgn_star_negative(n: usize, i: usize) -> bool {
    let first_block = n >= 3 && i < 1 << (n - 3);
    let exponent = popcount(i) as usize + if first_block { 0 } else { n };
    exponent % 2 == 1
}

fn i_star_kernel<T: Amplitude>(a: &[T], m: usize, offset: usize) -> T {
    let top = offset + (1 << m) - 1;
    (0..1usize << (m - 2)).fold(T::zero(), |acc, i| {
        let lo = offset + 2 * i;
        let mirror = top - 2 * i;
        let term = a[lo] * a[mirror] - a[lo + 1] * a[mirror - 1];
        acc + signed(sgn_star_negative(m, i), term)
    })
}

fn i_bar_kernel<T: Amplitude>(a: &[T], n: usize) -> T {
    let full = (1usize << n) - 1;
    let half = 1usize << (n - 1);
    (0..1usize << (n - 3)).fold(T::zero(), |acc, i| {
        let outer = a[2 * i] * a[full - 2 * i] - a[2 * i + 1] * a[full - 1 - 2 * i];
        let inner =
            a[half - 2 - 2 * i] * a[half + 1 + 2 * i] - a[half - 1 - 2 * i] * a[half + 2 * i];
        acc + signed(popcount(i) % 2 == 1, outer - inner)
    })
}

/// `Σ_{k < 2^{n-1}} (-1)^{N(k)} a_k a_{(2^n-1)-k}`; τ is twice its modulus.
fn even_pairing_kernel<T: Amplitude>(a: &[T], n: usize) -> T {
    let full = (1usize << n) - 1;
    (0..1usize << (n - 1)).fold(T::zero(), |acc, k| {
        acc + signed(popcount(k) % 2 == 1, a[k] * a[full - k])
    })
}

/// `Ī² - 4 I*(a,n-1) I*_{+2^{n-1}}(a,n-1)`; τ is four times its modulus.
fn odd_quartic_kernel<T: Amplitude>(a: &[T], n: usize) -> T {
    let ib = i_bar_kernel(a, n);
    let lower = i_star_kernel(a, n - 1, 0);
    let upper = i_star_kernel(a, n - 1, 1 << (n - 1));
    let four_lu = lower * upper;
    ib * ib - (four_lu + four_lu + four_lu + four_lu)
}

fn d_l_kernel<T: Amplitude>(b: &[T], delta: usize) -> T {
    let at = |k: usize| b[k + delta];
    (at(1) * at(4) - at(0) * at(5)) * (at(11) * at(14) - at(10) * at(15))
        - (at(3) * at(6) - at(2) * at(7)) * (at(9) * at(12) - at(8) * at(13))
}

/// Pairing sum `Σ_i sgn*(m,i) (a_{o+2i} a_{o+2^m-1-2i} - a_{o+2i+1} a_{o+2^m-2-2i})`
/// over `0 <= i < 2^{m-2}`, where `o` is `offset`.
///
/// Valid combinations: `m = n` with `offset = 0` for even `n`; `m = n - 1`
/// with `offset` either `0` (lower half) or `2^{n-1}` (upper half) for odd
/// `n`. In the latter case the mirror index stays inside the chosen half.
pub fn i_star(s: &StateVector, m: usize, offset: usize) -> Result<Complex64> {
    let n = s.n();
    let valid = if n.is_multiple_of(2) {
        m == n && offset == 0
    } else {
        m == n - 1 && (offset == 0 || offset == 1 << (n - 1))
    };
    if !valid {
        return Err(Error::Parity(format!(
            "I* with m = {m}, offset = {offset} is undefined for {n} qubits"
        )));
    }
    Ok(i_star_kernel(s.amplitudes(), m, offset))
}

/// The odd-n cross sum `Ī(a, n)`.
pub fn i_bar(s: &StateVector) -> Result<Complex64> {
    let n = s.n();
    if n.is_multiple_of(2) || n < 3 {
        return Err(Error::Parity(format!("Ī requires odd n >= 3, got {n}")));
    }
    Ok(i_bar_kernel(s.amplitudes(), n))
}

/// Residual-entanglement invariant τ.
///
/// Even `n`: `2 |Σ_k (-1)^{N(k)} a_k a_{(2^n-1)-k}|`.
/// Odd `n`: `4 |Ī² - 4 I*(a,n-1) I*_{+2^{n-1}}(a,n-1)|`.
pub fn tau(s: &StateVector) -> f64 {
    let n = s.n();
    if n.is_multiple_of(2) {
        2.0 * even_pairing_kernel(s.amplitudes(), n).norm()
    } else {
        4.0 * odd_quartic_kernel(s.amplitudes(), n).norm()
    }
}

/// Index shift selecting the amplitude block probed by `D^(l)`:
/// `0` for `l = 2`, otherwise `2^4 + ... + 2^{l+1} = 2^{l+2} - 16`.
pub fn delta_offset(l: usize) -> Result<usize> {
    match l {
        0 | 1 => Err(Error::OutOfRange {
            what: "D^(l) excitation index",
            value: l,
            lo: 2,
            hi: usize::MAX,
        }),
        2 => Ok(0),
        _ => Ok((1usize << (l + 2)) - 16),
    }
}

fn check_d_range(n: usize, l: usize) -> Result<usize> {
    if l < 2 || l + 2 > n {
        return Err(Error::OutOfRange {
            what: "D^(l) excitation index",
            value: l,
            lo: 2,
            hi: n.saturating_sub(2),
        });
    }
    delta_offset(l)
}

/// Quartic discriminant `D^(l)`, defined for `2 <= l <= n - 2`. It vanishes
/// on every state SLOCC-equivalent to GHZ or W.
pub fn d_l(s: &StateVector, l: usize) -> Result<Complex64> {
    let delta = check_d_range(s.n(), l)?;
    Ok(d_l_kernel(s.amplitudes(), delta))
}

fn widened(e: &ExactState) -> Vec<i128> {
    e.amplitudes().iter().map(|&a| i128::from(a)).collect()
}

/// τ of the normalized state `e`, as an exact rational.
pub fn tau_exact(e: &ExactState) -> Ratio<i128> {
    let a = widened(e);
    let n = e.n();
    let norm = i128::from(e.norm_sqr());
    if n.is_multiple_of(2) {
        Ratio::new(2 * even_pairing_kernel(&a, n).abs(), norm)
    } else {
        Ratio::new(4 * odd_quartic_kernel(&a, n).abs(), norm * norm)
    }
}

/// `D^(l)` of the normalized state `e`, as an exact rational.
pub fn d_l_exact(e: &ExactState, l: usize) -> Result<Ratio<i128>> {
    let delta = check_d_range(e.n(), l)?;
    let norm = i128::from(e.norm_sqr());
    let raw: i128 = d_l_kernel(&widened(e), delta);
    Ok(Ratio::new(raw, norm * norm))
}

/// Valid `l` values for `D^(l)` on `n` qubits.
pub fn d_range(n: usize) -> std::ops::RangeInclusive<usize> {
    2..=n.saturating_sub(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statekit::{dicke_state, ghz_state, w_state, DickeSpec, ReferenceState};

    const EPS: f64 = 1e-12;

    #[test]
    fn sgn_star_examples() {
        assert_eq!(sgn_star(4, 3).unwrap(), 1);
        assert_eq!(sgn_star(5, 4).unwrap(), 1);
        assert_eq!(sgn_star(5, 3).unwrap(), 1);
        assert_eq!(sgn_star(5, 5).unwrap(), -1);
        for n in (2..12).step_by(2) {
            for i in 0..1usize << (n - 2) {
                let expect = if popcount(i).is_multiple_of(2) { 1 } else { -1 };
                assert_eq!(sgn_star(n, i).unwrap(), expect);
            }
        }
        assert!(sgn_star(4, 4).is_err());
    }

    #[test]
    fn i_star_examples() {
        let g4 = i_star(&ghz_state(4).unwrap(), 4, 0).unwrap();
        assert!((g4.norm() - 0.5).abs() < EPS);
        let w3 = w_state(3).unwrap();
        assert!((i_star(&w3, 2, 0).unwrap() - Complex64::new(-1.0 / 3.0, 0.0)).norm() < EPS);
        assert!(i_star(&w3, 2, 4).unwrap().norm() < EPS);
        assert!(matches!(i_star(&w3, 3, 0), Err(Error::Parity(_))));
        assert!(matches!(i_star(&w3, 2, 2), Err(Error::Parity(_))));
        assert!(matches!(
            i_star(&ghz_state(4).unwrap(), 3, 0),
            Err(Error::Parity(_))
        ));
    }

    #[test]
    fn i_bar_examples() {
        assert!((i_bar(&ghz_state(5).unwrap()).unwrap() - Complex64::new(0.5, 0.0)).norm() < EPS);
        assert!(i_bar(&w_state(5).unwrap()).unwrap().norm() < EPS);
        let d52 = dicke_state(DickeSpec::new(5, 2).unwrap());
        assert!(i_bar(&d52).unwrap().norm() < EPS);
        assert!(matches!(
            i_bar(&ghz_state(4).unwrap()),
            Err(Error::Parity(_))
        ));
    }

    #[test]
    fn tau_reference_values() {
        for n in 2..=10 {
            assert!((tau(&ghz_state(n).unwrap()) - 1.0).abs() < EPS, "GHZ_{n}");
        }
        for n in 3..=10 {
            assert!(tau(&w_state(n).unwrap()).abs() < EPS, "W_{n}");
        }
        // W_2 is the Bell pair |1,2> = |n/2,n>, so it carries τ = 1.
        assert!((tau(&w_state(2).unwrap()) - 1.0).abs() < EPS);
        assert!((tau(&dicke_state(DickeSpec::new(4, 2).unwrap())) - 1.0).abs() < EPS);
        assert!((tau(&dicke_state(DickeSpec::new(6, 3).unwrap())) - 1.0).abs() < EPS);
        assert!(tau(&dicke_state(DickeSpec::new(5, 2).unwrap())).abs() < EPS);
    }

    #[test]
    fn three_qubit_tau_is_cayley_hyperdeterminant() {
        // Independent oracle: 4|Det(a)| with the standard 2x2x2 hyperdeterminant.
        let a: Vec<Complex64> = (0..8)
            .map(|k| Complex64::new((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos()))
            .collect();
        let hyper = a[0] * a[0] * a[7] * a[7]
            + a[1] * a[1] * a[6] * a[6]
            + a[2] * a[2] * a[5] * a[5]
            + a[4] * a[4] * a[3] * a[3]
            - 2.0
                * (a[0] * a[7] * a[3] * a[4]
                    + a[0] * a[7] * a[5] * a[2]
                    + a[0] * a[7] * a[6] * a[1]
                    + a[3] * a[4] * a[5] * a[2]
                    + a[3] * a[4] * a[6] * a[1]
                    + a[5] * a[2] * a[6] * a[1])
            + 4.0 * (a[0] * a[6] * a[5] * a[3] + a[7] * a[1] * a[2] * a[4]);
        let s = StateVector::new(3, a).unwrap();
        assert!((tau(&s) - 4.0 * hyper.norm()).abs() < 1e-12);
    }

    #[test]
    fn delta_offsets() {
        assert_eq!(delta_offset(2).unwrap(), 0);
        assert_eq!(delta_offset(3).unwrap(), 16);
        assert_eq!(delta_offset(5).unwrap(), 16 + 32 + 64);
        assert!(delta_offset(1).is_err());
        for l in 3..20 {
            let sum: usize = (4..=l + 1).map(|k| 1usize << k).sum();
            assert_eq!(delta_offset(l).unwrap(), sum);
        }
    }

    #[test]
    fn d_l_examples() {
        let d42 = dicke_state(DickeSpec::new(4, 2).unwrap());
        assert!((d_l(&d42, 2).unwrap() - Complex64::new(-1.0 / 36.0, 0.0)).norm() < EPS);
        for n in 4..=10 {
            for l in d_range(n) {
                assert!(d_l(&ghz_state(n).unwrap(), l).unwrap().norm() < EPS);
                assert!(d_l(&w_state(n).unwrap(), l).unwrap().norm() < EPS);
            }
        }
        assert!(d_l(&d42, 3).is_err());
        assert!(d_l(&ghz_state(3).unwrap(), 2).is_err());
    }

    #[test]
    fn exact_mode_matches_floating() {
        for n in 2..=10 {
            for r in std::iter::once(ReferenceState::Ghz { n })
                .chain((1..n).map(|l| ReferenceState::Dicke { n, l }))
            {
                let e = r.exact().unwrap();
                let s = e.to_state();
                let t = tau_exact(&e);
                assert!((tau(&s) - *t.numer() as f64 / *t.denom() as f64).abs() < EPS);
                for l in d_range(n) {
                    let d = d_l_exact(&e, l).unwrap();
                    let f = d_l(&s, l).unwrap();
                    assert!((f.re - *d.numer() as f64 / *d.denom() as f64).abs() < EPS);
                }
            }
        }
        let e = ReferenceState::Dicke { n: 6, l: 3 }.exact().unwrap();
        assert_eq!(tau_exact(&e), Ratio::from_integer(1));
        assert_eq!(d_l_exact(&e, 3).unwrap(), Ratio::new(-1, 400));
    }
}
