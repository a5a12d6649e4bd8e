//! SLOCC maps: invertible local operators, orbit sampling, the τ covariance
//! laws, and one-sided inequivalence verdicts.

mod campaign;
mod chain;
mod verdict;

pub use campaign::{covariance_campaign, CampaignConfig, CampaignReport};
pub use chain::{
    diag, pauli_x, random_ilo, IloSampler, LocalOperatorChain, Operator, SamplerStats,
};
pub use verdict::{
    classify, classify_reference, compare_states, Comparison, PairComparison, ReferenceClass, Rule,
    Status, Verdict,
};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::tau;
use crate::statekit::{qubit_bit, StateVector};

/// `(F^(1) ⊗ ... ⊗ F^(n)) |s>`, one qubit at a time. The result is not
/// renormalized.
pub fn apply_local(s: &StateVector, chain: &LocalOperatorChain) -> Result<StateVector> {
    let n = s.n();
    if chain.n() != n {
        return Err(Error::Dimension {
            expected: n,
            got: chain.n(),
        });
    }
    let mut a = s.amplitudes().to_vec();
    for (k, f) in chain.ops().iter().enumerate() {
        let stride = 1usize << qubit_bit(n, k + 1);
        for block in (0..a.len()).step_by(2 * stride) {
            for i in block..block + stride {
                let (x, y) = (a[i], a[i + stride]);
                a[i] = f[(0, 0)] * x + f[(0, 1)] * y;
                a[i + stride] = f[(1, 0)] * x + f[(1, 1)] * y;
            }
        }
    }
    Ok(StateVector::from_parts(n, a))
}

/// Result of checking `τ(F s) = τ(s) Π_k |det F^(k)|^p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CovarianceCheck {
    /// τ of the original state.
    pub tau_original: f64,
    /// τ of the transformed state.
    pub tau_transformed: f64,
    /// Right-hand side `τ(s) Π |det|^p`.
    pub expected: f64,
    /// `|tau_transformed - expected|`.
    pub residual: f64,
    /// Determinant exponent: 1 for even `n`, 2 for odd `n`.
    pub exponent: u32,
}

impl CovarianceCheck {
    /// Residual divided by `max(1, expected)`.
    pub fn relative_residual(&self) -> f64 {
        self.residual / self.expected.max(1.0)
    }
}

/// Covariance of τ under an SLOCC map. The transformed state plays the role
/// of `ψ` and `s` the role of `ψ'` in `τ(ψ) = τ(ψ') Π |det|^p`.
pub fn check_tau_covariance(
    s: &StateVector,
    chain: &LocalOperatorChain,
) -> Result<CovarianceCheck> {
    let transformed = apply_local(s, chain)?;
    let exponent = if s.n().is_multiple_of(2) { 1 } else { 2 };
    let tau_original = tau(s);
    let tau_transformed = tau(&transformed);
    let expected = tau_original * chain.det_abs_product().powi(exponent as i32);
    Ok(CovarianceCheck {
        tau_original,
        tau_transformed,
        expected,
        residual: (tau_transformed - expected).abs(),
        exponent,
    })
}

/// Bits of `i`, qubit 1 first.
fn qubit_bits(n: usize, i: usize) -> impl Iterator<Item = usize> {
    (1..=n).map(move |q| i >> qubit_bit(n, q) & 1)
}

/// GHZ orbit member built straight from the chain entries:
/// `a_i = (Π_k F^(k)[i_k, 0] + Π_k F^(k)[i_k, 1]) / sqrt(2)`.
pub fn ghz_orbit_state(chain: &LocalOperatorChain) -> Result<StateVector> {
    let n = chain.n();
    crate::statekit::check_qubits(n, crate::tolerances::DEFAULT_MAX_QUBITS)?;
    let ops = chain.ops();
    let amplitudes = (0..1usize << n)
        .map(|i| {
            let column = |c: usize| {
                qubit_bits(n, i)
                    .zip(ops)
                    .fold(Complex64::new(1.0, 0.0), |acc, (bit, f)| acc * f[(bit, c)])
            };
            (column(0) + column(1)) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect();
    Ok(StateVector::from_parts(n, amplitudes))
}

/// W orbit member built straight from the chain entries:
/// `a_i = Σ_j Π_k F^(k)[i_k, [j = k]] / sqrt(n)`.
pub fn w_orbit_state(chain: &LocalOperatorChain) -> Result<StateVector> {
    let n = chain.n();
    crate::statekit::check_qubits(n, crate::tolerances::DEFAULT_MAX_QUBITS)?;
    let ops = chain.ops();
    let norm = 1.0 / (n as f64).sqrt();
    let amplitudes = (0..1usize << n)
        .map(|i| {
            let bits: Vec<usize> = qubit_bits(n, i).collect();
            let sum: Complex64 = (0..n)
                .map(|j| {
                    bits.iter()
                        .zip(ops)
                        .enumerate()
                        .fold(Complex64::new(1.0, 0.0), |acc, (k, (&bit, f))| {
                            acc * f[(bit, usize::from(j == k))]
                        })
                })
                .sum();
            sum * norm
        })
        .collect();
    Ok(StateVector::from_parts(n, amplitudes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{d_l, d_range};
    use crate::statekit::{complement, dicke_state, ghz_state, w_state, DickeSpec};

    fn scale(s: &StateVector) -> f64 {
        s.amplitudes().iter().map(|a| a.norm()).fold(1.0, f64::max)
    }

    #[test]
    fn identity_chain_is_noop() {
        let s = dicke_state(DickeSpec::new(4, 2).unwrap());
        assert_eq!(
            apply_local(&s, &LocalOperatorChain::identity(4)).unwrap(),
            s
        );
        let check = check_tau_covariance(&s, &LocalOperatorChain::identity(4)).unwrap();
        assert_eq!(check.residual, 0.0);
    }

    #[test]
    fn pauli_x_everywhere_complements() {
        for n in 2..8 {
            let x = LocalOperatorChain::uniform(n, pauli_x()).unwrap();
            for l in 1..n {
                let s = dicke_state(DickeSpec::new(n, l).unwrap());
                let t = apply_local(&s, &x).unwrap();
                assert_eq!(t, dicke_state(DickeSpec::new(n, n - l).unwrap()));
                assert_eq!(t, complement(&s));
            }
        }
    }

    #[test]
    fn diagonal_on_first_qubit() {
        let one = Complex64::new(1.0, 0.0);
        let chain = LocalOperatorChain::new(vec![
            diag(Complex64::new(2.0, 0.0), one),
            Operator::identity(),
        ])
        .unwrap();
        let t = apply_local(&ghz_state(2).unwrap(), &chain).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [2.0 * h, 0.0, 0.0, h];
        for (a, e) in t.amplitudes().iter().zip(expect) {
            assert!((a - Complex64::new(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let s = ghz_state(3).unwrap();
        assert!(matches!(
            apply_local(&s, &random_ilo(4, 0)),
            Err(Error::Dimension {
                expected: 3,
                got: 4
            })
        ));
    }

    #[test]
    fn orbit_formulas_match_operator_application() {
        for n in 2..=8 {
            assert_eq!(
                ghz_orbit_state(&LocalOperatorChain::identity(n)).unwrap(),
                ghz_state(n).unwrap()
            );
            let w_id = w_orbit_state(&LocalOperatorChain::identity(n)).unwrap();
            assert!(w_id.max_abs_diff(&w_state(n).unwrap()) < 1e-15);
            for seed in 0..10 {
                let c = random_ilo(n, seed);
                let direct = ghz_orbit_state(&c).unwrap();
                let applied = apply_local(&ghz_state(n).unwrap(), &c).unwrap();
                assert!(direct.max_abs_diff(&applied) <= 1e-12 * scale(&applied));
                let direct = w_orbit_state(&c).unwrap();
                let applied = apply_local(&w_state(n).unwrap(), &c).unwrap();
                assert!(direct.max_abs_diff(&applied) <= 1e-12 * scale(&applied));
            }
        }
    }

    #[test]
    fn discriminant_vanishes_on_orbits() {
        for n in 4..=7 {
            for seed in 0..10 {
                let c = random_ilo(n, 100 + seed);
                for s in [ghz_orbit_state(&c).unwrap(), w_orbit_state(&c).unwrap()] {
                    let sc = s.norm_sqr().powi(2);
                    for l in d_range(n) {
                        assert!(d_l(&s, l).unwrap().norm() <= 1e-10 * sc);
                    }
                }
            }
        }
    }

    #[test]
    fn covariance_on_small_cases() {
        for n in 2..=7 {
            for seed in 0..10 {
                let c = random_ilo(n, seed);
                let g = check_tau_covariance(&ghz_state(n).unwrap(), &c).unwrap();
                assert!(g.relative_residual() <= 1e-8, "GHZ n={n} {g:?}");
                if n >= 5 && n % 2 == 1 {
                    let d = dicke_state(DickeSpec::new(n, 2).unwrap());
                    let r = check_tau_covariance(&d, &c).unwrap();
                    assert!(r.tau_original < 1e-15);
                    assert!(r.residual <= 1e-10, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn composition_law() {
        for n in 2..=6 {
            let s = dicke_state(DickeSpec::new(n, 1).unwrap());
            let (c1, c2) = (random_ilo(n, 7), random_ilo(n, 8));
            let twice = apply_local(&apply_local(&s, &c1).unwrap(), &c2).unwrap();
            let once = apply_local(&s, &c1.then(&c2).unwrap()).unwrap();
            assert!(twice.max_abs_diff(&once) <= 1e-12 * scale(&once));
        }
    }
}
