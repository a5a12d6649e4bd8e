use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{d_l, d_l_exact, d_range, homogeneous_scale, tau, tau_degree, tau_exact};
use crate::statekit::{ExactState, StateVector};
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroFlags {
    pub tau: bool,
    pub d: BTreeMap<usize, bool>,
}

/// Exact rationals rendered as `"p/q"` (or `"p"` when integral).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactValues {
    pub tau: String,
    pub d: BTreeMap<usize, String>,
}

/// τ and every `D^(l)` of one state, with zero flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub n: usize,
    pub tau: f64,
    pub tau_parity: Parity,
    #[serde(rename = "d")]
    pub d_values: BTreeMap<usize, Complex64>,
    pub zero_flags: ZeroFlags,
    pub exact_mode: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact: Option<ExactValues>,
}

impl InvariantReport {
    /// `D^(l)` values that are not flagged as zero.
    pub fn nonzero_d(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.d_values
            .iter()
            .filter(|(l, _)| !self.zero_flags.d[l])
            .map(|(l, v)| (*l, *v))
    }
}

/// Floating-point report. Zero flags compare against
/// [`tolerances::ZERO`] times the homogeneous scale of each quantity.
pub fn invariant_report(s: &StateVector) -> InvariantReport {
    let n = s.n();
    let t = tau(s);
    let tau_scale = homogeneous_scale(s, tau_degree(n));
    let d_scale = homogeneous_scale(s, 4);
    let d_values: BTreeMap<usize, Complex64> = d_range(n)
        .map(|l| (l, d_l(s, l).expect("l drawn from the valid range")))
        .collect();
    let zero_flags = ZeroFlags {
        tau: t <= tolerances::ZERO * tau_scale,
        d: d_values
            .iter()
            .map(|(l, v)| (*l, v.norm() <= tolerances::ZERO * d_scale))
            .collect(),
    };
    InvariantReport {
        n,
        tau: t,
        tau_parity: Parity::of(n),
        d_values,
        zero_flags,
        exact_mode: false,
        exact: None,
    }
}

fn ratio_f64(r: &Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Exact report: every flag is decided on exact rationals.
pub fn invariant_report_exact(e: &ExactState) -> InvariantReport {
    let n = e.n();
    let t = tau_exact(e);
    let d: BTreeMap<usize, Ratio<i128>> = d_range(n)
        .map(|l| (l, d_l_exact(e, l).expect("l drawn from the valid range")))
        .collect();
    InvariantReport {
        n,
        tau: ratio_f64(&t),
        tau_parity: Parity::of(n),
        d_values: d
            .iter()
            .map(|(l, v)| (*l, Complex64::new(ratio_f64(v), 0.0)))
            .collect(),
        zero_flags: ZeroFlags {
            tau: t == Ratio::from_integer(0),
            d: d.iter().map(|(l, v)| (*l, *v.numer() == 0)).collect(),
        },
        exact_mode: true,
        exact: Some(ExactValues {
            tau: t.to_string(),
            d: d.iter().map(|(l, v)| (*l, v.to_string())).collect(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statekit::{ReferenceState, StateVector};

    #[test]
    fn dicke_six_three() {
        let e = ReferenceState::Dicke { n: 6, l: 3 }.exact().unwrap();
        let r = invariant_report_exact(&e);
        assert_eq!(r.tau, 1.0);
        assert!(!r.zero_flags.tau);
        assert_eq!(r.exact.as_ref().unwrap().d[&3], "-1/400");
        assert_eq!(r.d_values[&3], Complex64::new(-1.0 / 400.0, 0.0));
        assert!(r.zero_flags.d[&2] && r.zero_flags.d[&4] && !r.zero_flags.d[&3]);

        let f = invariant_report(&e.to_state());
        assert!((f.tau - 1.0).abs() < 1e-12);
        assert_eq!(f.zero_flags, r.zero_flags);
    }

    #[test]
    fn w_six_all_zero() {
        let r = invariant_report_exact(&ReferenceState::W { n: 6 }.exact().unwrap());
        assert_eq!(r.tau, 0.0);
        assert!(r.zero_flags.tau);
        assert!(r.zero_flags.d.values().all(|z| *z));
        assert_eq!(r.nonzero_d().count(), 0);
    }

    #[test]
    fn product_states_have_vanishing_tau() {
        // Brute-force oracle: τ on sampled product states must vanish.
        for n in 2..=9 {
            for seed in 0..20u32 {
                let qubits: Vec<[Complex64; 2]> = (0..n)
                    .map(|q| {
                        let t = (seed * 31 + q as u32 * 7) as f64;
                        [
                            Complex64::new(t.sin(), (1.3 * t).cos()),
                            Complex64::new((0.7 * t).cos(), (2.1 * t).sin()),
                        ]
                    })
                    .collect();
                let s = StateVector::product(&qubits).unwrap().normalized().unwrap();
                let r = invariant_report(&s);
                assert!(r.tau < 1e-13, "n={n} seed={seed} tau={}", r.tau);
                assert!(r.zero_flags.tau);
            }
        }
    }

    #[test]
    fn json_shape() {
        let r = invariant_report_exact(&ReferenceState::Dicke { n: 4, l: 2 }.exact().unwrap());
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["tau_parity"], "even");
        assert_eq!(v["exact_mode"], true);
        assert_eq!(v["d"]["2"][0].as_f64().unwrap(), -1.0 / 36.0);
        assert_eq!(v["d"]["2"][1].as_f64().unwrap(), 0.0);
        let back: InvariantReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
