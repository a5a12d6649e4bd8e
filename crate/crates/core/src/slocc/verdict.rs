use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{
    homogeneous_scale, invariant_report, invariant_report_exact, tau, tau_degree, Vanishing,
};
use crate::statekit::{ReferenceState, StateVector};

/// Reference classes a state is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceClass {
    Ghz,
    W,
    /// `|n/2, n>`, only for even `n`.
    DickeHalf,
}

impl ReferenceClass {
    pub fn all(n: usize) -> Vec<ReferenceClass> {
        let mut v = vec![ReferenceClass::Ghz, ReferenceClass::W];
        if n.is_multiple_of(2) {
            v.push(ReferenceClass::DickeHalf);
        }
        v
    }

    pub fn state(&self, n: usize) -> Option<ReferenceState> {
        match self {
            ReferenceClass::Ghz => Some(ReferenceState::Ghz { n }),
            ReferenceClass::W => Some(ReferenceState::W { n }),
            ReferenceClass::DickeHalf if n.is_multiple_of(2) => {
                Some(ReferenceState::Dicke { n, l: n / 2 })
            }
            ReferenceClass::DickeHalf => None,
        }
    }

    /// Whether τ of the reference state is zero: GHZ has τ = 1, and `|l,n>`
    /// has τ = 1 for `l = n/2` and τ = 0 otherwise.
    pub fn tau_vanishes(&self, n: usize) -> bool {
        match self {
            ReferenceClass::Ghz | ReferenceClass::DickeHalf => false,
            ReferenceClass::W => n != 2,
        }
    }
}

/// Inequivalence rules. Each is a necessary condition for equivalence, so a
/// violation proves the states lie in different SLOCC classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Rule {
    /// τ vanishes on exactly one of the two states.
    #[serde(rename = "tau_mismatch")]
    TauMismatch,
    /// Some `D^(l)` is nonzero, but every GHZ-class state has `D^(l) = 0`.
    #[serde(rename = "d_nonzero_vs_ghz")]
    DNonzeroVsGhz,
    /// Some `D^(l)` is nonzero, but every W-class state has `D^(l) = 0`.
    #[serde(rename = "d_nonzero_vs_w")]
    DNonzeroVsW,
    /// The nonzero `D^(l)` is the one guaranteed for the Dicke state `|l,n>`.
    #[serde(rename = "dicke_witness")]
    DickeWitness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Distinct,
    /// No rule fired. This never means "equivalent".
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub reference: ReferenceClass,
    pub reference_state: String,
    pub status: Status,
    pub rules: Vec<Rule>,
}

/// One-sided classification: lists the reference classes the subject is
/// provably outside of. Nothing here ever asserts equivalence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub subject: String,
    pub n: usize,
    pub exact_mode: bool,
    pub tau: f64,
    pub tau_status: Vanishing,
    pub d_status: BTreeMap<usize, Vanishing>,
    pub classes_excluded: Vec<ReferenceClass>,
    pub comparisons: Vec<Comparison>,
}

impl Verdict {
    pub fn status(&self, reference: ReferenceClass) -> Status {
        self.comparisons
            .iter()
            .find(|c| c.reference == reference)
            .map_or(Status::Unknown, |c| c.status)
    }

    pub fn excludes(&self, reference: ReferenceClass) -> bool {
        self.status(reference) == Status::Distinct
    }

    pub fn rules(&self, reference: ReferenceClass) -> &[Rule] {
        self.comparisons
            .iter()
            .find(|c| c.reference == reference)
            .map_or(&[], |c| c.rules.as_slice())
    }
}

fn decide(
    subject: String,
    n: usize,
    exact_mode: bool,
    tau_value: f64,
    tau_status: Vanishing,
    d_status: BTreeMap<usize, Vanishing>,
    dicke_l: Option<usize>,
) -> Verdict {
    let some_d_nonzero = d_status.values().any(|v| *v == Vanishing::NonZero);
    let dicke_witness = dicke_l.is_some_and(|l| d_status.get(&l) == Some(&Vanishing::NonZero));
    let comparisons: Vec<Comparison> = ReferenceClass::all(n)
        .into_iter()
        .map(|reference| {
            let mut rules = Vec::new();
            let ref_zero = reference.tau_vanishes(n);
            match (tau_status, ref_zero) {
                (Vanishing::Zero, false) | (Vanishing::NonZero, true) => {
                    rules.push(Rule::TauMismatch)
                }
                _ => {}
            }
            let orbit_rule = match reference {
                ReferenceClass::Ghz => Some(Rule::DNonzeroVsGhz),
                ReferenceClass::W => Some(Rule::DNonzeroVsW),
                ReferenceClass::DickeHalf => None,
            };
            if let (Some(rule), true) = (orbit_rule, some_d_nonzero) {
                rules.push(rule);
                if dicke_witness {
                    rules.push(Rule::DickeWitness);
                }
            }
            let status = if rules.is_empty() {
                Status::Unknown
            } else {
                Status::Distinct
            };
            Comparison {
                reference,
                reference_state: reference
                    .state(n)
                    .map(|r| r.to_string())
                    .unwrap_or_default(),
                status,
                rules,
            }
        })
        .collect();
    Verdict {
        subject,
        n,
        exact_mode,
        tau: tau_value,
        tau_status,
        d_status,
        classes_excluded: comparisons
            .iter()
            .filter(|c| c.status == Status::Distinct)
            .map(|c| c.reference)
            .collect(),
        comparisons,
    }
}

/// Classifies an arbitrary state from floating-point invariants. Values in
/// the indeterminate band between the zero and nonzero thresholds never
/// trigger a rule.
pub fn classify(s: &StateVector, subject: &str) -> Verdict {
    let n = s.n();
    let report = invariant_report(s);
    let tau_status = Vanishing::classify(report.tau, homogeneous_scale(s, tau_degree(n)));
    let d_scale = homogeneous_scale(s, 4);
    let d_status = report
        .d_values
        .iter()
        .map(|(l, v)| (*l, Vanishing::classify(v.norm(), d_scale)))
        .collect();
    decide(
        subject.to_string(),
        n,
        false,
        report.tau,
        tau_status,
        d_status,
        None,
    )
}

/// Classifies a named reference state using exact invariants.
pub fn classify_reference(r: &ReferenceState) -> Result<Verdict> {
    let report = invariant_report_exact(&r.exact_capped(usize::MAX)?);
    let d_status = report
        .zero_flags
        .d
        .iter()
        .map(|(l, z)| (*l, Vanishing::exact(*z)))
        .collect();
    Ok(decide(
        r.to_string(),
        r.n(),
        true,
        report.tau,
        Vanishing::exact(report.zero_flags.tau),
        d_status,
        r.dicke_spec().map(|d| d.l()),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairComparison {
    pub tau: [f64; 2],
    pub tau_status: [Vanishing; 2],
    pub status: Status,
    pub rules: Vec<Rule>,
}

/// Pairwise τ test between two states on the same number of qubits.
pub fn compare_states(a: &StateVector, b: &StateVector) -> Result<PairComparison> {
    if a.n() != b.n() {
        return Err(Error::Dimension {
            expected: a.n(),
            got: b.n(),
        });
    }
    let deg = tau_degree(a.n());
    let (ta, tb) = (tau(a), tau(b));
    let sa = Vanishing::classify(ta, homogeneous_scale(a, deg));
    let sb = Vanishing::classify(tb, homogeneous_scale(b, deg));
    let fires = matches!(
        (sa, sb),
        (Vanishing::Zero, Vanishing::NonZero) | (Vanishing::NonZero, Vanishing::Zero)
    );
    Ok(PairComparison {
        tau: [ta, tb],
        tau_status: [sa, sb],
        status: if fires {
            Status::Distinct
        } else {
            Status::Unknown
        },
        rules: if fires {
            vec![Rule::TauMismatch]
        } else {
            vec![]
        },
    })
}
