use serde::Serialize;

use super::chain::{IloSampler, SamplerStats};
use super::verdict::{classify, ReferenceClass, Verdict};
use super::{apply_local, check_tau_covariance, ghz_orbit_state, w_orbit_state};
use crate::error::Result;
use crate::invariants::{d_l, d_range, tau, Parity};
use crate::statekit::{ReferenceState, StateVector};
use crate::tolerances;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CampaignConfig {
    pub trials: usize,
    pub seed: u64,
    pub floor: f64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 0,
            floor: tolerances::INVERTIBILITY_FLOOR,
        }
    }
}

/// Aggregate of a seeded orbit-sampling run. Every aggregate is a max or a
/// count, so the report does not depend on trial order.
#[derive(Clone, Debug, Serialize)]
pub struct CampaignReport {
    pub state: String,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub parity: Parity,
    pub tau: f64,
    /// Largest `|τ(F s) - τ(s) Π|det|^p|`.
    pub max_residual: f64,
    /// Largest residual divided by `max(1, τ(s) Π|det|^p)`.
    pub max_relative_residual: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
    pub sampler: SamplerStats,
    pub acceptance_rate: f64,
    /// For GHZ and W inputs: largest gap between the closed-form orbit
    /// amplitudes and the operator-application path, relative to the
    /// largest amplitude.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_path_deviation: Option<f64>,
    /// For GHZ and W inputs: largest `|D^(l)| / |ψ|^4` over the orbit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_max_d: Option<f64>,
    /// For GHZ and W inputs: orbit members whose verdict excluded their own class.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub soundness_violations: Option<usize>,
    pub verdict: Verdict,
}

impl CampaignReport {
    /// True when every dual-route and covariance check stayed in tolerance.
    pub fn consistent(&self) -> bool {
        self.within_tolerance
            && self
                .orbit_path_deviation
                .is_none_or(|d| d <= tolerances::ORBIT_PATHS)
            && self.orbit_max_d.is_none_or(|d| d <= tolerances::ZERO)
            && self.soundness_violations.is_none_or(|v| v == 0)
    }
}

/// Trial `t` draws its chain from seed `config.seed + t`.
pub fn covariance_campaign(
    s: &StateVector,
    subject: &str,
    reference: Option<ReferenceState>,
    config: &CampaignConfig,
) -> Result<CampaignReport> {
    let n = s.n();
    let sampler = IloSampler {
        floor: config.floor,
    };
    let mut stats = SamplerStats::default();
    let mut max_residual = 0f64;
    let mut max_relative = 0f64;

    let orbit_kind = match reference {
        Some(ReferenceState::Ghz { .. }) => Some(ReferenceClass::Ghz),
        Some(ReferenceState::W { .. }) | Some(ReferenceState::Dicke { l: 1, .. }) => {
            Some(ReferenceClass::W)
        }
        _ => None,
    };
    let mut path_dev = 0f64;
    let mut max_d = 0f64;
    let mut violations = 0usize;

    for t in 0..config.trials {
        let (chain, st) = sampler.sample(n, config.seed.wrapping_add(t as u64));
        stats.merge(st);
        let check = check_tau_covariance(s, &chain)?;
        max_residual = max_residual.max(check.residual);
        max_relative = max_relative.max(check.relative_residual());

        if let Some(kind) = orbit_kind {
            let applied = apply_local(s, &chain)?;
            let direct = match kind {
                ReferenceClass::Ghz => ghz_orbit_state(&chain)?,
                _ => w_orbit_state(&chain)?,
            };
            let amp_scale = applied
                .amplitudes()
                .iter()
                .map(|a| a.norm())
                .fold(1.0, f64::max);
            path_dev = path_dev.max(direct.max_abs_diff(&applied) / amp_scale);
            let d_scale = applied.norm_sqr().powi(2);
            for l in d_range(n) {
                max_d = max_d.max(d_l(&applied, l)?.norm() / d_scale);
            }
            if classify(&applied, subject).excludes(kind) {
                violations += 1;
            }
        }
    }

    Ok(CampaignReport {
        state: subject.to_string(),
        n,
        trials: config.trials,
        seed: config.seed,
        parity: Parity::of(n),
        tau: tau(s),
        max_residual,
        max_relative_residual: max_relative,
        tolerance: tolerances::COVARIANCE,
        within_tolerance: max_relative <= tolerances::COVARIANCE,
        sampler: stats,
        acceptance_rate: stats.acceptance_rate(),
        orbit_path_deviation: orbit_kind.map(|_| path_dev),
        orbit_max_d: orbit_kind.map(|_| max_d),
        soundness_violations: orbit_kind.map(|_| violations),
        verdict: classify(s, subject),
    })
}
