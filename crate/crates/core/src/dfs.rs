//! Time-bin decoherence-free subspaces built on a protected carrier.
//!
//! A qudit `sum_i a_i P(t_i)|0>` spreads one protected `N`-photon carrier over
//! `d` time bins. Each bin is an independent copy of the mode space. After
//! postselecting on `N` photons in a single bin, a static scatterer multiplies
//! every bin by the same eigenvalue, so the qudit arrives intact with
//! probability `|lambda|^2`. Losses then act as an erasure channel.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::FockState;
use crate::linalg::{c64, CVector, C64};
use crate::protect::{certify, eigen_residual, CertificationConfig};
use crate::scatter::SymmetricScattering;
use crate::states::StateRecipe;

const COEFFICIENT_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct TimeBinQudit {
    carrier: StateRecipe,
    carrier_state: FockState,
    coefficients: CVector,
}

impl TimeBinQudit {
    /// Builds the qudit, refusing carriers that fail certification.
    pub fn new(carrier: StateRecipe, coefficients: CVector, cfg: &CertificationConfig) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::InvalidArgument(format!("a qudit needs d >= 2 time bins, got {}", coefficients.len())));
        }
        if coefficients.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if (coefficients.norm() - 1.0).abs() > COEFFICIENT_NORM_TOL {
            return Err(Error::NotNormalized(coefficients.norm()));
        }
        let carrier_state = carrier.build_with_limit(cfg.n_max)?;
        let report = certify(&carrier_state, cfg)?;
        if !report.is_protected() {
            return Err(Error::NotProtected { residual: report.worst_residual });
        }
        Ok(Self { carrier, carrier_state, coefficients })
    }

    /// Equal-weight superposition over `d` bins.
    pub fn uniform(carrier: StateRecipe, d: usize, cfg: &CertificationConfig) -> Result<Self> {
        let a = c64(1.0 / (d as f64).sqrt(), 0.0);
        Self::new(carrier, CVector::from_element(d, a), cfg)
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn carrier(&self) -> &StateRecipe {
        &self.carrier
    }

    pub fn carrier_state(&self) -> &FockState {
        &self.carrier_state
    }

    pub fn coefficients(&self) -> &CVector {
        &self.coefficients
    }

    pub fn with_coefficients(&self, coefficients: CVector) -> Result<Self> {
        if coefficients.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: coefficients.len() });
        }
        if (coefficients.norm() - 1.0).abs() > COEFFICIENT_NORM_TOL {
            return Err(Error::NotNormalized(coefficients.norm()));
        }
        Ok(Self { coefficients, ..self.clone() })
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChannelOutcome {
    pub success_probability: f64,
    pub fidelity: f64,
    pub eigenvalue: C64,
}

/// Sends the qudit through a static scatterer: the same `s` acts on every bin.
pub fn transmit(qudit: &TimeBinQudit, s: &SymmetricScattering) -> Result<ChannelOutcome> {
    let per_bin = vec![s; qudit.dim()];
    transmit_per_bin(qudit, &per_bin)
}

/// Sends the qudit with bin `i` scattered by `per_bin[i]`.
///
/// The postselected output is `sum_i a_i S_i P(t_i)|0>`; success probability is
/// its squared norm and fidelity is its normalized overlap with the input.
pub fn transmit_per_bin(qudit: &TimeBinQudit, per_bin: &[&SymmetricScattering]) -> Result<ChannelOutcome> {
    if per_bin.len() != qudit.dim() {
        return Err(Error::DimensionMismatch { expected: qudit.dim(), found: per_bin.len() });
    }
    let mut success = 0.0;
    let mut overlap = c64(0.0, 0.0);
    let mut first = c64(0.0, 0.0);
    for (i, (s, a)) in per_bin.iter().zip(qudit.coefficients.iter()).enumerate() {
        let (lambda, residual) = eigen_residual(&qudit.carrier_state, s)?;
        if i == 0 {
            first = lambda;
        }
        // |S P|^2 = |lambda|^2 + residual^2 with the remainder orthogonal to P
        let weight = a.norm_sqr();
        success += weight * (lambda.norm_sqr() + residual * residual);
        overlap += lambda * weight;
    }
    let fidelity = if success > 0.0 { (overlap.norm_sqr() / success).min(1.0) } else { 0.0 };
    Ok(ChannelOutcome { success_probability: success, fidelity, eigenvalue: first })
}

/// Fidelity when the first bin sees `s1` and the remaining bins see `s2`:
/// what happens when the scatterer is not static over the qudit.
pub fn drift_experiment(qudit: &TimeBinQudit, s1: &SymmetricScattering, s2: &SymmetricScattering) -> Result<f64> {
    let mut per_bin = vec![s2; qudit.dim()];
    per_bin[0] = s1;
    Ok(transmit_per_bin(qudit, &per_bin)?.fidelity)
}

/// Quantum capacity of the erasure channel with erasure probability `epsilon`:
/// `max(0, 1 - 2 eps)` one-way, `1 - eps` with two-way classical communication.
pub fn erasure_capacity(epsilon: f64, two_way: bool) -> Result<f64> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!("erasure probability {epsilon} is outside [0, 1]")));
    }
    Ok(if two_way { 1.0 - epsilon } else { (1.0 - 2.0 * epsilon).max(0.0) })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CapacityPoint {
    pub epsilon: f64,
    pub capacity: f64,
}

/// Capacity on the grid `eps = 0, 0.01, ..., 1`.
pub fn capacity_curve(two_way: bool) -> Vec<CapacityPoint> {
    (0..=100)
        .map(|k| {
            let epsilon = k as f64 / 100.0;
            CapacityPoint { epsilon, capacity: erasure_capacity(epsilon, two_way).expect("grid inside [0, 1]") }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scatter::{ScatterSampler, Unitarity};

    fn cfg() -> CertificationConfig {
        CertificationConfig::default().with_samples(8)
    }

    fn psi4() -> StateRecipe {
        StateRecipe::parse("psi4", 1).unwrap()
    }

    #[test]
    fn unitary_channel_is_lossless() {
        let q = TimeBinQudit::uniform(psi4(), 2, &cfg()).unwrap();
        let s = ScatterSampler::new(3, Unitarity::Unitary).sample(q.carrier_state().basis().space()).unwrap();
        let out = transmit(&q, &s).unwrap();
        assert!((out.fidelity - 1.0).abs() < 1e-12);
        assert!((out.success_probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lossy_channel_success_is_determinant_squared() {
        let q = TimeBinQudit::uniform(psi4(), 3, &cfg()).unwrap();
        let s = ScatterSampler::new(4, Unitarity::Subunitary).sample(q.carrier_state().basis().space()).unwrap();
        let out = transmit(&q, &s).unwrap();
        assert!((out.fidelity - 1.0).abs() < 1e-12);
        assert!((out.success_probability - s.block_determinant(0).norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn refuses_unprotected_carrier() {
        let r = TimeBinQudit::uniform(StateRecipe::parse("phi1", 1).unwrap(), 2, &cfg());
        assert!(matches!(r, Err(Error::NotProtected { .. })));
    }

    #[test]
    fn rejects_bad_coefficients() {
        let v = CVector::from_vec(vec![c64(1.0, 0.0), c64(1.0, 0.0)]);
        assert!(TimeBinQudit::new(psi4(), v, &cfg()).is_err());
        assert!(TimeBinQudit::uniform(psi4(), 1, &cfg()).is_err());
    }

    #[test]
    fn global_phase_drift_dephases() {
        // S2 = i S1 multiplies the two-photon eigenvalue by -1: fidelity cos^2(pi/2) = 0
        let q = TimeBinQudit::uniform(psi4(), 2, &cfg()).unwrap();
        let s1 = ScatterSampler::new(5, Unitarity::Subunitary).sample(q.carrier_state().basis().space()).unwrap();
        let s2 = s1.scaled(c64(0.0, 1.0)).unwrap();
        assert!(drift_experiment(&q, &s1, &s2).unwrap() < 1e-12);
        assert!((drift_experiment(&q, &s1, &s1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn capacities() {
        assert_eq!(erasure_capacity(0.25, false).unwrap(), 0.5);
        assert_eq!(erasure_capacity(0.5, false).unwrap(), 0.0);
        assert_eq!(erasure_capacity(0.8, false).unwrap(), 0.0);
        assert!((erasure_capacity(0.3, true).unwrap() - 0.7).abs() < 1e-15);
        assert!(erasure_capacity(1.5, true).is_err());
        let curve = capacity_curve(false);
        assert_eq!(curve.len(), 101);
        assert_eq!(curve[100].epsilon, 1.0);
    }
}
