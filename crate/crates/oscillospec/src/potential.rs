//! Two-scale potentials `q(X, y)`, zero-mean and 1-periodic in `y`.
//!
//! A potential is a finite sum of harmonics `Σ_j a_j(X) cos(2π m_j y + θ_j)`
//! with decaying analytic envelopes `a_j`. Declaring a term automatically
//! mirrors it onto the conjugate harmonic, so the potential is real-valued,
//! and `m ≠ 0` keeps it exactly zero-mean in `y`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::envelope::EnvelopeProfile;
use crate::error::{Error, Result};
use crate::harmonic::{Basis, Coef, EnvCache, HarmonicSeries};

/// One declared harmonic term `amplitude-envelope(X) · cos(2π m y + phase)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub harmonic: i32,
    pub envelope: EnvelopeProfile,
    #[serde(default)]
    pub phase: f64,
}

/// Real-valued two-scale potential, zero-mean in the fast variable.
#[derive(Debug, Clone)]
pub struct TwoScalePotential {
    terms: Vec<HarmonicTerm>,
    basis: Basis,
    series: HarmonicSeries,
    real_symmetric: bool,
}

impl TwoScalePotential {
    /// Builds the potential from declared real terms, mirroring each onto
    /// its conjugate harmonic.
    pub fn from_real_terms(terms: Vec<HarmonicTerm>) -> Result<Self> {
        for t in &terms {
            if t.harmonic == 0 {
                return Err(Error::Config(
                    "harmonic index 0 is not allowed (zero-mean class)".into(),
                ));
            }
            if !t.phase.is_finite() {
                return Err(Error::Config("term phase must be finite".into()));
            }
            EnvelopeProfile::new(t.envelope.kind, t.envelope.amplitude, t.envelope.width)?;
        }
        let basis: Basis = Arc::new(terms.iter().map(|t| t.envelope).collect());
        let mut series = HarmonicSeries::new(basis.clone());
        for (j, t) in terms.iter().enumerate() {
            let half = Complex64::from_polar(0.5, t.phase);
            series.accumulate(t.harmonic, &Coef::envelope(j, half));
            series.accumulate(-t.harmonic, &Coef::envelope(j, half.conj()));
        }
        Ok(TwoScalePotential {
            terms,
            basis,
            series,
            real_symmetric: true,
        })
    }

    /// Single-term convenience constructor.
    pub fn single_cosine(harmonic: i32, envelope: EnvelopeProfile, phase: f64) -> Result<Self> {
        Self::from_real_terms(vec![HarmonicTerm {
            harmonic,
            envelope,
            phase,
        }])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[HarmonicTerm] {
        &self.terms
    }

    pub fn real_symmetric(&self) -> bool {
        self.real_symmetric
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    /// The potential as a harmonic series (for the cell and phase modules).
    pub fn series(&self) -> &HarmonicSeries {
        &self.series
    }

    /// Exact value `q(X, y)`.
    pub fn eval_q(&self, x_slow: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.envelope.value(x_slow)
                    * (crate::harmonic::TWO_PI * t.harmonic as f64 * y + t.phase).cos()
            })
            .sum()
    }

    /// Value on the physical line: `q(ε^α x, x/ε)`.
    pub fn eval_oscillatory(&self, eps: f64, alpha: f64, x: f64) -> f64 {
        self.eval_q(eps.powf(alpha) * x, x / eps)
    }

    /// Coefficient of `e^{2πimy}`; identically zero for `m = 0`.
    pub fn y_coefficient(&self, m: i32, x_slow: f64) -> Complex64 {
        let coef = self.series.coef(m);
        if coef.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let cache = EnvCache::new(&self.basis, x_slow, coef.max_env_order());
        coef.eval(&cache)
    }

    /// Exact `l`-th X-derivative of the `m`-th coefficient, `l ≤ 5`.
    pub fn envelope_derivative(&self, m: i32, l: usize, x_slow: f64) -> Result<Complex64> {
        if l > 5 {
            return Err(Error::Config(format!(
                "coefficient derivatives are only exposed up to order 5, got {l}"
            )));
        }
        let coef = self.series.coef(m).dx_n(l);
        if coef.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let cache = EnvCache::new(&self.basis, x_slow, coef.max_env_order());
        Ok(coef.eval(&cache))
    }

    /// Largest envelope support radius at the given relative tolerance.
    pub fn support_radius(&self, rel_tol: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.envelope.support_radius(rel_tol))
            .fold(0.0, f64::max)
    }

    /// Smallest slow-variable scale among the envelopes (bandwidth planning).
    pub fn min_slow_scale(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.envelope.slow_scale())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_harmonic(&self) -> i32 {
        self.series.max_abs_harmonic()
    }

    /// Content hash over the exact term data (bit-level on the floats).
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        for t in &self.terms {
            h.update(t.harmonic.to_le_bytes());
            h.update((t.envelope.kind as u8).to_le_bytes());
            h.update(t.envelope.amplitude.to_bits().to_le_bytes());
            h.update(t.envelope.width.to_bits().to_le_bytes());
            h.update(t.phase.to_bits().to_le_bytes());
        }
        let digest = h.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Relation between the original scaling `(β, ϵ)` and the rescaled `(α, ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingPair {
    pub beta: f64,
    pub alpha: f64,
    pub eps_original: f64,
    pub eps_rescaled: f64,
}

/// Maps `β ∈ [0, 2)` to `α = β/(2-β)` together with `ε = ϵ^{1-β/2}`.
pub fn scaling_map(beta: f64, eps_original: f64) -> Result<ScalingPair> {
    if !(0.0..2.0).contains(&beta) {
        return Err(Error::Config(format!(
            "beta must lie in [0, 2), got {beta}"
        )));
    }
    if !(eps_original > 0.0) {
        return Err(Error::Config("eps must be positive".into()));
    }
    Ok(ScalingPair {
        beta,
        alpha: beta / (2.0 - beta),
        eps_original,
        eps_rescaled: eps_original.powf(1.0 - beta / 2.0),
    })
}

/// Inverse of [`scaling_map`] on the exponent: `β = 2α/(1+α)`.
pub fn scaling_map_inv(alpha: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::Config(format!("alpha must exceed -1, got {alpha}")));
    }
    Ok(2.0 * alpha / (1.0 + alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::EnvelopeKind;
    use crate::testutil::demo_potential;

    #[test]
    fn demo_potential_value_at_origin() {
        let p = demo_potential();
        assert!((p.eval_q(0.0, 0.0) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn periodicity_is_exact() {
        let p = demo_potential();
        for &(x, y) in &[(0.0, 0.1), (1.5, 0.77), (-3.0, 0.5)] {
            assert!((p.eval_q(x, y + 1.0) - p.eval_q(x, y)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_mean_by_quadrature() {
        let p = demo_potential();
        for &x in &[0.0, 0.5, 2.0, -4.0] {
            let n = 64;
            let mean: f64 = (0..n).map(|i| p.eval_q(x, i as f64 / n as f64)).sum::<f64>() / n as f64;
            assert!(mean.abs() < 1e-12, "mean {mean} at X={x}");
        }
    }

    #[test]
    fn y_coefficients_of_demo_potential() {
        let p = demo_potential();
        let c1 = p.y_coefficient(1, 0.0);
        assert!((c1 - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        assert_eq!(p.y_coefficient(0, 1.23), Complex64::new(0.0, 0.0));
        let cm1 = p.y_coefficient(-1, 2.0);
        assert!((cm1.re - 2.0 * (-0.5f64).exp()).abs() < 1e-14);
        assert!(cm1.im.abs() < 1e-16);
    }

    #[test]
    fn coefficient_derivatives() {
        let p = demo_potential();
        // gaussian envelope: 4 exp(-X^2/8); the m=1 coefficient is half of it
        let d = p.envelope_derivative(1, 1, 2.0).unwrap();
        assert!((d.re - (-0.5 * 2.0 * (-0.5f64).exp())).abs() < 1e-14);
        // first derivative of an even envelope vanishes at the origin
        assert!(p.envelope_derivative(1, 1, 0.0).unwrap().norm() < 1e-16);
        // l = 0 reduces to the coefficient itself
        let c = p.envelope_derivative(1, 0, 1.3).unwrap();
        assert!((c - p.y_coefficient(1, 1.3)).norm() < 1e-16);
        // cross-check l=1 against central differences
        let h = 1e-5;
        let fd = (p.y_coefficient(1, 2.0 + h) - p.y_coefficient(1, 2.0 - h)) / (2.0 * h);
        assert!((d - fd).norm() < 1e-9);
        assert!(p.envelope_derivative(1, 6, 0.0).is_err());
    }

    #[test]
    fn reality_pairs_conjugate_coefficients() {
        let p = TwoScalePotential::from_real_terms(vec![
            HarmonicTerm {
                harmonic: 1,
                envelope: EnvelopeProfile::gaussian(4.0, 8.0),
                phase: 0.4,
            },
            HarmonicTerm {
                harmonic: 2,
                envelope: EnvelopeProfile::new(EnvelopeKind::Sech2, 1.0, 2.0).unwrap(),
                phase: -0.9,
            },
        ])
        .unwrap();
        for m in 1..=2 {
            for &x in &[0.0, 0.8, -1.5] {
                let a = p.y_coefficient(m, x);
                let b = p.y_coefficient(-m, x);
                assert!((a.conj() - b).norm() < 1e-14);
            }
        }
        // the spectral sum reproduces the direct evaluation
        for &(x, y) in &[(0.3, 0.21), (-1.0, 0.9)] {
            let direct = p.eval_q(x, y);
            let spectral = p.series().eval(x, y);
            assert!((direct - spectral).abs() < 1e-13 * (1.0 + direct.abs()));
        }
    }

    #[test]
    fn rejects_zero_harmonic() {
        let r = TwoScalePotential::single_cosine(0, EnvelopeProfile::gaussian(1.0, 1.0), 0.0);
        assert!(r.is_err());
    }

    #[test]
    fn scaling_map_examples() {
        assert!((scaling_map(1.0, 0.3).unwrap().alpha - 1.0).abs() < 1e-15);
        assert!((scaling_map(0.0, 0.3).unwrap().alpha - 0.0).abs() < 1e-15);
        assert!((scaling_map(4.0 / 3.0, 0.3).unwrap().alpha - 2.0).abs() < 1e-14);
        assert!(scaling_map(2.0, 0.3).is_err());
    }

    #[test]
    fn scaling_round_trip() {
        for &alpha in &[0.25, 0.5, 1.0, 2.0, 2.9] {
            let beta = scaling_map_inv(alpha).unwrap();
            let pair = scaling_map(beta, 0.2).unwrap();
            assert!((pair.alpha - alpha).abs() < 1e-14);
        }
    }

    #[test]
    fn eps_rescaling_follows_exponent() {
        let pair = scaling_map(1.0, 0.04).unwrap();
        // beta = 1: eps_rescaled = eps^{1/2}
        assert!((pair.eps_rescaled - 0.2).abs() < 1e-15);
    }

    #[test]
    fn content_hash_distinguishes_potentials() {
        let a = demo_potential();
        let b = TwoScalePotential::single_cosine(1, EnvelopeProfile::gaussian(4.0, 8.1), 0.0).unwrap();
        assert_ne!(a.content_hash(), b.content_hash());
        assert_eq!(a.content_hash(), demo_potential().content_hash());
    }
}
