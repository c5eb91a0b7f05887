//! Slow-variable envelope profiles with closed-form derivatives.
//!
//! The admitted envelopes decay at infinity and are analytic, so every
//! X-derivative needed downstream (cell quantities, phase profiles, WKB
//! jets) is available exactly through jet arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvelopeKind {
    /// `A exp(-X^2 / w)`
    Gaussian,
    /// `A sech^2(X / w)`
    Sech2,
    /// `A / (1 + (X / w)^2)`
    RationalDecay,
}

/// Decaying analytic envelope `a(X)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeProfile {
    pub kind: EnvelopeKind,
    pub amplitude: f64,
    pub width: f64,
}

impl EnvelopeProfile {
    pub fn new(kind: EnvelopeKind, amplitude: f64, width: f64) -> Result<Self> {
        if !amplitude.is_finite() {
            return Err(Error::Config("envelope amplitude must be finite".into()));
        }
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::Config(format!(
                "envelope width must be positive and finite, got {width}"
            )));
        }
        Ok(EnvelopeProfile { kind, amplitude, width })
    }

    pub fn gaussian(amplitude: f64, width: f64) -> Self {
        Self::new(EnvelopeKind::Gaussian, amplitude, width).expect("valid gaussian")
    }

    pub fn value(&self, x: f64) -> f64 {
        let w = self.width;
        self.amplitude
            * match self.kind {
                EnvelopeKind::Gaussian => (-x * x / w).exp(),
                EnvelopeKind::Sech2 => {
                    let c = (x / w).cosh();
                    1.0 / (c * c)
                }
                EnvelopeKind::RationalDecay => 1.0 / (1.0 + (x / w) * (x / w)),
            }
    }

    /// Taylor jet of the envelope at `x`, to the requested order.
    pub fn jet(&self, x: f64, order: usize) -> Jet {
        let w = self.width;
        let xj = Jet::variable(x, order);
        let j = match self.kind {
            EnvelopeKind::Gaussian => xj.mul_jet(&xj).scale(-1.0 / w).exp(),
            EnvelopeKind::Sech2 => {
                let t = xj.scale(1.0 / w).tanh();
                &Jet::constant(1.0, order) - &t.mul_jet(&t)
            }
            EnvelopeKind::RationalDecay => {
                let one = Jet::constant(1.0, order);
                let d = &one + &xj.scale(1.0 / w).powi(2);
                one.div_jet(&d)
            }
        };
        j.scale(self.amplitude)
    }

    /// Exact `l`-th derivative at `x` (any order).
    pub fn derivative(&self, x: f64, l: usize) -> f64 {
        self.jet(x, l).derivative_value(l)
    }

    /// Radius beyond which `|a(X)| <= rel_tol * |amplitude|`.
    pub fn support_radius(&self, rel_tol: f64) -> f64 {
        let w = self.width;
        let t = rel_tol.max(1e-300);
        match self.kind {
            EnvelopeKind::Gaussian => (w * (1.0 / t).ln()).sqrt(),
            EnvelopeKind::Sech2 => 0.5 * w * (4.0 / t).ln(),
            EnvelopeKind::RationalDecay => w * (1.0 / t - 1.0).max(0.0).sqrt(),
        }
    }

    /// Characteristic spread of the envelope in the slow variable, used to
    /// estimate Fourier bandwidths.
    pub fn slow_scale(&self) -> f64 {
        match self.kind {
            EnvelopeKind::Gaussian => (self.width / 2.0).sqrt(),
            EnvelopeKind::Sech2 => self.width,
            EnvelopeKind::RationalDecay => self.width,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd5(f: impl Fn(f64) -> f64, x: f64, l: usize, h: f64) -> f64 {
        // central differences, recursively
        if l == 0 {
            f(x)
        } else {
            (fd5(&f, x + h, l - 1, h) - fd5(&f, x - h, l - 1, h)) / (2.0 * h)
        }
    }

    #[test]
    fn gaussian_derivatives_match_finite_differences() {
        let env = EnvelopeProfile::gaussian(4.0, 8.0);
        for &x in &[0.0, 1.0, -2.5] {
            for l in 0..=5 {
                let exact = env.derivative(x, l);
                let fd = fd5(|t| env.value(t), x, l, 1e-2);
                assert!(
                    (exact - fd).abs() < 1e-3 * (1.0 + exact.abs()),
                    "l={l} x={x}: exact={exact} fd={fd}"
                );
            }
        }
    }

    #[test]
    fn sech2_and_rational_derivatives_match_finite_differences() {
        let envs = [
            EnvelopeProfile::new(EnvelopeKind::Sech2, 1.5, 2.0).unwrap(),
            EnvelopeProfile::new(EnvelopeKind::RationalDecay, -0.7, 3.0).unwrap(),
        ];
        for env in envs {
            for &x in &[0.0, 0.8, -1.7] {
                for l in 0..=5 {
                    let exact = env.derivative(x, l);
                    let fd = fd5(|t| env.value(t), x, l, 1e-2);
                    assert!(
                        (exact - fd).abs() < 2e-3 * (1.0 + exact.abs()),
                        "{:?} l={l} x={x}: exact={exact} fd={fd}",
                        env.kind
                    );
                }
            }
        }
    }

    #[test]
    fn gaussian_odd_derivatives_vanish_at_origin() {
        let env = EnvelopeProfile::gaussian(4.0, 8.0);
        assert_eq!(env.derivative(0.0, 1), 0.0);
        assert_eq!(env.derivative(0.0, 3), 0.0);
        assert_eq!(env.derivative(0.0, 5), 0.0);
    }

    #[test]
    fn support_radius_bounds_envelope() {
        for kind in [EnvelopeKind::Gaussian, EnvelopeKind::Sech2, EnvelopeKind::RationalDecay] {
            let env = EnvelopeProfile::new(kind, 2.0, 3.0).unwrap();
            let r = env.support_radius(1e-10);
            assert!(env.value(r).abs() <= 1.01e-10 * env.amplitude.abs());
            assert!(env.value(-r).abs() <= 1.01e-10 * env.amplitude.abs());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(EnvelopeProfile::new(EnvelopeKind::Gaussian, 1.0, 0.0).is_err());
        assert!(EnvelopeProfile::new(EnvelopeKind::Gaussian, f64::NAN, 1.0).is_err());
    }
}
