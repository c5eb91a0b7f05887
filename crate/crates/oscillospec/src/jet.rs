//! Truncated Taylor series ("jets") with exact arithmetic on the coefficients.
//!
//! A [`Jet`] stores the Taylor coefficients `c[k] = f^(k)(x0) / k!` of a
//! function at some base point, up to a fixed truncation order. Sums,
//! products, quotients and the elementary functions needed by the envelope
//! classes propagate coefficients exactly (up to floating-point roundoff),
//! so derivatives obtained this way are closed-form values, not finite
//! differences.
//!
//! Every jet carries a `valid` marker: coefficients `0..=valid` are
//! trustworthy Taylor coefficients of the represented function. Operations
//! that consume orders (differentiation, deflation) shrink it; this is what
//! lets the higher-order expansion code detect when a requested order would
//! exceed the information actually available.

use std::ops::{Add, Mul, Neg, Sub};

/// Truncated Taylor expansion of a real function at a base point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    coeffs: Vec<f64>,
    valid: usize,
}

impl Jet {
    /// Jet of the constant function `v`.
    pub fn constant(v: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = v;
        Jet { coeffs, valid: order }
    }

    /// Jet of the identity `x ↦ x` expanded at `x0`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = x0;
        if order >= 1 {
            coeffs[1] = 1.0;
        }
        Jet { coeffs, valid: order }
    }

    /// Builds a jet directly from Taylor coefficients (all marked valid).
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty());
        let valid = coeffs.len() - 1;
        Jet { coeffs, valid }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Highest order whose coefficient is a true Taylor coefficient.
    pub fn valid_order(&self) -> usize {
        self.valid
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Function value at the base point.
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// `l`-th derivative at the base point (requires `l <= valid_order`).
    pub fn derivative_value(&self, l: usize) -> f64 {
        assert!(
            l <= self.valid,
            "derivative order {l} exceeds valid jet order {}",
            self.valid
        );
        self.coeffs[l] * factorial(l)
    }

    /// Evaluates the truncated polynomial at offset `dx` from the base point.
    pub fn eval(&self, dx: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * dx + c;
        }
        acc
    }

    /// Jet of the derivative function, one order shorter.
    pub fn derivative(&self) -> Jet {
        if self.coeffs.len() == 1 {
            let mut j = Jet::constant(0.0, 0);
            j.valid = self.valid.saturating_sub(1);
            return j;
        }
        let coeffs: Vec<f64> = (1..self.coeffs.len())
            .map(|k| self.coeffs[k] * k as f64)
            .collect();
        Jet {
            coeffs,
            valid: self.valid.saturating_sub(1),
        }
    }

    /// Jet of the antiderivative vanishing at the base point.
    pub fn antiderivative(&self) -> Jet {
        let mut coeffs = vec![0.0; self.coeffs.len() + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k + 1] = c / (k + 1) as f64;
        }
        let valid = (self.valid + 1).min(coeffs.len() - 1);
        Jet { coeffs, valid }
    }

    /// Taylor jet of the `l`-th derivative function, truncated to `order`.
    pub fn shift_down(&self, l: usize, order: usize) -> Jet {
        let mut coeffs = vec![0.0; order + 1];
        for (i, c) in coeffs.iter_mut().enumerate() {
            if l + i <= self.order() {
                *c = self.coeffs[l + i] * binomial_ratio(l + i, i);
            }
        }
        let valid = self.valid.saturating_sub(l).min(order);
        Jet { coeffs, valid }
    }

    /// Divides by `(x - x0)^l`, asserting the leading coefficients vanish.
    ///
    /// The dropped coefficients must be zero to roundoff relative to `scale`.
    pub fn deflate(&self, l: usize, scale: f64) -> Jet {
        for k in 0..l.min(self.coeffs.len()) {
            debug_assert!(
                self.coeffs[k].abs() <= 1e-10 * scale.max(1e-300),
                "deflating a jet with non-vanishing low-order coefficient {}",
                self.coeffs[k]
            );
        }
        let coeffs: Vec<f64> = if self.coeffs.len() > l {
            self.coeffs[l..].to_vec()
        } else {
            vec![0.0]
        };
        Jet {
            coeffs,
            valid: self.valid.saturating_sub(l),
        }
    }

    /// Multiplies by `(x - x0)^l`, keeping the original truncation length.
    pub fn inflate(&self, l: usize) -> Jet {
        let mut coeffs = vec![0.0; self.coeffs.len() + l];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k + l] = c;
        }
        let valid = (self.valid + l).min(coeffs.len() - 1);
        Jet { coeffs, valid }
    }

    pub fn truncate(&self, order: usize) -> Jet {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, 0.0);
        Jet {
            coeffs,
            valid: self.valid.min(order),
        }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            valid: self.valid,
        }
    }

    fn binary_len(&self, other: &Jet) -> usize {
        self.coeffs.len().max(other.coeffs.len())
    }

    pub fn mul_jet(&self, other: &Jet) -> Jet {
        let n = self.binary_len(other);
        let mut coeffs = vec![0.0; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if i + j < n {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Jet {
            coeffs,
            valid: self.valid.min(other.valid),
        }
    }

    /// Quotient jet; the divisor must not vanish at the base point.
    pub fn div_jet(&self, other: &Jet) -> Jet {
        assert!(other.coeffs[0] != 0.0, "jet division by zero constant term");
        let n = self.binary_len(other);
        let mut q = vec![0.0; n];
        for k in 0..n {
            let mut acc = self.coeff(k);
            for j in 0..k {
                acc -= q[j] * other.coeff(k - j);
            }
            q[k] = acc / other.coeffs[0];
        }
        Jet {
            coeffs: q,
            valid: self.valid.min(other.valid),
        }
    }

    pub fn exp(&self) -> Jet {
        let n = self.coeffs.len();
        let mut e = vec![0.0; n];
        e[0] = self.coeffs[0].exp();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.coeff(j) * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        Jet {
            coeffs: e,
            valid: self.valid,
        }
    }

    /// Square root jet; requires a positive constant term.
    pub fn sqrt(&self) -> Jet {
        assert!(self.coeffs[0] > 0.0, "jet sqrt of non-positive constant term");
        let n = self.coeffs.len();
        let mut s = vec![0.0; n];
        s[0] = self.coeffs[0].sqrt();
        for k in 1..n {
            let mut acc = self.coeff(k);
            for j in 1..k {
                acc -= s[j] * s[k - j];
            }
            s[k] = acc / (2.0 * s[0]);
        }
        Jet {
            coeffs: s,
            valid: self.valid,
        }
    }

    /// Hyperbolic tangent of the jet.
    pub fn tanh(&self) -> Jet {
        let n = self.coeffs.len();
        let mut t = vec![0.0; n];
        let mut w = vec![0.0; n]; // w = 1 - t^2
        t[0] = self.coeffs[0].tanh();
        w[0] = 1.0 - t[0] * t[0];
        for k in 1..n {
            // t' = (1 - t^2) u'  =>  k t_k = sum_{j=1..k} j u_j w_{k-j}
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.coeff(j) * w[k - j];
            }
            t[k] = acc / k as f64;
            let mut wk = 0.0;
            for j in 0..=k {
                wk -= t[j] * t[k - j];
            }
            w[k] = wk + if k == 0 { 1.0 } else { 0.0 };
        }
        Jet {
            coeffs: t,
            valid: self.valid,
        }
    }

    pub fn powi(&self, p: usize) -> Jet {
        let mut acc = Jet::constant(1.0, self.order());
        acc.valid = self.valid;
        for _ in 0..p {
            acc = acc.mul_jet(self);
        }
        acc
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let n = self.binary_len(rhs);
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Jet {
            coeffs,
            valid: self.valid.min(rhs.valid),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let n = self.binary_len(rhs);
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        Jet {
            coeffs,
            valid: self.valid.min(rhs.valid),
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.mul_jet(rhs)
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// (l+i)! / i!  computed without overflowing intermediate factorials.
fn binomial_ratio(top: usize, bottom: usize) -> f64 {
    ((bottom + 1)..=top).map(|k| k as f64).product()
}

/// Complex-valued jet stored as a pair of real jets.
#[derive(Debug, Clone)]
pub struct CJet {
    pub re: Jet,
    pub im: Jet,
}

impl CJet {
    pub fn zero(order: usize) -> Self {
        CJet {
            re: Jet::constant(0.0, order),
            im: Jet::constant(0.0, order),
        }
    }

    pub fn from_real(re: Jet) -> Self {
        let order = re.order();
        CJet {
            im: Jet::constant(0.0, order).truncate(order),
            re,
        }
    }

    pub fn valid_order(&self) -> usize {
        self.re.valid_order().min(self.im.valid_order())
    }

    pub fn value(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.value(), self.im.value())
    }

    pub fn coeff(&self, k: usize) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.coeff(k), self.im.coeff(k))
    }

    pub fn add(&self, rhs: &CJet) -> CJet {
        CJet {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    pub fn sub(&self, rhs: &CJet) -> CJet {
        CJet {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    pub fn mul(&self, rhs: &CJet) -> CJet {
        CJet {
            re: &self.re.mul_jet(&rhs.re) - &self.im.mul_jet(&rhs.im),
            im: &self.re.mul_jet(&rhs.im) + &self.im.mul_jet(&rhs.re),
        }
    }

    pub fn mul_real(&self, rhs: &Jet) -> CJet {
        CJet {
            re: self.re.mul_jet(rhs),
            im: self.im.mul_jet(rhs),
        }
    }

    pub fn scale(&self, s: num_complex::Complex64) -> CJet {
        CJet {
            re: &self.re.scale(s.re) - &self.im.scale(s.im),
            im: &self.re.scale(s.im) + &self.im.scale(s.re),
        }
    }

    pub fn derivative(&self) -> CJet {
        CJet {
            re: self.re.derivative(),
            im: self.im.derivative(),
        }
    }
}
