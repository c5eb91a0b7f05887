//! Exact y-spectral representation of two-scale quantities.
//!
//! Objects of the form `A(X, y) = Σ_m  c_m(X) e^{2πimy}` are stored as a map
//! from the harmonic index `m` to a symbolic coefficient function of the
//! slow variable. Each coefficient is a finite sum of terms
//! `scalar · Π_j  a_{i_j}^{(l_j)}(X)` over the envelope table, so sums,
//! products, X- and y-derivatives, y-means and the periodic Poisson solve
//! stay closed-form. Evaluation (values or Taylor jets in X) goes through
//! [`EnvCache`], which computes each envelope jet once per evaluation point.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::envelope::EnvelopeProfile;
use crate::jet::{CJet, Jet};

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Shared envelope table; coefficient terms reference entries by index.
pub type Basis = Arc<Vec<EnvelopeProfile>>;

/// One product term `scalar · Π a_i^{(l)}(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefTerm {
    pub scalar: Complex64,
    /// Sorted `(envelope index, derivative order)` factors; repeats allowed.
    pub factors: Vec<(usize, usize)>,
}

/// Symbolic coefficient function of the slow variable.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Coef {
    terms: Vec<CoefTerm>,
}

impl Coef {
    pub fn zero() -> Self {
        Coef { terms: Vec::new() }
    }

    pub fn envelope(index: usize, scalar: Complex64) -> Self {
        Coef {
            terms: vec![CoefTerm {
                scalar,
                factors: vec![(index, 0)],
            }],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[CoefTerm] {
        &self.terms
    }

    fn canonicalize(mut terms: Vec<CoefTerm>) -> Coef {
        for t in &mut terms {
            t.factors.sort_unstable();
        }
        terms.sort_by(|a, b| a.factors.cmp(&b.factors));
        let mut out: Vec<CoefTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.factors == t.factors => last.scalar += t.scalar,
                _ => out.push(t),
            }
        }
        out.retain(|t| t.scalar.norm_sqr() != 0.0);
        Coef { terms: out }
    }

    pub fn add(&self, rhs: &Coef) -> Coef {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        Coef::canonicalize(terms)
    }

    pub fn scale(&self, s: Complex64) -> Coef {
        Coef::canonicalize(
            self.terms
                .iter()
                .map(|t| CoefTerm {
                    scalar: t.scalar * s,
                    factors: t.factors.clone(),
                })
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &Coef) -> Coef {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                let mut factors = a.factors.clone();
                factors.extend_from_slice(&b.factors);
                terms.push(CoefTerm {
                    scalar: a.scalar * b.scalar,
                    factors,
                });
            }
        }
        Coef::canonicalize(terms)
    }

    /// Symbolic X-derivative (Leibniz over the factors of each term).
    pub fn dx(&self) -> Coef {
        let mut terms = Vec::new();
        for t in &self.terms {
            for i in 0..t.factors.len() {
                let mut factors = t.factors.clone();
                factors[i].1 += 1;
                terms.push(CoefTerm {
                    scalar: t.scalar,
                    factors,
                });
            }
        }
        Coef::canonicalize(terms)
    }

    pub fn dx_n(&self, n: usize) -> Coef {
        let mut c = self.clone();
        for _ in 0..n {
            c = c.dx();
        }
        c
    }

    /// Highest envelope derivative order appearing in any factor.
    pub fn max_env_order(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|t| t.factors.iter().map(|&(_, l)| l))
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, cache: &EnvCache) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let mut p = 1.0;
            for &(idx, l) in &t.factors {
                p *= cache.derivative(idx, l);
            }
            acc += t.scalar * p;
        }
        acc
    }

    /// Taylor jet (order `r`) of the coefficient at the cache's base point.
    pub fn eval_jet(&self, cache: &EnvCache, r: usize) -> CJet {
        let mut acc = CJet::zero(r);
        for t in &self.terms {
            let mut p = Jet::constant(1.0, r);
            for &(idx, l) in &t.factors {
                p = p.mul_jet(&cache.derivative_jet(idx, l, r));
            }
            acc = acc.add(&CJet::from_real(p).scale(t.scalar));
        }
        acc
    }
}

/// Per-point evaluation cache: one jet per envelope, at a fixed order.
pub struct EnvCache<'a> {
    jets: Vec<Jet>,
    _basis: &'a [EnvelopeProfile],
}

impl<'a> EnvCache<'a> {
    pub fn new(basis: &'a [EnvelopeProfile], x: f64, order: usize) -> Self {
        EnvCache {
            jets: basis.iter().map(|e| e.jet(x, order)).collect(),
            _basis: basis,
        }
    }

    pub fn derivative(&self, idx: usize, l: usize) -> f64 {
        self.jets[idx].derivative_value(l)
    }

    pub fn derivative_jet(&self, idx: usize, l: usize, r: usize) -> Jet {
        self.jets[idx].shift_down(l, r)
    }
}

/// Finite harmonic sum `Σ_m c_m(X) e^{2πimy}` with symbolic coefficients.
#[derive(Debug, Clone)]
pub struct HarmonicSeries {
    basis: Basis,
    coefs: BTreeMap<i32, Coef>,
}

impl HarmonicSeries {
    pub fn new(basis: Basis) -> Self {
        HarmonicSeries {
            basis,
            coefs: BTreeMap::new(),
        }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn envelopes(&self) -> &[EnvelopeProfile] {
        &self.basis
    }

    pub fn set(&mut self, m: i32, coef: Coef) {
        if coef.is_zero() {
            self.coefs.remove(&m);
        } else {
            self.coefs.insert(m, coef);
        }
    }

    pub fn accumulate(&mut self, m: i32, coef: &Coef) {
        let cur = self.coefs.remove(&m).unwrap_or_else(Coef::zero);
        self.set(m, cur.add(coef));
    }

    pub fn coef(&self, m: i32) -> Coef {
        self.coefs.get(&m).cloned().unwrap_or_else(Coef::zero)
    }

    pub fn harmonics(&self) -> impl Iterator<Item = (i32, &Coef)> {
        self.coefs.iter().map(|(&m, c)| (m, c))
    }

    pub fn max_abs_harmonic(&self) -> i32 {
        self.coefs.keys().map(|m| m.abs()).max().unwrap_or(0)
    }

    pub fn max_env_order(&self) -> usize {
        self.coefs
            .values()
            .map(|c| c.max_env_order())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, rhs: &HarmonicSeries) -> HarmonicSeries {
        let mut out = self.clone();
        for (m, c) in rhs.harmonics() {
            out.accumulate(m, c);
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> HarmonicSeries {
        let mut out = HarmonicSeries::new(self.basis.clone());
        for (m, c) in self.harmonics() {
            out.set(m, c.scale(s));
        }
        out
    }

    pub fn scale_real(&self, s: f64) -> HarmonicSeries {
        self.scale(Complex64::new(s, 0.0))
    }

    /// y-derivative: coefficient `m` picks up `2πim`.
    pub fn dy(&self) -> HarmonicSeries {
        let mut out = HarmonicSeries::new(self.basis.clone());
        for (m, c) in self.harmonics() {
            out.set(m, c.scale(Complex64::new(0.0, TWO_PI * m as f64)));
        }
        out
    }

    /// X-derivative of every coefficient.
    pub fn dx(&self) -> HarmonicSeries {
        let mut out = HarmonicSeries::new(self.basis.clone());
        for (m, c) in self.harmonics() {
            out.set(m, c.dx());
        }
        out
    }

    /// Pointwise product (convolution over harmonics).
    pub fn mul(&self, rhs: &HarmonicSeries) -> HarmonicSeries {
        assert!(Arc::ptr_eq(&self.basis, &rhs.basis), "mismatched envelope bases");
        let mut out = HarmonicSeries::new(self.basis.clone());
        for (m1, c1) in self.harmonics() {
            for (m2, c2) in rhs.harmonics() {
                out.accumulate(m1 + m2, &c1.mul(c2));
            }
        }
        out
    }

    /// y-mean, i.e. the coefficient at `m = 0`.
    pub fn mean(&self) -> Coef {
        self.coef(0)
    }

    /// Drops the `m = 0` coefficient.
    pub fn without_mean(&self) -> HarmonicSeries {
        let mut out = self.clone();
        out.coefs.remove(&0);
        out
    }

    /// Unique zero-mean solution `Φ` of `∂_y² Φ = self`.
    ///
    /// Requires the right-hand side to carry no mean (the Fredholm
    /// condition); coefficient-wise this divides by `-(2πm)²`.
    pub fn solve_dyy(&self) -> HarmonicSeries {
        assert!(
            self.coef(0).is_zero(),
            "Poisson right-hand side must be zero-mean in y"
        );
        let mut out = HarmonicSeries::new(self.basis.clone());
        for (m, c) in self.harmonics() {
            let k = TWO_PI * m as f64;
            out.set(m, c.scale(Complex64::new(-1.0 / (k * k), 0.0)));
        }
        out
    }

    /// Complex value `Σ_m c_m(X) e^{2πimy}`.
    pub fn eval_complex(&self, x: f64, y: f64) -> Complex64 {
        let cache = EnvCache::new(&self.basis, x, self.max_env_order());
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in self.harmonics() {
            let phase = Complex64::from_polar(1.0, TWO_PI * m as f64 * y);
            acc += c.eval(&cache) * phase;
        }
        acc
    }

    /// Real value; debug-asserts that the imaginary part is negligible.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let v = self.eval_complex(x, y);
        debug_assert!(
            v.im.abs() <= 1e-10 * (1.0 + v.re.abs()),
            "harmonic series expected to be real, got imaginary part {}",
            v.im
        );
        v.re
    }

    /// Values of every harmonic coefficient at `x` as jets of order `r`.
    pub fn coef_jets(&self, x: f64, r: usize) -> BTreeMap<i32, CJet> {
        let cache = EnvCache::new(&self.basis, x, self.max_env_order() + r);
        self.harmonics()
            .map(|(m, c)| (m, c.eval_jet(&cache, r)))
            .collect()
    }
}
