//! Spectral fields on the circle of length 2π.
//!
//! A [`SpectralField`] holds the Fourier coefficients û(k) of a real,
//! zero-mean periodic function for 1 ≤ k ≤ N. The coefficients for
//! negative k are implied by the reality condition û(-k) = conj(û(k)),
//! and û(0) = 0 always; neither can be violated by construction.
//! [`GridField`] is the real-space counterpart on a uniform grid.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::{from_int, lit, Scalar};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField<T: Scalar> {
    n: usize,
    /// `coeffs[j]` stores û(j+1).
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> SpectralField<T> {
    /// Zero field with truncation `n`.
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "truncation must be at least 1");
        Self {
            n,
            coeffs: vec![Complex::new(T::zero(), T::zero()); n],
        }
    }

    /// Build from the dense positive-k coefficient list; `coeffs[j]` is û(j+1).
    pub fn from_coeffs(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyTruncation);
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("spectral coefficients"));
        }
        Ok(Self {
            n: coeffs.len(),
            coeffs,
        })
    }

    /// Internal constructor that skips the finiteness check; integration
    /// states are allowed to go non-finite transiently so blow-up detection
    /// can see them.
    pub(crate) fn from_coeffs_unchecked(coeffs: Vec<Complex<T>>) -> Self {
        assert!(!coeffs.is_empty(), "truncation must be at least 1");
        Self {
            n: coeffs.len(),
            coeffs,
        }
    }

    /// Build from a sparse list of (k, û(k)) with k ≥ 1.
    pub fn from_modes(n: usize, modes: &[(i64, Complex<T>)]) -> Result<Self> {
        if n < 1 {
            return Err(Error::EmptyTruncation);
        }
        let mut field = Self::zero(n);
        for &(k, c) in modes {
            if k < 1 || k as usize > n {
                return Err(Error::InvalidMode { k, n });
            }
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite("spectral coefficients"));
            }
            let slot = &mut field.coeffs[(k - 1) as usize];
            if slot.re != T::zero() || slot.im != T::zero() {
                return Err(Error::DuplicateMode(k));
            }
            *slot = c;
        }
        Ok(field)
    }

    /// f(x) = amplitude · sin(wavenumber · x).
    pub fn sine(n: usize, amplitude: T, wavenumber: usize) -> Result<Self> {
        // sin(wx) = (e^{iwx} - e^{-iwx}) / 2i, so û(w) = -i·amplitude/2.
        let half = amplitude / lit::<T>(2.0);
        Self::from_modes(n, &[(wavenumber as i64, Complex::new(T::zero(), -half))])
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    /// û(k) for any integer k: zero at k = 0 and beyond the truncation,
    /// conjugate-reflected for k < 0.
    #[inline]
    pub fn coeff(&self, k: i64) -> Complex<T> {
        let a = k.unsigned_abs() as usize;
        if k == 0 || a > self.n {
            return Complex::new(T::zero(), T::zero());
        }
        let c = self.coeffs[a - 1];
        if k > 0 {
            c
        } else {
            c.conj()
        }
    }

    /// Positive-k coefficients; index j holds û(j+1).
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re == T::zero() && c.im == T::zero())
    }

    pub fn all_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, c| acc.max(c.norm()))
    }

    /// Apply a Fourier multiplier m(k) given on k ≥ 1. Reality is preserved
    /// because the negative side is implicitly multiplied by conj(m(k)),
    /// which is the correct extension for any real-operator symbol.
    pub fn multiplier(&self, m: impl Fn(i64) -> Complex<T>) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c * m(j as i64 + 1))
            .collect();
        Self { n: self.n, coeffs }
    }

    /// Hilbert transform: symbol i·sgn(k).
    pub fn hilbert(&self) -> Self {
        self.multiplier(|_| Complex::new(T::zero(), T::one()))
    }

    /// |∂x|^alpha: symbol |k|^alpha.
    pub fn fractional_power(&self, alpha: T) -> Self {
        self.multiplier(|k| Complex::new(from_int::<T>(k).powf(alpha), T::zero()))
    }

    /// ∂x: symbol ik.
    pub fn derivative(&self) -> Self {
        self.multiplier(|k| Complex::new(T::zero(), from_int(k)))
    }

    /// ∂x^{-1} on zero-mean fields: symbol 1/(ik) = -i/k.
    pub fn antiderivative(&self) -> Self {
        self.multiplier(|k| Complex::new(T::zero(), -T::one() / from_int::<T>(k)))
    }

    /// Galerkin projection P^M: drop modes with |k| > m.
    pub fn project(&self, m: usize) -> Self {
        assert!(m >= 1, "projection order must be at least 1");
        let keep = m.min(self.n);
        Self {
            n: keep,
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    /// Change the truncation: drop modes beyond `n` or pad with zeros.
    pub fn resize(&self, n: usize) -> Self {
        assert!(n >= 1, "truncation must be at least 1");
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, Complex::new(T::zero(), T::zero()));
        Self { n, coeffs }
    }

    /// ‖u‖_s = (Σ_k |k|^{2s} |û(k)|²)^{1/2}, summed over 1 ≤ |k| ≤ N.
    pub fn sobolev_norm(&self, s: T) -> T {
        let two_s = s + s;
        let mut sum = T::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            let k = from_int::<T>(j as i64 + 1);
            sum += k.powf(two_s) * c.norm_sqr();
        }
        (sum + sum).sqrt()
    }

    /// Σ_k |k|^alpha |û(k)| over 1 ≤ |k| ≤ N.
    pub fn weighted_l1_norm(&self, alpha: T) -> T {
        let mut sum = T::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            let k = from_int::<T>(j as i64 + 1);
            sum += k.powf(alpha) * c.norm();
        }
        sum + sum
    }

    /// self + c · other. Truncations must agree.
    pub fn scaled_add(&self, c: T, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "truncation mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b * c)
            .collect();
        Self { n: self.n, coeffs }
    }

    pub fn scale(&self, c: T) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        Self { n: self.n, coeffs }
    }

    /// Evaluate u(x) = Σ_{|k|≤N} û(k) e^{ikx} at a single point.
    pub fn eval(&self, x: T) -> T {
        let rot = Complex::from_polar(T::one(), x);
        let mut phase = rot;
        let mut sum = T::zero();
        for c in &self.coeffs {
            sum += (c * phase).re;
            phase *= rot;
        }
        sum + sum
    }

    /// Sample u on `m` uniform points x_j = 2πj/m. Requires m ≥ 2N+1 so the
    /// grid resolves every retained mode without aliasing.
    pub fn synthesize(&self, m: usize) -> Result<GridField<T>> {
        if m < 2 * self.n + 1 {
            return Err(Error::GridTooSmall { m, n: self.n });
        }
        let two_pi = T::PI() + T::PI();
        let samples = (0..m)
            .map(|j| {
                let x = two_pi * from_int::<T>(j as i64) / from_int::<T>(m as i64);
                self.eval(x)
            })
            .collect();
        Ok(GridField { samples })
    }

    /// Largest |u'(x)| over a grid of `points` samples of the synthesized
    /// derivative.
    pub fn sup_abs_derivative(&self, points: usize) -> T {
        let two_pi = T::PI() + T::PI();
        let du = self.derivative();
        (0..points).fold(T::zero(), |acc, j| {
            let x = two_pi * from_int::<T>(j as i64) / from_int::<T>(points as i64);
            acc.max(du.eval(x).abs())
        })
    }

    pub fn to_dump(&self) -> FieldDump {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.re != T::zero() || c.im != T::zero())
            .map(|(j, c)| CoeffDump {
                k: j as i64 + 1,
                re: c.re.to_f64().unwrap_or(f64::NAN),
                im: c.im.to_f64().unwrap_or(f64::NAN),
            })
            .collect();
        FieldDump {
            n: self.n,
            coeffs,
        }
    }

    pub fn from_dump(dump: &FieldDump) -> Result<Self> {
        let modes: Vec<(i64, Complex<T>)> = dump
            .coeffs
            .iter()
            .map(|c| (c.k, Complex::new(lit(c.re), lit(c.im))))
            .collect();
        Self::from_modes(dump.n, &modes)
    }
}

/// Largest |û(k) - v̂(k)| over the union of the two fields' modes.
pub fn max_coeff_diff<T: Scalar>(u: &SpectralField<T>, v: &SpectralField<T>) -> T {
    let n = u.n.max(v.n);
    (1..=n as i64).fold(T::zero(), |acc, k| acc.max((u.coeff(k) - v.coeff(k)).norm()))
}

/// JSON field dump: `{ "N": int, "coeffs": [ { "k", "re", "im" }, ... ] }`
/// with negative-k coefficients implied by reality.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldDump {
    #[serde(rename = "N")]
    pub n: usize,
    pub coeffs: Vec<CoeffDump>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffDump {
    pub k: i64,
    pub re: f64,
    pub im: f64,
}

/// Real samples on the uniform grid x_j = 2πj/M, j = 0..M.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField<T: Scalar> {
    samples: Vec<T>,
}

impl<T: Scalar> GridField<T> {
    pub fn from_samples(samples: Vec<T>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Config("grid needs at least 2 samples".into()));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::NonFinite("grid samples"));
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn point(&self, j: usize) -> T {
        let two_pi = T::PI() + T::PI();
        two_pi * from_int::<T>(j as i64) / from_int::<T>(self.samples.len() as i64)
    }

    pub fn mean(&self) -> T {
        let sum = self.samples.iter().fold(T::zero(), |a, &s| a + s);
        sum / from_int(self.samples.len() as i64)
    }

    pub fn sup_abs(&self) -> T {
        self.samples.iter().fold(T::zero(), |a, &s| a.max(s.abs()))
    }

    /// (1/2π) ∫ u² dx by the trapezoid rule, exact for trig polynomials the
    /// grid resolves.
    pub fn mean_square(&self) -> T {
        let sum = self.samples.iter().fold(T::zero(), |a, &s| a + s * s);
        sum / from_int(self.samples.len() as i64)
    }

    /// Discrete Fourier analysis û(k) = (1/M) Σ_j u_j e^{-ikx_j} for
    /// 1 ≤ k ≤ n. The mean mode û(0) is discarded. The +k and -k quadratures
    /// are computed independently, symmetrized by averaging, and rejected if
    /// the asymmetry exceeds 1e-8 relative to the sample scale.
    pub fn analyze(&self, n: usize) -> Result<SpectralField<T>> {
        if n < 1 {
            return Err(Error::EmptyTruncation);
        }
        let m = self.samples.len();
        if m < 2 * n + 1 {
            return Err(Error::GridTooSmall { m, n });
        }
        if self.samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::NonFinite("grid samples"));
        }
        let scale = self.sup_abs().max(T::min_positive_value());
        let tol = lit::<T>(1e-8);
        let two_pi = T::PI() + T::PI();
        let inv_m = T::one() / from_int::<T>(m as i64);
        let mut coeffs = Vec::with_capacity(n);
        for k in 1..=n as i64 {
            let theta = two_pi * from_int::<T>(k) * inv_m;
            let rot_minus = Complex::from_polar(T::one(), -theta);
            let rot_plus = Complex::from_polar(T::one(), theta);
            let mut phase_minus = Complex::new(T::one(), T::zero());
            let mut phase_plus = Complex::new(T::one(), T::zero());
            let mut plus = Complex::new(T::zero(), T::zero());
            let mut minus = Complex::new(T::zero(), T::zero());
            for &g in &self.samples {
                plus += phase_minus * g;
                minus += phase_plus * g;
                phase_minus *= rot_minus;
                phase_plus *= rot_plus;
            }
            plus *= inv_m;
            minus *= inv_m;
            let asym = (plus - minus.conj()).norm() / scale;
            if asym > tol {
                return Err(Error::RealityAsymmetry {
                    k,
                    rel: asym.to_f64().unwrap_or(f64::NAN),
                });
            }
            coeffs.push((plus + minus.conj()) * lit::<T>(0.5));
        }
        Ok(SpectralField { n, coeffs })
    }
}
