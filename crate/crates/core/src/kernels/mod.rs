//! Triad interaction kernels T(k,m,n) and their structural certification.
//!
//! A kernel drives the quadratic nonlinearity through resonant triples
//! k+m+n = 0. Valid kernels vanish when any argument is zero and satisfy
//! reality, exchange and cyclic symmetry, and homogeneity of degree ν; the
//! certifiers check those conditions and the analytic bound
//!
//! |T(k,m,n)| ≤ C |kmn|^{1/2} min{|k|,|m|,|n|}^{ν-3/2}     (ν ≥ 3/2)
//! |T(k,m,n)| ≤ C |kmn|^{1/2} / min{|k|,|m|,|n|}^{3/2-ν}   (ν < 3/2)
//!
//! on integer ranges. The noncanonical kernel is S = T / |kmn|^{1/2}.

mod expr;

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

pub use expr::Expr;

use crate::scalar::{from_int, lit, Scalar};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub enum KernelForm<T: Scalar> {
    /// T = |kmn|^{1/2}; the inviscid Burgers equation.
    Burgers,
    /// T = (1/2)|kmn|^{1/2} (1/(ik) + 1/(im) + 1/(in)).
    HunterSaxton,
    /// T = 2|kmn| / (|k| + |m| + |n|); model surface-wave kernel.
    Surface,
    /// Isotropic elastic Rayleigh-wave kernel; 0 < r < 1 is the ratio of
    /// transverse to longitudinal wave speed, α, β, γ the elastic constants.
    Rayleigh { r: T, alpha: T, beta: T, gamma: T },
    /// T = i |kmn|^{1/2} kmn; high-frequency compacton limit.
    Compacton,
    /// T = |kmn|^{1/2} (ikmn)^p; reduces to Burgers at p = 0.
    Power { p: u32 },
    /// User expression in k, m, n, i; see [`Expr`].
    Custom { expr: Arc<Expr> },
}

/// A triad kernel together with its homogeneity degree ν and, when known,
/// the constant C of the analytic bound.
#[derive(Debug, Clone)]
pub struct KernelSpec<T: Scalar> {
    name: String,
    form: KernelForm<T>,
    degree: T,
    bound_constant: Option<T>,
}

/// Bound regime selected by the sign of μ = ν - 3/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime<T> {
    /// μ = ν - 3/2 ≥ 0.
    NonNegativeDegree { mu: T },
    /// λ = 3/2 - ν > 0.
    NegativeDegree { lambda: T },
}

impl<T: Scalar> KernelSpec<T> {
    pub fn burgers() -> Self {
        Self {
            name: "burgers".into(),
            form: KernelForm::Burgers,
            degree: lit(1.5),
            bound_constant: Some(T::one()),
        }
    }

    pub fn hunter_saxton() -> Self {
        Self {
            name: "hunter_saxton".into(),
            form: KernelForm::HunterSaxton,
            degree: lit(0.5),
            bound_constant: Some(lit(1.5)),
        }
    }

    pub fn surface() -> Self {
        Self {
            name: "surface".into(),
            form: KernelForm::Surface,
            degree: lit(2.0),
            bound_constant: Some(T::one()),
        }
    }

    /// Requires 0 < r < 1. C = (1/2)(3|α|/r + 3|β|/r + |γ|).
    pub fn rayleigh(r: T, alpha: T, beta: T, gamma: T) -> Result<Self> {
        if !(r > T::zero() && r < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "rayleigh kernel requires 0 < r < 1 (transverse/longitudinal speed ratio), got r = {r}"
            )));
        }
        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "rayleigh parameter {name} must be finite"
                )));
            }
        }
        let three = lit::<T>(3.0);
        let c = (three * alpha.abs() / r + three * beta.abs() / r + gamma.abs()) / lit(2.0);
        Ok(Self {
            name: "rayleigh".into(),
            form: KernelForm::Rayleigh {
                r,
                alpha,
                beta,
                gamma,
            },
            degree: lit(2.0),
            bound_constant: Some(c),
        })
    }

    pub fn compacton() -> Self {
        Self {
            name: "compacton".into(),
            form: KernelForm::Compacton,
            degree: lit(4.5),
            bound_constant: None,
        }
    }

    pub fn power(p: u32) -> Self {
        Self {
            name: format!("power_{p}"),
            form: KernelForm::Power { p },
            degree: lit(3.0 * p as f64 + 1.5),
            bound_constant: if p == 0 { Some(T::one()) } else { None },
        }
    }

    /// Parse a custom kernel from its expression source. The homogeneity
    /// degree must be supplied; the bound constant may be.
    pub fn custom(
        name: impl Into<String>,
        source: &str,
        degree: T,
        bound_constant: Option<T>,
    ) -> Result<Self> {
        if !degree.is_finite() {
            return Err(Error::InvalidParameter("kernel degree must be finite".into()));
        }
        let expr = Arc::new(Expr::parse(source)?);
        Ok(Self {
            name: name.into(),
            form: KernelForm::Custom { expr },
            degree,
            bound_constant,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn form(&self) -> &KernelForm<T> {
        &self.form
    }

    /// Homogeneity degree ν.
    pub fn degree(&self) -> T {
        self.degree
    }

    /// μ = ν - 3/2 (may be negative).
    pub fn mu(&self) -> T {
        self.degree - lit(1.5)
    }

    pub fn regime(&self) -> Regime<T> {
        let mu = self.mu();
        if mu >= T::zero() {
            Regime::NonNegativeDegree { mu }
        } else {
            Regime::NegativeDegree { lambda: -mu }
        }
    }

    pub fn bound_constant(&self) -> Option<T> {
        self.bound_constant
    }

    /// T(k,m,n); zero whenever kmn = 0.
    pub fn eval_t(&self, k: i64, m: i64, n: i64) -> Complex<T> {
        let zero = Complex::new(T::zero(), T::zero());
        if k == 0 || m == 0 || n == 0 {
            return zero;
        }
        let kmn = k * m * n;
        let abs_kmn = from_int::<T>(kmn.abs());
        let root = abs_kmn.sqrt();
        match &self.form {
            KernelForm::Burgers => Complex::new(root, T::zero()),
            KernelForm::HunterSaxton => {
                // 1/(ik) + 1/(im) + 1/(in) = -i (1/k + 1/m + 1/n)
                let recip = T::one() / from_int::<T>(k)
                    + T::one() / from_int::<T>(m)
                    + T::one() / from_int::<T>(n);
                Complex::new(T::zero(), -root * recip / lit(2.0))
            }
            KernelForm::Surface => {
                let denom = from_int::<T>(k.abs() + m.abs() + n.abs());
                Complex::new((abs_kmn + abs_kmn) / denom, T::zero())
            }
            KernelForm::Rayleigh {
                r,
                alpha,
                beta,
                gamma,
            } => {
                let (ak, am, an) = (
                    from_int::<T>(k.abs()),
                    from_int::<T>(m.abs()),
                    from_int::<T>(n.abs()),
                );
                let r = *r;
                // α terms: r on two of the three slots; β terms: r on one.
                let alpha_sum = T::one() / (ak + r * (am + an))
                    + T::one() / (am + r * (ak + an))
                    + T::one() / (an + r * (ak + am));
                let beta_sum = T::one() / (r * ak + am + an)
                    + T::one() / (ak + r * am + an)
                    + T::one() / (ak + am + r * an);
                let gamma_term = *gamma / (ak + am + an);
                Complex::new(
                    abs_kmn * (*alpha * alpha_sum + *beta * beta_sum + gamma_term),
                    T::zero(),
                )
            }
            KernelForm::Compacton => Complex::new(T::zero(), root * from_int::<T>(kmn)),
            KernelForm::Power { p } => {
                // (i·kmn)^p = i^p (kmn)^p with i^p cycling 1, i, -1, -i.
                let magnitude = root * from_int::<T>(kmn).powi(*p as i32);
                match p % 4 {
                    0 => Complex::new(magnitude, T::zero()),
                    1 => Complex::new(T::zero(), magnitude),
                    2 => Complex::new(-magnitude, T::zero()),
                    _ => Complex::new(T::zero(), -magnitude),
                }
            }
            KernelForm::Custom { expr } => expr.eval(k, m, n),
        }
    }

    /// S(k,m,n) = T(k,m,n) / |kmn|^{1/2}; zero whenever kmn = 0.
    pub fn eval_s(&self, k: i64, m: i64, n: i64) -> Complex<T> {
        if k == 0 || m == 0 || n == 0 {
            return Complex::new(T::zero(), T::zero());
        }
        let root = from_int::<T>((k * m * n).abs()).sqrt();
        let t = self.eval_t(k, m, n);
        Complex::new(t.re / root, t.im / root)
    }

    /// Verify the kernel conditions over all triples k+m+n = 0 with
    /// |k|,|m|,|n| ≤ r: the zero rule, reality, exchange and cyclic symmetry,
    /// and integer homogeneity with factors 2 and 3. Reports the first
    /// violation in scan order.
    pub fn check_symmetries(&self, r: i64) -> SymmetryReport {
        assert!(r >= 2, "symmetry check needs range >= 2");
        let tol = lit::<T>(1e-12);
        let mut checked = 0usize;
        for k in -r..=r {
            for m in -r..=r {
                let n = -k - m;
                if n.abs() > r {
                    continue;
                }
                checked += 1;
                if k == 0 || m == 0 || n == 0 {
                    let t = self.eval_t(k, m, n);
                    if t.norm() != T::zero() {
                        return SymmetryReport::violation(
                            r,
                            checked,
                            Condition::ZeroRule,
                            (k, m, n),
                            t.norm(),
                        );
                    }
                    continue;
                }
                let t = self.eval_t(k, m, n);
                let scale = t.norm().max(T::min_positive_value());
                let checks = [
                    (Condition::Reality, self.eval_t(-k, -m, -n).conj()),
                    (Condition::Exchange, self.eval_t(k, n, m)),
                    (Condition::Cyclic, self.eval_t(m, n, k)),
                ];
                for (cond, other) in checks {
                    let rel = (t - other).norm() / scale.max(other.norm());
                    if rel > tol {
                        return SymmetryReport::violation(r, checked, cond, (k, m, n), rel);
                    }
                }
                for eta in [2i64, 3i64] {
                    let scaled = self.eval_t(eta * k, eta * m, eta * n);
                    let factor = from_int::<T>(eta).powf(self.degree);
                    let rel = (scaled - t * factor).norm() / (scale * factor.abs());
                    if rel > tol {
                        return SymmetryReport::violation(
                            r,
                            checked,
                            Condition::Homogeneity { eta },
                            (k, m, n),
                            rel,
                        );
                    }
                }
            }
        }
        SymmetryReport {
            passed: true,
            range: r,
            checked_triples: checked,
            violation: None,
        }
    }

    /// Worst ratio of |T| against the bound expression with C = 1 over
    /// resonant triples (or the full lattice cube when `full_lattice`).
    /// `satisfied` compares against the kernel's C when one is known.
    pub fn check_bound(&self, r: i64, full_lattice: bool) -> BoundReport {
        assert!(r >= 2, "bound check needs range >= 2");
        // min(|k|,|m|,|n|)^{±μ} lookup, indexed by the min.
        let exponent = match self.regime() {
            Regime::NonNegativeDegree { mu } => mu,
            Regime::NegativeDegree { lambda } => -lambda,
        };
        let pow_min: Vec<T> = (0..=r)
            .map(|a| {
                if a == 0 {
                    T::zero()
                } else {
                    from_int::<T>(a).powf(exponent)
                }
            })
            .collect();

        let consider = |k: i64, m: i64, n: i64, worst: &mut Option<(f64, (i64, i64, i64))>| {
            if k == 0 || m == 0 || n == 0 || n.abs() > r {
                return;
            }
            let root = from_int::<T>((k * m * n).abs()).sqrt();
            let min_abs = k.abs().min(m.abs()).min(n.abs());
            let denom = root * pow_min[min_abs as usize];
            let ratio = (self.eval_t(k, m, n).norm() / denom)
                .to_f64()
                .unwrap_or(f64::INFINITY);
            let triple = (k, m, n);
            match worst {
                Some(best) if !better(ratio, triple, *best) => {}
                _ => *worst = Some((ratio, triple)),
            }
        };
        let row = |k: i64| -> Option<(f64, (i64, i64, i64))> {
            let mut worst = None;
            for m in -r..=r {
                if full_lattice {
                    for n in -r..=r {
                        consider(k, m, n, &mut worst);
                    }
                } else {
                    consider(k, m, -k - m, &mut worst);
                }
            }
            worst
        };

        let worst = (-r..=r)
            .into_par_iter()
            .filter_map(row)
            .reduce_with(|a, b| if better(b.0, b.1, a) { b } else { a })
            .expect("nonempty scan range");

        let bound_constant = self.bound_constant.map(|c| c.to_f64().unwrap_or(f64::NAN));
        BoundReport {
            kernel: self.name.clone(),
            range: r,
            full_lattice,
            regime: match self.regime() {
                Regime::NonNegativeDegree { .. } => "nonnegative-degree".into(),
                Regime::NegativeDegree { .. } => "negative-degree".into(),
            },
            worst_ratio: worst.0,
            worst_triple: worst.1,
            bound_constant,
            satisfied: bound_constant.map(|c| worst.0 <= c * (1.0 + 1e-12)),
        }
    }
}

/// Deterministic "is (ratio, triple) better than best": larger ratio wins,
/// lexicographically smaller triple breaks ties.
fn better(ratio: f64, triple: (i64, i64, i64), best: (f64, (i64, i64, i64))) -> bool {
    ratio > best.0 || (ratio == best.0 && triple < best.1)
}

/// ν = (n - d + 3)/2 from the spatial dimension n of the mass parameter and
/// the wavenumber-space dimension d.
pub fn degree_from_dimensions<T: Scalar>(n: i64, d: i64) -> T {
    from_int::<T>(n - d + 3) / lit(2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    ZeroRule,
    Reality,
    Exchange,
    Cyclic,
    Homogeneity { eta: i64 },
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Condition::ZeroRule => write!(f, "zero rule T = 0 on kmn = 0"),
            Condition::Reality => write!(f, "reality T(k,m,n) = conj T(-k,-m,-n)"),
            Condition::Exchange => write!(f, "exchange symmetry in the last two arguments"),
            Condition::Cyclic => write!(f, "cyclic symmetry"),
            Condition::Homogeneity { eta } => write!(f, "homogeneity with factor {eta}"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryViolation {
    pub condition: Condition,
    pub triple: (i64, i64, i64),
    pub relative_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryReport {
    pub passed: bool,
    pub range: i64,
    pub checked_triples: usize,
    pub violation: Option<SymmetryViolation>,
}

impl SymmetryReport {
    fn violation<T: Scalar>(
        range: i64,
        checked: usize,
        condition: Condition,
        triple: (i64, i64, i64),
        rel: T,
    ) -> Self {
        SymmetryReport {
            passed: false,
            range,
            checked_triples: checked,
            violation: Some(SymmetryViolation {
                condition,
                triple,
                relative_error: rel.to_f64().unwrap_or(f64::NAN),
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub kernel: String,
    pub range: i64,
    pub full_lattice: bool,
    pub regime: String,
    /// sup |T| / (bound expression with C = 1) over the scanned triples;
    /// for kernels without a known C this is the empirical estimate of C.
    pub worst_ratio: f64,
    pub worst_triple: (i64, i64, i64),
    pub bound_constant: Option<f64>,
    /// None when no C is known to compare against.
    pub satisfied: Option<bool>,
}
