//! Analytical constants and inequalities behind the existence theory.
//!
//! Everything the solver quotes about a run's a-priori envelope comes from
//! here, so there is a single source of truth:
//!
//! - M_s = (2 Σ_{n≥1} n^{-2s})^{1/2} for s > 1/2, returned as a rigorous
//!   bracketing interval;
//! - B_s, the exponent-splitting constant (1 for 0 < s ≤ 1, 2^{s-1} above);
//! - f_{s,λ} and its supremum C_{s,λ} over (0,1], the constant of the triad
//!   inequality; C_s = C_{s,0};
//! - K_s = C·C_s·M_{s-μ-1} and K_{s,λ} = C·C_{s,λ}·M_{s+λ-1};
//! - a direct scan certifying the triad inequality on integer ranges.
//!
//! C_{s,λ} is always located by search; the closed-form branch values
//! (2s+1 for 1 < s ≤ 3, 2^s - 1 for s ≥ 3 at λ = 0) are only asserted by
//! tests, since they rest on numerically observed monotonicity.

use rayon::prelude::*;
use serde::Serialize;

use crate::kernels::{KernelSpec, Regime};
use crate::scalar::{from_int, lit, Scalar};
use crate::{Error, Result};

/// Samples used to bracket the supremum of f_{s,λ} before refinement.
pub const SUP_SEARCH_SAMPLES: usize = 10_000;

/// Index the direct M_s partial sum runs to before switching to the tail
/// estimate.
const MS_DIRECT_TERMS: i64 = 10_000;

/// A closed interval certified to contain the true value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn mid(&self) -> T {
        (self.lo + self.hi) / lit(2.0)
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    pub fn contains(&self, x: T) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// M_s = (2 Σ_{n=1}^∞ n^{-2s})^{1/2}, s > 1/2.
///
/// The series is summed directly to `MS_DIRECT_TERMS` (smallest terms first)
/// and closed with the integral tail bound sharpened by Euler-Maclaurin
/// corrections. The remainder of the truncated expansion is bounded by the
/// first omitted term because x^{-2s} is completely monotone, which keeps
/// the bracket rigorous; its width is far below the 1e-10 contract.
pub fn m_s<T: Scalar>(s: T) -> Result<Interval<T>> {
    let half = lit::<T>(0.5);
    if !(s > half) {
        return Err(Error::DivergentSeries(s.to_f64().unwrap_or(f64::NAN)));
    }
    let p = s + s;
    let mut partial = T::zero();
    for n in (1..MS_DIRECT_TERMS).rev() {
        partial += from_int::<T>(n).powf(-p);
    }
    // Tail Σ_{n=a}^∞ n^{-p} from a = MS_DIRECT_TERMS:
    //   ∫_a^∞ x^{-p} dx + f(a)/2 - f'(a)/12 + f'''(a)/720 ± remainder.
    let a = from_int::<T>(MS_DIRECT_TERMS);
    let one = T::one();
    let two = lit::<T>(2.0);
    let integral = a.powf(one - p) / (p - one);
    let f0 = a.powf(-p);
    let f1 = p * a.powf(-p - one) / lit(12.0);
    let f3 = p * (p + one) * (p + two) * a.powf(-p - lit(3.0)) / lit(720.0);
    let tail = integral + f0 / two + f1 - f3;
    let remainder = p
        * (p + one)
        * (p + two)
        * (p + lit(3.0))
        * (p + lit(4.0))
        * a.powf(-p - lit(5.0))
        / lit(30240.0);
    let lo = two * (partial + tail - remainder);
    let hi = two * (partial + tail + remainder);
    Ok(Interval {
        lo: lo.max(T::zero()).sqrt(),
        hi: hi.sqrt(),
    })
}

/// B_s: |m + n|^s ≤ B_s (|m|^s + |n|^s) with B_s = 1 for 0 < s ≤ 1 and
/// 2^{s-1} for s ≥ 1.
pub fn b_s<T: Scalar>(s: T) -> Result<T> {
    if !(s > T::zero()) {
        return Err(Error::IndexOutOfRange(format!(
            "B_s requires s > 0, got s = {s}"
        )));
    }
    if s <= T::one() {
        Ok(T::one())
    } else {
        Ok(lit::<T>(2.0).powf(s - T::one()))
    }
}

/// f_{s,λ}(x) = ((x+1)^{2s+1} - x^{2s+1} - 1)
///            / ((x+1)^s (x^{s+λ} + x) + (x+1)^{1-λ} x^{s+λ}) on (0,1].
pub fn f_slam<T: Scalar>(s: T, lambda: T, x: T) -> Result<T> {
    check_slam(s, lambda)?;
    if !(x > T::zero() && x <= T::one()) {
        return Err(Error::Domain(format!(
            "f_slam is defined on x in (0,1], got x = {x}"
        )));
    }
    let one = T::one();
    let xp1 = x + one;
    let num = xp1.powf(s + s + one) - x.powf(s + s + one) - one;
    let den = xp1.powf(s) * (x.powf(s + lambda) + x) + xp1.powf(one - lambda) * x.powf(s + lambda);
    Ok(num / den)
}

/// lim_{x→0⁺} f_{s,λ}(x): 0 for s+λ < 1, (2s+1)/3 at s+λ = 1, 2s+1 above.
pub fn f_slam_limit0<T: Scalar>(s: T, lambda: T) -> Result<T> {
    check_slam(s, lambda)?;
    let one = T::one();
    let sum = s + lambda;
    Ok(if sum < one {
        T::zero()
    } else if sum == one {
        (s + s + one) / lit(3.0)
    } else {
        s + s + one
    })
}

fn check_slam<T: Scalar>(s: T, lambda: T) -> Result<()> {
    if !(s > T::zero()) {
        return Err(Error::IndexOutOfRange(format!(
            "triad inequality requires s > 0, got s = {s}"
        )));
    }
    if !(lambda >= T::zero()) {
        return Err(Error::IndexOutOfRange(format!(
            "triad inequality requires lambda >= 0, got lambda = {lambda}"
        )));
    }
    Ok(())
}

/// C_{s,λ} = sup_{(0,1]} f_{s,λ}, located by dense sampling followed by
/// golden-section refinement of the best bracket; the x→0⁺ limit competes
/// as a candidate.
pub fn c_slam<T: Scalar>(s: T, lambda: T) -> Result<T> {
    check_slam(s, lambda)?;
    let n = SUP_SEARCH_SAMPLES;
    let f = |x: T| f_slam(s, lambda, x).expect("sample point inside (0,1]");
    let sample = |i: usize| from_int::<T>(i as i64) / from_int::<T>(n as i64);
    let mut best_i = 1usize;
    let mut best_v = f(sample(1));
    for i in 2..=n {
        let v = f(sample(i));
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    // Refine inside the bracket around the best sample (clamped to (0,1]).
    let lo = if best_i > 1 {
        sample(best_i - 1)
    } else {
        sample(1) / lit(16.0)
    };
    let hi = sample((best_i + 1).min(n));
    let refined = golden_section_max(f, lo, hi);
    Ok(refined.max(best_v).max(f_slam_limit0(s, lambda)?))
}

/// C_s = C_{s,0}.
pub fn c_s<T: Scalar>(s: T) -> Result<T> {
    c_slam(s, T::zero())
}

fn golden_section_max<T: Scalar>(f: impl Fn(T) -> T, mut a: T, mut b: T) -> T {
    let inv_phi = lit::<T>(0.618_033_988_749_894_9);
    // Width target bounded below by the scalar's resolution; the iteration
    // cap keeps the loop finite either way.
    let tol = lit::<T>(1e-13).max(T::epsilon() * (a.abs() + b.abs()));
    let mut x1 = b - (b - a) * inv_phi;
    let mut x2 = a + (b - a) * inv_phi;
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + (b - a) * inv_phi;
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - (b - a) * inv_phi;
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

/// K_s = C C_s M_{s-μ-1} for a nonnegative-degree kernel; requires
/// s > μ + 3/2.
pub fn k_s<T: Scalar>(kernel: &KernelSpec<T>, s: T) -> Result<T> {
    let mu = match kernel.regime() {
        Regime::NonNegativeDegree { mu } => mu,
        Regime::NegativeDegree { .. } => {
            return Err(Error::IndexOutOfRange(format!(
                "kernel `{}` has negative degree; use the K_s_lambda variant",
                kernel.name()
            )))
        }
    };
    let c = kernel
        .bound_constant()
        .ok_or_else(|| Error::UnknownBoundConstant(kernel.name().into()))?;
    let threshold = mu + lit::<T>(1.5);
    if !(s > threshold) {
        return Err(Error::IndexOutOfRange(format!(
            "existence theory requires s > mu + 3/2 = {threshold}, got s = {s}"
        )));
    }
    Ok(c * c_s(s)? * m_s(s - mu - T::one())?.mid())
}

/// K_{s,λ} = C C_{s,λ} M_{s+λ-1} for a negative-degree kernel; requires
/// s > max{3/2 - λ, 1/2}.
pub fn k_slam<T: Scalar>(kernel: &KernelSpec<T>, s: T) -> Result<T> {
    let lambda = match kernel.regime() {
        Regime::NegativeDegree { lambda } => lambda,
        Regime::NonNegativeDegree { .. } => {
            return Err(Error::IndexOutOfRange(format!(
                "kernel `{}` has nonnegative degree; use the K_s variant",
                kernel.name()
            )))
        }
    };
    let c = kernel
        .bound_constant()
        .ok_or_else(|| Error::UnknownBoundConstant(kernel.name().into()))?;
    let threshold = (lit::<T>(1.5) - lambda).max(lit(0.5));
    if !(s > threshold) {
        return Err(Error::IndexOutOfRange(format!(
            "existence theory requires s > max(3/2 - lambda, 1/2) = {threshold}, got s = {s}"
        )));
    }
    Ok(c * c_slam(s, lambda)? * m_s(s + lambda - T::one())?.mid())
}

/// Scan of the triad inequality over integer triples k+m+n = 0 with
/// 0 < |k|,|m|,|n| ≤ r:
///
/// |k|k|^{2s} + m|m|^{2s} + n|n|^{2s}| / min{|k|,|m|,|n|}^λ
///   ≤ C_{s,λ} (|k|^s|m|^s|n|^{1-λ} + |n|^s|k|^s|m|^{1-λ} + |m|^s|n|^s|k|^{1-λ}).
#[derive(Debug, Clone, Serialize)]
pub struct TriadReport {
    pub s: f64,
    pub lambda: f64,
    pub range: i64,
    pub c_slam: f64,
    pub max_ratio: f64,
    pub worst_triple: (i64, i64, i64),
}

pub fn verify_triad_inequality<T: Scalar>(s: T, lambda: T, r: i64) -> Result<TriadReport> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "triad scan needs range >= 2, got {r}"
        )));
    }
    let c = c_slam(s, lambda)?;
    let one = T::one();
    // Per-|k| power tables: signed k|k|^{2s}, |k|^λ, |k|^s, |k|^{1-λ}.
    let tbl = |e: T| -> Vec<T> {
        (0..=r)
            .map(|a| if a == 0 { T::zero() } else { from_int::<T>(a).powf(e) })
            .collect()
    };
    let odd = tbl(s + s + one);
    let pow_lam = tbl(lambda);
    let pow_s = tbl(s);
    let pow_1ml = tbl(one - lambda);
    let signed = |k: i64| -> T {
        let v = odd[k.unsigned_abs() as usize];
        if k < 0 {
            -v
        } else {
            v
        }
    };

    let row = |k: i64| -> Option<(f64, (i64, i64, i64))> {
        if k == 0 {
            return None;
        }
        let mut worst: Option<(f64, (i64, i64, i64))> = None;
        for m in -r..=r {
            let n = -k - m;
            if m == 0 || n == 0 || n.abs() > r {
                continue;
            }
            let (ak, am, an) = (
                k.unsigned_abs() as usize,
                m.unsigned_abs() as usize,
                n.unsigned_abs() as usize,
            );
            let lhs = (signed(k) + signed(m) + signed(n)).abs()
                / pow_lam[ak.min(am).min(an)];
            let rhs = c
                * (pow_s[ak] * pow_s[am] * pow_1ml[an]
                    + pow_s[an] * pow_s[ak] * pow_1ml[am]
                    + pow_s[am] * pow_s[an] * pow_1ml[ak]);
            let ratio = (lhs / rhs).to_f64().unwrap_or(f64::INFINITY);
            let triple = (k, m, n);
            match worst {
                Some(best) if !ratio_better(ratio, triple, best) => {}
                _ => worst = Some((ratio, triple)),
            }
        }
        worst
    };

    let (max_ratio, worst_triple) = (-r..=r)
        .into_par_iter()
        .filter_map(row)
        .reduce_with(|a, b| if ratio_better(b.0, b.1, a) { b } else { a })
        .expect("nonempty scan range");

    Ok(TriadReport {
        s: s.to_f64().unwrap_or(f64::NAN),
        lambda: lambda.to_f64().unwrap_or(f64::NAN),
        range: r,
        c_slam: c.to_f64().unwrap_or(f64::NAN),
        max_ratio,
        worst_triple,
    })
}

fn ratio_better(ratio: f64, triple: (i64, i64, i64), best: (f64, (i64, i64, i64))) -> bool {
    ratio > best.0 || (ratio == best.0 && triple < best.1)
}

/// Constants record emitted by the `constants` CLI command. Fields that are
/// undefined for the requested (s, λ, kernel) combination are null.
#[derive(Debug, Clone, Serialize)]
pub struct TheoryConstants {
    pub s: f64,
    pub lambda: f64,
    pub kernel: Option<String>,
    pub mu: Option<f64>,
    pub c: Option<f64>,
    pub m_s: Option<f64>,
    pub b_s: Option<f64>,
    pub c_s: Option<f64>,
    pub c_s_lambda: Option<f64>,
    pub k_s: Option<f64>,
    pub k_s_lambda: Option<f64>,
    /// t* = 1/K for initial data of unit H^s norm.
    pub t_star_unit_norm: Option<f64>,
}

/// Assemble every constant that is defined for the given s, λ, and optional
/// kernel. When the kernel has negative degree its λ = 3/2 - ν supersedes
/// the requested one.
pub fn constants_for<T: Scalar>(
    kernel: Option<&KernelSpec<T>>,
    s: T,
    lambda: T,
) -> TheoryConstants {
    let lambda = match kernel.map(|k| k.regime()) {
        Some(Regime::NegativeDegree { lambda }) => lambda,
        _ => lambda,
    };
    let to64 = |x: T| x.to_f64().unwrap_or(f64::NAN);
    let k_s_val = kernel.and_then(|k| k_s(k, s).ok());
    let k_slam_val = kernel.and_then(|k| k_slam(k, s).ok());
    TheoryConstants {
        s: to64(s),
        lambda: to64(lambda),
        kernel: kernel.map(|k| k.name().to_string()),
        mu: kernel.map(|k| to64(k.mu())),
        c: kernel.and_then(|k| k.bound_constant()).map(to64),
        m_s: m_s(s).ok().map(|i| to64(i.mid())),
        b_s: b_s(s).ok().map(to64),
        c_s: c_s(s).ok().map(to64),
        c_s_lambda: c_slam(s, lambda).ok().map(to64),
        k_s: k_s_val.map(to64),
        k_s_lambda: k_slam_val.map(to64),
        t_star_unit_norm: k_s_val.or(k_slam_val).map(|k| 1.0 / to64(k)),
    }
}
