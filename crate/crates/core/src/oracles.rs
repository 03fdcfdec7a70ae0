//! Independent reference solutions used to cross-validate the main code
//! paths. Each oracle deliberately avoids the machinery it checks:
//! characteristics instead of time stepping, grid products instead of
//! coefficient-space triad sums, the canonical T-sum instead of the
//! noncanonical S-sum.

use num_complex::Complex;

use crate::evolution::rk4_step;
use crate::field::SpectralField;
use crate::kernels::KernelSpec;
use crate::scalar::{from_int, lit, Scalar};
use crate::{Error, Result};

/// Grid used to sample profile extrema and derivatives.
const PROFILE_GRID: usize = 8192;

/// Breaking time 1/(2 max(-f')) of u_t + (u²)_x = 0 for initial profile f,
/// from the sampled derivative on a fine grid. `None` means no forward
/// breaking (zero data).
pub fn breaking_time<T: Scalar>(f: &SpectralField<T>) -> Option<T> {
    let points = PROFILE_GRID.max(16 * f.truncation());
    let df = f.derivative();
    let two_pi = T::PI() + T::PI();
    let mut steepest = T::zero();
    for j in 0..points {
        let x = two_pi * from_int::<T>(j as i64) / from_int::<T>(points as i64);
        steepest = steepest.max(-df.eval(x));
    }
    if steepest > T::zero() {
        Some(T::one() / (steepest + steepest))
    } else {
        None
    }
}

/// Pre-shock solution of u_t + (u²)_x = 0 with u(x,0) = f(x), evaluated by
/// solving the characteristic equation u = f(x - 2ut) with a bisection
/// bracket [min f, max f] and a Newton polish. Requires 0 ≤ t below the
/// breaking time.
pub fn burgers_exact<T: Scalar>(f: &SpectralField<T>, x: T, t: T) -> Result<T> {
    if !(t >= T::zero()) {
        return Err(Error::Domain(format!(
            "characteristics oracle runs forward in time, got t = {t}"
        )));
    }
    if let Some(tb) = breaking_time(f) {
        if t >= tb {
            return Err(Error::Domain(format!(
                "t = {t} at or past the breaking time {tb}"
            )));
        }
    }
    let two = lit::<T>(2.0);
    // Bracket by the maximum principle: u stays within the range of f.
    let two_pi = T::PI() + T::PI();
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for j in 0..PROFILE_GRID {
        let xj = two_pi * from_int::<T>(j as i64) / from_int::<T>(PROFILE_GRID as i64);
        let v = f.eval(xj);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let margin = lit::<T>(1e-9) * (hi - lo).max(T::one());
    lo -= margin;
    hi += margin;
    let residual = |u: T| u - f.eval(x - two * u * t);
    let mut a = lo;
    let mut b = hi;
    // g is increasing in u before breaking (g'(u) = 1 + 2t f' > 0).
    for _ in 0..200 {
        let mid = (a + b) / two;
        if mid <= a || mid >= b {
            break;
        }
        if residual(mid) > T::zero() {
            b = mid;
        } else {
            a = mid;
        }
    }
    let mut u = (a + b) / two;
    let df = f.derivative();
    for _ in 0..4 {
        let g = residual(u);
        let dg = T::one() + two * t * df.eval(x - two * u * t);
        if dg.abs() > T::zero() {
            u -= g / dg;
        }
    }
    if residual(u).abs() > lit::<T>(1e-13) * T::one().max(u.abs()) {
        return Err(Error::Domain(
            "characteristics root finder did not converge".into(),
        ));
    }
    Ok(u)
}

/// Right-hand side of u_t + (u ∂x^{-1}u)_x - (1/2)(u² - ⟨u²⟩) = 0 built from
/// grid products and the antiderivative multiplier; shares nothing with the
/// coefficient-space triad sum. The 4N grid analyzes both quadratic products
/// exactly on the retained modes.
fn hunter_saxton_rhs<T: Scalar>(u: &SpectralField<T>) -> SpectralField<T> {
    let n = u.truncation();
    let m = 4 * n;
    let gu = u.synthesize(m).expect("grid large enough");
    let gv = u
        .antiderivative()
        .synthesize(m)
        .expect("grid large enough");
    let uv: Vec<T> = gu
        .samples()
        .iter()
        .zip(gv.samples())
        .map(|(&a, &b)| a * b)
        .collect();
    let uu: Vec<T> = gu.samples().iter().map(|&a| a * a).collect();
    let uv_hat = crate::field::GridField::from_samples(uv)
        .expect("finite grid data")
        .analyze(n)
        .expect("grid large enough");
    let uu_hat = crate::field::GridField::from_samples(uu)
        .expect("finite grid data")
        .analyze(n)
        .expect("grid large enough");
    uv_hat
        .derivative()
        .scale(-T::one())
        .scaled_add(lit(0.5), &uu_hat)
}

/// Independent pseudospectral integrator of the derivative Hunter-Saxton
/// equation, for cross-validation against the kernel machinery run with the
/// Hunter-Saxton kernel. Marches round(t_end/dt) fixed RK4 steps.
pub fn hunter_saxton_direct<T: Scalar>(
    f: &SpectralField<T>,
    dt: T,
    t_end: T,
) -> Result<SpectralField<T>> {
    if !(dt > T::zero()) || !(t_end >= T::zero()) {
        return Err(Error::Config("need dt > 0 and t_end >= 0".into()));
    }
    let steps = num_traits::ToPrimitive::to_usize(&(t_end / dt).round())
        .ok_or_else(|| Error::Config("t_end/dt out of range".into()))?;
    let mut state = f.clone();
    for _ in 0..steps {
        state = rk4_step(&state, dt, hunter_saxton_rhs);
        if !state.all_finite() {
            return Err(Error::NonFinite("hunter-saxton oracle state"));
        }
    }
    Ok(state)
}

/// Galerkin right-hand side evaluated the naive way: the canonical-variable
/// sum φ̂_t(k) = -i sgn(k) Σ_n T(-k,k-n,n) φ̂(k-n) φ̂(n) converted back to u.
/// Must agree with the production path to round-off.
pub fn brute_force_rhs<T: Scalar>(
    kernel: &KernelSpec<T>,
    u: &SpectralField<T>,
) -> SpectralField<T> {
    let n_max = u.truncation() as i64;
    let half = lit::<T>(0.5);
    let phi = u.fractional_power(-half);
    let mut coeffs = Vec::with_capacity(n_max as usize);
    for k in 1..=n_max {
        let mut sum = Complex::new(T::zero(), T::zero());
        for n in -n_max..=n_max {
            if n == 0 || n == k || (k - n).abs() > n_max {
                continue;
            }
            sum += kernel.eval_t(-k, k - n, n) * phi.coeff(k - n) * phi.coeff(n);
        }
        // φ̂_t(k) = -i · sum for k > 0, then û_t(k) = |k|^{1/2} φ̂_t(k).
        let phi_t = Complex::new(T::zero(), -T::one()) * sum;
        coeffs.push(phi_t * from_int::<T>(k).sqrt());
    }
    SpectralField::from_coeffs_unchecked(coeffs)
}
