//! The nonlocal quadratic interaction.
//!
//! â(u,v)(k) = Σ_n S(-k, k-n, n) û(k-n) v̂(n) generalizes the pointwise
//! product (to which it reduces when S ≡ 1), b(φ,ψ) is its canonical-variable
//! counterpart, and the Galerkin right-hand side is -P^N ∂x a(u,u).
//!
//! S depends on all three wavenumbers, so the sum is not a convolution and
//! no transform shortcut applies; each output mode is an explicit sum over
//! n in ascending order, which keeps results bit-reproducible regardless of
//! the number of threads (the parallel split is over output modes only).

use num_complex::Complex;
use rayon::prelude::*;

use crate::field::SpectralField;
use crate::kernels::KernelSpec;
use crate::scalar::{from_int, lit, Scalar};

/// â(u,v)(k) for 1 ≤ k ≤ out_n; the negative side follows from reality.
/// Cost O(out_n · N).
pub fn bilinear_a<T: Scalar>(
    kernel: &KernelSpec<T>,
    u: &SpectralField<T>,
    v: &SpectralField<T>,
    out_n: usize,
) -> SpectralField<T> {
    assert!(out_n >= 1, "output truncation must be at least 1");
    let nu = u.truncation() as i64;
    let nv = v.truncation() as i64;
    let coeffs: Vec<Complex<T>> = (1..=out_n as i64)
        .into_par_iter()
        .map(|k| {
            let mut sum = Complex::new(T::zero(), T::zero());
            let lo = (-nv).max(k - nu);
            let hi = nv.min(k + nu);
            for n in lo..=hi {
                if n == 0 || n == k {
                    continue;
                }
                sum += kernel.eval_s(-k, k - n, n) * u.coeff(k - n) * v.coeff(n);
            }
            sum
        })
        .collect();
    SpectralField::from_coeffs_unchecked(coeffs)
}

/// b(φ,ψ) = |∂x|^{1/2} a(|∂x|^{1/2} φ, |∂x|^{1/2} ψ); equal to the direct
/// sum with the kernel T in place of S.
pub fn bilinear_b<T: Scalar>(
    kernel: &KernelSpec<T>,
    phi: &SpectralField<T>,
    psi: &SpectralField<T>,
    out_n: usize,
) -> SpectralField<T> {
    let half = lit::<T>(0.5);
    bilinear_a(
        kernel,
        &phi.fractional_power(half),
        &psi.fractional_power(half),
        out_n,
    )
    .fractional_power(half)
}

/// Galerkin right-hand side u_t = -P^N ∂x a(u,u): coefficients
/// -ik â(u,u)(k) for 1 ≤ k ≤ N. Modes above N are never materialized; by
/// linearity of the projection the result is identical.
pub fn galerkin_rhs<T: Scalar>(kernel: &KernelSpec<T>, u: &SpectralField<T>) -> SpectralField<T> {
    bilinear_a(kernel, u, u, u.truncation())
        .multiplier(|k| Complex::new(T::zero(), -from_int::<T>(k)))
}

/// (1/2π) ∫ u a(v,w) dx = Σ_k û(-k) â(v,w)(k); real for admissible fields
/// and invariant under cyclic permutation of (u, v, w).
pub fn cyclic_integral<T: Scalar>(
    kernel: &KernelSpec<T>,
    u: &SpectralField<T>,
    v: &SpectralField<T>,
    w: &SpectralField<T>,
) -> T {
    let a = bilinear_a(kernel, v, w, u.truncation());
    let mut sum = T::zero();
    for k in 1..=u.truncation() as i64 {
        sum += (u.coeff(k).conj() * a.coeff(k)).re;
    }
    sum + sum
}
