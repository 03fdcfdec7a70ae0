//! Spectral solver and certification toolkit for quadratically nonlinear,
//! nonlocal Hamiltonian wave equations u_t + a(u,u)_x = 0 on the 2π-periodic
//! circle.
//!
//! The quadratic interaction is driven by a triad kernel T(k,m,n) acting on
//! resonant wavenumber triples k+m+n = 0. The crate provides
//!
//! - spectral fields and Fourier multiplier calculus ([`field`]),
//! - builtin and custom triad kernels with structural certification of
//!   their symmetry and bound properties ([`kernels`]),
//! - the nonlocal bilinear forms and the Galerkin right-hand side
//!   ([`bilinear`]),
//! - conservative RK4 time integration with momentum/Hamiltonian/Sobolev
//!   diagnostics and blow-up monitoring ([`evolution`]),
//! - the analytical constants M_s, B_s, C_{s,λ}, K_s and the triad
//!   inequality certifier ([`theory`]),
//! - independent reference solutions used for cross-validation
//!   ([`oracles`]),
//! - a batch CLI (`triadwave run | verify-kernel | constants | convergence |
//!   oracle-compare`) with reproducible, machine-readable output
//!   ([`cli`], [`config`]).
//!
//! All numerics are generic over the floating-point scalar via
//! [`scalar::Scalar`]; the `*64` aliases below fix f64, which every shipped
//! tolerance assumes.

// Negated comparisons like `!(dt > 0)` are deliberate: they reject NaN
// along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bilinear;
pub mod cli;
pub mod config;
mod error;
pub mod evolution;
pub mod field;
pub mod kernels;
pub mod oracles;
pub mod scalar;
pub mod theory;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Field64 = field::SpectralField<f64>;
pub type Grid64 = field::GridField<f64>;
pub type Kernel64 = kernels::KernelSpec<f64>;
pub type SimConfig64 = evolution::SimConfig<f64>;
