//! Time integration of the Galerkin system with conserved-quantity tracking.
//!
//! The truncated system û_t(k) = -ik Σ_n S(-k,k-n,n) û(k-n) û(n), |k| ≤ N,
//! is the canonical truncation of the cubic Hamiltonian, so it conserves the
//! momentum P = Σ_{k≥1} |û(k)|² and the truncated Hamiltonian exactly; all
//! observed drift is integrator error and must vanish at the RK4 rate dt⁴.
//! Fixed-step RK4 only: the drift-order checks need fixed steps and the
//! a-priori envelope t* = 1/(K_s ‖f‖_s) already gives a safe horizon.

use std::io::Write;


use crate::bilinear::galerkin_rhs;
use crate::field::SpectralField;
use crate::kernels::{KernelSpec, Regime};
use crate::scalar::{from_int, lit, Scalar};
use crate::theory;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    Rk4,
}

/// Simulation parameters. `blowup_norm_threshold` is an absolute bound on
/// the largest tracked Sobolev norm; when unset it defaults to 1e6 times the
/// initial value.
#[derive(Debug, Clone)]
pub struct SimConfig<T: Scalar> {
    pub n: usize,
    pub dt: T,
    pub t_end: T,
    pub integrator: Integrator,
    pub tracked_s: Vec<T>,
    pub output_every: usize,
    pub blowup_norm_threshold: Option<T>,
}

impl<T: Scalar> SimConfig<T> {
    pub fn new(n: usize, dt: T, t_end: T) -> Self {
        Self {
            n,
            dt,
            t_end,
            integrator: Integrator::Rk4,
            tracked_s: vec![T::zero()],
            output_every: 1,
            blowup_norm_threshold: None,
        }
    }

    pub fn with_tracked_s(mut self, tracked: &[T]) -> Self {
        self.tracked_s = tracked.to_vec();
        self
    }

    pub fn with_output_every(mut self, every: usize) -> Self {
        self.output_every = every;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Config("truncation N must be at least 1".into()));
        }
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(Error::Config(format!("time step must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= T::zero()) || !self.t_end.is_finite() {
            return Err(Error::Config(format!(
                "duration must be nonnegative, got {}",
                self.t_end
            )));
        }
        if self.tracked_s.is_empty() {
            return Err(Error::Config("tracked_s must not be empty".into()));
        }
        if self.tracked_s.iter().any(|s| !s.is_finite()) {
            return Err(Error::Config("tracked_s entries must be finite".into()));
        }
        if self.output_every == 0 {
            return Err(Error::Config("output_every must be at least 1".into()));
        }
        if let Some(thr) = self.blowup_norm_threshold {
            if !(thr > T::zero()) {
                return Err(Error::Config("blow-up threshold must be positive".into()));
            }
        }
        Ok(())
    }

    fn s_max(&self) -> T {
        self.tracked_s
            .iter()
            .copied()
            .fold(self.tracked_s[0], T::max)
    }
}

/// One RK4 step of u' = rhs(u). Used for the Galerkin system and for the
/// independent oracle integrators.
pub(crate) fn rk4_step<T: Scalar>(
    u: &SpectralField<T>,
    dt: T,
    rhs: impl Fn(&SpectralField<T>) -> SpectralField<T>,
) -> SpectralField<T> {
    let half = dt / lit(2.0);
    let sixth = dt / lit(6.0);
    let third = dt / lit(3.0);
    let k1 = rhs(u);
    let k2 = rhs(&u.scaled_add(half, &k1));
    let k3 = rhs(&u.scaled_add(half, &k2));
    let k4 = rhs(&u.scaled_add(dt, &k3));
    u.scaled_add(sixth, &k1)
        .scaled_add(third, &k2)
        .scaled_add(third, &k3)
        .scaled_add(sixth, &k4)
}

/// One classical RK4 step of the Galerkin system. Negative dt integrates
/// backwards (the equation is reversible).
pub fn step<T: Scalar>(kernel: &KernelSpec<T>, u: &SpectralField<T>, dt: T) -> SpectralField<T> {
    rk4_step(u, dt, |state| galerkin_rhs(kernel, state))
}

/// Momentum P = Σ_{k≥1} |û(k)|² = (1/2)‖u‖_0².
pub fn momentum<T: Scalar>(u: &SpectralField<T>) -> T {
    u.coeffs().iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
}

/// Truncated cubic Hamiltonian in canonical variables φ̂ = |k|^{-1/2} û:
/// H = Σ_{m,n ≥ 1, m+n ≤ N} { T(-m-n,m,n) φ̂*(m+n) φ̂(m) φ̂(n) + c.c. }.
pub fn hamiltonian<T: Scalar>(kernel: &KernelSpec<T>, u: &SpectralField<T>) -> T {
    let phi = u.fractional_power(lit(-0.5));
    let n_max = u.truncation() as i64;
    let mut h = T::zero();
    for m in 1..n_max {
        for n in 1..=(n_max - m) {
            let t = kernel.eval_t(-m - n, m, n);
            let term = t * phi.coeff(m) * phi.coeff(n) * phi.coeff(m + n).conj();
            h += term.re;
        }
    }
    h + h
}

/// The a-priori envelope E(t) = ‖f‖_s / (1 - K ‖f‖_s |t|) valid for
/// |t| < t* = 1/(K ‖f‖_s), with K = K_s or K_{s,λ} by kernel regime.
#[derive(Debug, Clone, Copy)]
pub struct ExistenceEnvelope<T> {
    pub s: T,
    /// K_s (nonnegative degree) or K_{s,λ} (negative degree).
    pub k_const: T,
    pub norm_f: T,
    /// Infinite for zero initial data.
    pub t_star: T,
}

impl<T: Scalar> ExistenceEnvelope<T> {
    pub fn envelope(&self, t: T) -> T {
        let denom = T::one() - self.k_const * self.norm_f * t.abs();
        if denom > T::zero() {
            self.norm_f / denom
        } else {
            T::infinity()
        }
    }
}

/// t* and the Gronwall envelope for initial data f in H^s. Requires the
/// kernel bound constant and an admissible s (s > μ + 3/2, or
/// s > max{3/2-λ, 1/2} in the negative-degree regime).
pub fn existence_time<T: Scalar>(
    kernel: &KernelSpec<T>,
    f: &SpectralField<T>,
    s: T,
) -> Result<ExistenceEnvelope<T>> {
    let k_const = match kernel.regime() {
        Regime::NonNegativeDegree { .. } => theory::k_s(kernel, s)?,
        Regime::NegativeDegree { .. } => theory::k_slam(kernel, s)?,
    };
    let norm_f = f.sobolev_norm(s);
    let t_star = if norm_f > T::zero() {
        T::one() / (k_const * norm_f)
    } else {
        T::infinity()
    };
    Ok(ExistenceEnvelope {
        s,
        k_const,
        norm_f,
        t_star,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowupReason {
    /// Largest tracked Sobolev norm crossed the threshold.
    NormThreshold,
    /// A coefficient became NaN or infinite.
    NonFinite,
}

impl std::fmt::Display for BlowupReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlowupReason::NormThreshold => write!(f, "norm threshold exceeded"),
            BlowupReason::NonFinite => write!(f, "non-finite coefficients"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BlowupEvent<T> {
    pub t: T,
    pub step: usize,
    pub reason: BlowupReason,
}

#[derive(Debug, Clone)]
pub struct DiagnosticsRow<T> {
    pub t: T,
    pub momentum: T,
    pub hamiltonian: T,
    /// One entry per tracked s, in config order.
    pub norms: Vec<T>,
    pub sup_ux: T,
    /// Envelope value E(t), or NaN when the existence theory does not apply.
    pub envelope: T,
}

/// Time series of (t, P, H, ‖u‖_s, sup|u_x|, envelope); t strictly
/// increasing, truncated at blow-up detection.
#[derive(Debug, Clone)]
pub struct DiagnosticsSeries<T> {
    pub tracked_s: Vec<T>,
    pub rows: Vec<DiagnosticsRow<T>>,
    pub blowup: Option<BlowupEvent<T>>,
}

impl<T: Scalar> DiagnosticsSeries<T> {
    /// CSV with a mandatory header and floats at 17 significant digits, so
    /// identical runs are bit-identical and values round-trip through f64.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        write!(out, "t,P,H")?;
        for s in &self.tracked_s {
            write!(out, ",norm_s_{s}")?;
        }
        writeln!(out, ",sup_ux,envelope")?;
        for row in &self.rows {
            write!(out, "{:.16e},{:.16e},{:.16e}", row.t, row.momentum, row.hamiltonian)?;
            for v in &row.norms {
                write!(out, ",{v:.16e}")?;
            }
            writeln!(out, ",{:.16e},{:.16e}", row.sup_ux, row.envelope)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct IntegrationResult<T: Scalar> {
    pub final_state: SpectralField<T>,
    pub series: DiagnosticsSeries<T>,
}

/// Fixed-step march to t_end (round(t_end/dt) steps) or to blow-up
/// detection, sampling diagnostics every `output_every` steps and at the
/// final step. The caller is responsible for kernel certification.
pub fn integrate<T: Scalar>(
    kernel: &KernelSpec<T>,
    f: &SpectralField<T>,
    cfg: &SimConfig<T>,
) -> Result<IntegrationResult<T>> {
    integrate_with(kernel, f, cfg, |_, _, _| {})
}

/// [`integrate`] with an observer invoked after every accepted step with
/// (step index, t, state); used for state snapshots.
pub fn integrate_with<T: Scalar>(
    kernel: &KernelSpec<T>,
    f: &SpectralField<T>,
    cfg: &SimConfig<T>,
    mut observer: impl FnMut(usize, T, &SpectralField<T>),
) -> Result<IntegrationResult<T>> {
    cfg.validate()?;
    if !f.all_finite() {
        return Err(Error::NonFinite("initial data"));
    }
    let state0 = f.resize(cfg.n);
    let s_max = cfg.s_max();
    let threshold = cfg.blowup_norm_threshold.unwrap_or_else(|| {
        let base = state0.sobolev_norm(s_max);
        lit::<T>(1e6) * if base > T::zero() { base } else { T::one() }
    });

    // The envelope column uses the largest tracked s the theory accepts.
    let mut sorted_s = cfg.tracked_s.clone();
    sorted_s.sort_by(|a, b| b.partial_cmp(a).expect("finite tracked_s"));
    let envelope = sorted_s
        .iter()
        .find_map(|&s| existence_time(kernel, &state0, s).ok());

    let n_steps = (cfg.t_end / cfg.dt)
        .round()
        .to_usize()
        .ok_or_else(|| Error::Config("t_end/dt out of range".into()))?;

    let mut series = DiagnosticsSeries {
        tracked_s: cfg.tracked_s.clone(),
        rows: Vec::new(),
        blowup: None,
    };
    if n_steps == 0 {
        return Ok(IntegrationResult {
            final_state: state0,
            series,
        });
    }

    let grid_points = 8 * cfg.n;
    let sample = |series: &mut DiagnosticsSeries<T>, state: &SpectralField<T>, t: T| {
        series.rows.push(DiagnosticsRow {
            t,
            momentum: momentum(state),
            hamiltonian: hamiltonian(kernel, state),
            norms: cfg.tracked_s.iter().map(|&s| state.sobolev_norm(s)).collect(),
            sup_ux: state.sup_abs_derivative(grid_points),
            envelope: envelope
                .as_ref()
                .map(|e| e.envelope(t))
                .unwrap_or_else(T::nan),
        });
    };

    let mut state = state0;
    sample(&mut series, &state, T::zero());
    for step_idx in 1..=n_steps {
        let next = step(kernel, &state, cfg.dt);
        let t = cfg.dt * from_int::<T>(step_idx as i64);
        if !next.all_finite() {
            // Keep the last finite state; the series stays finite.
            series.blowup = Some(BlowupEvent {
                t,
                step: step_idx,
                reason: BlowupReason::NonFinite,
            });
            break;
        }
        state = next;
        observer(step_idx, t, &state);
        if state.sobolev_norm(s_max) > threshold {
            sample(&mut series, &state, t);
            series.blowup = Some(BlowupEvent {
                t,
                step: step_idx,
                reason: BlowupReason::NormThreshold,
            });
            break;
        }
        if step_idx % cfg.output_every == 0 || step_idx == n_steps {
            sample(&mut series, &state, t);
        }
    }
    Ok(IntegrationResult {
        final_state: state,
        series,
    })
}
