//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use triadwave::bilinear::{bilinear_a, cyclic_integral, galerkin_rhs};
use triadwave::evolution::{existence_time, integrate, BlowupReason, SimConfig};
use triadwave::field::{max_coeff_diff, GridField, SpectralField};
use triadwave::kernels::KernelSpec;
use triadwave::oracles;
use triadwave::theory;
use triadwave::{Field64, Kernel64};

fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {criterion} [{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

fn random_field(n: usize, rng: &mut ChaCha8Rng) -> Field64 {
    let coeffs: Vec<Complex<f64>> = (1..=n)
        .map(|k| {
            let w = 1.0 / (k * k) as f64;
            Complex::new(rng.random_range(-0.5..0.5) * w, rng.random_range(-0.5..0.5) * w)
        })
        .collect();
    SpectralField::from_coeffs(coeffs).unwrap()
}

fn builtin_kernels() -> Vec<Kernel64> {
    vec![
        KernelSpec::burgers(),
        KernelSpec::hunter_saxton(),
        KernelSpec::surface(),
        KernelSpec::rayleigh(0.5, 1.0, 1.0, 1.0).unwrap(),
        KernelSpec::compacton(),
        KernelSpec::power(1),
    ]
}

/// Criterion 1: closed-form values of the triad-inequality constants,
/// each reproduced to 1e-6, in < 1 s.
#[test]
fn acceptance_1_closed_form_constants() {
    let start = Instant::now();
    let tol = 1e-6;
    let mut worst: f64 = 0.0;
    let mut track = |err: f64| worst = worst.max(err);

    track((theory::c_slam::<f64>(1.0, 0.0).unwrap() - 1.0).abs());
    track((theory::c_slam::<f64>(3.0, 0.0).unwrap() - 7.0).abs());
    for s in [1.0, 2.0, 3.0, 4.0] {
        let expect = 2f64.powf(s) - 1.0;
        track((theory::f_slam::<f64>(s, 0.0, 1.0).unwrap() - expect).abs());
    }
    // x→0⁺ limit table. At s+λ = 1 the limit is (2s+1)/3; x = 1e-8 keeps
    // both the O(x) correction and the powf cancellation noise below 1e-6.
    for (s, lam) in [(1.0, 0.0), (0.5, 0.5), (0.7, 0.3)] {
        let expect = (2.0 * s + 1.0) / 3.0;
        track((theory::f_slam_limit0::<f64>(s, lam).unwrap() - expect).abs());
        track((theory::f_slam::<f64>(s, lam, 1e-8).unwrap() - expect).abs());
    }
    // Remaining branches of the table.
    track(theory::f_slam_limit0::<f64>(0.3, 0.3).unwrap().abs());
    track((theory::f_slam_limit0::<f64>(2.0, 0.0).unwrap() - 5.0).abs());
    track((theory::f_slam::<f64>(2.0, 0.0, 1e-8).unwrap() - 5.0).abs());
    assert!(theory::f_slam::<f64>(0.3, 0.3, 1e-8).unwrap() < 1e-3);

    let elapsed = start.elapsed();
    let pass = worst <= tol && elapsed.as_secs_f64() < 1.0;
    report(
        1,
        "closed-form constants",
        pass,
        &format!("worst error {worst:.2e} (tol {tol:.0e}), runtime {elapsed:.2?}"),
    );
}

/// Criterion 2: kernel bound certification at R = 200 in < 10 s.
#[test]
fn acceptance_2_kernel_certification() {
    let start = Instant::now();
    let r = 200;

    let surface = KernelSpec::<f64>::surface().check_bound(r, false);
    let burgers = KernelSpec::<f64>::burgers().check_bound(r, false);
    let hs = KernelSpec::<f64>::hunter_saxton().check_bound(r, false);
    let compacton = KernelSpec::<f64>::compacton().check_bound(r, false);
    let compacton_half = KernelSpec::<f64>::compacton().check_bound(r / 2, false);

    let pass_surface = surface.worst_ratio <= 1.0 + 1e-12 && surface.satisfied == Some(true);
    let pass_burgers = (burgers.worst_ratio - 1.0).abs() <= 1e-12 && burgers.satisfied == Some(true);
    let pass_hs = hs.satisfied == Some(true) && hs.worst_ratio <= 1.5;
    // No constant works for the compacton kernel: the ratio supremum is both
    // large and still growing with the range.
    let pass_compacton =
        compacton.worst_ratio >= 10.0 && compacton.worst_ratio > 2.0 * compacton_half.worst_ratio;

    let elapsed = start.elapsed();
    let pass =
        pass_surface && pass_burgers && pass_hs && pass_compacton && elapsed.as_secs_f64() < 10.0;
    report(
        2,
        "kernel certification",
        pass,
        &format!(
            "surface {:.6} ≤ 1, burgers {:.6} = 1, hunter_saxton {:.4} ≤ C = 3/2, \
             compacton {:.1} (≥ 10, growing from {:.1} at R = 100), runtime {elapsed:.2?}",
            surface.worst_ratio,
            burgers.worst_ratio,
            hs.worst_ratio,
            compacton.worst_ratio,
            compacton_half.worst_ratio
        ),
    );
}

/// Criterion 3: triad inequality scans at R = 100 in < 30 s.
#[test]
fn acceptance_3_triad_inequality() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for (s, lam) in [(1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (0.5, 1.0), (2.6, 0.0)] {
        let rep = theory::verify_triad_inequality::<f64>(s, lam, 100).unwrap();
        worst = worst.max(rep.max_ratio);
        detail.push_str(&format!("(s={s},λ={lam}): {:.12}; ", rep.max_ratio));
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1.0 + 1e-12 && elapsed.as_secs_f64() < 30.0;
    report(
        3,
        "triad inequality",
        pass,
        &format!("max ratios {detail}runtime {elapsed:.2?}"),
    );
}

fn max_drift(kernel: &Kernel64, f: &Field64, n: usize, dt: f64, t_end: f64) -> (f64, f64) {
    let cfg = SimConfig::new(n, dt, t_end)
        .with_tracked_s(&[0.0])
        .with_output_every(1);
    let out = integrate(kernel, f, &cfg).unwrap();
    assert!(out.series.blowup.is_none());
    let p0 = out.series.rows[0].momentum;
    let h0 = out.series.rows[0].hamiltonian;
    // Sine data keeps H at exactly zero (odd solutions have purely imaginary
    // coefficients and real kernels), so drift is normalized by the
    // dimensionally matched scale P^{3/2} when H itself vanishes.
    let h_scale = h0.abs().max(p0.powf(1.5));
    let mut dp: f64 = 0.0;
    let mut dh: f64 = 0.0;
    for row in &out.series.rows {
        dp = dp.max(((row.momentum - p0) / p0).abs());
        dh = dh.max(((row.hamiltonian - h0) / h_scale).abs());
    }
    (dp, dh)
}

/// Criterion 4: conservation drift ≤ 1e-8 at (N=64, f=0.1 sin x, dt=1e-3,
/// tEnd=1) for the Burgers and surface kernels, and RK4-order decay of the
/// drift under halving. At dt = 1e-3 the drift sits at the rounding floor
/// (~1e-14, six orders better than required), where halving cannot show a
/// ratio; the ×16 decay is therefore certified on the same scenario at the
/// coarsest steps (8e-2 → 4e-2 → 2e-2), where integrator error dominates
/// round-off as the drift-order contract stipulates.
#[test]
fn acceptance_4_conservation() {
    let start = Instant::now();
    let n = 64;
    let f = Field64::sine(n, 0.1, 1).unwrap();
    let mut pass = true;
    let mut detail = String::new();
    for kernel in [KernelSpec::burgers(), KernelSpec::surface()] {
        let (dp, dh) = max_drift(&kernel, &f, n, 1e-3, 1.0);
        let (dp_half, dh_half) = max_drift(&kernel, &f, n, 5e-4, 1.0);
        pass &= dp <= 1e-8 && dh <= 1e-8 && dp_half <= 1e-8 && dh_half <= 1e-8;
        // Order check in the truncation-dominated regime.
        let coarse: Vec<f64> = [8e-2, 4e-2, 2e-2]
            .iter()
            .map(|&dt| max_drift(&kernel, &f, n, dt, 1.0).0)
            .collect();
        let r1 = coarse[0] / coarse[1];
        let r2 = coarse[1] / coarse[2];
        pass &= (10.0..=30.0).contains(&r1) && (10.0..=30.0).contains(&r2);
        detail.push_str(&format!(
            "{}: dP={dp:.1e} dH={dh:.1e} (dt=1e-3), halving ratios {r1:.1}, {r2:.1}; ",
            kernel.name()
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed.as_secs_f64() < 60.0;
    report(4, "conservation", pass, &format!("{detail}runtime {elapsed:.2?}"));
}

/// Criterion 5: the measured H^2.6 norm stays below the Gronwall envelope
/// for t < 0.9 t*, with K_s and t* from the theory module.
#[test]
fn acceptance_5_gronwall_envelope() {
    let start = Instant::now();
    let kernel = KernelSpec::surface();
    let s = 2.6;
    let n = 64;
    let f = Field64::sine(n, 0.05, 1).unwrap();
    let env = existence_time(&kernel, &f, s).unwrap();
    let k_s = theory::k_s(&kernel, s).unwrap();
    assert_eq!(env.k_const, k_s, "envelope constants come from the theory module");
    let cfg = SimConfig::new(n, 1e-3, 0.9 * env.t_star)
        .with_tracked_s(&[s])
        .with_output_every(20);
    let out = integrate(&kernel, &f, &cfg).unwrap();
    let mut pass = out.series.blowup.is_none();
    let mut margin: f64 = f64::INFINITY;
    for row in &out.series.rows {
        if row.t < 0.9 * env.t_star {
            let bound = env.envelope(row.t) * (1.0 + 1e-6);
            margin = margin.min(bound / row.norms[0]);
            pass &= row.norms[0] <= bound;
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed.as_secs_f64() < 60.0;
    report(
        5,
        "gronwall envelope",
        pass,
        &format!(
            "K_s = {k_s:.4}, t* = {:.4}, smallest envelope/norm margin {margin:.3}, runtime {elapsed:.2?}",
            env.t_star
        ),
    );
}

/// Criterion 6: oracle equivalence in < 2 min.
/// (a) brute-force RHS vs Galerkin RHS, 100 random fields, all builtins;
/// (b) Burgers N=256 spectral run vs characteristics at half breaking time;
/// (c) Hunter-Saxton kernel machinery vs independent grid solver.
#[test]
fn acceptance_6_oracle_equivalence() {
    let start = Instant::now();

    // (a)
    let mut rng = ChaCha8Rng::seed_from_u64(0x00AC_CE6A);
    let kernels = builtin_kernels();
    let mut worst_rhs: f64 = 0.0;
    for _ in 0..100 {
        let u = random_field(32, &mut rng);
        for kernel in &kernels {
            let diff = max_coeff_diff(&galerkin_rhs(kernel, &u), &oracles::brute_force_rhs(kernel, &u));
            worst_rhs = worst_rhs.max(diff);
        }
    }
    let pass_a = worst_rhs <= 1e-12;

    // (b)
    let n = 256;
    let f = Field64::sine(n, 0.1, 1).unwrap();
    let tb = oracles::breaking_time(&f).unwrap();
    assert!((tb - 5.0).abs() < 1e-9);
    let dt = 1e-3;
    let t = 0.5 * tb;
    let cfg = SimConfig::new(n, dt, t).with_output_every(1000);
    let run = integrate(&KernelSpec::burgers(), &f, &cfg).unwrap();
    let m = 2 * n + 1;
    let grid = run.final_state.synthesize(m).unwrap();
    let mut linf: f64 = 0.0;
    for j in 0..m {
        let exact = oracles::burgers_exact(&f, grid.point(j), t).unwrap();
        linf = linf.max((grid.samples()[j] - exact).abs());
    }
    let pass_b = linf <= 1e-6;

    // (c)
    let n = 64;
    let f = Field64::sine(n, 0.2, 1).unwrap();
    let dt = 1e-3;
    let direct = oracles::hunter_saxton_direct(&f, dt, 0.5).unwrap();
    let cfg = SimConfig::new(n, dt, 0.5).with_output_every(1000);
    let spectral = integrate(&KernelSpec::hunter_saxton(), &f, &cfg).unwrap().final_state;
    let l2 = direct.scaled_add(-1.0, &spectral).sobolev_norm(0.0);
    let pass_c = l2 <= 1e-8;

    let elapsed = start.elapsed();
    let pass = pass_a && pass_b && pass_c && elapsed.as_secs_f64() < 120.0;
    report(
        6,
        "oracle equivalence",
        pass,
        &format!(
            "rhs max diff {worst_rhs:.2e} ≤ 1e-12; burgers L∞ {linf:.2e} ≤ 1e-6 at t = {t}; \
             hunter-saxton L² {l2:.2e} ≤ 1e-8; runtime {elapsed:.2?}"
        ),
    );
}

/// Criterion 7: algebraic identities on 1000 random cases in < 1 min.
#[test]
fn acceptance_7_algebraic_identities() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x00AC_CE7A);
    let kernels = builtin_kernels();
    let mut worst_deriv: f64 = 0.0;
    let mut worst_cyclic: f64 = 0.0;
    let mut worst_pointprod: f64 = 0.0;
    let mut abound_ok = true;

    for case in 0..1000 {
        let n = rng.random_range(4..=20);
        let u = random_field(n, &mut rng);
        let v = random_field(n, &mut rng);
        let kernel = &kernels[case % kernels.len()];
        let out_n = 2 * n;

        // Derivative rule: a(u,v)_x = a(u_x,v) + a(u,v_x), coefficient-exact.
        let lhs = bilinear_a(kernel, &u, &v, out_n).derivative();
        let rhs = bilinear_a(kernel, &u.derivative(), &v, out_n)
            .scaled_add(1.0, &bilinear_a(kernel, &u, &v.derivative(), out_n));
        let scale = lhs.max_abs_coeff().max(1.0);
        worst_deriv = worst_deriv.max(max_coeff_diff(&lhs, &rhs) / scale);

        // Cyclic symmetry of the interaction integral.
        let w = random_field(n, &mut rng);
        let c1 = cyclic_integral(kernel, &u, &v, &w);
        let c2 = cyclic_integral(kernel, &v, &w, &u);
        let c3 = cyclic_integral(kernel, &w, &u, &v);
        let cs = c1.abs().max(1.0);
        worst_cyclic = worst_cyclic.max((c1 - c2).abs().max((c1 - c3).abs()) / cs);

        // Boundedness with B_s and M_{s-μ} from the theory module
        // (kernels with a known C and μ ≥ 0).
        if let Some(c_const) = kernel.bound_constant() {
            if kernel.mu() >= 0.0 {
                let s = kernel.mu() + rng.random_range(0.6..2.5);
                let bound = 2.0
                    * theory::b_s(s).unwrap()
                    * c_const
                    * theory::m_s(s - kernel.mu()).unwrap().hi
                    * u.sobolev_norm(s)
                    * v.sobolev_norm(s);
                abound_ok &= bilinear_a(kernel, &u, &v, out_n).sobolev_norm(s)
                    <= bound * (1.0 + 1e-12);
            }
        }

        // Burgers: a(u,v) is the pointwise product minus its mean.
        if case % kernels.len() == 0 {
            let a = bilinear_a(kernel, &u, &v, out_n);
            let m = 2 * out_n + 1;
            let gu = u.synthesize(m).unwrap();
            let gv = v.synthesize(m).unwrap();
            let prod: Vec<f64> = gu
                .samples()
                .iter()
                .zip(gv.samples())
                .map(|(a, b)| a * b)
                .collect();
            let grid = GridField::from_samples(prod).unwrap().analyze(out_n).unwrap();
            worst_pointprod = worst_pointprod.max(max_coeff_diff(&a, &grid));
        }
    }

    let elapsed = start.elapsed();
    let pass = worst_deriv <= 1e-12
        && worst_cyclic <= 1e-12
        && worst_pointprod <= 1e-12
        && abound_ok
        && elapsed.as_secs_f64() < 60.0;
    report(
        7,
        "algebraic identities (1000 cases)",
        pass,
        &format!(
            "deriv {worst_deriv:.2e}, cyclic {worst_cyclic:.2e}, pointprod {worst_pointprod:.2e} \
             (all ≤ 1e-12), abound {}, runtime {elapsed:.2?}",
            if abound_ok { "held" } else { "VIOLATED" }
        ),
    );
}

/// Criterion 8: qualitative blow-up of the surface equation with
/// f = 0.5 sin x: sup|u_x| grows monotonically by ≥ 100× before the run
/// ends, while the momentum stays conserved to 1e-6 until detection.
#[test]
fn acceptance_8_qualitative_blowup() {
    let start = Instant::now();
    let n = 256;
    let kernel = KernelSpec::surface();
    let f = Field64::sine(n, 0.5, 1).unwrap();
    let mut cfg = SimConfig::new(n, 2.5e-4, 10.0)
        .with_tracked_s(&[0.0, 2.0])
        .with_output_every(50);
    cfg.blowup_norm_threshold = Some(8e3 * f.sobolev_norm(2.0));
    let out = integrate(&kernel, &f, &cfg).unwrap();

    let event = out.series.blowup;
    let rows = &out.series.rows;
    let p0 = rows[0].momentum;
    let ux0 = rows[0].sup_ux;
    let p_drift = rows
        .iter()
        .map(|r| ((r.momentum - p0) / p0).abs())
        .fold(0.0f64, f64::max);
    let hit = rows.iter().position(|r| r.sup_ux >= 100.0 * ux0);
    let monotone_to_hit = hit
        .map(|i| {
            rows[..=i]
                .windows(2)
                .all(|w| w[1].sup_ux >= w[0].sup_ux * (1.0 - 1e-3))
        })
        .unwrap_or(false);
    let growth = rows.iter().map(|r| r.sup_ux).fold(0.0f64, f64::max) / ux0;

    let pass = matches!(
        event.map(|e| e.reason),
        Some(BlowupReason::NormThreshold) | Some(BlowupReason::NonFinite)
    ) && hit.is_some()
        && monotone_to_hit
        && p_drift <= 1e-6;
    let elapsed = start.elapsed();
    report(
        8,
        "qualitative blow-up",
        pass,
        &format!(
            "detected at t = {:?}, sup|u_x| growth {growth:.0}× (monotone to 100× at sample {hit:?}), \
             P drift {p_drift:.2e} ≤ 1e-6, runtime {elapsed:.2?}",
            event.map(|e| e.t)
        ),
    );
}
