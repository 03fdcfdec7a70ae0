//! Command-line entry points.
//!
//! Verbs: `run`, `verify-kernel`, `constants`, `convergence`,
//! `oracle-compare`. Exit statuses are a stable contract:
//!
//! - 0: completed
//! - 1: oracle discrepancy beyond tolerance
//! - 2: blow-up detected (diagnostics up to detection are emitted)
//! - 3: invalid config or kernel failed symmetry certification
//! - 4: kernel bound violated
//! - 5: kernel symmetry violated
//!
//! Runs with identical config and code version emit bit-identical CSV:
//! summation order is fixed and floats are printed at 17 significant digits.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::config::{BlowupManifest, RunConfig, RunManifest};
use crate::evolution::{integrate, integrate_with, SimConfig};
use crate::field::{max_coeff_diff, SpectralField};
use crate::kernels::KernelSpec;
use crate::oracles;
use crate::theory;
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ORACLE_MISMATCH: i32 = 1;
pub const EXIT_BLOWUP: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_BOUND_VIOLATED: i32 = 4;
pub const EXIT_SYMMETRY_VIOLATED: i32 = 5;

/// For kernels without a known C the bound certifier compares the empirical
/// ratio supremum at R/2 and R; growth beyond this factor flags the bound
/// as unsatisfiable by any constant.
pub const BOUND_GROWTH_TOLERANCE: f64 = 1.2;

#[derive(Debug, Parser)]
#[command(
    name = "triadwave",
    version,
    about = "Spectral solver and certification toolkit for nonlocal Hamiltonian wave equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Thread count for data-parallel loops (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory; overrides the config's [output] dir.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the configured initial-value problem.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Certify kernel symmetries and the analytic bound on an integer range.
    VerifyKernel {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "R", default_value_t = 200)]
        r: i64,
        /// Also scan off the resonant plane k+m+n = 0.
        #[arg(long)]
        full_lattice: bool,
    },
    /// Emit the theory constants (M_s, B_s, C_s, C_{s,λ}, K_s, K_{s,λ}, t*).
    Constants {
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        /// Builtin kernel name (parameterless builtins only).
        #[arg(long)]
        kernel: Option<String>,
        /// Config file providing the kernel (required for rayleigh, power,
        /// custom).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Self-convergence study: errors against the finest run over dt and N.
    Convergence {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        dt_list: Option<Vec<f64>>,
    },
    /// Cross-validate the solver against the independent oracles.
    OracleCompare {
        #[arg(long)]
        config: PathBuf,
    },
}

pub fn execute(cli: Cli) -> i32 {
    if let Some(threads) = cli.threads {
        // Ignore the error if a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let outcome = match &cli.command {
        Command::Run { config } => cmd_run(config, cli.out.as_deref()),
        Command::VerifyKernel {
            config,
            r,
            full_lattice,
        } => cmd_verify_kernel(config, *r, *full_lattice, cli.out.as_deref()),
        Command::Constants {
            s,
            lambda,
            kernel,
            config,
        } => cmd_constants(*s, *lambda, kernel.as_deref(), config.as_deref(), cli.out.as_deref()),
        Command::Convergence {
            config,
            n_list,
            dt_list,
        } => cmd_convergence(
            config,
            n_list.as_deref().unwrap_or(&[]),
            dt_list.as_deref().unwrap_or(&[]),
            cli.out.as_deref(),
        ),
        Command::OracleCompare { config } => cmd_oracle_compare(config, cli.out.as_deref()),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_INVALID
        }
    }
}

fn out_dir(cfg: &RunConfig, flag: Option<&Path>) -> PathBuf {
    flag.map(Path::to_path_buf).unwrap_or_else(|| cfg.output.dir.clone())
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Build the kernel and require it to pass the symmetry gate; every
/// simulation entry point goes through this.
fn certified_kernel(cfg: &RunConfig) -> Result<KernelSpec<f64>> {
    let kernel = cfg.build_kernel::<f64>()?;
    let report = kernel.check_symmetries(cfg.kernel.certification_range.max(2));
    if !report.passed {
        let v = report.violation.expect("failed report carries a violation");
        return Err(Error::Config(format!(
            "kernel `{}` failed certification: {} at triple {:?}",
            kernel.name(),
            v.condition,
            v.triple
        )));
    }
    Ok(kernel)
}

fn cmd_run(config_path: &Path, out_flag: Option<&Path>) -> Result<i32> {
    let cfg = RunConfig::load(config_path)?;
    let started = chrono::Utc::now().to_rfc3339();
    let kernel = certified_kernel(&cfg)?;
    let f = cfg.build_initial_data::<f64>()?;
    let sim: SimConfig<f64> = cfg.sim_config()?;
    let dir = out_dir(&cfg, out_flag);
    std::fs::create_dir_all(&dir)?;

    let mut artifacts = Vec::new();
    let snapshot_every = cfg.output.snapshot_every;
    let mut snapshots: Vec<(usize, SpectralField<f64>)> = Vec::new();
    let result = integrate_with(&kernel, &f, &sim, |step, _t, state| {
        if snapshot_every > 0 && step % snapshot_every == 0 {
            snapshots.push((step, state.clone()));
        }
    })?;

    let csv_path = dir.join("diagnostics.csv");
    let mut csv = std::fs::File::create(&csv_path)?;
    result.series.write_csv(&mut csv)?;
    csv.flush()?;
    artifacts.push(csv_path.display().to_string());

    if snapshot_every > 0 {
        snapshots.push((0, f.resize(sim.n)));
        snapshots.sort_by_key(|(step, _)| *step);
        for (step, state) in &snapshots {
            let path = dir.join(format!("state_{step:08}.json"));
            write_json(&path, &state.to_dump())?;
            artifacts.push(path.display().to_string());
        }
    }
    let final_path = dir.join("final_state.json");
    write_json(&final_path, &result.final_state.to_dump())?;
    artifacts.push(final_path.display().to_string());

    let exit = if result.series.blowup.is_some() {
        EXIT_BLOWUP
    } else {
        EXIT_OK
    };
    let manifest = RunManifest {
        command: "run".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        started,
        finished: chrono::Utc::now().to_rfc3339(),
        exit_status: exit,
        artifacts: {
            let mut a = artifacts.clone();
            a.push(dir.join("manifest.json").display().to_string());
            a
        },
        blowup: result.series.blowup.map(|b| BlowupManifest {
            t: b.t,
            step: b.step,
            reason: b.reason.to_string(),
        }),
        config: cfg,
    };
    write_json(&dir.join("manifest.json"), &manifest)?;
    if let Some(b) = &manifest.blowup {
        eprintln!("blow-up detected at t = {} ({})", b.t, b.reason);
    }
    Ok(exit)
}

fn cmd_verify_kernel(
    config_path: &Path,
    r: i64,
    full_lattice: bool,
    out_flag: Option<&Path>,
) -> Result<i32> {
    let cfg = RunConfig::load(config_path)?;
    let kernel = cfg.build_kernel::<f64>()?;
    let symmetries = kernel.check_symmetries(r.clamp(2, 100));
    let exit;
    let mut bound = None;
    let mut growth = None;
    if !symmetries.passed {
        exit = EXIT_SYMMETRY_VIOLATED;
    } else {
        let report = kernel.check_bound(r, full_lattice);
        exit = match report.satisfied {
            Some(true) => EXIT_OK,
            Some(false) => EXIT_BOUND_VIOLATED,
            None => {
                // No reference constant: flag unbounded growth of the
                // empirical ratio supremum between R/2 and R.
                let half = kernel.check_bound((r / 2).max(2), full_lattice);
                let factor = report.worst_ratio / half.worst_ratio;
                growth = Some(factor);
                if factor > BOUND_GROWTH_TOLERANCE {
                    EXIT_BOUND_VIOLATED
                } else {
                    EXIT_OK
                }
            }
        };
        bound = Some(report);
    }
    let report = json!({
        "kernel": kernel.name(),
        "range": r,
        "symmetries": symmetries,
        "bound": bound,
        "ratio_growth_factor": growth,
        "exit_status": exit,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(dir) = out_flag {
        std::fs::create_dir_all(dir)?;
        write_json(&dir.join(format!("verify_{}.json", kernel.name())), &report)?;
    }
    Ok(exit)
}

fn cmd_constants(
    s: f64,
    lambda: f64,
    kernel_name: Option<&str>,
    config_path: Option<&Path>,
    out_flag: Option<&Path>,
) -> Result<i32> {
    let kernel: Option<KernelSpec<f64>> = match (kernel_name, config_path) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "give either --kernel or --config, not both".into(),
            ))
        }
        (Some(name), None) => Some(crate::config::KernelConfig::named(name).build()?),
        (None, Some(path)) => Some(RunConfig::load(path)?.build_kernel()?),
        (None, None) => None,
    };
    let constants = theory::constants_for(kernel.as_ref(), s, lambda);
    println!("{}", serde_json::to_string_pretty(&constants)?);
    if let Some(dir) = out_flag {
        std::fs::create_dir_all(dir)?;
        write_json(&dir.join("constants.json"), &constants)?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct ConvergenceRow {
    n: usize,
    dt: f64,
    err_l2: f64,
    err_max_coeff: f64,
    /// Richardson slope against the previous row; NaN for the first.
    observed_order: f64,
}

fn convergence_rows(
    kernel: &KernelSpec<f64>,
    cfg: &RunConfig,
    runs: &[(usize, f64)],
    vary_dt: bool,
) -> Result<Vec<ConvergenceRow>> {
    let mut finals: Vec<(usize, f64, SpectralField<f64>)> = Vec::new();
    for &(n, dt) in runs {
        let mut sim: SimConfig<f64> = cfg.sim_config()?;
        sim.n = n;
        sim.dt = dt;
        let f = cfg.initial_data.build::<f64>(n)?;
        let out = integrate(kernel, &f, &sim)?;
        if let Some(b) = out.series.blowup {
            return Err(Error::Domain(format!(
                "convergence run (N={n}, dt={dt}) hit blow-up at t = {}",
                b.t
            )));
        }
        finals.push((n, dt, out.final_state));
    }
    // Last entry is the finest run; errors are measured against it on the
    // common modes.
    let (_, _, reference) = finals.last().expect("nonempty run list");
    let mut rows = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for (n, dt, state) in &finals[..finals.len() - 1] {
        let common = state.truncation().min(reference.truncation());
        let diff = state
            .project(common)
            .scaled_add(-1.0, &reference.project(common));
        let err_l2 = diff.sobolev_norm(0.0);
        let err_max = max_coeff_diff(&state.project(common), &reference.project(common));
        let x = if vary_dt { *dt } else { 1.0 / *n as f64 };
        let observed_order = match prev {
            Some((px, pe)) if err_l2 > 0.0 && pe > 0.0 => (pe / err_l2).ln() / (px / x).ln(),
            _ => f64::NAN,
        };
        prev = Some((x, err_l2));
        rows.push(ConvergenceRow {
            n: *n,
            dt: *dt,
            err_l2,
            err_max_coeff: err_max,
            observed_order,
        });
    }
    Ok(rows)
}

fn write_convergence_csv(path: &Path, rows: &[ConvergenceRow]) -> Result<()> {
    let mut out = std::fs::File::create(path)?;
    writeln!(out, "n,dt,err_l2,err_max_coeff,observed_order")?;
    for r in rows {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.n, r.dt, r.err_l2, r.err_max_coeff, r.observed_order
        )?;
    }
    Ok(())
}

fn cmd_convergence(
    config_path: &Path,
    n_list: &[usize],
    dt_list: &[f64],
    out_flag: Option<&Path>,
) -> Result<i32> {
    let cfg = RunConfig::load(config_path)?;
    let kernel = certified_kernel(&cfg)?;
    let dir = out_dir(&cfg, out_flag);
    std::fs::create_dir_all(&dir)?;

    // dt study at the config truncation: coarsest first, finest last.
    if !dt_list.is_empty() {
        let mut dts: Vec<f64> = dt_list.to_vec();
        dts.sort_by(|a, b| b.partial_cmp(a).expect("finite dt list"));
        let runs: Vec<(usize, f64)> = dts.iter().map(|&dt| (cfg.simulation.n, dt)).collect();
        let rows = convergence_rows(&kernel, &cfg, &runs, true)?;
        println!("# dt study (reference: dt = {:e})", dts.last().unwrap());
        println!("{}", serde_json::to_string_pretty(&rows)?);
        write_convergence_csv(&dir.join("convergence_dt.csv"), &rows)?;
    }
    // N study at the config dt: coarsest first, finest last.
    if !n_list.is_empty() {
        let mut ns: Vec<usize> = n_list.to_vec();
        ns.sort_unstable();
        let runs: Vec<(usize, f64)> = ns.iter().map(|&n| (n, cfg.simulation.dt)).collect();
        let rows = convergence_rows(&kernel, &cfg, &runs, false)?;
        println!("# N study (reference: N = {})", ns.last().unwrap());
        println!("{}", serde_json::to_string_pretty(&rows)?);
        write_convergence_csv(&dir.join("convergence_n.csv"), &rows)?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct OracleCheck {
    name: String,
    discrepancy: f64,
    tolerance: f64,
    pass: bool,
}

fn cmd_oracle_compare(config_path: &Path, out_flag: Option<&Path>) -> Result<i32> {
    let cfg = RunConfig::load(config_path)?;
    let kernel = certified_kernel(&cfg)?;
    let sim: SimConfig<f64> = cfg.sim_config()?;
    let oc = &cfg.oracle;
    let mut checks = Vec::new();

    // Galerkin right-hand side against the canonical-variable triple sum.
    let mut rng = ChaCha8Rng::seed_from_u64(0x7269_6164);
    let mut worst: f64 = 0.0;
    for _ in 0..oc.rhs_random_fields {
        let n = oc.rhs_truncation;
        let coeffs: Vec<num_complex::Complex<f64>> = (1..=n)
            .map(|k| {
                let w = 1.0 / (k as f64).powi(2);
                num_complex::Complex::new(
                    rng.random_range(-0.5..0.5) * w,
                    rng.random_range(-0.5..0.5) * w,
                )
            })
            .collect();
        let u = SpectralField::from_coeffs(coeffs)?;
        let a = crate::bilinear::galerkin_rhs(&kernel, &u);
        let b = oracles::brute_force_rhs(&kernel, &u);
        worst = worst.max(max_coeff_diff(&a, &b));
    }
    checks.push(OracleCheck {
        name: format!(
            "galerkin_rhs_vs_brute_force ({} fields, N = {})",
            oc.rhs_random_fields, oc.rhs_truncation
        ),
        discrepancy: worst,
        tolerance: oc.rhs_tolerance,
        pass: worst <= oc.rhs_tolerance,
    });

    let f = cfg.build_initial_data::<f64>()?;
    if kernel.name() == "burgers" && !f.is_zero() {
        // Spectral run against characteristics at half the breaking time.
        let tb = oracles::breaking_time(&f).expect("nonzero data breaks");
        let t = 0.5 * tb;
        let mut sim_b = sim.clone();
        sim_b.t_end = t;
        let run = integrate(&kernel, &f, &sim_b)?;
        let t_reached = sim_b.dt * (t / sim_b.dt).round();
        let m = 2 * sim_b.n + 1;
        let grid = run.final_state.synthesize(m)?;
        let mut linf: f64 = 0.0;
        for j in 0..m {
            let x = grid.point(j);
            let exact = oracles::burgers_exact(&f, x, t_reached)?;
            linf = linf.max((grid.samples()[j] - exact).abs());
        }
        checks.push(OracleCheck {
            name: format!("burgers_characteristics (t = {t_reached}, N = {})", sim_b.n),
            discrepancy: linf,
            tolerance: oc.burgers_linf_tolerance,
            pass: linf <= oc.burgers_linf_tolerance,
        });
    }
    if kernel.name() == "hunter_saxton" {
        let direct = oracles::hunter_saxton_direct(&f, sim.dt, sim.t_end)?;
        let spectral = integrate(&kernel, &f, &sim)?.final_state;
        let err = direct.scaled_add(-1.0, &spectral).sobolev_norm(0.0);
        checks.push(OracleCheck {
            name: format!("hunter_saxton_direct (t = {}, N = {})", sim.t_end, sim.n),
            discrepancy: err,
            tolerance: oc.hunter_saxton_l2_tolerance,
            pass: err <= oc.hunter_saxton_l2_tolerance,
        });
    }

    let all_pass = checks.iter().all(|c| c.pass);
    let report = json!({
        "kernel": kernel.name(),
        "checks": checks,
        "pass": all_pass,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    if let Some(dir) = out_flag {
        std::fs::create_dir_all(dir)?;
        write_json(&dir.join("oracle_compare.json"), &report)?;
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_ORACLE_MISMATCH })
}
