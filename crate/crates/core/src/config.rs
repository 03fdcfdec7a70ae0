//! Run configuration: a single TOML file with kernel / initial_data /
//! simulation / output sections, plus the run manifest format.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::evolution::{Integrator, SimConfig};
use crate::field::{CoeffDump, FieldDump, SpectralField};
use crate::kernels::KernelSpec;
use crate::scalar::{lit, Scalar};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub kernel: KernelConfig,
    pub initial_data: InitialDataConfig,
    pub simulation: SimulationConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(toml::from_str(&text)?)
    }

    pub fn build_kernel<T: Scalar>(&self) -> Result<KernelSpec<T>> {
        self.kernel.build()
    }

    /// Initial data in the noncanonical u-variable at the run truncation.
    pub fn build_initial_data<T: Scalar>(&self) -> Result<SpectralField<T>> {
        self.initial_data.build(self.simulation.n)
    }

    pub fn sim_config<T: Scalar>(&self) -> Result<SimConfig<T>> {
        let cfg = self.simulation.to_sim_config()?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    /// Builtin name (burgers, hunter_saxton, surface, rayleigh, compacton,
    /// power) or any identifier when `expression` is given.
    pub name: String,
    /// Rayleigh speed ratio and elastic constants.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Power-family exponent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    /// Custom kernel expression in k, m, n, i (see the kernel expression
    /// language); requires `degree`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expression: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<f64>,
    /// Known bound constant C, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Range for the symmetry certification gate before a run.
    #[serde(default = "default_cert_range")]
    pub certification_range: i64,
}

fn default_cert_range() -> i64 {
    30
}

impl KernelConfig {
    pub fn named(name: &str) -> Self {
        KernelConfig {
            name: name.into(),
            r: None,
            alpha: None,
            beta: None,
            gamma: None,
            p: None,
            expression: None,
            degree: None,
            c: None,
            certification_range: default_cert_range(),
        }
    }

    pub fn build<T: Scalar>(&self) -> Result<KernelSpec<T>> {
        if let Some(expr) = &self.expression {
            let degree = self.degree.ok_or_else(|| {
                Error::Config("custom kernels must declare their homogeneity degree".into())
            })?;
            return KernelSpec::custom(self.name.clone(), expr, lit(degree), self.c.map(lit));
        }
        match self.name.as_str() {
            "burgers" => Ok(KernelSpec::burgers()),
            "hunter_saxton" => Ok(KernelSpec::hunter_saxton()),
            "surface" => Ok(KernelSpec::surface()),
            "compacton" => Ok(KernelSpec::compacton()),
            "power" => {
                let p = self
                    .p
                    .ok_or_else(|| Error::Config("power kernel requires parameter p".into()))?;
                Ok(KernelSpec::power(p))
            }
            "rayleigh" => {
                let get = |name: &str, v: Option<f64>| {
                    v.ok_or_else(|| {
                        Error::Config(format!("rayleigh kernel requires parameter {name}"))
                    })
                };
                KernelSpec::rayleigh(
                    lit(get("r", self.r)?),
                    lit(get("alpha", self.alpha)?),
                    lit(get("beta", self.beta)?),
                    lit(get("gamma", self.gamma)?),
                )
            }
            other => Err(Error::Config(format!(
                "unknown kernel `{other}`; builtins are burgers, hunter_saxton, surface, \
                 rayleigh, compacton, power, or give a custom `expression`"
            ))),
        }
    }
}

/// Which variable the supplied coefficients describe. The φ-form is
/// converted with |∂x|^{1/2} on input, so a single u-form integrator serves
/// both forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DataForm {
    #[default]
    U,
    Phi,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialDataConfig {
    /// Named profile; currently "sine" (amplitude · sin(wavenumber · x)).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wavenumber: Option<usize>,
    /// Inline coefficient list.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<CoeffDump>>,
    /// Path to a JSON field dump.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs_path: Option<PathBuf>,
    #[serde(default)]
    pub form: DataForm,
}

impl InitialDataConfig {
    pub fn sine(amplitude: f64, wavenumber: usize) -> Self {
        InitialDataConfig {
            profile: Some("sine".into()),
            amplitude: Some(amplitude),
            wavenumber: Some(wavenumber),
            coeffs: None,
            coeffs_path: None,
            form: DataForm::U,
        }
    }

    pub fn build<T: Scalar>(&self, n: usize) -> Result<SpectralField<T>> {
        let sources = self.profile.is_some() as u8
            + self.coeffs.is_some() as u8
            + self.coeffs_path.is_some() as u8;
        if sources != 1 {
            return Err(Error::Config(
                "initial_data needs exactly one of: profile, coeffs, coeffs_path".into(),
            ));
        }
        let field: SpectralField<T> = if let Some(profile) = &self.profile {
            match profile.as_str() {
                "sine" => {
                    let amplitude = self.amplitude.ok_or_else(|| {
                        Error::Config("sine profile requires an amplitude".into())
                    })?;
                    let wavenumber = self.wavenumber.unwrap_or(1);
                    SpectralField::sine(n, lit(amplitude), wavenumber)?
                }
                other => {
                    return Err(Error::Config(format!(
                        "unknown initial-data profile `{other}`; available: sine"
                    )))
                }
            }
        } else if let Some(coeffs) = &self.coeffs {
            let dump = FieldDump {
                n,
                coeffs: coeffs.clone(),
            };
            SpectralField::from_dump(&dump)?
        } else {
            let path = self.coeffs_path.as_ref().expect("checked above");
            let text = std::fs::read_to_string(path)?;
            let dump: FieldDump = serde_json::from_str(&text)?;
            SpectralField::from_dump(&dump)?.resize(n)
        };
        Ok(match self.form {
            DataForm::U => field,
            DataForm::Phi => field.fractional_power(lit(0.5)),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_integrator")]
    pub integrator: String,
    #[serde(default = "default_tracked_s")]
    pub tracked_s: Vec<f64>,
    #[serde(default = "default_output_every")]
    pub output_every: usize,
    /// Absolute bound on the largest tracked norm; default 1e6 times the
    /// initial value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blowup_norm_threshold: Option<f64>,
}

fn default_integrator() -> String {
    "rk4".into()
}

fn default_tracked_s() -> Vec<f64> {
    vec![0.0, 2.0]
}

fn default_output_every() -> usize {
    10
}

impl SimulationConfig {
    fn to_sim_config<T: Scalar>(&self) -> Result<SimConfig<T>> {
        let integrator = match self.integrator.as_str() {
            "rk4" => Integrator::Rk4,
            other => {
                return Err(Error::Config(format!(
                    "unknown integrator `{other}`; available: rk4"
                )))
            }
        };
        Ok(SimConfig {
            n: self.n,
            dt: lit(self.dt),
            t_end: lit(self.t_end),
            integrator,
            tracked_s: self.tracked_s.iter().map(|&s| lit(s)).collect(),
            output_every: self.output_every,
            blowup_norm_threshold: self.blowup_norm_threshold.map(lit),
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
    /// Write a JSON field snapshot every this many steps (0 = none).
    #[serde(default)]
    pub snapshot_every: usize,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: default_out_dir(),
            snapshot_every: 0,
        }
    }
}

/// Tolerances for the oracle-compare command; defaults match the standing
/// acceptance bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default = "default_rhs_tol")]
    pub rhs_tolerance: f64,
    #[serde(default = "default_rhs_fields")]
    pub rhs_random_fields: usize,
    #[serde(default = "default_rhs_n")]
    pub rhs_truncation: usize,
    #[serde(default = "default_linf_tol")]
    pub burgers_linf_tolerance: f64,
    #[serde(default = "default_l2_tol")]
    pub hunter_saxton_l2_tolerance: f64,
}

fn default_rhs_tol() -> f64 {
    1e-12
}
fn default_rhs_fields() -> usize {
    100
}
fn default_rhs_n() -> usize {
    32
}
fn default_linf_tol() -> f64 {
    1e-6
}
fn default_l2_tol() -> f64 {
    1e-8
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            rhs_tolerance: default_rhs_tol(),
            rhs_random_fields: default_rhs_fields(),
            rhs_truncation: default_rhs_n(),
            burgers_linf_tolerance: default_linf_tol(),
            hunter_saxton_l2_tolerance: default_l2_tol(),
        }
    }
}

/// Record of one CLI invocation; written even when the run exits on blow-up.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub started: String,
    pub finished: String,
    pub exit_status: i32,
    pub artifacts: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupManifest>,
    pub config: RunConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlowupManifest {
    pub t: f64,
    pub step: usize,
    pub reason: String,
}
