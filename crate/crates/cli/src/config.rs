//! Sweep configuration: a TOML file with `[model]`, `[baths]`, `[solver]`,
//! `[sweep]` and `[output]` tables. See the README for the full grammar.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use serde::Deserialize;

use qjunction::rabi::{RabiParams, DEFAULT_FOCK_CUTOFF, DEFAULT_RETAINED_LEVELS};

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub model: ModelConfig,
    #[serde(default)]
    pub baths: BathConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    pub sweep: SweepSpec,
    pub output: OutputConfig,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelConfig {
    /// Qubit–oscillator Rabi junction.
    Rabi {
        epsilon: f64,
        delta: f64,
        #[serde(default = "one")]
        omega_r: f64,
        g: f64,
        #[serde(default = "default_fock")]
        fock_cutoff: usize,
        #[serde(default = "default_levels")]
        levels: usize,
    },
    /// Bare qubit coupled through σ_z.
    Qubit { epsilon: f64, delta: f64 },
    /// Explicit eigenfrequencies and coupling matrices in the eigenbasis.
    Junction {
        omega: Vec<f64>,
        q_l: Vec<Vec<f64>>,
        q_r: Vec<Vec<f64>>,
    },
    /// Spin-degenerate single-level dot between fermionic leads.
    Dot {
        delta: f64,
        gamma_l: f64,
        gamma_r: f64,
    },
}

fn one() -> f64 {
    1.0
}

fn default_fock() -> usize {
    DEFAULT_FOCK_CUTOFF
}

fn default_levels() -> usize {
    DEFAULT_RETAINED_LEVELS
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum StatisticsConfig {
    Bose,
    Fermi,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_omega_c")]
    pub omega_c: f64,
    pub temperature: Option<f64>,
    pub beta: Option<f64>,
    /// Relative temperature offset of L for the currents, T_L = T(1 + bias).
    #[serde(default = "default_bias")]
    pub bias: f64,
    pub statistics: Option<StatisticsConfig>,
}

fn default_alpha() -> f64 {
    1e-3
}

fn default_omega_c() -> f64 {
    5.0
}

fn default_bias() -> f64 {
    0.01
}

impl Default for BathConfig {
    fn default() -> Self {
        Self {
            alpha: default_alpha(),
            omega_c: default_omega_c(),
            temperature: None,
            beta: None,
            bias: default_bias(),
            statistics: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SecularConfig {
    Full,
    Partial,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Kappa2MethodConfig {
    Analytic,
    FiniteDifference,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "default_mode")]
    pub mode: SecularConfig,
    #[serde(default = "default_cluster")]
    pub cluster_factor: f64,
    #[serde(default = "yes")]
    pub lamb_shift: bool,
    /// Add the low-temperature fourth-order conductance; on for bosonic
    /// models unless set.
    pub kappa4: Option<bool>,
    pub kappa2_method: Option<Kappa2MethodConfig>,
}

fn default_mode() -> SecularConfig {
    SecularConfig::Partial
}

fn default_cluster() -> f64 {
    10.0
}

fn yes() -> bool {
    true
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            mode: default_mode(),
            cluster_factor: default_cluster(),
            lamb_shift: true,
            kappa4: None,
            kappa2_method: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
pub enum Variable {
    #[serde(rename = "T")]
    Temperature,
    #[serde(rename = "epsilon")]
    Epsilon,
    #[serde(rename = "delta")]
    Delta,
    #[serde(rename = "g")]
    G,
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variable::Temperature => "T",
            Variable::Epsilon => "epsilon",
            Variable::Delta => "delta",
            Variable::G => "g",
        })
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Linear,
    Log,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: Variable,
    #[serde(default = "default_grid")]
    pub grid: GridKind,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

fn default_grid() -> GridKind {
    GridKind::Linear
}

impl SweepSpec {
    /// Grid values in sweep order.
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let s = i as f64 / last;
                match self.grid {
                    GridKind::Linear => self.start + (self.stop - self.start) * s,
                    GridKind::Log => {
                        (self.start.ln() + (self.stop.ln() - self.start.ln()) * s).exp()
                    }
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub csv: PathBuf,
    pub svg: Option<PathBuf>,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    pub fn is_fermionic(&self) -> bool {
        matches!(self.model, ModelConfig::Dot { .. })
    }

    pub fn kappa4_enabled(&self) -> bool {
        self.solver.kappa4.unwrap_or(!self.is_fermionic())
    }

    /// Temperature at a grid point.
    pub fn temperature_at(&self, value: f64) -> f64 {
        match self.sweep.variable {
            Variable::Temperature => value,
            _ => match (self.baths.temperature, self.baths.beta) {
                (Some(t), _) => t,
                (None, Some(b)) => 1.0 / b,
                (None, None) => unreachable!("validated"),
            },
        }
    }

    /// Model block with the sweep variable substituted.
    pub fn model_at(&self, value: f64) -> ModelConfig {
        let mut m = self.model.clone();
        match (&mut m, self.sweep.variable) {
            (_, Variable::Temperature) => {}
            (
                ModelConfig::Rabi { epsilon, .. } | ModelConfig::Qubit { epsilon, .. },
                Variable::Epsilon,
            ) => *epsilon = value,
            (
                ModelConfig::Rabi { delta, .. }
                | ModelConfig::Qubit { delta, .. }
                | ModelConfig::Dot { delta, .. },
                Variable::Delta,
            ) => *delta = value,
            (ModelConfig::Rabi { g, .. }, Variable::G) => *g = value,
            _ => unreachable!("validated"),
        }
        m
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.sweep;
        ensure!(s.points >= 1, "sweep needs at least one point");
        ensure!(
            s.start.is_finite() && s.stop.is_finite(),
            "sweep endpoints must be finite"
        );
        if s.grid == GridKind::Log {
            ensure!(
                s.start > 0.0 && s.stop > 0.0,
                "log grid needs positive endpoints"
            );
        }
        let applicable = match (&self.model, s.variable) {
            (_, Variable::Temperature) => true,
            (ModelConfig::Rabi { .. }, _) => true,
            (ModelConfig::Qubit { .. }, Variable::Epsilon | Variable::Delta) => true,
            (ModelConfig::Dot { .. }, Variable::Delta) => true,
            _ => false,
        };
        ensure!(
            applicable,
            "sweep variable {} does not apply to this model kind",
            s.variable
        );

        let b = &self.baths;
        ensure!(
            b.alpha > 0.0 && b.alpha.is_finite(),
            "alpha must be positive"
        );
        ensure!(
            b.omega_c > 0.0 && b.omega_c.is_finite(),
            "omega_c must be positive"
        );
        ensure!(b.bias > 0.0 && b.bias.is_finite(), "bias must be positive");
        match (s.variable, b.temperature, b.beta) {
            (Variable::Temperature, None, None) => {}
            (Variable::Temperature, _, _) => {
                bail!("temperature is the sweep variable; remove baths.temperature/beta")
            }
            (_, Some(t), None) => ensure!(t > 0.0 && t.is_finite(), "temperature must be positive"),
            (_, None, Some(beta)) => {
                ensure!(beta > 0.0 && beta.is_finite(), "beta must be positive")
            }
            (_, Some(_), Some(_)) => bail!("give either baths.temperature or baths.beta, not both"),
            (_, None, None) => bail!("baths.temperature or baths.beta is required"),
        }
        let expected = if self.is_fermionic() {
            StatisticsConfig::Fermi
        } else {
            StatisticsConfig::Bose
        };
        if let Some(st) = b.statistics {
            ensure!(
                st == expected,
                "statistics {st:?} do not match the model kind"
            );
        }

        let sv = &self.solver;
        ensure!(
            sv.cluster_factor >= 0.0,
            "cluster_factor must be non-negative"
        );
        if self.is_fermionic() {
            ensure!(
                sv.kappa4 != Some(true),
                "the dot has no fourth-order conductance"
            );
        }
        if sv.mode == SecularConfig::Partial
            && sv.kappa2_method == Some(Kappa2MethodConfig::Analytic)
        {
            bail!("partial secular mode supports kappa2_method = \"finite-difference\" only");
        }

        let values = s.values();
        if s.variable == Variable::Temperature {
            ensure!(
                values.iter().all(|&t| t > 0.0),
                "temperatures must be positive"
            );
        }
        for &v in &values {
            self.check_model(&self.model_at(v))?;
        }
        Ok(())
    }

    fn check_model(&self, m: &ModelConfig) -> Result<()> {
        match m {
            ModelConfig::Rabi {
                epsilon,
                delta,
                omega_r,
                g,
                fock_cutoff,
                levels,
            } => {
                ensure!(
                    epsilon.is_finite() && delta.is_finite(),
                    "qubit parameters must be finite"
                );
                RabiParams::new(*epsilon, *delta, *omega_r, *g)
                    .with_levels(*levels)
                    .with_fock_cutoff(*fock_cutoff)
                    .validate()?;
            }
            ModelConfig::Qubit { epsilon, delta } => ensure!(
                epsilon.is_finite() && delta.is_finite() && epsilon.hypot(*delta) > 0.0,
                "qubit needs a finite nonzero splitting"
            ),
            ModelConfig::Junction { omega, q_l, q_r } => {
                let n = omega.len();
                ensure!(n >= 2, "junction needs at least two levels");
                for (name, q) in [("q_l", q_l), ("q_r", q_r)] {
                    ensure!(
                        q.len() == n && q.iter().all(|r| r.len() == n),
                        "{name} must be {n}x{n}"
                    );
                }
            }
            ModelConfig::Dot {
                delta,
                gamma_l,
                gamma_r,
            } => {
                ensure!(delta.is_finite(), "dot level must be finite");
                ensure!(
                    *gamma_l >= 0.0 && *gamma_r >= 0.0 && gamma_l + gamma_r > 0.0,
                    "dot couplings must be non-negative and not both zero"
                );
            }
        }
        Ok(())
    }
}
