//! Run configuration: command-line flags layered over an optional TOML file.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use coamen::semidirect::{parse_interval, HalfLineGrid, PairClass};
use coamen::LanczosConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Environment variable naming a TOML file of default settings.
pub const CONFIG_ENV: &str = "COAMEN_CONFIG";

/// Default certification tolerance.
pub const DEFAULT_TOL: f64 = 1e-2;

#[derive(Debug, Parser)]
#[command(
    name = "coamen",
    version,
    about = "Spectral amenability tests for quantum-group duals"
)]
pub struct Cli {
    /// TOML file with default `tol`, `seed`, `max_iter`, `krylov_dim`.
    #[arg(long, env = CONFIG_ENV, global = true)]
    pub config: Option<PathBuf>,
    /// Certification tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for Lanczos start vectors.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,
    #[arg(long, global = true)]
    pub krylov_dim: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Also write `<output>.eigenvalues.csv` and `<output>.trace.csv`.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Record wall time in the report (breaks byte-identical reruns).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fusion-ring coamenability test.
    Fusion(FusionArgs),
    /// Kesten test on a Cayley graph.
    Walk(WalkArgs),
    /// Interval test on the `R ⋊ Z2` half-line model.
    Semidirect(SemidirectArgs),
    /// Følner-box test on the bicrossed lattice model.
    Bicrossed(BicrossedArgs),
    /// Spectral-radius sweep over truncation sizes.
    Sweep(SweepArgs),
    /// Check ring axioms or a group action without building operators.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct RingArgs {
    /// Built-in fusion rule.
    #[arg(long, value_enum)]
    pub ring: Option<RingRule>,
    /// Dimension of the generating object for the rule.
    #[arg(long = "N")]
    pub n: Option<f64>,
    /// JSON ring descriptor file.
    #[arg(long, conflicts_with = "ring")]
    pub descriptor: Option<PathBuf>,
    /// Labels of Omega; repeat or separate with commas.
    #[arg(long, value_delimiter = ',')]
    pub omega: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingRule {
    FreeSu2,
}

#[derive(Debug, Args)]
pub struct FusionArgs {
    #[command(flatten)]
    pub ring: RingArgs,
    /// Number of labels kept.
    #[arg(long)]
    pub trunc: usize,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    /// `Z^d:<d>` or `F:<k>`.
    #[arg(long)]
    pub group: String,
    /// Elements of Omega, one per flag (default: generators and inverses).
    #[arg(long)]
    pub omega: Vec<String>,
    /// Ball radii, strictly increasing.
    #[arg(long, value_delimiter = ',', required = true)]
    pub radius: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct SemidirectArgs {
    /// Omega as `a:b`.
    #[arg(long, default_value = "0:1")]
    pub interval: String,
    /// Grid as `h:max_r`.
    #[arg(long)]
    pub grid: String,
    /// Witness windows `[m, 2m]`.
    #[arg(long, value_delimiter = ',')]
    pub witness_m: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct BicrossedArgs {
    /// Lattice bounds B, strictly increasing.
    #[arg(long, value_delimiter = ',', required = true)]
    pub bound: Vec<i64>,
    /// Classes of Omega as `r,r'`; repeat the flag. Default `1,0` and `-1,0`.
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Vec<String>,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepModel {
    Fusion,
    Walk,
    Semidirect,
    Bicrossed,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub model: SweepModel,
    /// Truncation sizes: labels, ball radii, grid cells or lattice bounds.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[command(flatten)]
    pub ring: RingArgs,
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long, default_value = "0:1")]
    pub interval: String,
    /// Right end of the half-line grid; the step is `max_r / size`.
    #[arg(long, default_value_t = 64.0)]
    pub max_r: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Vec<String>,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Ring descriptor to check.
    #[arg(required_unless_present = "group")]
    pub descriptor: Option<PathBuf>,
    /// Group spec whose action axioms to check instead.
    #[arg(long, conflicts_with = "descriptor")]
    pub group: Option<String>,
}

/// Settings a config file may supply.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileDefaults {
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub max_iter: Option<usize>,
    pub krylov_dim: Option<usize>,
}

impl FileDefaults {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum RingSource {
    Rule {
        rule: RingRule,
        #[serde(rename = "N")]
        n: f64,
    },
    Descriptor {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FusionConfig {
    pub ring: RingSource,
    pub omega: Vec<String>,
    pub trunc: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub group: String,
    pub omega: Vec<String>,
    pub radii: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemidirectConfig {
    pub interval: (f64, f64),
    /// `(h, max_r)`.
    pub grid: (f64, f64),
    pub witness_m: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BicrossedConfig {
    pub bounds: Vec<i64>,
    pub omega: Vec<PairClass>,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub model: SweepModel,
    pub sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fusion: Option<(RingSource, Vec<String>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walk: Option<(String, Vec<String>)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semidirect: Option<((f64, f64), f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bicrossed: Option<(Vec<PairClass>, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum ModelConfig {
    Fusion(FusionConfig),
    Walk(WalkConfig),
    Semidirect(SemidirectConfig),
    Bicrossed(BicrossedConfig),
    Sweep(SweepConfig),
}

/// Everything a run depends on; echoed verbatim into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub tolerance: f64,
    pub seed: u64,
    pub max_iter: usize,
    pub krylov_dim: usize,
    pub output_path: Option<PathBuf>,
    pub emit_csv: bool,
    #[serde(default)]
    pub timing: bool,
}

impl RunConfig {
    pub fn lanczos(&self) -> LanczosConfig {
        LanczosConfig {
            max_iter: self.max_iter,
            krylov_dim: self.krylov_dim,
            seed: self.seed,
            ..LanczosConfig::default()
        }
    }

    pub fn check(&self) -> CliResult<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(CliError::Config(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.emit_csv && self.output_path.is_none() {
            return Err(CliError::Config(
                "--csv needs --output to name the CSV files".into(),
            ));
        }
        let increasing = |v: &[usize]| !v.is_empty() && v.windows(2).all(|w| w[0] < w[1]);
        match &self.model {
            ModelConfig::Walk(w) if !increasing(&w.radii) => {
                Err(CliError::Config("radii must be strictly increasing".into()))
            }
            ModelConfig::Sweep(s) if !increasing(&s.sizes) || s.sizes[0] == 0 => Err(
                CliError::Config("sweep sizes must be positive and strictly increasing".into()),
            ),
            _ => Ok(()),
        }
    }
}

fn ring_source(args: &RingArgs) -> CliResult<RingSource> {
    match (&args.descriptor, args.ring) {
        (Some(path), _) => Ok(RingSource::Descriptor { path: path.clone() }),
        (None, Some(rule)) => Ok(RingSource::Rule {
            rule,
            n: args
                .n
                .ok_or_else(|| CliError::Config("--ring free-su2 needs --N".into()))?,
        }),
        (None, None) => Err(CliError::Config("give --ring or --descriptor".into())),
    }
}

fn shifts(specs: &[String]) -> CliResult<Vec<PairClass>> {
    if specs.is_empty() {
        return Ok(vec![
            PairClass { lo: 0, hi: 1 },
            PairClass { lo: -1, hi: 0 },
        ]);
    }
    Ok(specs
        .iter()
        .map(|s| PairClass::parse(s))
        .collect::<coamen::Result<_>>()?)
}

fn interval(spec: &str) -> CliResult<(f64, f64)> {
    Ok(parse_interval(spec)?)
}

impl Cli {
    /// Resolve flags and file defaults into a [`RunConfig`]. `validate` has no
    /// run config and yields `None`.
    pub fn run_config(&self) -> CliResult<Option<RunConfig>> {
        let file = match &self.config {
            Some(p) => FileDefaults::load(p)?,
            None => FileDefaults::default(),
        };
        let base = LanczosConfig::default();
        let model = match &self.command {
            Command::Validate(_) => return Ok(None),
            Command::Fusion(a) => ModelConfig::Fusion(FusionConfig {
                ring: ring_source(&a.ring)?,
                omega: a.ring.omega.clone(),
                trunc: a.trunc,
            }),
            Command::Walk(a) => ModelConfig::Walk(WalkConfig {
                group: a.group.clone(),
                omega: a.omega.clone(),
                radii: a.radius.clone(),
            }),
            Command::Semidirect(a) => {
                let grid = HalfLineGrid::parse(&a.grid)?;
                ModelConfig::Semidirect(SemidirectConfig {
                    interval: interval(&a.interval)?,
                    grid: (grid.step(), grid.max_r()),
                    witness_m: a.witness_m.clone(),
                })
            }
            Command::Bicrossed(a) => ModelConfig::Bicrossed(BicrossedConfig {
                bounds: a.bound.clone(),
                omega: shifts(&a.shift)?,
                p: a.p,
            }),
            Command::Sweep(a) => {
                let mut s = SweepConfig {
                    model: a.model,
                    sizes: a.sizes.clone(),
                    fusion: None,
                    walk: None,
                    semidirect: None,
                    bicrossed: None,
                };
                match a.model {
                    SweepModel::Fusion => {
                        s.fusion = Some((ring_source(&a.ring)?, a.ring.omega.clone()))
                    }
                    SweepModel::Walk => {
                        let group = a
                            .group
                            .clone()
                            .ok_or_else(|| CliError::Config("--model walk needs --group".into()))?;
                        s.walk = Some((group, Vec::new()));
                    }
                    SweepModel::Semidirect => {
                        s.semidirect = Some((interval(&a.interval)?, a.max_r))
                    }
                    SweepModel::Bicrossed => s.bicrossed = Some((shifts(&a.shift)?, a.p)),
                }
                ModelConfig::Sweep(s)
            }
        };
        let cfg = RunConfig {
            model,
            tolerance: self.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            seed: self.seed.or(file.seed).unwrap_or(base.seed),
            max_iter: self.max_iter.or(file.max_iter).unwrap_or(base.max_iter),
            krylov_dim: self
                .krylov_dim
                .or(file.krylov_dim)
                .unwrap_or(base.krylov_dim),
            output_path: self.output.clone(),
            emit_csv: self.csv,
            timing: self.timing,
        };
        cfg.check()?;
        Ok(Some(cfg))
    }
}
