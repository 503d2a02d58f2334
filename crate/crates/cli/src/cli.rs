//! Command-line definitions and the conversions from raw flags to library
//! inputs (units, grids, tolerance overrides).

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dkgreen::coulomb_chain::{CoulombSystem, CoulombSystemInput};
use dkgreen::kg_oracle::IntegratorConfig;
use dkgreen::verify::{linear_grid, log_grid, Tolerances};

/// Prefix of the environment variables that override tolerances.
pub const TOLERANCE_ENV_PREFIX: &str = "DKGREEN_TOL_";

#[derive(Debug, Parser)]
#[command(
    name = "dkgreen",
    version,
    about = "Relativistic Coulomb fixed-energy amplitude via the oscillator mapping"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound-state energies from the poles of the Coulomb amplitude.
    Spectrum(SpectrumArgs),
    /// Coulomb amplitude at one pair of radii or on a grid.
    Green(GreenArgs),
    /// Coulomb, Morse and oscillator parameter dictionary.
    Map(MapArgs),
    /// Effective potential generated by a coordinate map.
    Effpot(EffpotArgs),
    /// Closed-form amplitude against the numerical Wronskian construction.
    OracleCompare(OracleArgs),
    /// Run every verification suite; exits nonzero if any check fails.
    VerifyAll(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Destination file, written atomically; standard output if omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// Fine-structure constant.
    #[arg(long, default_value_t = 7.2973525693e-3)]
    pub alpha: f64,
    /// Angular momentum.
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    /// Spatial dimension.
    #[arg(long, default_value_t = 3)]
    pub dim: u32,
    /// Energy as a fraction of the rest energy.
    #[arg(long, conflicts_with = "energy", allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    /// Energy with a unit tag: eV, keV, MeV or mc2 (e.g. `459.9keV`).
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<String>,
    /// Rest energy used to convert tagged energies (default: electron).
    #[arg(long, default_value = "510998.95069eV")]
    pub rest_energy: String,
    /// Read the system from a JSON file (e.g. the output of `map`); the
    /// other system flags are then ignored.
    #[arg(long, conflicts_with_all = ["epsilon", "energy"])]
    pub system: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Log,
    Linear,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Smallest grid point.
    #[arg(long)]
    pub grid_min: Option<f64>,
    /// Largest grid point.
    #[arg(long)]
    pub grid_max: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    pub grid_count: Option<usize>,
    /// Grid spacing.
    #[arg(long, value_enum)]
    pub grid_scale: Option<Scale>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: Scale,
}

impl GridArgs {
    /// Merge the flags over `default`, then validate.
    pub fn resolve(&self, default: GridSpec) -> Result<GridSpec> {
        let g = GridSpec {
            min: self.grid_min.unwrap_or(default.min),
            max: self.grid_max.unwrap_or(default.max),
            count: self.grid_count.unwrap_or(default.count),
            scale: self.grid_scale.unwrap_or(default.scale),
        };
        g.validate()?;
        Ok(g)
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            bail!("grid bounds must be finite");
        }
        if self.scale == Scale::Log && !(self.min > 0.0) {
            bail!("grid_min must be positive for a logarithmic grid (got {})", self.min);
        }
        if self.count == 0 {
            bail!("grid_count must be at least 1");
        }
        if self.max < self.min {
            bail!("grid_max {} is below grid_min {}", self.max, self.min);
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        match self.scale {
            Scale::Log => log_grid(self.min, self.max, self.count),
            Scale::Linear => linear_grid(self.min, self.max, self.count),
        }
    }
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Highest radial quantum number.
    #[arg(long, default_value_t = 3)]
    pub nmax: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GreenArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Outer radius (natural units ħ/(m c)); requires --ra.
    #[arg(long, requires = "ra")]
    pub rb: Option<f64>,
    /// Inner radius; requires --rb.
    #[arg(long, requires = "rb")]
    pub ra: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapKind {
    Identity,
    Exp,
    Log,
}

#[derive(Debug, Args)]
pub struct EffpotArgs {
    /// Coordinate map r = h(q).
    #[arg(long, value_enum, default_value_t = MapKind::Exp)]
    pub map: MapKind,
    /// Gauge parameter.
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// Particle mass.
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Seed of the random parameter draws.
    #[arg(long, default_value_t = dkgreen::verify::DEFAULT_SEED)]
    pub seed: u64,
    /// JSON file with tolerance overrides (partial blocks allowed).
    #[arg(long)]
    pub tolerances: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Parse `<number><unit>` with unit one of eV, keV, MeV, mc2, returning
/// `(value, unit)`.
pub fn parse_tagged_energy(text: &str) -> Result<(f64, &'static str)> {
    const UNITS: [&str; 4] = ["keV", "MeV", "eV", "mc2"];
    let t = text.trim();
    let unit = UNITS
        .into_iter()
        .find(|u| t.ends_with(u))
        .ok_or_else(|| anyhow!("energy `{text}` needs a unit tag: eV, keV, MeV or mc2"))?;
    let number = t[..t.len() - unit.len()].trim();
    let value: f64 = number
        .parse()
        .with_context(|| format!("energy `{text}`: cannot parse `{number}` as a number"))?;
    Ok((value, unit))
}

fn ev_per_unit(unit: &str) -> f64 {
    match unit {
        "keV" => 1e3,
        "MeV" => 1e6,
        _ => 1.0,
    }
}

/// Energy ratio `E / (m c²)` from a tagged energy and a tagged rest energy.
pub fn energy_ratio(energy: &str, rest_energy: &str) -> Result<f64> {
    let (value, unit) = parse_tagged_energy(energy)?;
    if unit == "mc2" {
        return Ok(value);
    }
    let (rest, rest_unit) = parse_tagged_energy(rest_energy)?;
    if rest_unit == "mc2" {
        bail!("rest energy must be given in eV, keV or MeV");
    }
    let rest_ev = rest * ev_per_unit(rest_unit);
    if !(rest_ev > 0.0) {
        bail!("rest energy must be positive");
    }
    Ok(value * ev_per_unit(unit) / rest_ev)
}

fn read_system(path: &Path) -> Result<CoulombSystem> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let inner = value.get("coulomb").cloned().unwrap_or(value);
    let input: CoulombSystemInput = serde_json::from_value(inner).context("system JSON")?;
    Ok(CoulombSystem::try_from(input)?)
}

impl SystemArgs {
    /// The system described by the flags; the energy is required.
    pub fn system(&self) -> Result<CoulombSystem> {
        if let Some(path) = &self.system {
            return read_system(path);
        }
        let eps = match (&self.epsilon, &self.energy) {
            (Some(e), _) => *e,
            (None, Some(text)) => energy_ratio(text, &self.rest_energy)?,
            (None, None) => bail!("an energy is required: pass --epsilon or --energy"),
        };
        Ok(CoulombSystem::new(eps, self.alpha, self.l, self.dim)?)
    }

    /// The system with energy defaulting to zero, for energy-independent
    /// commands.
    pub fn template(&self) -> Result<CoulombSystem> {
        if self.system.is_some() || self.epsilon.is_some() || self.energy.is_some() {
            return self.system();
        }
        Ok(CoulombSystem::new(0.0, self.alpha, self.l, self.dim)?)
    }
}

fn env_override(key: &str) -> Result<Option<f64>> {
    let name = format!("{TOLERANCE_ENV_PREFIX}{}", key.to_ascii_uppercase());
    match std::env::var(&name) {
        Ok(text) => {
            let v: f64 = text
                .trim()
                .parse()
                .with_context(|| format!("{name} = `{text}` is not a number"))?;
            if !(v > 0.0) {
                bail!("{name} must be positive");
            }
            Ok(Some(v))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(anyhow!("{name}: {e}")),
    }
}

/// Check tolerances: defaults, then the optional JSON file, then
/// `DKGREEN_TOL_<FIELD>` environment variables.
pub fn tolerances(file: Option<&Path>) -> Result<Tolerances> {
    let base = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => Tolerances::default(),
    };
    let mut value = serde_json::to_value(base)?;
    if let Some(map) = value.as_object_mut() {
        for (key, slot) in map.iter_mut() {
            if let Some(v) = env_override(key)? {
                *slot = serde_json::json!(v);
            }
        }
    }
    Ok(serde_json::from_value(value)?)
}

/// Integrator settings, with `DKGREEN_TOL_RTOL` / `DKGREEN_TOL_ATOL`
/// overrides.
pub fn integrator() -> Result<IntegratorConfig> {
    let mut cfg = IntegratorConfig::default();
    if let Some(v) = env_override("rtol")? {
        cfg.rtol = v;
    }
    if let Some(v) = env_override("atol")? {
        cfg.atol = v;
    }
    Ok(cfg)
}
