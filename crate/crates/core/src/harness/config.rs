//! Case descriptions, read from TOML with one table per concern.
//!
//! ```toml
//! [problem]
//! kind = "diffusion"
//! alpha = 0.01
//!
//! [initial]
//! kind = "gaussian"
//! delta = 0.1
//!
//! [grid]
//! n = 100
//!
//! [scheme]
//! order = 4
//!
//! [wave]
//! a = 2.0
//!
//! [run]
//! t_end = 0.1
//! ell = 0.1
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinetic::WaveModel;
use crate::models::ProblemSpec;
use crate::spatial::SpaceOperator;
use crate::timeint::SchemeConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    #[serde(default)]
    pub name: String,
    pub problem: ProblemConfig,
    pub initial: InitialCondition,
    pub grid: GridConfig,
    #[serde(default)]
    pub scheme: SchemeSection,
    pub wave: WaveConfig,
    pub run: RunConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProblemConfig {
    Diffusion {
        alpha: f64,
    },
    Advection {
        c: f64,
        alpha: f64,
    },
    Burgers {
        alpha: f64,
    },
    NavierStokes {
        #[serde(default = "default_gamma")]
        gamma: f64,
        mu: f64,
        prandtl: f64,
    },
}

fn default_gamma() -> f64 {
    1.4
}

impl ProblemConfig {
    pub fn spec(&self) -> Result<ProblemSpec> {
        match *self {
            ProblemConfig::Diffusion { alpha } => ProblemSpec::diffusion(alpha),
            ProblemConfig::Advection { c, alpha } => ProblemSpec::advection(c, alpha),
            ProblemConfig::Burgers { alpha } => ProblemSpec::burgers(alpha),
            ProblemConfig::NavierStokes { gamma, mu, prandtl } => ProblemSpec::navier_stokes(gamma, mu, prandtl),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialCondition {
    /// Uniform state.
    Constant { value: Vec<f64> },
    /// `offset + amplitude · exp(−(x − center)²/δ²)`.
    Gaussian {
        delta: f64,
        #[serde(default = "default_gauss_amplitude")]
        amplitude: f64,
        #[serde(default = "one")]
        offset: f64,
        #[serde(default = "half")]
        center: f64,
    },
    /// `mean + amplitude · sin(2πx/L)`.
    Sine { mean: f64, amplitude: f64 },
    /// `−(2α/δ) tanh((x − ½) · sharpness/δ)` — a steepened steady Burgers profile.
    TanhShock {
        delta: f64,
        #[serde(default = "default_sharpness")]
        sharpness: f64,
    },
    /// Stationary Navier-Stokes shock, smeared by `tanh(x/2δ)` between the jump states.
    RankineHugoniot { mach: f64 },
    /// Downstream acoustic eigenmode on a uniform flow at Mach `mach`.
    Acoustic {
        #[serde(default = "two_pi")]
        k: f64,
        #[serde(default = "default_acoustic_amplitude")]
        amplitude: f64,
        #[serde(default = "one")]
        rho: f64,
        #[serde(default = "one")]
        pressure: f64,
        #[serde(default = "two")]
        mach: f64,
    },
}

fn default_gauss_amplitude() -> f64 {
    0.01
}
fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}
fn half() -> f64 {
    0.5
}
fn default_sharpness() -> f64 {
    10.0
}
fn two_pi() -> f64 {
    2.0 * std::f64::consts::PI
}
fn default_acoustic_amplitude() -> f64 {
    1e-5
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    #[default]
    Periodic,
    Dirichlet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    /// Number of points. Shock cases may give `points_per_width` instead.
    pub n: Option<usize>,
    pub length: Option<f64>,
    pub origin: Option<f64>,
    #[serde(default)]
    pub boundary: BoundaryKind,
    /// Dirichlet states; default to the initial condition at the domain ends.
    pub left: Option<Vec<f64>>,
    pub right: Option<Vec<f64>>,
    /// Shock cases: `Δx = δ / points_per_width`.
    pub points_per_width: Option<f64>,
    /// Shock cases: domain length in shock widths, centred on the shock.
    pub widths: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSection {
    pub order: usize,
    pub iterations: Option<usize>,
    pub space: Option<SpaceName>,
    pub cfl: Option<f64>,
}

impl Default for SchemeSection {
    fn default() -> Self {
        Self { order: 4, iterations: None, space: None, cfl: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceName {
    Dx1,
    Dx2,
    Dx4,
}

impl From<SpaceName> for SpaceOperator {
    fn from(s: SpaceName) -> Self {
        match s {
            SpaceName::Dx1 => SpaceOperator::Dx1,
            SpaceName::Dx2 => SpaceOperator::Dx2,
            SpaceName::Dx4 => SpaceOperator::Dx4,
        }
    }
}

impl SchemeSection {
    pub fn scheme(&self) -> Result<SchemeConfig> {
        let mut s = SchemeConfig::for_order(self.order).map_err(|e| Error::Config(e.to_string()))?;
        if let Some(m) = self.iterations {
            s.iterations = m;
        }
        if let Some(sp) = self.space {
            s.space = sp.into();
        }
        if let Some(c) = self.cfl {
            s.cfl = c;
        }
        s.validate()?;
        Ok(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct WaveConfig {
    pub a: Option<f64>,
    pub ratio: Option<f64>,
}

impl WaveConfig {
    pub fn model(&self) -> Result<WaveModel> {
        match (self.a, self.ratio) {
            (Some(a), None) => WaveModel::constant(a),
            (None, Some(r)) => WaveModel::adaptive(r),
            _ => Err(Error::Config("[wave] needs exactly one of `a` or `ratio`".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub t_end: f64,
    #[serde(default)]
    pub snapshots: Vec<f64>,
    pub steady_tol: Option<f64>,
    /// Characteristic length for the reported Knudsen number.
    pub ell: Option<f64>,
    #[serde(default = "one")]
    pub rho_c: f64,
}

impl CaseConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::from_toml_with_overrides(text, &[])
    }

    /// Parse, then apply `section.key=value` overrides before validation.
    /// Values are read as TOML (`0.5`, `[1.0]`, `"dx2"`); bare words become strings
    /// and an empty value (`wave.ratio=`) removes the key.
    pub fn from_toml_with_overrides(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e| Error::Config(format!("invalid TOML: {e}")))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let cfg: CaseConfig = table.try_into().map_err(|e| Error::Config(format!("invalid case: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_with_overrides(&text, overrides)?;
        if cfg.name.is_empty() {
            cfg.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Apply overrides to an already-built case.
    pub fn with_overrides(&self, overrides: &[String]) -> Result<Self> {
        let text = self.to_toml()?;
        Self::from_toml_with_overrides(&text, overrides)
    }

    pub fn validate(&self) -> Result<()> {
        self.problem.spec()?;
        self.scheme.scheme()?;
        self.wave.model()?;
        if !(self.run.t_end.is_finite() && self.run.t_end >= 0.0) {
            return Err(Error::Config(format!("t_end must be non-negative, got {}", self.run.t_end)));
        }
        if let Some(l) = self.run.ell {
            if !(l > 0.0) {
                return Err(Error::Config(format!("ell must be positive, got {l}")));
            }
        }
        if !(self.run.rho_c > 0.0) {
            return Err(Error::Config(format!("rho_c must be positive, got {}", self.run.rho_c)));
        }
        let ns = matches!(self.problem, ProblemConfig::NavierStokes { .. });
        let needs_ns =
            matches!(self.initial, InitialCondition::RankineHugoniot { .. } | InitialCondition::Acoustic { .. });
        if needs_ns && !ns {
            return Err(Error::Config("this initial condition needs the Navier-Stokes model".into()));
        }
        if ns && !needs_ns && !matches!(self.initial, InitialCondition::Constant { .. }) {
            return Err(Error::Config("this initial condition is scalar; use a scalar problem".into()));
        }
        if self.grid.n.is_none() && self.grid.points_per_width.is_none() {
            return Err(Error::Config("[grid] needs `n` (or `points_per_width` for shocks)".into()));
        }
        Ok(())
    }
}

fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{assignment}` is not of the form key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    let value: Option<toml::Value> = if raw.is_empty() {
        None
    } else {
        Some(match format!("v = {raw}").parse::<toml::Table>() {
            Ok(mut t) => t.remove("v").expect("parsed key"),
            Err(_) => toml::Value::String(raw.to_string()),
        })
    };
    let mut parts: Vec<&str> = key.split('.').collect();
    let last =
        parts.pop().filter(|s| !s.is_empty()).ok_or_else(|| Error::Config(format!("empty key in `{assignment}`")))?;
    let mut cur = table;
    for p in parts {
        let entry = cur.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry.as_table_mut().ok_or_else(|| Error::Config(format!("`{p}` in `{key}` is not a table")))?;
    }
    match value {
        Some(v) => cur.insert(last.to_string(), v),
        None => cur.remove(last),
    };
    Ok(())
}
