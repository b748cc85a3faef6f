//! JSON run configuration.
//!
//! A config names one pipeline and carries only the blocks that pipeline
//! reads. Unknown keys and blocks belonging to other pipelines are errors.

use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bo_closed::{BoParams, MixtureMode};
use crate::bo_dissipative::DissipativeParams;
use crate::error::{Error, Result};
use crate::grid::{linspace, TimeGrid};
use crate::langevin::{Drive, DriveParams};
use crate::numerics::Tolerances;

pub const SCHEMA: &str = "optomech.run/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    BoUnitary,
    BoDissipative,
    SteadySweep,
    Stability,
}

impl Pipeline {
    pub const ALL: [Pipeline; 4] = [
        Pipeline::BoUnitary,
        Pipeline::BoDissipative,
        Pipeline::SteadySweep,
        Pipeline::Stability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::BoUnitary => "bo-unitary",
            Pipeline::BoDissipative => "bo-dissipative",
            Pipeline::SteadySweep => "steady-sweep",
            Pipeline::Stability => "stability",
        }
    }

    pub fn csv_header(self) -> &'static str {
        match self {
            Pipeline::BoUnitary => "t,n_thermal,negativity",
            Pipeline::BoDissipative => "t,negativity",
            Pipeline::SteadySweep => "delta,nbar,stable,neg_m1m2,neg_m1ca,neg_m1cb",
            Pipeline::Stability => "delta,abscissa,stable",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pipeline::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown pipeline `{s}`")))
    }
}

/// Either an inclusive linear range or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl GridSpec {
    pub fn range(min: f64, max: f64, n: usize) -> Self {
        Self {
            min: Some(min),
            max: Some(max),
            n: Some(n),
            values: None,
        }
    }

    pub fn list(values: Vec<f64>) -> Self {
        Self {
            min: None,
            max: None,
            n: None,
            values: Some(values),
        }
    }

    pub fn points(&self, name: &str) -> Result<Vec<f64>> {
        let out = match (self.min, self.max, self.n, &self.values) {
            (Some(min), Some(max), Some(n), None) => {
                if !(min <= max) || n == 0 {
                    return Err(Error::Config(format!("{name}: need min <= max and n >= 1")));
                }
                linspace(min, max, n)
            }
            (None, None, None, Some(v)) => v.clone(),
            _ => {
                return Err(Error::Config(format!(
                    "{name}: give either min/max/n or values"
                )))
            }
        };
        if out.is_empty() {
            return Err(Error::Config(format!("{name}: grid is empty")));
        }
        if let Some(x) = out.iter().find(|x| !x.is_finite()) {
            return Err(Error::Config(format!("{name}: non-finite grid value {x}")));
        }
        Ok(out)
    }
}

/// Mirror/cavity parameters of the Born-Oppenheimer pipelines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoConfig {
    pub omega: f64,
    pub g: f64,
    pub lambda: f64,
    /// Coherent amplitudes; only `|α|²` enters the branch weights.
    pub alpha_a: f64,
    pub alpha_b: f64,
}

impl BoConfig {
    pub fn params(&self, n_thermal: f64) -> BoParams {
        BoParams {
            omega: self.omega,
            g: self.g,
            lambda: self.lambda,
            alpha_a: Complex64::new(self.alpha_a, 0.0),
            alpha_b: Complex64::new(self.alpha_b, 0.0),
            n_thermal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DissipationConfig {
    pub kappa: f64,
    pub gamma: f64,
    #[serde(default)]
    pub n_bath: f64,
    /// Initial mirror occupancy.
    #[serde(default)]
    pub n_thermal: f64,
}

/// Operating point of the driven pipelines. The detuning and bath occupancy
/// come from the sweep grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    pub omega: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub gamma_m: f64,
    pub coupling: CouplingConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum CouplingConfig {
    /// Effective couplings; the grid detuning sets `Δ_a = Δ_b`.
    Effective { g_a: f64, g_b: f64 },
    /// Laser drive; the grid detuning sets the bare `Δ̃`.
    Bare { eta: f64, g: f64 },
}

impl DriveConfig {
    pub fn params(&self, delta: f64, nbar: f64) -> DriveParams {
        let drive = match self.coupling {
            CouplingConfig::Effective { g_a, g_b } => Drive::Effective {
                g_a,
                g_b,
                delta_a: delta,
                delta_b: delta,
            },
            CouplingConfig::Bare { eta, g } => Drive::Bare {
                eta,
                delta_tilde: delta,
                g,
            },
        };
        DriveParams {
            omega: self.omega,
            lambda: self.lambda,
            kappa: self.kappa,
            gamma_m: self.gamma_m,
            n1: nbar,
            n2: nbar,
            drive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    #[serde(default = "default_atol")]
    pub atol: f64,
    #[serde(default = "default_rtol")]
    pub rtol: f64,
}

fn default_atol() -> f64 {
    crate::numerics::DEFAULT_ATOL
}

fn default_rtol() -> f64 {
    crate::numerics::DEFAULT_RTOL
}

impl From<ToleranceConfig> for Tolerances {
    fn from(t: ToleranceConfig) -> Self {
        Tolerances {
            atol: t.atol,
            rtol: t.rtol,
        }
    }
}

/// A validated run description.
///
/// Defaults: `time` is 100 time units in 1000 steps, `n_thermal` is `[0]`,
/// `mixture` is per-branch, stability runs at `nbar = 0`, `threads` uses all
/// cores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    pub pipeline: Pipeline,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixture: Option<MixtureMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bo: Option<BoConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dissipation: Option<DissipationConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive: Option<DriveConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_thermal: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nbar: Option<GridSpec>,
}

impl RunConfig {
    /// Minimal config for `pipeline` with every optional block unset.
    pub fn new(pipeline: Pipeline) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            pipeline,
            output: None,
            threads: None,
            tolerances: None,
            mixture: None,
            bo: None,
            dissipation: None,
            drive: None,
            time: None,
            n_thermal: None,
            delta: None,
            nbar: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA {
            return Err(Error::Config(format!(
                "schema: expected `{SCHEMA}`, got `{}`",
                self.schema
            )));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads: must be >= 1".into()));
        }
        if let Some(t) = self.tolerances {
            Tolerances::from(t)
                .validate()
                .map_err(|e| Error::Config(format!("tolerances: {e}")))?;
        }

        let p = self.pipeline;
        let present = [
            ("bo", self.bo.is_some()),
            ("dissipation", self.dissipation.is_some()),
            ("drive", self.drive.is_some()),
            ("time", self.time.is_some()),
            ("n_thermal", self.n_thermal.is_some()),
            ("delta", self.delta.is_some()),
            ("nbar", self.nbar.is_some()),
            ("mixture", self.mixture.is_some()),
            ("tolerances", self.tolerances.is_some()),
        ];
        let (required, optional): (&[&str], &[&str]) = match p {
            Pipeline::BoUnitary => (&["bo"], &["time", "n_thermal", "mixture"]),
            Pipeline::BoDissipative => (&["bo", "dissipation"], &["time", "mixture", "tolerances"]),
            Pipeline::SteadySweep => (&["drive", "delta", "nbar"], &[]),
            Pipeline::Stability => (&["drive", "delta"], &["nbar"]),
        };
        for (name, is_set) in present {
            if required.contains(&name) && !is_set {
                return Err(Error::Config(format!("{name}: required by pipeline {p}")));
            }
            if is_set && !required.contains(&name) && !optional.contains(&name) {
                return Err(Error::Config(format!("{name}: not used by pipeline {p}")));
            }
        }

        if let Some(t) = &self.time {
            t.validate().map_err(|e| Error::Config(format!("time: {e}")))?;
        }
        for (name, grid) in [("n_thermal", &self.n_thermal), ("delta", &self.delta), ("nbar", &self.nbar)] {
            if let Some(g) = grid {
                let pts = g.points(name)?;
                if name != "delta" {
                    if let Some(x) = pts.iter().find(|x| **x < 0.0) {
                        return Err(Error::Config(format!("{name}: occupancies must be >= 0, got {x}")));
                    }
                }
            }
        }
        if p == Pipeline::Stability {
            let n = self.nbar.as_ref().map(|g| g.points("nbar")).transpose()?;
            if n.is_some_and(|v| v.len() != 1) {
                return Err(Error::Config("nbar: stability takes a single occupancy".into()));
            }
        }

        let wrap = |block: &str, r: Result<()>| r.map_err(|e| Error::Config(format!("{block}: {e}")));
        if let Some(bo) = &self.bo {
            wrap("bo", bo.params(0.0).validate())?;
        }
        if let (Some(bo), Some(d)) = (&self.bo, &self.dissipation) {
            wrap(
                "dissipation",
                DissipativeParams {
                    base: bo.params(d.n_thermal),
                    kappa: d.kappa,
                    gamma: d.gamma,
                    n_bath: d.n_bath,
                }
                .validate(),
            )?;
        }
        if let Some(d) = &self.drive {
            wrap("drive", d.params(0.0, 0.0).validate())?;
        }
        Ok(())
    }

    pub fn time_grid(&self) -> TimeGrid {
        self.time.unwrap_or_default()
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.map(Tolerances::from).unwrap_or_default()
    }

    pub fn mixture(&self) -> MixtureMode {
        self.mixture.unwrap_or_default()
    }

    pub fn n_thermal_points(&self) -> Result<Vec<f64>> {
        match &self.n_thermal {
            Some(g) => g.points("n_thermal"),
            None => Ok(vec![0.0]),
        }
    }

    pub fn delta_points(&self) -> Result<Vec<f64>> {
        self.delta
            .as_ref()
            .ok_or_else(|| Error::Config("delta: missing".into()))?
            .points("delta")
    }

    pub fn nbar_points(&self) -> Result<Vec<f64>> {
        match &self.nbar {
            Some(g) => g.points("nbar"),
            None if self.pipeline == Pipeline::Stability => Ok(vec![0.0]),
            None => Err(Error::Config("nbar: missing".into())),
        }
    }

    pub fn dissipative_params(&self) -> Result<DissipativeParams> {
        let (Some(bo), Some(d)) = (&self.bo, &self.dissipation) else {
            return Err(Error::Config("bo and dissipation blocks are required".into()));
        };
        Ok(DissipativeParams {
            base: bo.params(d.n_thermal),
            kappa: d.kappa,
            gamma: d.gamma,
            n_bath: d.n_bath,
        })
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    RunConfig::from_json(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_config(config: &RunConfig, path: impl AsRef<Path>) -> Result<()> {
    let mut text = config.to_json()?;
    text.push('\n');
    crate::run::write_atomic(path.as_ref(), text.as_bytes())
}
