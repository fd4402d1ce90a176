use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use singlab::{Grid, Rect, Tolerances};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Maxface,
    Cmc1,
    Frontal,
    Genericity,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Maxface => "maxface",
            Kind::Cmc1 => "cmc1",
            Kind::Frontal => "frontal",
            Kind::Genericity => "genericity",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    /// Directory for written artifacts; nothing is written when absent.
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub kind: Kind,
    #[serde(default)]
    pub g: Option<String>,
    #[serde(default)]
    pub omega: Option<String>,
    #[serde(default)]
    pub h: Option<String>,
    #[serde(default)]
    pub preset: Option<String>,
    /// Space curve `[x, y, z]` in the variable `z` for the tangent developable.
    #[serde(default)]
    pub curve: Option<[String; 3]>,
    #[serde(default)]
    pub base_point: Option<[f64; 2]>,
    #[serde(default)]
    pub domain: Option<Rect>,
    #[serde(default)]
    pub grid: Option<Grid>,
    #[serde(default)]
    pub mesh_grid: Option<Grid>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_magnitude")]
    pub magnitude: f64,
    /// Points to classify for frontal jobs.
    #[serde(default)]
    pub points: Vec<[f64; 2]>,
    #[serde(default)]
    pub output: Output,
}

fn default_trials() -> usize {
    100
}

fn default_magnitude() -> f64 {
    1e-3
}

impl JobConfig {
    pub fn domain(&self) -> Rect {
        self.domain.unwrap_or(match self.kind {
            Kind::Maxface | Kind::Cmc1 => Rect::centered(2.0),
            Kind::Frontal | Kind::Genericity => Rect::centered(0.5),
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid.unwrap_or(match self.kind {
            Kind::Genericity => Grid::square(32),
            _ => Grid::square(64),
        })
    }

    pub fn mesh_grid(&self) -> Grid {
        self.mesh_grid.unwrap_or(Grid::square(32))
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        if self.points.is_empty() {
            vec![[0.0, 0.0]]
        } else {
            self.points.clone()
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.tolerances.validate().map_err(CliError::Config)?;
        for (name, g) in [("grid", self.grid()), ("mesh_grid", self.mesh_grid())] {
            if g.nu < 2 || g.nv < 2 {
                return Err(CliError::Config(format!("{name} must have at least 2 cells per axis")));
            }
        }
        if !self.domain().is_valid() {
            return Err(CliError::Config("domain rectangle is empty or not finite".into()));
        }
        let wd = self.g.is_some() || self.omega.is_some();
        let (h, preset) = (self.h.is_some(), self.preset.is_some());
        let ok = match self.kind {
            Kind::Maxface | Kind::Cmc1 => !preset && (wd != h) && (!wd || (self.g.is_some() && self.omega.is_some())),
            Kind::Frontal => preset && !wd && !h,
            Kind::Genericity => h && !wd && !preset,
        };
        if !ok {
            let need = match self.kind {
                Kind::Maxface | Kind::Cmc1 => "either both g and omega, or h",
                Kind::Frontal => "preset only",
                Kind::Genericity => "h only",
            };
            return Err(CliError::Config(format!("kind {} requires {need}", self.kind.name())));
        }
        if self.curve.is_some() && self.preset.as_deref() != Some("tangent-developable") {
            return Err(CliError::Config("curve applies only to the tangent-developable preset".into()));
        }
        if !(self.magnitude >= 0.0 && self.magnitude.is_finite()) || self.trials == 0 {
            return Err(CliError::Config("magnitude must be non-negative and trials positive".into()));
        }
        Ok(())
    }
}

/// Reads the config document, or an empty object when no file is given.
pub fn load(path: Option<&Path>) -> Result<Value, CliError> {
    match path {
        None => Ok(Value::Object(Default::default())),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("reading {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("config {}: {e}", p.display())))
        }
    }
}

/// Sets `value` at a dotted path such as `tolerances.eps_zero`.
pub fn set_path(doc: &mut Value, path: &str, value: Value) -> Result<(), CliError> {
    let mut cur = doc;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let obj = match cur {
            Value::Object(m) => m,
            Value::Null => {
                *cur = Value::Object(Default::default());
                cur.as_object_mut().expect("just created")
            }
            _ => return Err(CliError::Config(format!("cannot override {path}: {part} is not an object"))),
        };
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        cur = obj.entry(part.to_string()).or_insert(Value::Null);
    }
    Ok(())
}

pub fn finish(doc: Value) -> Result<JobConfig, CliError> {
    let cfg: JobConfig = serde_json::from_value(doc).map_err(|e| CliError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Deserializes without validation, to read kind-dependent defaults.
pub fn finish_unvalidated(doc: Value) -> Result<JobConfig, CliError> {
    serde_json::from_value(doc).map_err(|e| CliError::Config(e.to_string()))
}
