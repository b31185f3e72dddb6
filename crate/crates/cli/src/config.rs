//! Experiment configuration: a JSON document with a command name and a parameter block.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::parse::TGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    LieIdent,
    Kernels,
    Horocycle,
    Height,
    Count,
    Fit,
    Verify,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::LieIdent => "lie-ident",
            CommandName::Kernels => "kernels",
            CommandName::Horocycle => "horocycle",
            CommandName::Height => "height",
            CommandName::Count => "count",
            CommandName::Fit => "fit",
            CommandName::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceLimits {
    /// Filtration degree cap for the exact enveloping-algebra solver.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    /// Cap on kernel-bound grid points (n^2 for two-variable kernels).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_grid: Option<usize>,
    /// Cap on quadrature nodes per t.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_n: Option<usize>,
}

pub const DEFAULT_MAX_GRID: usize = 1_000_000;
pub const DEFAULT_MAX_N: usize = 100_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: CommandName,
    #[serde(default)]
    pub params: Value,
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub limits: ResourceLimits,
}

fn default_out_dir() -> String {
    "horokit-out".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieIdentParams {
    #[serde(default = "default_algebra")]
    pub algebra: String,
    #[serde(rename = "H")]
    pub h: String,
}

fn default_algebra() -> String {
    "sl2".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelsParams {
    /// Complex numbers as strings, e.g. "0.5+2i".
    pub lambdas: Vec<String>,
    #[serde(default = "default_beta")]
    pub beta: f64,
    /// Rational strings; both set means the iterated (two-level) construction.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default = "default_grid_lo")]
    pub grid_lo: f64,
    #[serde(default = "default_grid_n")]
    pub grid_n: usize,
}

fn default_beta() -> f64 {
    0.5
}
fn default_grid_lo() -> f64 {
    -20.0
}
fn default_grid_n() -> usize {
    50
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HorocycleParams {
    #[serde(default)]
    pub closed: bool,
    /// [Re, Im] of the base point.
    #[serde(default = "default_x0")]
    pub x0: [f64; 2],
    pub t: TGrid,
    /// Support [a, b] of the profile.
    #[serde(default = "default_psi")]
    pub psi: [f64; 2],
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default = "default_pps")]
    pub points_per_scale: f64,
}

fn default_x0() -> [f64; 2] {
    [0.0, 1.0]
}
fn default_psi() -> [f64; 2] {
    [1.2, 3.0]
}
fn default_amplitude() -> f64 {
    1.0
}
fn default_pps() -> f64 {
    horokit_core::modular::DEFAULT_POINTS_PER_SCALE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeightParams {
    #[serde(default = "default_x0")]
    pub x0: [f64; 2],
    pub t: TGrid,
    #[serde(default = "default_pps")]
    pub points_per_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountParams {
    pub n: usize,
    #[serde(rename = "H")]
    pub h: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitParams {
    /// CSV with columns t, ..., error, quad_err, as written by `horocycle`.
    pub input: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyParams {
    pub certificate: String,
}

/// Deep merge: keys of `over` replace those of `base`, objects merge recursively.
pub fn merge(base: &mut Value, over: &Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (b, o) => *b = o.clone(),
    }
}

pub fn typed_params<T: DeserializeOwned>(cfg: &ExperimentConfig) -> Result<T, String> {
    let params = if cfg.params.is_null() {
        Value::Object(Map::new())
    } else {
        cfg.params.clone()
    };
    serde_json::from_value(params).map_err(|e| format!("params for {}: {e}", cfg.command.as_str()))
}
