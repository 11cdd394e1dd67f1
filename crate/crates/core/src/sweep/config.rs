// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario configuration.
//!
//! A scenario is a JSON document. Physical parameters are given in `/2pi MHz`
//! (circuit energies in GHz) and converted to angular frequencies here.
//! Overrides of the form `key=value` are applied to the JSON tree after
//! defaults are filled in, so that `--set` sees every field.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{circuit_to_model, ghz, mhz, CircuitParams, ModelParams, DEFAULT_DIM};
use crate::spectroscopy::{DEFAULT_HARMONIC_LEVEL_CUT, DEFAULT_LEVEL_CUT};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    #[serde(rename = "delta_over_2pi_MHz")]
    pub delta: f64,
    #[serde(rename = "chi_over_2pi_MHz")]
    pub chi: f64,
    #[serde(rename = "beta_over_2pi_MHz")]
    pub beta: f64,
    #[serde(rename = "kappa_ex_over_2pi_MHz")]
    pub kappa_ex: f64,
    #[serde(rename = "kappa_int_over_2pi_MHz")]
    pub kappa_int: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection {
            delta: 0.0,
            chi: 30.0,
            beta: 0.0,
            kappa_ex: 0.4,
            kappa_int: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSection {
    #[serde(rename = "e_c_over_h_GHz")]
    pub e_c: f64,
    /// Josephson energy of one SQUID.
    #[serde(rename = "e_j_over_h_GHz")]
    pub e_j: f64,
    pub n_squid: u32,
    pub delta_e_j_over_e_j: f64,
    #[serde(rename = "omega_p_over_2pi_GHz")]
    pub omega_p: f64,
    #[serde(rename = "kappa_ex_over_2pi_MHz")]
    pub kappa_ex: f64,
    #[serde(rename = "kappa_int_over_2pi_MHz")]
    pub kappa_int: f64,
}

/// Evenly spaced points, endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

/// A grid in `/2pi MHz`: either evenly spaced or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GridSpec {
    Linear {
        #[serde(rename = "start_MHz")]
        start: f64,
        #[serde(rename = "stop_MHz")]
        stop: f64,
        points: usize,
    },
    Values {
        #[serde(rename = "values_MHz")]
        values: Vec<f64>,
    },
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            GridSpec::Linear {
                start,
                stop,
                points,
            } => linspace(*start, *stop, *points),
            GridSpec::Values { values } => values.clone(),
        }
    }
}

impl LinearGrid {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.points)
    }
}

fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n)
            .map(|k| {
                if k == n - 1 {
                    stop
                } else {
                    start + (stop - start) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Probe detuning `omega_in - omega_p / 2`.
    pub omega_in: GridSpec,
    pub beta: GridSpec,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            omega_in: GridSpec::Linear {
                start: -50.0,
                stop: 50.0,
                points: 201,
            },
            beta: GridSpec::Linear {
                start: 0.0,
                stop: 20.0,
                points: 121,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub dim: usize,
    pub level_cut: usize,
    pub harmonic_level_cut: usize,
    /// Probe strength; zero selects the weak-probe formula.
    #[serde(rename = "omega_drive_over_2pi_MHz")]
    pub omega_drive: f64,
    pub per_transition: bool,
}

impl Default for SolverSection {
    fn default() -> Self {
        SolverSection {
            dim: DEFAULT_DIM,
            level_cut: DEFAULT_LEVEL_CUT,
            harmonic_level_cut: DEFAULT_HARMONIC_LEVEL_CUT,
            omega_drive: 0.0,
            per_transition: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    /// Ordered transitions reported by `nominal` and `eta`.
    pub transitions: Vec<(usize, usize)>,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        let mut transitions = Vec::new();
        for m in 0..4 {
            for n in 0..4 {
                if (m + n) % 2 == 1 {
                    transitions.push((m, n));
                }
            }
        }
        AnalysisSection { transitions }
    }
}

/// Dimensionless quadrature axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerSection {
    pub x: LinearGrid,
    pub p: LinearGrid,
}

impl Default for WignerSection {
    fn default() -> Self {
        let axis = LinearGrid {
            start: -5.0,
            stop: 5.0,
            points: 101,
        };
        WignerSection {
            x: axis.clone(),
            p: axis,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit: Option<CircuitSection>,
    pub sweep: SweepSection,
    pub solver: SolverSection,
    pub analysis: AnalysisSection,
    pub wigner: WignerSection,
    /// Output file name per subcommand.
    pub outputs: BTreeMap<String, String>,
}

/// Subcommands that write files.
pub const COMMANDS: [&str; 8] = [
    "spectrum2d",
    "spectrum1d",
    "levels",
    "populations",
    "nominal",
    "eta",
    "wigner",
    "steady",
];

fn defaults_value() -> Value {
    serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "name": "scenario",
        "sweep": SweepSection::default(),
        "solver": SolverSection::default(),
        "analysis": AnalysisSection::default(),
        "wigner": WignerSection::default(),
        "outputs": {},
    })
}

/// Fills `target` with keys of `defaults` it lacks, recursing into objects.
fn fill_defaults(target: &mut Value, defaults: &Value) {
    if let (Value::Object(t), Value::Object(d)) = (target, defaults) {
        for (k, dv) in d {
            match t.get_mut(k) {
                Some(tv) => {
                    // a user grid replaces the default grid wholesale
                    if !matches!(k.as_str(), "omega_in" | "beta") || !tv.is_object() {
                        fill_defaults(tv, dv);
                    }
                }
                None => {
                    t.insert(k.clone(), dv.clone());
                }
            }
        }
    }
}

fn leaf_paths(v: &Value, prefix: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                prefix.push(k.clone());
                leaf_paths(child, prefix, out);
                prefix.pop();
            }
        }
        _ => out.push(prefix.clone()),
    }
}

fn parse_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

/// Applies one `key=value` override. `key` is a dotted path or a leaf name
/// that occurs exactly once in the tree.
pub fn apply_override(tree: &mut Value, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::config(assignment, "override must have the form key=value"))?;
    let key = key.trim();
    let path: Vec<String> = if key.contains('.') {
        key.split('.').map(str::to_string).collect()
    } else {
        let mut all = Vec::new();
        leaf_paths(tree, &mut Vec::new(), &mut all);
        let hits: Vec<Vec<String>> = all
            .into_iter()
            .filter(|p| p.last().map(String::as_str) == Some(key))
            .collect();
        match hits.len() {
            1 => hits.into_iter().next().unwrap_or_default(),
            0 => return Err(Error::config(key, "no such field")),
            _ => {
                let names: Vec<String> = hits.iter().map(|p| p.join(".")).collect();
                return Err(Error::config(
                    key,
                    format!("ambiguous, use one of {}", names.join(", ")),
                ));
            }
        }
    };
    let mut node = tree;
    for (i, part) in path.iter().enumerate() {
        let obj = node
            .as_object_mut()
            .ok_or_else(|| Error::config(path[..i].join("."), "not an object"))?;
        if i + 1 == path.len() {
            obj.insert(part.clone(), parse_value(raw));
            return Ok(());
        }
        node = obj
            .get_mut(part)
            .ok_or_else(|| Error::config(path[..=i].join("."), "no such field"))?;
    }
    Err(Error::config(key, "empty path"))
}

impl ScenarioConfig {
    pub fn from_path(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
        Self::from_json_str(&text, overrides)
    }

    pub fn from_json_str(text: &str, overrides: &[String]) -> Result<Self> {
        let mut tree: Value = serde_json::from_str(text)?;
        if !tree.is_object() {
            return Err(Error::config("<root>", "expected a JSON object"));
        }
        fill_defaults(&mut tree, &defaults_value());
        if let Some(model) = tree.get_mut("model") {
            fill_defaults(model, &serde_json::to_value(ModelSection::default())?);
        }
        for assignment in overrides {
            apply_override(&mut tree, assignment)?;
        }
        let cfg: ScenarioConfig =
            serde_json::from_value(tree).map_err(|e| Error::config("<document>", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::config(
                "schema_version",
                format!(
                    "unsupported version {}, expected {SCHEMA_VERSION}",
                    self.schema_version
                ),
            ));
        }
        match (&self.model, &self.circuit) {
            (Some(_), Some(_)) => {
                return Err(Error::config(
                    "model/circuit",
                    "give exactly one of the two sections",
                ))
            }
            (None, None) => {
                return Err(Error::config(
                    "model/circuit",
                    "one of the two sections is required",
                ))
            }
            _ => {}
        }
        check_grid("sweep.omega_in", &self.sweep.omega_in.values())?;
        check_grid("sweep.beta", &self.sweep.beta.values())?;
        if self.sweep.beta.values().iter().any(|&b| b < 0.0) {
            return Err(Error::config(
                "sweep.beta",
                "pump amplitudes must be non-negative",
            ));
        }
        check_grid("wigner.x", &self.wigner.x.values())?;
        check_grid("wigner.p", &self.wigner.p.values())?;
        let s = &self.solver;
        if s.dim < 2 {
            return Err(Error::config("solver.dim", "must be at least 2"));
        }
        if s.level_cut < 2 || s.level_cut > s.dim {
            return Err(Error::config(
                "solver.level_cut",
                format!("must lie in [2, {}]", s.dim),
            ));
        }
        if s.harmonic_level_cut < 2 || s.harmonic_level_cut > s.dim {
            return Err(Error::config(
                "solver.harmonic_level_cut",
                format!("must lie in [2, {}]", s.dim),
            ));
        }
        if !(s.omega_drive.is_finite() && s.omega_drive >= 0.0) {
            return Err(Error::config(
                "solver.omega_drive_over_2pi_MHz",
                "must be finite and non-negative",
            ));
        }
        if s.per_transition && s.omega_drive > 0.0 {
            return Err(Error::config(
                "solver.per_transition",
                "per-transition output needs the weak-probe mode (omega_drive_over_2pi_MHz = 0)",
            ));
        }
        for &(m, n) in &self.analysis.transitions {
            if m == n || m >= s.dim || n >= s.dim {
                return Err(Error::config(
                    "analysis.transitions",
                    format!(
                        "({m}, {n}) is not a transition between distinct levels below {}",
                        s.dim
                    ),
                ));
            }
        }
        for (cmd, file) in &self.outputs {
            if !COMMANDS.contains(&cmd.as_str()) {
                return Err(Error::config(
                    format!("outputs.{cmd}"),
                    "unknown subcommand",
                ));
            }
            if file.is_empty() || file.contains('/') {
                return Err(Error::config(
                    format!("outputs.{cmd}"),
                    "must be a plain file name",
                ));
            }
        }
        self.model_params().map_err(|e| match e {
            Error::InvalidParameter { name, reason } => Error::config(name, reason),
            Error::ModelValidity {
                bound,
                value,
                limit,
            } => Error::config(
                "circuit",
                format!("{bound}: {value:.3e} exceeds {limit:.3e}"),
            ),
            other => other,
        })?;
        Ok(())
    }

    /// Model parameters at the configured (single) pump amplitude.
    pub fn model_params(&self) -> Result<ModelParams> {
        let s = &self.solver;
        let p = match (&self.model, &self.circuit) {
            (Some(m), _) => ModelParams {
                delta: mhz(m.delta),
                chi: mhz(m.chi),
                beta: mhz(m.beta),
                kappa_ex: mhz(m.kappa_ex),
                kappa_int: mhz(m.kappa_int),
                omega_drive: mhz(s.omega_drive),
                dim: s.dim,
            },
            (None, Some(c)) => {
                let cm = circuit_to_model(&CircuitParams {
                    e_c: ghz(c.e_c),
                    e_j: ghz(c.e_j),
                    n_squid: c.n_squid,
                    delta_e_j: c.delta_e_j_over_e_j * ghz(c.e_j),
                    omega_p: ghz(c.omega_p),
                })?;
                cm.to_model_params(mhz(c.kappa_ex), mhz(c.kappa_int), s.dim)
                    .with_omega_drive(mhz(s.omega_drive))
            }
            (None, None) => {
                return Err(Error::config(
                    "model/circuit",
                    "one of the two sections is required",
                ))
            }
        };
        p.validate()?;
        Ok(p)
    }

    /// Probe detunings in rad/s.
    pub fn omega_grid(&self) -> Vec<f64> {
        self.sweep.omega_in.values().into_iter().map(mhz).collect()
    }

    /// Pump amplitudes in rad/s.
    pub fn beta_grid(&self) -> Vec<f64> {
        self.sweep.beta.values().into_iter().map(mhz).collect()
    }

    pub fn output_name(&self, command: &str) -> String {
        self.outputs
            .get(command)
            .cloned()
            .unwrap_or_else(|| format!("{}_{command}.csv", self.name))
    }

    /// Canonical JSON of the resolved configuration.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).unwrap_or_default()
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

fn check_grid(field: &str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::config(field, "grid is empty"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::config(field, "grid has non-finite values"));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config(field, "grid must be strictly increasing"));
    }
    Ok(())
}
