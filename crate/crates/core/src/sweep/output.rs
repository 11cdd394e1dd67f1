// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

//! Tabular sweep results and their CSV form.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::config::ScenarioConfig;

const HASH_KEY: &str = "# config_sha256: ";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(usize),
    Text(&'static str),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Float(v) => {
                let v = if *v == 0.0 { 0.0 } else { *v };
                let _ = write!(out, "{v:.11e}");
            }
            Cell::Int(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Text(s) => out.push_str(s),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            Cell::Text(_) => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub command: &'static str,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `key: value` header lines.
    pub meta: Vec<(String, String)>,
    /// Lengths of the swept axes; rows are their product.
    pub axis_lengths: Vec<usize>,
}

impl SweepResult {
    pub fn validate(&self) -> Result<()> {
        let expected: usize = self.axis_lengths.iter().product();
        if self.rows.len() != expected {
            return Err(Error::Invariant(format!(
                "{}: {} rows, expected {expected}",
                self.command,
                self.rows.len()
            )));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(Error::Invariant(format!(
                    "{}: row {i} has {} cells",
                    self.command,
                    row.len()
                )));
            }
            if row
                .iter()
                .any(|c| matches!(c, Cell::Float(v) if !v.is_finite()))
            {
                return Err(Error::Invariant(format!(
                    "{}: non-finite value in row {i}",
                    self.command
                )));
            }
        }
        Ok(())
    }

    /// Column by name as floats.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[idx].as_f64()).collect()
    }

    pub fn to_csv(&self, cfg: &ScenarioConfig) -> String {
        let mut out = String::new();
        for line in provenance(cfg, self.command) {
            out.push_str(&line);
            out.push('\n');
        }
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }
}

fn provenance(cfg: &ScenarioConfig, command: &str) -> Vec<String> {
    let s = &cfg.solver;
    vec![
        format!("# kpo-spectro {}", env!("CARGO_PKG_VERSION")),
        format!("# command: {command}"),
        format!("{HASH_KEY}{}", cfg.hash()),
        format!(
            "# solver: dim={} level_cut={} harmonic_level_cut={} omega_drive_over_2pi_MHz={}",
            s.dim, s.level_cut, s.harmonic_level_cut, s.omega_drive
        ),
        "# tolerances: hermiticity=1e-10 psd=-1e-8 rank=1e-8 label_ambiguity=1e-6".to_string(),
        format!("# config: {}", cfg.canonical_json()),
    ]
}

/// Hash recorded in an existing CSV header, if any.
pub fn recorded_hash(text: &str) -> Option<&str> {
    text.lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix(HASH_KEY))
        .map(str::trim)
}

/// Writes `result` to `path`. An existing file is replaced only when it
/// records the same configuration hash, or when `force` is set.
pub fn write_csv(
    path: &Path,
    result: &SweepResult,
    cfg: &ScenarioConfig,
    force: bool,
) -> Result<()> {
    result.validate()?;
    if path.exists() && !force {
        let existing = fs::read_to_string(path)?;
        let hash = cfg.hash();
        match recorded_hash(&existing) {
            Some(h) if h == hash => {}
            Some(h) => {
                return Err(Error::Overwrite {
                    path: path.display().to_string(),
                    reason: format!("it was produced by config {h}, not {hash}"),
                })
            }
            None => {
                return Err(Error::Overwrite {
                    path: path.display().to_string(),
                    reason: "it has no provenance header".into(),
                })
            }
        }
    }
    fs::write(path, result.to_csv(cfg))?;
    Ok(())
}
