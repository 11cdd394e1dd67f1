// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

//! Sweep drivers, one per subcommand.
//!
//! Independent pump amplitudes (and, for a finite probe, independent probe
//! detunings) are evaluated in parallel on the current rayon pool. Results
//! are collected in grid order.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::eigen::{diagonalize, energy_diagram, EigenSystem};
use crate::error::Result;
use crate::lindblad::{build_generator, populations_in_eigenbasis, steady_state, DensityMatrix};
use crate::model::{build_h0, mhz, to_mhz, ModelParams};
use crate::spectroscopy::{
    eta, finite_drive_trace, nominal_rates, weak_field_gamma, WeakFieldOptions,
};
use crate::wigner::wigner;

use super::config::ScenarioConfig;
use super::output::{Cell, SweepResult};

const BETA_COL: &str = "beta_over_2pi_MHz";
const OMEGA_COL: &str = "omega_in_minus_omega_p_half_over_2pi_MHz";

struct Stationary {
    es: EigenSystem,
    rho: DensityMatrix,
    pops: Vec<f64>,
}

fn stationary(params: &ModelParams) -> Result<Stationary> {
    let es = diagonalize(&build_h0(params)?, params, None)?;
    let rho = steady_state(&build_generator(params)?)?;
    let pops = populations_in_eigenbasis(&rho, &es)?;
    Ok(Stationary { es, rho, pops })
}

fn at_beta(beta_mhz: f64) -> String {
    format!("at beta/2pi = {beta_mhz} MHz")
}

/// Per-beta map over the pump grid, in grid order. Pump amplitudes are
/// reported in `/2pi MHz` exactly as configured.
fn over_beta<T: Send>(
    cfg: &ScenarioConfig,
    f: impl Fn(ModelParams) -> Result<T> + Sync,
) -> Result<Vec<(f64, T)>> {
    let base = cfg.model_params()?;
    cfg.sweep
        .beta
        .values()
        .into_par_iter()
        .map(|beta_mhz| {
            f(base.with_beta(mhz(beta_mhz)))
                .map(|v| (beta_mhz, v))
                .map_err(|e| e.at(at_beta(beta_mhz)))
        })
        .collect()
}

fn spectrum_columns(cfg: &ScenarioConfig, with_beta: bool) -> Vec<String> {
    let mut cols = Vec::new();
    if with_beta {
        cols.push(BETA_COL.to_string());
    }
    cols.extend([OMEGA_COL, "re_gamma", "im_gamma", "abs_gamma"].map(String::from));
    if cfg.solver.per_transition {
        for (m, n) in transition_pairs(cfg.solver.level_cut) {
            cols.push(format!("re_g_{m}{n}"));
            cols.push(format!("im_g_{m}{n}"));
        }
    }
    cols
}

fn transition_pairs(level_cut: usize) -> Vec<(usize, usize)> {
    (0..level_cut)
        .flat_map(|m| (0..level_cut).filter(move |&n| n != m).map(move |n| (m, n)))
        .collect()
}

/// Reflection coefficient and optional per-transition terms on the probe
/// grid at one pump amplitude.
fn spectrum_at(cfg: &ScenarioConfig, params: &ModelParams) -> Result<Vec<Vec<Complex64>>> {
    let grid = cfg.omega_grid();
    let es = diagonalize(&build_h0(params)?, params, None)?;
    if params.omega_drive > 0.0 {
        let cut = cfg.solver.harmonic_level_cut;
        let gammas: Vec<Complex64> = grid
            .par_iter()
            .map(|&w| {
                finite_drive_trace(params, &es, &[w], cut)
                    .map(|v| v[0])
                    .map_err(|e| e.at(format!("omega_in - omega_p/2 = 2pi {} MHz", to_mhz(w))))
            })
            .collect::<Result<_>>()?;
        return Ok(gammas.into_iter().map(|g| vec![g]).collect());
    }
    let rho = steady_state(&build_generator(params)?)?;
    let pops = populations_in_eigenbasis(&rho, &es)?;
    let opts = WeakFieldOptions {
        level_cut: cfg.solver.level_cut,
        per_transition: cfg.solver.per_transition,
    };
    let trace = weak_field_gamma(params, &es, &pops, &grid, &opts)?;
    Ok((0..grid.len())
        .map(|k| {
            let mut v = vec![trace.gamma[k]];
            if let Some(per) = &trace.per_transition {
                v.extend(per.iter().map(|t| t.values[k]));
            }
            v
        })
        .collect())
}

fn spectrum_row(beta_mhz: Option<f64>, omega_mhz: f64, values: &[Complex64]) -> Vec<Cell> {
    let mut row = Vec::with_capacity(4 + 2 * values.len());
    if let Some(b) = beta_mhz {
        row.push(Cell::Float(b));
    }
    let g = values[0];
    row.extend([
        Cell::Float(omega_mhz),
        Cell::Float(g.re),
        Cell::Float(g.im),
        Cell::Float(g.norm()),
    ]);
    for c in &values[1..] {
        row.push(Cell::Float(c.re));
        row.push(Cell::Float(c.im));
    }
    row
}

fn finish(result: SweepResult) -> Result<SweepResult> {
    result.validate()?;
    Ok(result)
}

fn mode_meta(cfg: &ScenarioConfig) -> Vec<(String, String)> {
    let mode = if cfg.solver.omega_drive > 0.0 {
        "finite probe (harmonic balance)"
    } else {
        "weak probe"
    };
    vec![("mode".into(), mode.into())]
}

/// `|Gamma|` over probe detuning and pump amplitude, pump-major.
pub fn run_spectrum_2d(cfg: &ScenarioConfig) -> Result<SweepResult> {
    let omega = cfg.sweep.omega_in.values();
    let per_beta = over_beta(cfg, |p| spectrum_at(cfg, &p))?;
    let rows = per_beta
        .iter()
        .flat_map(|(beta, vals)| {
            omega
                .iter()
                .zip(vals)
                .map(|(&w, v)| spectrum_row(Some(*beta), w, v))
        })
        .collect();
    finish(SweepResult {
        command: "spectrum2d",
        columns: spectrum_columns(cfg, true),
        rows,
        meta: mode_meta(cfg),
        axis_lengths: vec![per_beta.len(), omega.len()],
    })
}

/// Reflection coefficient at the configured pump amplitude.
pub fn run_spectrum_1d(cfg: &ScenarioConfig) -> Result<SweepResult> {
    let params = cfg.model_params()?;
    let omega = cfg.sweep.omega_in.values();
    let vals = spectrum_at(cfg, &params).map_err(|e| e.at(at_beta(to_mhz(params.beta))))?;
    let mut meta = mode_meta(cfg);
    meta.push((BETA_COL.into(), format!("{}", to_mhz(params.beta))));
    finish(SweepResult {
        command: "spectrum1d",
        columns: spectrum_columns(cfg, false),
        rows: omega
            .iter()
            .zip(&vals)
            .map(|(&w, v)| spectrum_row(None, w, v))
            .collect(),
        meta,
        axis_lengths: vec![omega.len()],
    })
}

/// Energies and parities of the lowest labeled levels along the pump grid.
pub fn run_levels(cfg: &ScenarioConfig) -> Result<SweepResult> {
    let params = cfg.model_params()?;
    let grid = cfg.beta_grid();
    let l = cfg.solver.level_cut;
    let diagram = energy_diagram(&params, &grid, l)?;
    let mut columns = vec![BETA_COL.to_string()];
    columns.extend((0..l).map(|i| format!("omega_{i}_over_2pi_MHz")));
    columns.extend((0..l).map(|i| format!("parity_{i}")));
    let beta_mhz = cfg.sweep.beta.values();
    let rows = diagram
        .iter()
        .zip(&beta_mhz)
        .map(|(r, &b)| {
            let mut row = vec![Cell::Float(b)];
            row.extend(r.energies.iter().map(|&e| Cell::Float(to_mhz(e))));
            row.extend(r.parities.iter().map(|p| Cell::Text(p.as_str())));
            row
        })
        .collect();
    let ambiguous: Vec<String> = diagram
        .iter()
        .zip(&beta_mhz)
        .filter(|(r, _)| r.ambiguous)
        .map(|(_, b)| format!("{b}"))
        .collect();
    let mut meta = Vec::new();
    if !ambiguous.is_empty() {
        meta.push((
            "ambiguous_labels_at_beta_over_2pi_MHz".into(),
            ambiguous.join(" "),
        ));
    }
    finish(SweepResult {
        command: "levels",
        columns,
        rows,
        meta,
        axis_lengths: vec![grid.len()],
    })
}

/// Stationary populations of the lowest labeled levels.
pub fn run_populations(cfg: &ScenarioConfig) -> Result<SweepResult> {
    let l = cfg.solver.level_cut;
    let per_beta = over_beta(cfg, |p| stationary(&p).map(|s| s.pops))?;
    let mut columns = vec![BETA_COL.to_string()];
    columns.extend((0..l).map(|i| format!("pop_{i}")));
    let rows = per_beta
        .iter()
        .map(|(beta, pops)| {
            let mut row = vec![Cell::Float(*beta)];
            row.extend(pops[..l].iter().map(|&p| Cell::Float(p)));
            row
        })
        .collect();
    finish(SweepResult {
        command: "populations",
        columns,
        rows,
        meta: Vec::new(),
        axis_lengths: vec![per_beta.len()],
    })
}

/// Nominal external and internal rates of the configured transitions.
pub fn run_nominal(cfg: &ScenarioConfig) -> Result<SweepResult> {
    let pairs = cfg.analysis.transitions.clone();
    let per_beta = over_beta(cfg, |p| {
        let s = stationary(&p)?;
        pairs
            .iter()
            .map(|&(m, n)| nominal_rates(&p, &s.es, &s.pops, m, n))
            .collect::<Result<Vec<_>>>()
    })?;
    let rows = per_beta
        .iter()
        .flat_map(|(beta, rates)| {
            pairs.iter().zip(rates).map(move |(&(m, n), r)| {
                vec![
                    Cell::Float(*beta),
                    Cell::Int(m),
                    Cell::Int(n),
                    Cell::Float(to_mhz(r.kappa_ex)),
                    Cell::Float(to_mhz(r.kappa_int)),
                ]
            })
        })
        .collect();
    finish(SweepResult {
        command: "nominal",
        columns: [
            BETA_COL,
            "m",
            "n",
            "kex_tilde_over_2pi_MHz",
            "kint_tilde_over_2pi_MHz",
        ]
        .map(String::from)
        .to_vec(),
        rows,
        meta: Vec::new(),
        axis_lengths: vec![per_beta.len(), pairs.len()],
    })
}

/// Peak/dip indicator of the configured transitions.
pub fn run_eta(cfg: &ScenarioConfig) -> Result<SweepResult> {
    let pairs = cfg.analysis.transitions.clone();
    let per_beta = over_beta(cfg, |p| {
        let s = stationary(&p)?;
        pairs
            .iter()
            .map(|&(m, n)| eta(&s.es, &s.pops, m, n))
            .collect::<Result<Vec<_>>>()
    })?;
    let rows = per_beta
        .iter()
        .flat_map(|(beta, etas)| {
            pairs.iter().zip(etas).map(move |(&(m, n), &e)| {
                vec![
                    Cell::Float(*beta),
                    Cell::Int(m),
                    Cell::Int(n),
                    Cell::Float(e),
                ]
            })
        })
        .collect();
    finish(SweepResult {
        command: "eta",
        columns: [BETA_COL, "m", "n", "eta"].map(String::from).to_vec(),
        rows,
        meta: Vec::new(),
        axis_lengths: vec![per_beta.len(), pairs.len()],
    })
}

/// Wigner function of the stationary state, one table per pump amplitude.
pub fn run_wigner(cfg: &ScenarioConfig) -> Result<Vec<SweepResult>> {
    let xs = cfg.wigner.x.values();
    let ps = cfg.wigner.p.values();
    let per_beta = over_beta(cfg, |p| {
        let rho = steady_state(&build_generator(&p)?)?;
        wigner(&rho, &xs, &ps)
    })?;
    per_beta
        .into_iter()
        .map(|(beta, grid)| {
            let mut rows = Vec::with_capacity(xs.len() * ps.len());
            for (i, &x) in grid.x_axis.iter().enumerate() {
                for (j, &p) in grid.p_axis.iter().enumerate() {
                    rows.push(vec![
                        Cell::Float(x),
                        Cell::Float(p),
                        Cell::Float(grid.values[i][j]),
                    ]);
                }
            }
            finish(SweepResult {
                command: "wigner",
                columns: ["x", "p", "w"].map(String::from).to_vec(),
                rows,
                meta: vec![
                    (BETA_COL.into(), format!("{beta}")),
                    (
                        "quadratures".into(),
                        "x = (a + a^dag)/sqrt(2), p = -i(a - a^dag)/sqrt(2)".into(),
                    ),
                    (
                        "grid".into(),
                        format!(
                            "x {} points in [{}, {}], p {} points in [{}, {}]",
                            xs.len(),
                            xs[0],
                            xs[xs.len() - 1],
                            ps.len(),
                            ps[0],
                            ps[ps.len() - 1]
                        ),
                    ),
                ],
                axis_lengths: vec![xs.len(), ps.len()],
            })
        })
        .collect()
}

/// Stationary density matrix in the Fock basis at the configured pump.
pub fn run_steady(cfg: &ScenarioConfig) -> Result<SweepResult> {
    let params = cfg.model_params()?;
    let s = stationary(&params).map_err(|e| e.at(at_beta(to_mhz(params.beta))))?;
    let d = params.dim;
    let rows = (0..d)
        .flat_map(|m| (0..d).map(move |n| (m, n)))
        .map(|(m, n)| {
            let z = s.rho.get(m, n);
            vec![
                Cell::Int(m),
                Cell::Int(n),
                Cell::Float(z.re),
                Cell::Float(z.im),
            ]
        })
        .collect();
    finish(SweepResult {
        command: "steady",
        columns: ["m", "n", "re_rho", "im_rho"].map(String::from).to_vec(),
        rows,
        meta: vec![
            ("basis".into(), "fock".into()),
            (BETA_COL.into(), format!("{}", to_mhz(params.beta))),
        ],
        axis_lengths: vec![d, d],
    })
}
