// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario configuration, sweep drivers and CSV output.

pub mod config;
pub mod output;
pub mod run;

pub use config::ScenarioConfig;
pub use output::{write_csv, Cell, SweepResult};
pub use run::{
    run_eta, run_levels, run_nominal, run_populations, run_spectrum_1d, run_spectrum_2d,
    run_steady, run_wigner,
};
