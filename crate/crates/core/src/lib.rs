// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

//! Reflection spectroscopy of a Kerr parametric oscillator.
//!
//! The crate builds the rotating-frame Hamiltonian of a parametrically pumped
//! Kerr resonator, labels its eigenstates adiabatically in the pump amplitude,
//! solves for the stationary state of the dissipative dynamics, and evaluates
//! the probe reflection coefficient either in the weak-probe limit or with a
//! truncated harmonic-balance treatment of a finite probe. Parameter sweeps
//! and CSV output are driven by the `kpo-spectro` binary.
//!
//! All angular frequencies are in rad/s. Helpers in [`model`] convert from
//! `/2pi` MHz and GHz.

pub mod cli;
pub mod eigen;
pub mod error;
pub mod fock;
pub mod lindblad;
pub mod model;
pub mod spectroscopy;
pub mod sweep;
pub mod wigner;

pub use error::{Error, Result};
