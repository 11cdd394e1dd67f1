// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

//! Physical parameters of the pumped parametron and its rotating-frame
//! Hamiltonian.
//!
//! Every frequency is an angular frequency in rad/s and Hamiltonians are
//! stored divided by hbar. Conversions from the "/2pi MHz" values used in
//! configuration files happen through [`mhz`] and [`to_mhz`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::OperatorMatrix;

/// Default Fock truncation for pump amplitudes up to 2pi * 20 MHz.
pub const DEFAULT_DIM: usize = 30;

/// Angular frequency (rad/s) of `value` given in MHz (i.e. `omega / 2pi`).
pub fn mhz(value: f64) -> f64 {
    value * 2.0 * PI * 1e6
}

/// Inverse of [`mhz`].
pub fn to_mhz(omega: f64) -> f64 {
    omega / (2.0 * PI * 1e6)
}

/// Angular frequency (rad/s) of `value` given in GHz.
pub fn ghz(value: f64) -> f64 {
    value * 2.0 * PI * 1e9
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Detuning `omega - chi - omega_p / 2`.
    pub delta: f64,
    /// Kerr nonlinearity, strictly positive.
    pub chi: f64,
    /// Pump amplitude.
    pub beta: f64,
    pub kappa_ex: f64,
    pub kappa_int: f64,
    /// Probe drive strength `sqrt(v_b kappa_ex) E`.
    pub omega_drive: f64,
    /// Fock truncation.
    pub dim: usize,
}

impl ModelParams {
    /// Parameters with the Kerr and decay rates used throughout the
    /// reference scenarios: chi/2pi = 30 MHz, kappa_ex/2pi = 0.4 MHz,
    /// kappa_int/2pi = 4 MHz, no probe drive, `DEFAULT_DIM` levels.
    pub fn reference(delta_mhz: f64, beta_mhz: f64) -> Self {
        ModelParams {
            delta: mhz(delta_mhz),
            chi: mhz(30.0),
            beta: mhz(beta_mhz),
            kappa_ex: mhz(0.4),
            kappa_int: mhz(4.0),
            omega_drive: 0.0,
            dim: DEFAULT_DIM,
        }
    }

    pub fn with_beta(self, beta: f64) -> Self {
        ModelParams { beta, ..self }
    }

    pub fn with_dim(self, dim: usize) -> Self {
        ModelParams { dim, ..self }
    }

    pub fn with_omega_drive(self, omega_drive: f64) -> Self {
        ModelParams {
            omega_drive,
            ..self
        }
    }

    pub fn kappa_tot(&self) -> f64 {
        self.kappa_ex + self.kappa_int
    }

    pub fn validate(&self) -> Result<()> {
        fn finite(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: format!("{v} is not finite"),
                })
            }
        }
        fn nonneg(name: &'static str, v: f64) -> Result<()> {
            finite(name, v)?;
            if v < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("{v} must be non-negative"),
                });
            }
            Ok(())
        }
        finite("delta", self.delta)?;
        finite("chi", self.chi)?;
        if self.chi <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "chi",
                reason: format!("{} must be positive", self.chi),
            });
        }
        nonneg("beta", self.beta)?;
        nonneg("kappa_ex", self.kappa_ex)?;
        nonneg("kappa_int", self.kappa_int)?;
        nonneg("omega_drive", self.omega_drive)?;
        if self.dim < 2 {
            return Err(Error::InvalidDimension(self.dim));
        }
        Ok(())
    }
}

/// Rotating-frame Hamiltonian
/// `delta a^dag a - (chi/2) a^dag^2 a^2 + beta (a^2 + a^dag^2)`
/// in units of angular frequency.
pub fn build_h0(params: &ModelParams) -> Result<OperatorMatrix> {
    params.validate()?;
    let (delta, chi, beta) = (params.delta, params.chi, params.beta);
    OperatorMatrix::from_fn(params.dim, |m, n| {
        let v = if m == n {
            let mf = m as f64;
            delta * mf - 0.5 * chi * mf * (mf - 1.0)
        } else if n == m + 2 || m == n + 2 {
            let low = m.min(n) as f64;
            beta * ((low + 1.0) * (low + 2.0)).sqrt()
        } else {
            0.0
        };
        Complex64::new(v, 0.0)
    })
}

/// SQUID-array circuit description. Energies are given as `E / hbar`
/// in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    pub e_c: f64,
    /// Josephson energy of one SQUID.
    pub e_j: f64,
    pub n_squid: u32,
    /// Amplitude of the pump modulation of `e_j`.
    pub delta_e_j: f64,
    pub omega_p: f64,
}

/// Upper bound on `phi_0 / N` for the fourth-order expansion of the
/// junction potential.
pub const MAX_PHASE_RATIO: f64 = 0.5;
/// Upper bound on `chi beta / omega^2` for dropping the pump-induced
/// quartic term.
pub const MAX_PUMP_KERR_RATIO: f64 = 1e-3;

/// Rotating-frame model derived from a circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitModel {
    /// Bare resonance frequency `sqrt(8 E_C E_J / N)`.
    pub omega: f64,
    pub chi: f64,
    pub beta: f64,
    pub delta: f64,
    pub n0_squared: f64,
    pub phi0_squared: f64,
}

impl CircuitModel {
    /// `phi_0 / N`, equal to `2 sqrt(chi / omega)`.
    pub fn phase_ratio(&self) -> f64 {
        2.0 * (self.chi / self.omega).sqrt()
    }

    pub fn to_model_params(&self, kappa_ex: f64, kappa_int: f64, dim: usize) -> ModelParams {
        ModelParams {
            delta: self.delta,
            chi: self.chi,
            beta: self.beta,
            kappa_ex,
            kappa_int,
            omega_drive: 0.0,
            dim,
        }
    }
}

/// Maps a SQUID-array circuit onto the rotating-frame parameters.
///
/// The pump-induced quartic term proportional to `chi beta / omega` is
/// dropped, so the mapping refuses circuits where that ratio (or the phase
/// expansion parameter) is not small.
pub fn circuit_to_model(circuit: &CircuitParams) -> Result<CircuitModel> {
    let CircuitParams {
        e_c,
        e_j,
        n_squid,
        delta_e_j,
        omega_p,
    } = *circuit;
    for (name, v) in [("e_c", e_c), ("e_j", e_j)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidParameter {
                name,
                reason: format!("{v} must be positive"),
            });
        }
    }
    if !(delta_e_j.is_finite() && delta_e_j >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "delta_e_j",
            reason: format!("{delta_e_j} must be non-negative"),
        });
    }
    if !omega_p.is_finite() {
        return Err(Error::InvalidParameter {
            name: "omega_p",
            reason: "not finite".into(),
        });
    }
    if n_squid == 0 {
        return Err(Error::InvalidParameter {
            name: "n_squid",
            reason: "must be at least 1".into(),
        });
    }
    let n = n_squid as f64;
    let omega = (8.0 * e_c * e_j / n).sqrt();
    let chi = e_c / (n * n);
    let beta = omega * delta_e_j / (8.0 * e_j);
    let model = CircuitModel {
        omega,
        chi,
        beta,
        delta: omega - chi - omega_p / 2.0,
        n0_squared: (e_j / (32.0 * n * e_c)).sqrt(),
        phi0_squared: (2.0 * n * e_c / e_j).sqrt(),
    };

    let phase_ratio = model.phase_ratio();
    if phase_ratio >= MAX_PHASE_RATIO {
        return Err(Error::ModelValidity {
            bound: "phi_0 / N < 0.5",
            value: phase_ratio,
            limit: MAX_PHASE_RATIO,
        });
    }
    let pump_kerr = chi * beta / (omega * omega);
    if pump_kerr >= MAX_PUMP_KERR_RATIO {
        return Err(Error::ModelValidity {
            bound: "chi beta / omega^2 < 1e-3",
            value: pump_kerr,
            limit: MAX_PUMP_KERR_RATIO,
        });
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_annihilation, build_number, build_parity};

    fn reference_circuit(delta_ej_ratio: f64) -> CircuitParams {
        let e_j = ghz(125.0 / 3.0);
        CircuitParams {
            e_c: ghz(3.0),
            e_j,
            n_squid: 10,
            delta_e_j: delta_ej_ratio * e_j,
            omega_p: ghz(19.9),
        }
    }

    #[test]
    fn unit_round_trip() {
        assert!((to_mhz(mhz(7.25)) - 7.25).abs() < 1e-12);
        assert!((mhz(1.0) - 2.0 * PI * 1e6).abs() < 1e-6);
    }

    #[test]
    fn h0_diagonal_without_pump() {
        let p = ModelParams::reference(7.0, 0.0);
        let h = build_h0(&p).unwrap();
        for (m, expected) in [(0, 0.0), (1, 7.0), (2, -16.0), (3, -69.0)] {
            assert!((to_mhz(h.get(m, m).re) - expected).abs() < 1e-9, "m={m}");
        }
        let kerr_only = ModelParams::reference(0.0, 0.0);
        let h = build_h0(&kerr_only).unwrap();
        assert!((h.get(2, 2).re + mhz(30.0)).abs() < 1e-6);
    }

    #[test]
    fn h0_pump_matrix_element() {
        let p = ModelParams::reference(-7.0, 13.0);
        let h = build_h0(&p).unwrap();
        assert!((h.get(0, 2).re - p.beta * 2f64.sqrt()).abs() < 1e-6);
        assert_eq!(h.get(0, 2).im, 0.0);
    }

    #[test]
    fn h0_matches_ladder_construction() {
        let p = ModelParams::reference(20.0, 11.0).with_dim(15);
        let a = build_annihilation(p.dim).unwrap();
        let ad = a.adjoint();
        let a2 = a.matmul(&a).unwrap();
        let ad2 = ad.matmul(&ad).unwrap();
        let re = |x: f64| Complex64::new(x, 0.0);
        let oracle = build_number(p.dim)
            .unwrap()
            .scale(re(p.delta))
            .sub(&ad2.matmul(&a2).unwrap().scale(re(p.chi / 2.0)))
            .unwrap()
            .add(&a2.add(&ad2).unwrap().scale(re(p.beta)))
            .unwrap();
        let h = build_h0(&p).unwrap();
        assert!(h.sub(&oracle).unwrap().max_abs() < 1e-12 * oracle.max_abs());
    }

    #[test]
    fn h0_hermitian_and_parity_conserving() {
        for (delta, beta) in [(-7.0, 3.0), (0.0, 20.0), (20.0, 8.5)] {
            let h = build_h0(&ModelParams::reference(delta, beta)).unwrap();
            assert!(h.hermitian_defect() <= 1e-14 * h.max_abs());
            let parity = build_parity(h.dim()).unwrap();
            assert_eq!(h.commutator(&parity).unwrap().max_abs(), 0.0);
        }
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = ModelParams::reference(0.0, 1.0);
        p.chi = 0.0;
        assert!(build_h0(&p).is_err());
        let mut p = ModelParams::reference(0.0, 1.0);
        p.kappa_int = -1.0;
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParameter {
                name: "kappa_int",
                ..
            })
        ));
        assert!(matches!(
            ModelParams::reference(0.0, 1.0).with_dim(1).validate(),
            Err(Error::InvalidDimension(1))
        ));
    }

    #[test]
    fn circuit_mapping_reference_values() {
        let model = circuit_to_model(&reference_circuit(0.016)).unwrap();
        assert!((to_mhz(model.chi) - 30.0).abs() < 1e-9);
        assert!((to_mhz(model.omega) - 10_000.0).abs() < 1e-6);
        assert!((to_mhz(model.beta) - 20.0).abs() < 1e-9);
        // omega - chi - omega_p / 2 = 10000 - 30 - 9950
        assert!((to_mhz(model.delta) - 20.0).abs() < 1e-6);
        let ratio = model.phi0_squared.sqrt() / 10.0;
        assert!((ratio - model.phase_ratio()).abs() < 1e-12);
        assert!((model.n0_squared * model.phi0_squared - 0.25).abs() < 1e-12);
    }

    #[test]
    fn circuit_mapping_round_trips_through_h0() {
        let model = circuit_to_model(&reference_circuit(0.016)).unwrap();
        let via_circuit = build_h0(&model.to_model_params(mhz(0.4), mhz(4.0), 20)).unwrap();
        let direct = build_h0(&ModelParams::reference(20.0, 20.0).with_dim(20)).unwrap();
        assert!(via_circuit.sub(&direct).unwrap().max_abs() <= 1e-12 * direct.max_abs());
    }

    #[test]
    fn circuit_validity_bounds() {
        // few junctions: large phase across each one
        let mut c = reference_circuit(0.016);
        c.n_squid = 1;
        c.e_j = ghz(2.0);
        match circuit_to_model(&c) {
            Err(Error::ModelValidity { bound, .. }) => assert!(bound.contains("phi_0")),
            other => panic!("unexpected {other:?}"),
        }
        // huge pump modulation
        let c = reference_circuit(900.0);
        match circuit_to_model(&c) {
            Err(Error::ModelValidity { bound, .. }) => assert!(bound.contains("chi beta")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
