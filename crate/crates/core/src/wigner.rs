// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

//! Wigner function on a rectangular phase-space grid.
//!
//! Quadratures are `x = (a + a^dag) / sqrt 2` and `p = -i (a - a^dag) / sqrt 2`,
//! so a coherent state `|alpha>` is centered at `sqrt 2 (Re alpha, Im alpha)`.

use std::f64::consts::{FRAC_1_PI, FRAC_1_SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lindblad::{Basis, DensityMatrix};

const HERMITIAN_TOL: f64 = 1e-10;
const IMAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct WignerGrid {
    pub x_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    /// `values[i][j]` is `W(x_axis[i], p_axis[j])`.
    pub values: Vec<Vec<f64>>,
}

impl WignerGrid {
    /// Trapezoidal sum of `W dx dp` over the grid.
    pub fn integral(&self) -> f64 {
        let widths = |axis: &[f64]| -> Vec<f64> {
            let n = axis.len();
            if n < 2 {
                return vec![0.0; n];
            }
            (0..n)
                .map(|k| (axis[(k + 1).min(n - 1)] - axis[k.saturating_sub(1)]) / 2.0)
                .collect()
        };
        let wx = widths(&self.x_axis);
        let wp = widths(&self.p_axis);
        self.values
            .iter()
            .zip(&wx)
            .map(|(row, dx)| row.iter().zip(&wp).map(|(w, dp)| w * dx * dp).sum::<f64>())
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Grid point holding the largest value.
    pub fn argmax(&self) -> (f64, f64) {
        let mut best = (f64::NEG_INFINITY, 0, 0);
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v > best.0 {
                    best = (v, i, j);
                }
            }
        }
        (self.x_axis[best.1], self.p_axis[best.2])
    }
}

/// Matrix elements `<m|D(gamma)|n>` for `m, n < dim`, row-major.
pub fn displacement_elements(gamma: Complex64, dim: usize) -> Vec<Complex64> {
    let mut d = vec![Complex64::new(0.0, 0.0); dim * dim];
    d[0] = Complex64::new((-0.5 * gamma.norm_sqr()).exp(), 0.0);
    for n in 1..dim {
        d[n] = d[n - 1] * (-gamma.conj()) / (n as f64).sqrt();
    }
    for m in 0..dim - 1 {
        let norm = ((m + 1) as f64).sqrt();
        for n in 0..dim {
            let lower = if n > 0 {
                (n as f64).sqrt() * d[m * dim + n - 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            d[(m + 1) * dim + n] = (lower + gamma * d[m * dim + n]) / norm;
        }
    }
    d
}

/// `W(x, p) = Tr[rho D(alpha) P D(-alpha)] / pi` with `alpha = (x + i p) / sqrt 2`
/// and `P` the photon-number parity.
pub fn wigner_point(rho: &DensityMatrix, x: f64, p: f64) -> Complex64 {
    let dim = rho.dim();
    let gamma = Complex64::new(x, p) * (2.0 * FRAC_1_SQRT_2);
    let disp = displacement_elements(gamma, dim);
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..dim {
        for n in 0..dim {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            acc += rho.get(n, m) * disp[m * dim + n] * sign;
        }
    }
    acc * FRAC_1_PI
}

pub fn wigner(rho: &DensityMatrix, x_axis: &[f64], p_axis: &[f64]) -> Result<WignerGrid> {
    if rho.basis() != Basis::Fock {
        return Err(Error::BasisMismatch { expected: "fock" });
    }
    let defect = rho.entries().hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NonHermitian(defect));
    }
    let rows: Vec<Result<Vec<f64>>> = x_axis
        .par_iter()
        .map(|&x| {
            p_axis
                .iter()
                .map(|&p| {
                    let w = wigner_point(rho, x, p);
                    if w.im.abs() > IMAG_TOL {
                        return Err(Error::Invariant(format!(
                            "Wigner value at ({x}, {p}) has imaginary part {:.3e}",
                            w.im
                        )));
                    }
                    Ok(w.re)
                })
                .collect()
        })
        .collect();
    Ok(WignerGrid {
        x_axis: x_axis.to_vec(),
        p_axis: p_axis.to_vec(),
        values: rows.into_iter().collect::<Result<_>>()?,
    })
}
