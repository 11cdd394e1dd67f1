// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

//! Truncated Fock-space operators stored as dense complex matrices.

use std::fmt;

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Photon-number parity of a Fock state or of an eigenstate of a
/// parity-conserving Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parity of each Fock state `|0>, |1>, ..., |d-1>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityVector(Vec<Parity>);

impl ParityVector {
    pub fn new(dim: usize) -> Self {
        ParityVector((0..dim).map(Parity::of).collect())
    }

    pub fn as_slice(&self) -> &[Parity] {
        &self.0
    }

    /// Fock indices of the given parity, ascending.
    pub fn indices(&self, parity: Parity) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| **p == parity)
            .map(|(i, _)| i)
            .collect()
    }
}

/// A dense `d x d` complex operator on the truncated Fock space.
#[derive(Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: Mat<Complex64>,
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorMatrix")
            .field("dim", &self.dim())
            .finish_non_exhaustive()
    }
}

impl OperatorMatrix {
    pub fn from_mat(entries: Mat<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                left: entries.nrows(),
                right: entries.ncols(),
            });
        }
        check_dim(entries.nrows())?;
        Ok(OperatorMatrix { entries })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        check_dim(dim)?;
        Ok(OperatorMatrix {
            entries: Mat::from_fn(dim, dim, f),
        })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |i, j| {
            Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
        })
    }

    /// Diagonal operator with real entries.
    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::from_fn(diag.len(), |i, j| {
            Complex64::new(if i == j { diag[i] } else { 0.0 }, 0.0)
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn as_mat(&self) -> &Mat<Complex64> {
        &self.entries
    }

    pub fn into_mat(self) -> Mat<Complex64> {
        self.entries
    }

    pub fn adjoint(&self) -> Self {
        OperatorMatrix {
            entries: self.entries.adjoint().to_owned(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        Ok(OperatorMatrix {
            entries: &self.entries * &rhs.entries,
        })
    }

    /// `self * rhs - rhs * self`
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        let ab = self.matmul(rhs)?;
        let ba = rhs.matmul(self)?;
        ab.sub(&ba)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        Ok(OperatorMatrix {
            entries: &self.entries + &rhs.entries,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        Ok(OperatorMatrix {
            entries: &self.entries - &rhs.entries,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let d = self.dim();
        OperatorMatrix {
            entries: Mat::from_fn(d, d, |i, j| self.entries[(i, j)] * factor),
        }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        let d = self.dim();
        let mut m = 0.0f64;
        for j in 0..d {
            for i in 0..d {
                m = m.max(self.entries[(i, j)].norm());
            }
        }
        m
    }

    /// Largest magnitude of `self - self^dagger`.
    pub fn hermitian_defect(&self) -> f64 {
        let d = self.dim();
        let mut m = 0.0f64;
        for j in 0..d {
            for i in 0..=j {
                m = m.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entries[(i, i)]).sum()
    }

    /// Operator with every entry of `self` restricted to rows and columns
    /// `< keep`, used to compare against truncation artifacts.
    pub fn top_left(&self, keep: usize) -> Mat<Complex64> {
        let keep = keep.min(self.dim());
        Mat::from_fn(keep, keep, |i, j| self.entries[(i, j)])
    }

    fn check_same_dim(&self, rhs: &Self) -> Result<()> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: rhs.dim(),
            });
        }
        Ok(())
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    Ok(())
}

/// Annihilation operator `a` with `a[m, m+1] = sqrt(m+1)`.
pub fn build_annihilation(dim: usize) -> Result<OperatorMatrix> {
    OperatorMatrix::from_fn(dim, |m, n| {
        if n == m + 1 {
            Complex64::new((n as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Number operator `a^dagger a`, built directly as `diag(0, 1, ..., d-1)`.
pub fn build_number(dim: usize) -> Result<OperatorMatrix> {
    let diag: Vec<f64> = (0..dim).map(|n| n as f64).collect();
    OperatorMatrix::from_diagonal(&diag)
}

/// Photon-number parity operator `diag((-1)^m)`.
pub fn build_parity(dim: usize) -> Result<OperatorMatrix> {
    let diag: Vec<f64> = (0..dim).map(|n| Parity::of(n).sign()).collect();
    OperatorMatrix::from_diagonal(&diag)
}
