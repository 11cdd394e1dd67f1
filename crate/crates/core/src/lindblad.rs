// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

//! Lindblad generator of the undriven rotating-frame master equation,
//! its stationary state, and a fixed-step RK4 integrator used to check it.
//!
//! Density matrices are vectorized row-major: element `(m, n)` sits at
//! index `m * d + n`.

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use num_complex::Complex64;

use crate::eigen::EigenSystem;
use crate::error::{Error, Result};
use crate::fock::{build_annihilation, build_number, OperatorMatrix};
use crate::model::{build_h0, ModelParams};

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-8;
const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Fock,
    Eigen,
}

#[derive(Debug, Clone)]
pub struct DensityMatrix {
    basis: Basis,
    entries: OperatorMatrix,
}

impl DensityMatrix {
    /// Wraps `entries` after checking Hermiticity, unit trace and
    /// positivity.
    pub fn new(entries: OperatorMatrix, basis: Basis) -> Result<Self> {
        let rho = DensityMatrix { basis, entries };
        rho.validate()?;
        Ok(rho)
    }

    /// Pure Fock state `|n><n|`.
    pub fn fock_state(dim: usize, n: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidParameter {
                name: "fock index",
                reason: format!("{n} outside dimension {dim}"),
            });
        }
        let entries = OperatorMatrix::from_fn(dim, |i, j| {
            Complex64::new(if i == n && j == n { 1.0 } else { 0.0 }, 0.0)
        })?;
        Ok(DensityMatrix {
            basis: Basis::Fock,
            entries,
        })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries.get(m, n)
    }

    pub fn entries(&self) -> &OperatorMatrix {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let vals = self
            .entries
            .as_mat()
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Invariant(format!("eigenvalues failed: {e:?}")))?;
        Ok(vals.into_iter().fold(f64::INFINITY, f64::min))
    }

    pub fn validate(&self) -> Result<()> {
        let defect = self.entries.hermitian_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NonHermitian(defect));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::Invariant(format!("trace {tr} differs from 1")));
        }
        let min = self.min_eigenvalue()?;
        if min < -PSD_TOL {
            return Err(Error::Invariant(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    /// Largest entry difference with another density matrix.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        Ok(self.entries.sub(&other.entries)?.max_abs())
    }

    /// `V^dag rho V` for the labeled eigenvectors of `es`.
    pub fn to_eigenbasis(&self, es: &EigenSystem) -> Result<DensityMatrix> {
        if self.basis != Basis::Fock {
            return Err(Error::BasisMismatch { expected: "fock" });
        }
        if es.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: es.dim(),
                right: self.dim(),
            });
        }
        let v = es.eigenvectors();
        let rotated = &(&v.adjoint().to_owned() * self.entries.as_mat()) * v;
        Ok(DensityMatrix {
            basis: Basis::Eigen,
            entries: OperatorMatrix::from_mat(rotated)?,
        })
    }
}

/// Superoperator of `d rho / dt = -i [H0, rho] + kappa_tot D[a] rho`.
#[derive(Debug, Clone)]
pub struct LindbladGenerator {
    dim: usize,
    kappa_tot: f64,
    superoperator: Mat<Complex64>,
}

impl LindbladGenerator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kappa_tot(&self) -> f64 {
        self.kappa_tot
    }

    pub fn superoperator(&self) -> &Mat<Complex64> {
        &self.superoperator
    }

    /// Largest entry magnitude of the superoperator.
    pub fn max_abs(&self) -> f64 {
        let n = self.superoperator.nrows();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.superoperator[(i, j)].norm());
            }
        }
        m
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let n = self.superoperator.nrows();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.superoperator[(i, j)].norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Largest step accepted by [`evolve`].
    pub fn max_stable_step(&self) -> f64 {
        0.1 / self.norm_inf()
    }

    /// Applies the generator to an operator.
    pub fn apply(&self, rho: &OperatorMatrix) -> Result<OperatorMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rho.dim(),
            });
        }
        let d = self.dim;
        let v = Mat::<Complex64>::from_fn(d * d, 1, |i, _| rho.get(i / d, i % d));
        let out = &self.superoperator * &v;
        OperatorMatrix::from_fn(d, |m, n| out[(m * d + n, 0)])
    }
}

/// Builds the superoperator for the undriven master equation. The probe
/// drive plays no role here.
pub fn build_generator(params: &ModelParams) -> Result<LindbladGenerator> {
    let h = build_h0(params)?;
    let a = build_annihilation(params.dim)?;
    let num = build_number(params.dim)?;
    let d = params.dim;
    let kappa = params.kappa_tot();
    let i = Complex64::new(0.0, 1.0);
    let mut sup = Mat::<Complex64>::zeros(d * d, d * d);
    for m in 0..d {
        for n in 0..d {
            let row = m * d + n;
            for k in 0..d {
                for l in 0..d {
                    let mut v = kappa * a.get(m, k) * a.get(n, l).conj();
                    if l == n {
                        v -= i * h.get(m, k) + 0.5 * kappa * num.get(m, k);
                    }
                    if k == m {
                        v += i * h.get(l, n) - 0.5 * kappa * num.get(l, n);
                    }
                    if v != Complex64::new(0.0, 0.0) {
                        sup[(row, k * d + l)] = v;
                    }
                }
            }
        }
    }
    Ok(LindbladGenerator {
        dim: d,
        kappa_tot: kappa,
        superoperator: sup,
    })
}

/// Number of pivots of an LU factorization that are negligible relative to
/// the largest one.
fn tiny_pivots(u_diag: impl Iterator<Item = Complex64>) -> usize {
    let mags: Vec<f64> = u_diag.map(|z| z.norm()).collect();
    let max = mags.iter().cloned().fold(0.0, f64::max);
    mags.iter()
        .filter(|&&m| m.is_nan() || m <= RANK_TOL * max)
        .count()
}

/// Stationary state from the null space of the generator.
///
/// The generator decouples into the sectors with `m + n` even and odd. The
/// trace functional lives in the even sector, where one equation is
/// replaced by the trace condition; the odd sector must be nonsingular for
/// the stationary state to be unique.
pub fn steady_state(gen: &LindbladGenerator) -> Result<DensityMatrix> {
    if gen.kappa_tot <= 0.0 {
        return Err(Error::NoUniqueSteadyState);
    }
    let d = gen.dim;
    let sup = &gen.superoperator;
    let scale = gen.max_abs();
    let even: Vec<usize> = (0..d * d)
        .filter(|&i| (i / d + i % d).is_multiple_of(2))
        .collect();
    let odd: Vec<usize> = (0..d * d).filter(|&i| (i / d + i % d) % 2 == 1).collect();

    let mut a = Mat::<Complex64>::from_fn(even.len(), even.len(), |r, c| sup[(even[r], even[c])]);
    // even[0] is the (0, 0) element
    for (c, &col) in even.iter().enumerate() {
        let on_diag = col / d == col % d;
        a[(0, c)] = Complex64::new(if on_diag { scale } else { 0.0 }, 0.0);
    }
    let lu = a.partial_piv_lu();
    let mut tiny = tiny_pivots((0..even.len()).map(|k| lu.U()[(k, k)]));

    if !odd.is_empty() {
        let b = Mat::<Complex64>::from_fn(odd.len(), odd.len(), |r, c| sup[(odd[r], odd[c])]);
        let lu_odd = b.partial_piv_lu();
        tiny += tiny_pivots((0..odd.len()).map(|k| lu_odd.U()[(k, k)]));
    }
    if tiny > 0 {
        return Err(Error::SteadyStateMultiplicity(1 + tiny));
    }

    let mut rhs = Mat::<Complex64>::zeros(even.len(), 1);
    rhs[(0, 0)] = Complex64::new(scale, 0.0);
    let x = lu.solve(&rhs);

    let mut full = Mat::<Complex64>::zeros(d, d);
    for (k, &idx) in even.iter().enumerate() {
        let z = x[(k, 0)];
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Invariant("non-finite steady-state entry".into()));
        }
        full[(idx / d, idx % d)] = z;
    }
    let op = OperatorMatrix::from_mat(full)?;
    let asym = op.hermitian_defect();
    if asym > HERMITIAN_TOL {
        return Err(Error::Invariant(format!(
            "steady state asymmetry {asym:.3e} exceeds {HERMITIAN_TOL:.0e}"
        )));
    }
    let sym = op.add(&op.adjoint())?.scale(Complex64::new(0.5, 0.0));
    DensityMatrix::new(sym, Basis::Fock)
}

/// Compressed rows of the superoperator, for cheap repeated products.
struct SparseRows {
    start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl SparseRows {
    fn from_dense(m: &Mat<Complex64>) -> Self {
        let mut start = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let v = m[(i, j)];
                if v != Complex64::new(0.0, 0.0) {
                    cols.push(j);
                    vals.push(v);
                }
            }
            start.push(cols.len());
        }
        SparseRows { start, cols, vals }
    }

    fn mul_into(&self, x: &[Complex64], out: &mut [Complex64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.start[i]..self.start[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *o = acc;
        }
    }
}

/// Integrates the vectorized master equation with fixed-step RK4. The step
/// actually used is `t_final / ceil(t_final / dt)`.
pub fn evolve(
    gen: &LindbladGenerator,
    rho0: &DensityMatrix,
    t_final: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    if rho0.basis != Basis::Fock {
        return Err(Error::BasisMismatch { expected: "fock" });
    }
    if rho0.dim() != gen.dim {
        return Err(Error::DimensionMismatch {
            left: gen.dim,
            right: rho0.dim(),
        });
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t_final",
            reason: format!("{t_final} must be finite and non-negative"),
        });
    }
    let limit = gen.max_stable_step();
    if !(dt > 0.0 && dt <= limit) {
        return Err(Error::StepSize { dt, limit });
    }
    if t_final == 0.0 {
        return Ok(rho0.clone());
    }
    let steps = (t_final / dt).ceil() as usize;
    let h = t_final / steps as f64;
    let d = gen.dim;
    let n = d * d;
    let sparse = SparseRows::from_dense(&gen.superoperator);

    let mut y: Vec<Complex64> = (0..n).map(|i| rho0.get(i / d, i % d)).collect();
    let mut k1 = vec![Complex64::new(0.0, 0.0); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();
    for _ in 0..steps {
        sparse.mul_into(&y, &mut k1);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        sparse.mul_into(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        sparse.mul_into(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + h * k3[i];
        }
        sparse.mul_into(&tmp, &mut k4);
        for i in 0..n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }
    }
    let entries = OperatorMatrix::from_fn(d, |m, nn| y[m * d + nn])?;
    Ok(DensityMatrix {
        basis: Basis::Fock,
        entries,
    })
}

/// Diagonal of `rho` in the labeled eigenbasis of `es`.
pub fn populations_in_eigenbasis(rho: &DensityMatrix, es: &EigenSystem) -> Result<Vec<f64>> {
    let rotated = rho.to_eigenbasis(es)?;
    let pops: Vec<f64> = (0..rotated.dim()).map(|m| rotated.get(m, m).re).collect();
    let total: f64 = pops.iter().sum();
    if (total - 1.0).abs() > PSD_TOL
        || pops
            .iter()
            .any(|&p| !(-PSD_TOL..=1.0 + PSD_TOL).contains(&p))
    {
        return Err(Error::Invariant(format!(
            "populations out of range (sum {total})"
        )));
    }
    Ok(pops)
}

/// Stationary state of `params` and its populations in the labeled
/// eigenbasis of `es`.
pub fn stationary_populations(
    params: &ModelParams,
    es: &EigenSystem,
) -> Result<(DensityMatrix, Vec<f64>)> {
    let rho = steady_state(&build_generator(params)?)?;
    let pops = populations_in_eigenbasis(&rho, es)?;
    Ok((rho, pops))
}
