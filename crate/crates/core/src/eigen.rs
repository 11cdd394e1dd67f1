// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

//! Diagonalization of the rotating-frame Hamiltonian with adiabatic level
//! labels.
//!
//! Level `m` is the eigenstate continuously connected to the Fock state
//! `|m>` at zero pump amplitude. Labels are propagated along the pump
//! amplitude by maximal-overlap matching, so the public ordering survives
//! level crossings. Eigenvalue rank is available separately.

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{build_annihilation, build_number, OperatorMatrix, Parity};
use crate::model::{build_h0, mhz, ModelParams};

/// Largest pump step used when labels are chained from zero pump.
pub fn chain_step() -> f64 {
    mhz(0.5)
}

/// Two candidate assignments closer than this in squared overlap are
/// reported as ambiguous.
const AMBIGUITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    eigenvectors: Mat<Complex64>,
    sorted_rank: Vec<usize>,
    parities: Vec<Parity>,
    x: Mat<Complex64>,
    y: Mat<Complex64>,
    ambiguous: bool,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalue of level `label`.
    pub fn eigenvalue(&self, label: usize) -> f64 {
        self.eigenvalues[label]
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors in the Fock basis, one column per label.
    pub fn eigenvectors(&self) -> &Mat<Complex64> {
        &self.eigenvectors
    }

    /// Position of `label` when eigenvalues are sorted ascending.
    pub fn sorted_rank(&self, label: usize) -> usize {
        self.sorted_rank[label]
    }

    pub fn parity(&self, label: usize) -> Parity {
        self.parities[label]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    /// `<phi_m| a |phi_n>`.
    pub fn x(&self, m: usize, n: usize) -> Complex64 {
        self.x[(m, n)]
    }

    /// `<phi_m| a^dag a |phi_n>`.
    pub fn y(&self, m: usize, n: usize) -> Complex64 {
        self.y[(m, n)]
    }

    pub fn x_matrix(&self) -> &Mat<Complex64> {
        &self.x
    }

    pub fn y_matrix(&self) -> &Mat<Complex64> {
        &self.y
    }

    /// Set when two label assignments were indistinguishable by overlap.
    pub fn labeling_ambiguous(&self) -> bool {
        self.ambiguous
    }

    /// Labels of the `count` highest levels, highest first.
    pub fn highest_levels(&self, count: usize) -> Vec<usize> {
        let mut labels: Vec<usize> = (0..self.dim()).collect();
        labels.sort_by(|&a, &b| self.sorted_rank[b].cmp(&self.sorted_rank[a]));
        labels.truncate(count);
        labels
    }

    /// `<phi_m|phi'_n>` between this system and another of equal size.
    pub fn overlap(&self, other: &EigenSystem, m: usize, n: usize) -> Complex64 {
        column_inner(&self.eigenvectors, m, &other.eigenvectors, n)
    }
}

fn column_inner(a: &Mat<Complex64>, i: usize, b: &Mat<Complex64>, j: usize) -> Complex64 {
    (0..a.nrows()).map(|k| a[(k, i)].conj() * b[(k, j)]).sum()
}

struct RawEigen {
    values: Vec<f64>,
    vectors: Mat<Complex64>,
    parities: Vec<Parity>,
}

/// Diagonalizes each photon-number-parity block separately. The blocks
/// decouple exactly, so every eigenvector has a definite parity.
fn block_eigen(h0: &OperatorMatrix) -> Result<RawEigen> {
    let d = h0.dim();
    let mut values = Vec::with_capacity(d);
    let mut vectors = Mat::<Complex64>::zeros(d, d);
    let mut parities = Vec::with_capacity(d);
    for parity in [Parity::Even, Parity::Odd] {
        let idx: Vec<usize> = (0..d).filter(|&m| Parity::of(m) == parity).collect();
        let block = Mat::<Complex64>::from_fn(idx.len(), idx.len(), |i, j| h0.get(idx[i], idx[j]));
        let evd = block
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Invariant(format!("eigendecomposition failed: {e:?}")))?;
        let u = evd.U();
        let s = evd.S().column_vector();
        for k in 0..idx.len() {
            let col = values.len();
            // fix the gauge: largest component real and positive
            let mut pivot = 0;
            for i in 1..idx.len() {
                if u[(i, k)].norm() > u[(pivot, k)].norm() + 1e-12 {
                    pivot = i;
                }
            }
            let phase = u[(pivot, k)].conj() / u[(pivot, k)].norm();
            for (i, &row) in idx.iter().enumerate() {
                vectors[(row, col)] = u[(i, k)] * phase;
            }
            values.push(s[k].re);
            parities.push(parity);
        }
    }
    Ok(RawEigen {
        values,
        vectors,
        parities,
    })
}

/// Greedy maximal-overlap assignment of `raw` columns to the labels of
/// `reference` (columns of `ref_vectors` with energies `ref_values`).
/// Returns `order[label] = raw column` and the ambiguity flag.
fn match_labels(
    ref_vectors: &Mat<Complex64>,
    ref_values: &[f64],
    raw: &RawEigen,
) -> (Vec<usize>, bool) {
    let d = raw.values.len();
    let mut overlap = vec![vec![0.0f64; d]; d];
    for (i, row) in overlap.iter_mut().enumerate() {
        for (j, o) in row.iter_mut().enumerate() {
            *o = column_inner(ref_vectors, i, &raw.vectors, j).norm_sqr();
        }
    }

    let mut order = vec![usize::MAX; d];
    let mut taken = vec![false; d];
    let mut ambiguous = false;
    for _ in 0..d {
        let mut best = f64::NEG_INFINITY;
        for i in (0..d).filter(|&i| order[i] == usize::MAX) {
            for j in (0..d).filter(|&j| !taken[j]) {
                best = best.max(overlap[i][j]);
            }
        }
        // among near-maximal pairs, prefer the smallest energy change
        let mut pick = (usize::MAX, usize::MAX);
        let mut pick_gap = f64::INFINITY;
        for i in (0..d).filter(|&i| order[i] == usize::MAX) {
            for j in (0..d).filter(|&j| !taken[j]) {
                if best - overlap[i][j] <= AMBIGUITY_TOL {
                    let gap = (ref_values[i] - raw.values[j]).abs();
                    if gap < pick_gap {
                        pick_gap = gap;
                        pick = (i, j);
                    }
                }
            }
        }
        let (i, j) = pick;
        let rival = (0..d)
            .filter(|&k| k != j && !taken[k])
            .map(|k| overlap[i][k])
            .fold(0.0f64, f64::max);
        if overlap[i][j] > AMBIGUITY_TOL && overlap[i][j] - rival < AMBIGUITY_TOL {
            ambiguous = true;
        }
        order[i] = j;
        taken[j] = true;
    }
    (order, ambiguous)
}

fn assemble(raw: RawEigen, order: &[usize], ambiguous: bool) -> Result<EigenSystem> {
    let d = raw.values.len();
    let eigenvalues: Vec<f64> = order.iter().map(|&j| raw.values[j]).collect();
    let parities: Vec<Parity> = order.iter().map(|&j| raw.parities[j]).collect();
    let eigenvectors = Mat::<Complex64>::from_fn(d, d, |r, label| raw.vectors[(r, order[label])]);

    let mut by_value: Vec<usize> = (0..d).collect();
    by_value.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]).then(a.cmp(&b)));
    let mut sorted_rank = vec![0; d];
    for (rank, &label) in by_value.iter().enumerate() {
        sorted_rank[label] = rank;
    }

    let v_dag = eigenvectors.adjoint().to_owned();
    let a = build_annihilation(d)?;
    let n = build_number(d)?;
    let x = &(&v_dag * a.as_mat()) * &eigenvectors;
    let y = &(&v_dag * n.as_mat()) * &eigenvectors;

    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
        sorted_rank,
        parities,
        x,
        y,
        ambiguous,
    })
}

fn label_against(h0: &OperatorMatrix, reference: &EigenSystem) -> Result<EigenSystem> {
    let raw = block_eigen(h0)?;
    let (order, ambiguous) = match_labels(&reference.eigenvectors, &reference.eigenvalues, &raw);
    assemble(raw, &order, ambiguous || reference.ambiguous)
}

fn label_as_fock(h0: &OperatorMatrix) -> Result<EigenSystem> {
    let raw = block_eigen(h0)?;
    let d = raw.values.len();
    let fock = Mat::<Complex64>::from_fn(d, d, |i, j| {
        Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
    });
    let diag: Vec<f64> = (0..d).map(|m| h0.get(m, m).re).collect();
    let (order, ambiguous) = match_labels(&fock, &diag, &raw);
    assemble(raw, &order, ambiguous)
}

/// Diagonalizes `h0` and labels its eigenstates adiabatically.
///
/// With a `labeling_hint` the labels follow maximal overlap with the hint's
/// eigenvectors. Without one, `params.beta == 0` labels by Fock index and
/// `params.beta > 0` chains an internal sweep up from zero pump.
pub fn diagonalize(
    h0: &OperatorMatrix,
    params: &ModelParams,
    labeling_hint: Option<&EigenSystem>,
) -> Result<EigenSystem> {
    let defect = h0.hermitian_defect();
    if defect > 1e-10 * h0.max_abs().max(1.0) {
        return Err(Error::NonHermitian(defect));
    }
    if let Some(hint) = labeling_hint {
        if hint.dim() != h0.dim() {
            return Err(Error::DimensionMismatch {
                left: hint.dim(),
                right: h0.dim(),
            });
        }
        return label_against(h0, hint);
    }
    if params.beta == 0.0 {
        return label_as_fock(h0);
    }
    let start = label_as_fock(&build_h0(&params.with_beta(0.0))?)?;
    let previous = chain(params, start, 0.0, params.beta)?;
    label_against(h0, &previous)
}

/// Walks labels from `from_beta` to just below `to_beta` in steps no larger
/// than [`chain_step`], returning the system at the last intermediate point.
fn chain(
    params: &ModelParams,
    mut es: EigenSystem,
    from_beta: f64,
    to_beta: f64,
) -> Result<EigenSystem> {
    let span = to_beta - from_beta;
    let steps = (span / chain_step()).ceil().max(1.0) as usize;
    for k in 1..steps {
        let beta = from_beta + span * k as f64 / steps as f64;
        let h = build_h0(&params.with_beta(beta))?;
        es = label_against(&h, &es)?;
    }
    Ok(es)
}

/// Eigensystems along an ascending pump grid with labels chained from
/// point to point (refined internally where the grid is coarse).
pub fn eigensystem_sweep(params: &ModelParams, beta_grid: &[f64]) -> Result<Vec<EigenSystem>> {
    if beta_grid.windows(2).any(|w| w[1].is_nan() || w[1] < w[0]) {
        return Err(Error::InvalidParameter {
            name: "beta_grid",
            reason: "must be ascending".into(),
        });
    }
    let mut out: Vec<EigenSystem> = Vec::with_capacity(beta_grid.len());
    for (k, &beta) in beta_grid.iter().enumerate() {
        let p = params.with_beta(beta);
        let h = build_h0(&p)?;
        let es = match out.last() {
            None => diagonalize(&h, &p, None)?,
            Some(prev) => {
                let prev_beta = beta_grid[k - 1];
                let bridged = chain(params, prev.clone(), prev_beta, beta)?;
                diagonalize(&h, &p, Some(&bridged))?
            }
        };
        out.push(es);
    }
    Ok(out)
}

/// Antisymmetric matrix with entry `[n][m] = omega_n - omega_m`.
pub fn transition_frequencies(es: &EigenSystem) -> Vec<Vec<f64>> {
    let w = es.eigenvalues();
    w.iter()
        .map(|&wn| w.iter().map(|&wm| wn - wm).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagramRow {
    pub beta: f64,
    /// Energies of levels `0..L` by label.
    pub energies: Vec<f64>,
    pub parities: Vec<Parity>,
    pub ambiguous: bool,
}

/// Energies of the lowest `levels` labels along `beta_grid`.
pub fn energy_diagram(
    params: &ModelParams,
    beta_grid: &[f64],
    levels: usize,
) -> Result<Vec<DiagramRow>> {
    let levels = levels.min(params.dim);
    Ok(eigensystem_sweep(params, beta_grid)?
        .iter()
        .zip(beta_grid)
        .map(|(es, &beta)| DiagramRow {
            beta,
            energies: es.eigenvalues()[..levels].to_vec(),
            parities: es.parities()[..levels].to_vec(),
            ambiguous: es.labeling_ambiguous(),
        })
        .collect())
}
