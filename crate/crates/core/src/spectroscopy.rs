// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

//! Probe reflection coefficient.
//!
//! Frequencies passed to this module are probe detunings
//! `omega_in - omega_p / 2`. The weak-probe coefficient is a sum of one
//! complex Lorentzian per ordered pair of labeled levels. The finite-probe
//! coefficient comes from a harmonic-balance solve in which diagonal density
//! matrix elements are kept at harmonic zero and off-diagonal elements at the
//! probe harmonics `+-omega`.

use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64;
use serde::Serialize;

use crate::eigen::EigenSystem;
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Number of labeled levels entering the weak-probe sum.
pub const DEFAULT_LEVEL_CUT: usize = 8;

/// Number of labeled levels kept by the harmonic-balance solver.
pub const DEFAULT_HARMONIC_LEVEL_CUT: usize = 6;

const Y_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-14;

/// One ordered transition `m -> n` between labeled levels.
#[derive(Debug, Clone, Copy)]
pub struct TransitionDescriptor {
    pub from: usize,
    pub to: usize,
    pub omega_from: f64,
    pub omega_to: f64,
    pub x_element: Complex64,
    pub y_from: f64,
    pub y_to: f64,
    pub pop_from: f64,
    pub pop_to: f64,
}

impl TransitionDescriptor {
    pub fn new(es: &EigenSystem, pops: &[f64], from: usize, to: usize) -> Result<Self> {
        check_labels(es, pops, from, to)?;
        let t = TransitionDescriptor {
            from,
            to,
            omega_from: es.eigenvalue(from),
            omega_to: es.eigenvalue(to),
            x_element: es.x(from, to),
            y_from: es.y(from, from).re,
            y_to: es.y(to, to).re,
            pop_from: pops[from],
            pop_to: pops[to],
        };
        if t.y_from < -Y_TOL || t.y_to < -Y_TOL {
            return Err(Error::Invariant(format!(
                "negative photon number on levels ({from}, {to})"
            )));
        }
        Ok(t)
    }

    /// Probe detuning from this transition, `omega - omega_to + omega_from`.
    pub fn detuning(&self, omega: f64) -> f64 {
        omega - self.omega_to + self.omega_from
    }

    /// Probe detuning at which this transition is resonant.
    pub fn resonance(&self) -> f64 {
        self.omega_to - self.omega_from
    }

    /// Contribution of this transition to `Gamma - 1`.
    pub fn contribution(&self, kappa_ex: f64, kappa_tot: f64, omega: f64) -> Result<Complex64> {
        let num = kappa_ex * self.x_element.norm_sqr() * (self.pop_from - self.pop_to);
        let den = Complex64::new(
            -0.5 * kappa_tot * (self.y_from + self.y_to),
            self.detuning(omega),
        );
        if den.norm() == 0.0 {
            if num == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            return Err(Error::SingularDenominator {
                m: self.from,
                n: self.to,
            });
        }
        Ok(Complex64::new(num, 0.0) / den)
    }
}

fn check_labels(es: &EigenSystem, pops: &[f64], m: usize, n: usize) -> Result<()> {
    if pops.len() != es.dim() {
        return Err(Error::DimensionMismatch {
            left: es.dim(),
            right: pops.len(),
        });
    }
    if m >= es.dim() || n >= es.dim() {
        return Err(Error::InvalidParameter {
            name: "level label",
            reason: format!("({m}, {n}) outside dimension {}", es.dim()),
        });
    }
    Ok(())
}

/// Nominal external and internal decay rates of one transition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NominalRates {
    pub kappa_ex: f64,
    pub kappa_int: f64,
}

/// `kappa_ex |X_mn|^2 (rho_mm - rho_nn)` and its complement to
/// `kappa_tot (Y_mm + Y_nn)`.
pub fn nominal_rates(
    params: &ModelParams,
    es: &EigenSystem,
    pops: &[f64],
    m: usize,
    n: usize,
) -> Result<NominalRates> {
    let t = TransitionDescriptor::new(es, pops, m, n)?;
    let kappa_ex = params.kappa_ex * t.x_element.norm_sqr() * (t.pop_from - t.pop_to);
    let kappa_int = params.kappa_tot() * (t.y_from + t.y_to) - kappa_ex;
    Ok(NominalRates {
        kappa_ex,
        kappa_int,
    })
}

/// `-|X_mn|^2 (rho_mm - rho_nn)`: positive for a peak of `|Gamma|` at the
/// transition, negative for a dip.
pub fn eta(es: &EigenSystem, pops: &[f64], m: usize, n: usize) -> Result<f64> {
    check_labels(es, pops, m, n)?;
    Ok(-es.x(m, n).norm_sqr() * (pops[m] - pops[n]))
}

#[derive(Debug, Clone, Copy)]
pub struct WeakFieldOptions {
    pub level_cut: usize,
    pub per_transition: bool,
}

impl Default for WeakFieldOptions {
    fn default() -> Self {
        WeakFieldOptions {
            level_cut: DEFAULT_LEVEL_CUT,
            per_transition: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransitionTrace {
    pub from: usize,
    pub to: usize,
    pub values: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct SpectrumTrace {
    pub omega_grid: Vec<f64>,
    pub gamma: Vec<Complex64>,
    pub per_transition: Option<Vec<TransitionTrace>>,
    pub nominal_rates: Vec<((usize, usize), NominalRates)>,
}

/// Ordered transitions among the lowest `level_cut` labels.
pub fn transitions(
    es: &EigenSystem,
    pops: &[f64],
    level_cut: usize,
) -> Result<Vec<TransitionDescriptor>> {
    if level_cut < 2 || level_cut > es.dim() {
        return Err(Error::InvalidParameter {
            name: "level_cut",
            reason: format!("{level_cut} must lie in [2, {}]", es.dim()),
        });
    }
    let mut out = Vec::with_capacity(level_cut * (level_cut - 1));
    for m in 0..level_cut {
        for n in 0..level_cut {
            if m != n {
                out.push(TransitionDescriptor::new(es, pops, m, n)?);
            }
        }
    }
    Ok(out)
}

/// Weak-probe reflection coefficient
/// `1 + sum_{m != n} kappa_ex |X_mn|^2 (rho_mm - rho_nn) / (i Delta_nm - kappa_tot (Y_mm + Y_nn) / 2)`.
pub fn weak_field_gamma(
    params: &ModelParams,
    es: &EigenSystem,
    pops: &[f64],
    omega_grid: &[f64],
    options: &WeakFieldOptions,
) -> Result<SpectrumTrace> {
    let ts = transitions(es, pops, options.level_cut)?;
    let kappa_tot = params.kappa_tot();
    let mut gamma = vec![Complex64::new(1.0, 0.0); omega_grid.len()];
    let mut per = options.per_transition.then(Vec::new);
    let mut rates = Vec::with_capacity(ts.len());
    for t in &ts {
        let mut values = Vec::with_capacity(if per.is_some() { omega_grid.len() } else { 0 });
        for (g, &w) in gamma.iter_mut().zip(omega_grid) {
            let c = t.contribution(params.kappa_ex, kappa_tot, w)?;
            *g += c;
            if per.is_some() {
                values.push(c);
            }
        }
        if let Some(per) = per.as_mut() {
            per.push(TransitionTrace {
                from: t.from,
                to: t.to,
                values,
            });
        }
        rates.push((
            (t.from, t.to),
            nominal_rates(params, es, pops, t.from, t.to)?,
        ));
    }
    Ok(SpectrumTrace {
        omega_grid: omega_grid.to_vec(),
        gamma,
        per_transition: per,
        nominal_rates: rates,
    })
}

/// Density matrix harmonics in the labeled eigenbasis: `diag[m]` at
/// harmonic zero, `plus[(m, n)]` at `+omega` and `minus[(m, n)]` at
/// `-omega` for `m != n`.
#[derive(Debug, Clone)]
pub struct HarmonicState {
    pub level_cut: usize,
    pub diag: Vec<f64>,
    pub plus: Mat<Complex64>,
    pub minus: Mat<Complex64>,
}

impl HarmonicState {
    /// Largest `|minus[(m, n)] - conj(plus[(n, m)])|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let m = self.level_cut;
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                worst = worst.max((self.minus[(i, j)] - self.plus[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

/// Linear system of the harmonic balance at fixed pump, with the probe
/// frequency entering only on the diagonal.
#[derive(Debug, Clone)]
pub struct HarmonicBalance {
    level_cut: usize,
    kappa_ex: f64,
    omega_drive: f64,
    x: Mat<Complex64>,
    pairs: Vec<(usize, usize)>,
    base: Mat<Complex64>,
}

impl HarmonicBalance {
    pub fn new(params: &ModelParams, es: &EigenSystem, level_cut: usize) -> Result<Self> {
        if !(params.omega_drive > 0.0 && params.omega_drive.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "omega_drive",
                reason: format!("{} must be positive for a finite probe", params.omega_drive),
            });
        }
        if level_cut < 2 || level_cut > es.dim() {
            return Err(Error::InvalidParameter {
                name: "harmonic_level_cut",
                reason: format!("{level_cut} must lie in [2, {}]", es.dim()),
            });
        }
        let mc = level_cut;
        let kappa = params.kappa_tot();
        let om = params.omega_drive;
        let i = Complex64::new(0.0, 1.0);
        let x = Mat::<Complex64>::from_fn(mc, mc, |m, n| es.x(m, n));
        let y = Mat::<Complex64>::from_fn(mc, mc, |m, n| es.y(m, n));
        let w: Vec<f64> = (0..mc).map(|m| es.eigenvalue(m)).collect();

        let pairs: Vec<(usize, usize)> = (0..mc)
            .flat_map(|m| (0..mc).filter(move |&n| n != m).map(move |n| (m, n)))
            .collect();
        let np = pairs.len();
        let p_idx = |m: usize, n: usize| mc + pair_index(mc, m, n);
        let q_idx = |m: usize, n: usize| mc + np + pair_index(mc, m, n);
        let size = mc + 2 * np;
        let mut a = Mat::<Complex64>::zeros(size, size);

        // decay out of level m, counted within the kept levels
        let loss: Vec<f64> = (0..mc)
            .map(|m| (0..mc).map(|k| x[(k, m)].norm_sqr()).sum())
            .collect();
        for m in 0..mc {
            a[(m, m)] -= kappa * loss[m];
            for k in 0..mc {
                a[(m, k)] += kappa * x[(m, k)].norm_sqr();
                if k == m {
                    continue;
                }
                a[(m, q_idx(k, m))] -= i * om * x[(m, k)];
                a[(m, q_idx(m, k))] += i * om * x[(k, m)];
                a[(m, p_idx(k, m))] -= i * om * x[(k, m)].conj();
                a[(m, p_idx(m, k))] += i * om * x[(m, k)].conj();
            }
        }
        for &(m, n) in &pairs {
            for (offset, coupling) in [(mc, x[(m, n)]), (mc + np, x[(n, m)].conj())] {
                let row_of = |k: usize, l: usize| offset + pair_index(mc, k, l);
                let r = row_of(m, n);
                a[(r, r)] += i * (w[n] - w[m]);
                a[(r, n)] -= i * om * coupling;
                a[(r, m)] += i * om * coupling;
                for &(k, l) in &pairs {
                    a[(r, row_of(k, l))] += kappa * x[(m, k)] * x[(n, l)].conj();
                }
                for k in 0..mc {
                    if k != n {
                        a[(r, row_of(k, n))] -= 0.5 * kappa * y[(m, k)];
                    }
                    if k != m {
                        a[(r, row_of(m, k))] -= 0.5 * kappa * y[(k, n)];
                    }
                }
            }
        }
        // trace condition replaces the first population equation
        for c in 0..size {
            a[(0, c)] = Complex64::new(if c < mc { 1.0 } else { 0.0 }, 0.0);
        }
        Ok(HarmonicBalance {
            level_cut: mc,
            kappa_ex: params.kappa_ex,
            omega_drive: om,
            x,
            pairs,
            base: a,
        })
    }

    pub fn level_cut(&self) -> usize {
        self.level_cut
    }

    /// Solves for the harmonics at probe detuning `omega`.
    pub fn solve(&self, omega: f64) -> Result<HarmonicState> {
        let mc = self.level_cut;
        let np = self.pairs.len();
        let mut a = self.base.clone();
        for k in 0..np {
            a[(mc + k, mc + k)] -= Complex64::new(0.0, omega);
            a[(mc + np + k, mc + np + k)] += Complex64::new(0.0, omega);
        }
        let lu = a.partial_piv_lu();
        let size = a.nrows();
        let pivots: Vec<f64> = (0..size).map(|k| lu.U()[(k, k)].norm()).collect();
        let max = pivots.iter().cloned().fold(0.0, f64::max);
        let min = pivots.iter().cloned().fold(f64::INFINITY, f64::min);
        let ratio = if max > 0.0 { min / max } else { 0.0 };
        if ratio.is_nan() || ratio <= PIVOT_TOL {
            return Err(Error::SingularSystem { condition: ratio });
        }
        let mut rhs = Mat::<Complex64>::zeros(size, 1);
        rhs[(0, 0)] = Complex64::new(1.0, 0.0);
        let sol = lu.solve(&rhs);

        let diag: Vec<f64> = (0..mc).map(|m| sol[(m, 0)].re).collect();
        let mut plus = Mat::<Complex64>::zeros(mc, mc);
        let mut minus = Mat::<Complex64>::zeros(mc, mc);
        for (k, &(m, n)) in self.pairs.iter().enumerate() {
            plus[(m, n)] = sol[(mc + k, 0)];
            minus[(m, n)] = sol[(mc + np + k, 0)];
        }
        if sol
            .col(0)
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::SingularSystem { condition: ratio });
        }
        Ok(HarmonicState {
            level_cut: mc,
            diag,
            plus,
            minus,
        })
    }

    /// `1 - (i kappa_ex / Omega) sum_{m != n} X_mn rho_nm[-omega]`.
    pub fn gamma(&self, state: &HarmonicState) -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for &(m, n) in &self.pairs {
            s += self.x[(m, n)] * state.minus[(n, m)];
        }
        Complex64::new(1.0, 0.0) - Complex64::new(0.0, self.kappa_ex / self.omega_drive) * s
    }
}

fn pair_index(mc: usize, m: usize, n: usize) -> usize {
    m * (mc - 1) + if n > m { n - 1 } else { n }
}

/// Harmonic-balance state at one probe detuning.
pub fn solve_harmonic_state(
    params: &ModelParams,
    es: &EigenSystem,
    omega: f64,
    level_cut: usize,
) -> Result<HarmonicState> {
    HarmonicBalance::new(params, es, level_cut)?.solve(omega)
}

/// Finite-probe reflection coefficient at one probe detuning.
pub fn finite_drive_gamma(
    params: &ModelParams,
    es: &EigenSystem,
    omega: f64,
    level_cut: usize,
) -> Result<Complex64> {
    let hb = HarmonicBalance::new(params, es, level_cut)?;
    Ok(hb.gamma(&hb.solve(omega)?))
}

/// Finite-probe reflection coefficient over a grid of probe detunings.
pub fn finite_drive_trace(
    params: &ModelParams,
    es: &EigenSystem,
    omega_grid: &[f64],
    level_cut: usize,
) -> Result<Vec<Complex64>> {
    let hb = HarmonicBalance::new(params, es, level_cut)?;
    omega_grid
        .iter()
        .map(|&w| Ok(hb.gamma(&hb.solve(w)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::diagonalize;
    use crate::lindblad::stationary_populations;
    use crate::model::{build_h0, mhz};

    fn setup(p: &ModelParams) -> (EigenSystem, Vec<f64>) {
        let es = diagonalize(&build_h0(p).unwrap(), p, None).unwrap();
        let (_, pops) = stationary_populations(p, &es).unwrap();
        (es, pops)
    }

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| mhz(lo + (hi - lo) * k as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn zero_pump_resonance_value() {
        let p = ModelParams::reference(7.0, 0.0);
        let (es, pops) = setup(&p);
        let tr = weak_field_gamma(&p, &es, &pops, &[mhz(7.0)], &Default::default()).unwrap();
        assert!((tr.gamma[0].re - (1.0 - 0.8 / 4.4)).abs() < 1e-12);
        assert!(tr.gamma[0].im.abs() < 1e-12);
    }

    #[test]
    fn zero_pump_matches_two_level_form() {
        let p = ModelParams::reference(7.0, 0.0);
        let (es, pops) = setup(&p);
        let g = grid(-50.0, 50.0, 201);
        let tr = weak_field_gamma(&p, &es, &pops, &g, &Default::default()).unwrap();
        for (w, gam) in g.iter().zip(&tr.gamma) {
            let expected = 1.0 + p.kappa_ex / Complex64::new(-0.5 * p.kappa_tot(), w - p.delta);
            assert!((gam - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_pump_rates_and_eta() {
        let p = ModelParams::reference(7.0, 0.0);
        let (es, pops) = setup(&p);
        let r = nominal_rates(&p, &es, &pops, 0, 1).unwrap();
        assert!((r.kappa_ex - mhz(0.4)).abs() < 1e-6);
        assert!((r.kappa_int - mhz(4.0)).abs() < 1e-6);
        assert!((eta(&es, &pops, 0, 1).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(eta(&es, &pops, 0, 2).unwrap(), 0.0);
    }

    #[test]
    fn sum_rule_holds_for_all_transitions() {
        for (delta, beta) in [(-7.0, 5.0), (0.0, 20.0), (20.0, 12.0)] {
            let p = ModelParams::reference(delta, beta);
            let (es, pops) = setup(&p);
            for m in 0..8 {
                for n in 0..8 {
                    if m == n {
                        continue;
                    }
                    let r = nominal_rates(&p, &es, &pops, m, n).unwrap();
                    let total = p.kappa_tot() * (es.y(m, m).re + es.y(n, n).re);
                    assert!((r.kappa_ex + r.kappa_int - total).abs() <= 1e-12 * total);
                }
            }
        }
    }

    #[test]
    fn same_parity_transitions_are_silent() {
        let p = ModelParams::reference(-7.0, 15.0);
        let (es, pops) = setup(&p);
        let g = grid(-50.0, 50.0, 101);
        let opts = WeakFieldOptions {
            per_transition: true,
            ..Default::default()
        };
        let tr = weak_field_gamma(&p, &es, &pops, &g, &opts).unwrap();
        for t in tr.per_transition.unwrap() {
            if (t.from + t.to) % 2 == 0 {
                assert!(t.values.iter().all(|c| c.norm() < 1e-10));
            }
        }
    }

    #[test]
    fn resonant_contribution_is_real() {
        let p = ModelParams::reference(20.0, 10.0);
        let (es, pops) = setup(&p);
        for (m, n) in [(0, 1), (1, 0), (1, 2), (2, 3)] {
            let t = TransitionDescriptor::new(&es, &pops, m, n).unwrap();
            let c = t
                .contribution(p.kappa_ex, p.kappa_tot(), t.resonance())
                .unwrap();
            let r = nominal_rates(&p, &es, &pops, m, n).unwrap();
            let expected = -2.0 * r.kappa_ex / (r.kappa_ex + r.kappa_int);
            assert!(c.im.abs() < 1e-12);
            assert!((c.re - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn off_resonant_limit() {
        let p = ModelParams::reference(-7.0, 10.0);
        let (es, pops) = setup(&p);
        let w = mhz(5000.0);
        let tr = weak_field_gamma(&p, &es, &pops, &[w], &Default::default()).unwrap();
        let ts = transitions(&es, &pops, DEFAULT_LEVEL_CUT).unwrap();
        let bound: f64 = ts
            .iter()
            .map(|t| p.kappa_ex * t.x_element.norm_sqr() / t.detuning(w).abs())
            .sum();
        assert!((tr.gamma[0] - 1.0).norm() < bound);
    }

    #[test]
    fn rates_grow_with_pump_without_internal_loss() {
        let mut p = ModelParams::reference(7.0, 0.0);
        p.kappa_int = 0.0;
        let rates: Vec<NominalRates> = [0.0, 10.0, 20.0]
            .iter()
            .map(|&b| {
                let q = p.with_beta(mhz(b));
                let (es, pops) = setup(&q);
                nominal_rates(&q, &es, &pops, 0, 1).unwrap()
            })
            .collect();
        assert!(rates[0].kappa_int.abs() < 1e-6);
        assert!(rates[1].kappa_int > 0.0 && rates[2].kappa_int > rates[1].kappa_int);
    }

    #[test]
    fn harmonic_state_invariants() {
        let p = ModelParams::reference(7.0, 10.0).with_omega_drive(mhz(1.0));
        let es = diagonalize(&build_h0(&p).unwrap(), &p, None).unwrap();
        let hb = HarmonicBalance::new(&p, &es, DEFAULT_HARMONIC_LEVEL_CUT).unwrap();
        for w in [-20.0, 0.0, 7.0, 31.5] {
            let s = hb.solve(mhz(w)).unwrap();
            assert!((s.diag.iter().sum::<f64>() - 1.0).abs() < 1e-8);
            let scale = (0..6)
                .flat_map(|m| (0..6).map(move |n| (m, n)))
                .map(|(m, n)| s.plus[(m, n)].norm())
                .fold(0.0, f64::max);
            assert!(s.hermiticity_defect() <= 1e-10 * scale.max(1.0));
        }
    }

    #[test]
    fn finite_drive_requires_positive_drive() {
        let p = ModelParams::reference(7.0, 10.0);
        let es = diagonalize(&build_h0(&p).unwrap(), &p, None).unwrap();
        assert!(matches!(
            finite_drive_gamma(&p, &es, 0.0, 6),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn finite_drive_zero_pump_is_saturated_two_level() {
        // with zero pump only the 0 <-> 1 transition is driven, and at weak
        // drive the result reduces to the linear resonator
        let p = ModelParams::reference(7.0, 0.0).with_omega_drive(mhz(0.001));
        let (es, pops) = setup(&p);
        let g = grid(-10.0, 20.0, 31);
        let fin = finite_drive_trace(&p, &es, &g, 6).unwrap();
        let weak = weak_field_gamma(&p, &es, &pops, &g, &Default::default()).unwrap();
        for (a, b) in fin.iter().zip(&weak.gamma) {
            assert!((a - b).norm() < 1e-4);
        }
    }

    #[test]
    fn stronger_drive_is_shallower() {
        let g = grid(-40.0, 40.0, 161);
        let depth = |om: f64| {
            let p = ModelParams::reference(7.0, 5.0).with_omega_drive(mhz(om));
            let es = diagonalize(&build_h0(&p).unwrap(), &p, None).unwrap();
            finite_drive_trace(&p, &es, &g, 6)
                .unwrap()
                .iter()
                .map(|z| (z.norm() - 1.0).abs())
                .fold(0.0, f64::max)
        };
        assert!(depth(3.0) < depth(1.0));
    }

    #[test]
    fn weak_limit_convergence_is_monotone() {
        let p0 = ModelParams::reference(7.0, 5.0);
        let (es, pops) = setup(&p0);
        let g = grid(-50.0, 50.0, 101);
        let weak = weak_field_gamma(&p0, &es, &pops, &g, &Default::default()).unwrap();
        let dist: Vec<f64> = [1.0, 0.3, 0.1, 0.03]
            .iter()
            .map(|&om| {
                let p = p0.with_omega_drive(mhz(om));
                finite_drive_trace(&p, &es, &g, 6)
                    .unwrap()
                    .iter()
                    .zip(&weak.gamma)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(dist.windows(2).all(|w| w[1] < w[0]), "{dist:?}");
    }
}
