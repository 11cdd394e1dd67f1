// Copyright 2026 The kpo-spectro Authors
// SPDX-License-Identifier: Apache-2.0

use kpo_spectro::eigen::diagonalize;
use kpo_spectro::lindblad::stationary_populations;
use kpo_spectro::model::{build_h0, mhz, ModelParams};
use kpo_spectro::spectroscopy::{
    nominal_rates, solve_harmonic_state, weak_field_gamma, WeakFieldOptions,
};
use kpo_spectro::sweep::{run_populations, run_spectrum_2d, ScenarioConfig};
use num_complex::Complex64;
use proptest::prelude::*;

fn scenario(delta: f64, overrides: &[&str]) -> ScenarioConfig {
    let doc = format!(r#"{{"schema_version": 1, "model": {{"delta_over_2pi_MHz": {delta}}}}}"#);
    let o: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
    ScenarioConfig::from_json_str(&doc, &o).unwrap()
}

fn gamma_at(delta: f64, beta: f64, kappa_int: f64, omega: &[f64]) -> Vec<Complex64> {
    let mut p = ModelParams::reference(delta, beta);
    p.kappa_int = mhz(kappa_int);
    let es = diagonalize(&build_h0(&p).unwrap(), &p, None).unwrap();
    let (_, pops) = stationary_populations(&p, &es).unwrap();
    weak_field_gamma(&p, &es, &pops, omega, &WeakFieldOptions::default())
        .unwrap()
        .gamma
}

#[test]
fn second_excited_level_stays_empty() {
    for delta in [-7.0, 0.0, 7.0] {
        let r = run_populations(&scenario(delta, &["sweep.beta.points=21"])).unwrap();
        let pop2 = r.column("pop_2").unwrap();
        assert!(pop2.iter().all(|&p| p < 0.02), "Delta={delta}: {pop2:?}");
        let pop3 = r.column("pop_3").unwrap();
        assert!(pop3.iter().all(|&p| p < 0.02));
    }
}

#[test]
fn populations_cross_at_large_detuning() {
    let r = run_populations(&scenario(20.0, &["sweep.beta.points=41"])).unwrap();
    let (p0, p1) = (r.column("pop_0").unwrap(), r.column("pop_1").unwrap());
    assert!(p0[0] > p1[0]);
    assert!(p0[40] < p1[40]);
}

#[test]
fn zero_pump_dip_fades_with_pump() {
    let depth = |beta: f64| {
        let g = gamma_at(-7.0, beta, 4.0, &[mhz(-7.0)]);
        1.0 - g[0].norm()
    };
    assert!(depth(0.0) > 0.15);
    assert!(depth(20.0) < 0.05);
}

#[test]
fn features_sharpen_without_internal_loss() {
    let omega: Vec<f64> = (0..=2000).map(|k| mhz(-50.0 + 0.05 * k as f64)).collect();
    let slope = |kint: f64| {
        let g = gamma_at(7.0, 10.0, kint, &omega);
        g.windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .fold(0.0, f64::max)
    };
    assert!(slope(0.0) > 2.0 * slope(4.0));
}

#[test]
fn single_point_sweep_equals_direct_evaluation() {
    let cfg = scenario(
        7.0,
        &[
            "sweep.beta.points=1",
            "sweep.beta.stop_MHz=0",
            "sweep.omega_in.points=11",
        ],
    );
    let r = run_spectrum_2d(&cfg).unwrap();
    let direct = gamma_at(7.0, 0.0, 4.0, &cfg.omega_grid());
    let re = r.column("re_gamma").unwrap();
    let im = r.column("im_gamma").unwrap();
    for (k, g) in direct.iter().enumerate() {
        assert_eq!(re[k], g.re);
        assert_eq!(im[k], g.im);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sum_rule_and_selection(delta in -20.0f64..20.0, beta in 0.0f64..20.0) {
        let p = ModelParams::reference(delta, beta).with_dim(24);
        let es = diagonalize(&build_h0(&p).unwrap(), &p, None).unwrap();
        let (_, pops) = stationary_populations(&p, &es).unwrap();
        for m in 0..6 {
            for n in 0..6 {
                if m == n {
                    continue;
                }
                let r = nominal_rates(&p, &es, &pops, m, n).unwrap();
                let total = p.kappa_tot() * (es.y(m, m).re + es.y(n, n).re);
                prop_assert!((r.kappa_ex + r.kappa_int - total).abs() <= 1e-12 * total);
                if (m + n) % 2 == 0 {
                    prop_assert!(r.kappa_ex.abs() < 1e-10 * p.kappa_ex);
                }
            }
        }
    }

    #[test]
    fn harmonic_state_is_hermitian(delta in -20.0f64..20.0, beta in 0.0f64..20.0, w in -40.0f64..40.0) {
        let p = ModelParams::reference(delta, beta).with_dim(20).with_omega_drive(mhz(2.0));
        let es = diagonalize(&build_h0(&p).unwrap(), &p, None).unwrap();
        let s = solve_harmonic_state(&p, &es, mhz(w), 6).unwrap();
        prop_assert!((s.diag.iter().sum::<f64>() - 1.0).abs() < 1e-8);
        prop_assert!(s.hermiticity_defect() < 1e-10);
    }
}
