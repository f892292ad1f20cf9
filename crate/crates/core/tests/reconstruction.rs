mod support;

use approx::assert_abs_diff_eq;
use homodyne_core::reconstruction::*;
use homodyne_core::states::{theoretical_dm, StateSpec};
use homodyne_core::Error;

#[test]
fn vacuum_single_phase() {
    let est = reconstruct(&StateSpec::vacuum(), 1.0, &ScanConfig::deterministic(1, 2)).unwrap();
    assert_abs_diff_eq!(est.elements.get(0, 0).re, 1.0, epsilon = 1e-8);
    // odd distances vanish by parity
    for (n, m) in [(1, 0), (2, 1), (0, 1)] {
        assert!(est.elements.get(n, m).norm() < 1e-8);
    }
    // distance 2 needs a second phase to cancel
    assert!(est.elements.get(2, 0).norm() > 0.1);
    let two = reconstruct(&StateSpec::vacuum(), 1.0, &ScanConfig::deterministic(2, 2)).unwrap();
    assert!(two.max_deviation() < 1e-8);
}

#[test]
fn vacuum_phase_counts() {
    // even distances d cancel unless 2f divides d, so f0 = n_max/2 + 1
    assert_eq!(min_phases(&StateSpec::vacuum(), 1.0, 1e-4, 10, &ScanConfig::deterministic(1, 1)).unwrap(), 1);
    assert_eq!(min_phases(&StateSpec::vacuum(), 1.0, 1e-4, 10, &ScanConfig::deterministic(1, 6)).unwrap(), 4);
}

#[test]
fn number_state_diagonal() {
    let est = reconstruct(&StateSpec::fock(2), 1.0, &ScanConfig::deterministic(1, 6)).unwrap();
    for n in 0..=6 {
        let expected = if n == 2 { 1.0 } else { 0.0 };
        assert_abs_diff_eq!(est.elements.get(n, n).re, expected, epsilon = 1e-10);
    }
}

#[test]
fn coherent_state_at_32_phases() {
    let s = StateSpec::coherent(4.0);
    let est = reconstruct(&s, 1.0, &ScanConfig::deterministic(32, 47)).unwrap();
    assert!(est.deviation.get(5, 5) < 1e-4);
    assert_abs_diff_eq!(est.elements.get(5, 5).re, 0.15629, epsilon = 1e-5);
    assert!(est.hermiticity_defect() < 1e-10);
    assert!(est.max_residual() < RESIDUAL_TOLERANCE);
    let tail = theoretical_dm(&s, 47).unwrap().tail();
    let tr = est.trace();
    assert!(tr >= 1.0 - tail - 1e-12 && tr <= 1.0 + 1e-6, "trace {tr}");
    // deviation is recomputable from the elements
    let theory = theoretical_dm(&s, 47).unwrap();
    for (n, m, e) in est.deviation.iter() {
        assert_eq!(e, (est.elements.get(n, m) - theory.get(n, m)).norm());
    }
}

#[test]
fn stable_after_f0() {
    for s in [StateSpec::coherent(3.0), StateSpec::squeezed(2.0, 0.5)] {
        let cfg = ScanConfig::deterministic(1, 20);
        let f0 = min_phases(&s, 1.0, 1e-4, 120, &cfg).unwrap();
        assert!(f0 > 1);
        let curve = deviation_curve(&s, 1.0, (12, 3), &[f0, f0 + 10], &cfg).unwrap();
        assert!(curve.iter().all(|(_, e)| *e < 1e-4), "{curve:?}");
        let est = reconstruct(&s, 1.0, &ScanConfig::deterministic(f0 + 10, 20)).unwrap();
        assert!(est.max_deviation() < 1e-4);
    }
}

#[test]
fn f0_grows_with_intensity() {
    let cfg = ScanConfig::deterministic(1, 20);
    let a = min_phases(&StateSpec::coherent(2.0), 1.0, 1e-4, 200, &cfg).unwrap();
    let b = min_phases(&StateSpec::coherent(6.0), 1.0, 1e-4, 200, &cfg).unwrap();
    assert!(a <= b, "{a} {b}");
}

#[test]
fn not_found_is_reported() {
    let r = min_phases(&StateSpec::coherent(4.0), 1.0, 1e-4, 3, &ScanConfig::deterministic(1, 20));
    assert!(matches!(r, Err(Error::ThresholdNotReached { f_max: 3, .. })));
}

#[test]
fn error_matrix_properties() {
    let s = StateSpec::coherent(4.0);
    let cfg = ScanConfig::deterministic(40, 47);
    let e = statistical_errors(&s, 1.0, &cfg).unwrap();
    for n in 0..=47 {
        assert_eq!(e.im_sigma.get(n, n), 0.0);
    }
    assert!(e.sigma.iter().all(|(_, _, v)| v >= 0.0));
    // off-diagonal errors grow with the distance from the diagonal
    let d: Vec<f64> = (0..=20).map(|d| d as f64).collect();
    let s5: Vec<f64> = (0..=20).map(|d| e.sigma.get(5 + d, 5)).collect();
    assert!(support::spearman(&d, &s5) >= 0.9, "{s5:?}");
    let scaled = e.for_records(10_000);
    assert_abs_diff_eq!(scaled.sigma.get(5, 5), e.sigma.get(5, 5) / 100.0, epsilon = 1e-15);
}

#[test]
fn errors_independent_of_f() {
    let s = StateSpec::coherent(4.0);
    let base = ScanConfig::deterministic(1, 47);
    let engine = Reconstructor::new(&s, 1.0, &base).unwrap();
    let f0 = min_phases_with(&engine, 1e-4, 100).unwrap();
    let a = engine.errors(f0 + 5).unwrap();
    let b = engine.errors(2 * f0).unwrap();
    for (n, m, v) in a.sigma.iter() {
        let w = b.sigma.get(n, m);
        assert!((v - w).abs() <= 0.01 * w.max(1e-3), "({n},{m}) {v} {w}");
    }
}

#[test]
fn errors_grow_with_losses() {
    let s = StateSpec::coherent(4.0);
    let etas = [1.0, 0.99, 0.97, 0.95, 0.9];
    let sig: Vec<_> = etas
        .iter()
        .map(|&eta| statistical_errors(&s, eta, &ScanConfig::deterministic(40, 47)).unwrap())
        .collect();
    for n in [0, 5, 15, 30] {
        for w in sig.windows(2) {
            assert!(w[1].sigma.get(n, n) >= w[0].sigma.get(n, n), "n={n}");
        }
    }
    assert!(sig[1].sigma.get(47, 47) > sig[1].sigma.get(30, 30) + 0.1);
}

#[test]
fn monte_carlo_is_reproducible() {
    let s = StateSpec::squeezed(2.0, 0.4);
    let cfg = ScanConfig::monte_carlo(8, 10, 500);
    let a = mc_experiment(&s, 1.0, &cfg, 42).unwrap();
    let b = mc_experiment(&s, 1.0, &cfg, 42).unwrap();
    assert_eq!(a.estimate.elements, b.estimate.elements);
    assert_eq!(a.std_errors, b.std_errors);
    assert_eq!(a.dataset, b.dataset);
    let c = mc_experiment(&s, 1.0, &cfg, 43).unwrap();
    assert_ne!(a.estimate.elements, c.estimate.elements);
    let (again, se) = estimate_from_dataset(&a.dataset, 10).unwrap();
    assert_eq!(again.elements, a.estimate.elements);
    assert_eq!(se, a.std_errors);
    assert_eq!(a.dataset.meta.n_records, 4000);
}

#[test]
fn monte_carlo_errors_match_sigma() {
    let s = StateSpec::coherent(4.0);
    let sigma = statistical_errors(&s, 1.0, &ScanConfig::deterministic(32, 8)).unwrap();
    let (v, se) = mc_element(&s, 1.0, 32, 20_000, 11, (5, 5)).unwrap();
    let expected = sigma.sigma.get(5, 5) / (640_000f64).sqrt();
    assert!((se - expected).abs() < 0.02 * expected, "{se} {expected}");
    assert!((v.re - 0.156_293_451_9).abs() < 4.0 * se);
}

#[test]
fn lossy_reconstruction_converges() {
    let s = StateSpec::coherent(2.0);
    let est = reconstruct(&s, 0.9, &ScanConfig::deterministic(30, 15)).unwrap();
    assert!(est.max_deviation() < 1e-6, "{}", est.max_deviation());
}

#[test]
fn invalid_inputs() {
    let s = StateSpec::coherent(1.0);
    assert!(matches!(reconstruct(&s, 0.4, &ScanConfig::deterministic(4, 4)), Err(Error::Efficiency(_))));
    assert!(matches!(reconstruct(&s, 1.0, &ScanConfig::deterministic(0, 4)), Err(Error::Config(_))));
    let mut cfg = ScanConfig::deterministic(4, 4);
    cfg.x_quadrature.extent_sigmas = 3.0;
    assert!(reconstruct(&s, 1.0, &cfg).is_err());
}
