use haus_core::catalog::{self, cusp, gaussian, indicator, tent};
use haus_core::moduli::{
    dini_integral, modulus_analytic, modulus_estimate, modulus_estimate_with, modulus_ladder, shift_difference_norm,
    DiniWeight, ModulusMethod,
};
use haus_core::{HausError, LebesgueExponent, QuadratureConfig};
use proptest::prelude::*;

const INF: LebesgueExponent = LebesgueExponent::Infinity;

fn q() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn l1() -> LebesgueExponent {
    LebesgueExponent::Finite(1.0)
}

#[test]
fn estimate_examples() {
    assert_eq!(modulus_estimate(&catalog::constant(2.0), 0.3, INF, &q()).unwrap().value, 0.0);
    let t = modulus_estimate(&tent(), 0.25, INF, &q()).unwrap();
    assert!((t.value - 0.25).abs() < 1e-9);
    assert_eq!(t.method, ModulusMethod::GridSup);
    let c = modulus_estimate(&indicator(0.0, 1.0), 0.1, l1(), &q()).unwrap();
    assert!((c.value - 0.2).abs() < 1e-7);
}

/// Brute-force scan over h and x, independent of the library's sup search.
#[test]
fn tent_estimate_against_dense_scan() {
    let f = tent();
    let delta = 0.37;
    let mut best = 0.0f64;
    for i in 0..=400 {
        let h = delta * i as f64 / 400.0;
        for j in 0..=2000 {
            let x = -2.0 + 4.0 * j as f64 / 2000.0;
            best = best.max((f.eval(x + h) - f.eval(x)).abs());
        }
    }
    let e = modulus_estimate(&f, delta, INF, &q()).unwrap().value;
    assert!((e - best).abs() < 1e-3, "{e} vs {best}");
}

#[test]
fn analytic_examples() {
    for d in [0.01, 0.5, 1.0, 3.0] {
        let v = modulus_analytic("tent", 0.0, d, INF).unwrap();
        assert_eq!(v.value, d.min(1.0));
        assert_eq!(v.method, ModulusMethod::Analytic);
    }
    for d in [0.05, 0.3, 1.0] {
        assert!((modulus_analytic("indicator", 0.0, d, l1()).unwrap().value - 2.0 * d).abs() < 1e-12);
    }
    assert!(matches!(modulus_analytic("weierstrass", 0.5, 0.1, INF), Err(HausError::UnknownClass(_))));
}

#[test]
fn cusp_modulus_has_order_one_half() {
    let f = cusp(0.5).unwrap();
    for d in [1e-3, 1e-2, 0.1, 0.5] {
        let e = modulus_estimate(&f, d, INF, &q()).unwrap().value;
        let c = e / d.sqrt();
        assert!((1.0 - 1e-9..=2f64.sqrt() + 1e-9).contains(&c), "delta {d}: C = {c}");
        let a = modulus_analytic("cusp", 0.5, d, INF).unwrap().value;
        assert!((a / d.sqrt() - c).abs() < 0.05);
    }
}

#[test]
fn refinement_delta_is_reported() {
    let e = modulus_estimate_with(&cusp(0.25).unwrap(), 0.2, INF, 4, &q()).unwrap();
    assert_eq!(e.h_grid_size, 4);
    assert!(e.refinement_delta >= 0.0);
}

#[test]
fn gaussian_l2_modulus_matches_parseval() {
    // ‖g(·+h) − g‖₂² = (1/2π)∫|ĝ|²|e^{ihy} − 1|² dy = 2√π(1 − e^{−h²/4}) for g = e^{−x²/2}.
    let g = gaussian();
    for h in [0.1, 0.5, 2.0] {
        let v = shift_difference_norm(&g, h, LebesgueExponent::Finite(2.0), &q()).unwrap();
        let exact = (2.0 * std::f64::consts::PI.sqrt() * (1.0 - (-h * h / 4.0).exp())).sqrt();
        assert!((v - exact).abs() < 1e-7, "h={h}: {v} vs {exact}");
    }
}

#[test]
fn dini_examples() {
    let v = dini_integral(&|d| d, 1.0, DiniWeight::Reciprocal, &q()).unwrap();
    assert!((v - 1.0).abs() < 1e-8);
    let v = dini_integral(&|d: f64| d.sqrt(), 16.0, DiniWeight::Reciprocal, &q()).unwrap();
    assert!((v - 0.5).abs() < 1e-6);
    assert!(matches!(dini_integral(&|_| 1.0, 1.0, DiniWeight::Reciprocal, &q()), Err(HausError::DiniDivergent(_))));
    // ∫_0^1 δ dt with ω(δ) = δ/N, plain weight
    let v = dini_integral(&|d| d, 4.0, DiniWeight::Plain, &q()).unwrap();
    assert!((v - 0.125).abs() < 1e-10);
}

#[test]
fn bad_inputs() {
    assert!(modulus_estimate(&tent(), -0.1, INF, &q()).is_err());
    assert!(modulus_ladder(&tent(), &[0.2, 0.1], INF, &q()).is_err());
    assert!(modulus_estimate(&catalog::linear(), 0.1, INF, &q()).is_err());
}

fn pool(i: usize) -> haus_core::TestFunction {
    match i {
        0 => tent(),
        1 => gaussian(),
        2 => cusp(0.5).unwrap(),
        _ => catalog::bump(0.3, 0.8),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ladder_is_monotone(i in 0usize..4, base in 1e-3f64..0.05, steps in 3usize..8) {
        let deltas: Vec<f64> = (0..steps).map(|k| base * 1.9f64.powi(k as i32)).collect();
        let lad = modulus_ladder(&pool(i), &deltas, INF, &q()).unwrap();
        prop_assert!(lad.windows(2).all(|w| w[0].value <= w[1].value));
    }

    #[test]
    fn translation_invariant(i in 0usize..4, y in -2.0f64..2.0, d in 0.01f64..1.0) {
        let f = pool(i);
        let a = modulus_estimate(&f, d, INF, &q()).unwrap().value;
        let b = modulus_estimate(&f.shifted(y), d, INF, &q()).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-10 + 1e-9 * a, "{a} vs {b}");
    }

    #[test]
    fn subadditive(i in 0usize..4, d1 in 0.01f64..0.6, d2 in 0.01f64..0.6) {
        let f = pool(i);
        let e = |d| modulus_estimate(&f, d, INF, &q()).unwrap();
        let (a, b, c) = (e(d1), e(d2), e(d1 + d2));
        let budget = 2.0 * (a.refinement_delta + b.refinement_delta + c.refinement_delta) + 1e-9;
        prop_assert!(c.value <= a.value + b.value + budget);
    }
}
